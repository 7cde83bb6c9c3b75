import numpy as np
import pytest

from mst_sketch.boundary import (Bootstrap, LowerTailRescaled, SmoothedBootstrap, WeightSample,
                                 boundary_convergence_study, difference_quotient_psi0,
                                 epanechnikov, estimate_psi0, make_fhat, naive_kernel_psi0,
                                 parse_fhat, reflection_kernel_psi0, resample)
from mst_sketch.distributions import Exponential, Uniform, Weibull
from mst_sketch.errors import DegenerateSampleError, PreconditionError, ValidationError


def draws(model, m, seed):
    return WeightSample(model.sample(m, np.random.default_rng(seed)))


def test_epanechnikov_hand_values():
    assert epanechnikov(0.5) == 0.5625
    assert epanechnikov(1.5) == 0.0
    assert epanechnikov(0.0) == 0.75


def test_difference_quotient_forced_bandwidth():
    est = difference_quotient_psi0(WeightSample([0.1, 0.3]), 0.2)
    assert est.psi0 == pytest.approx(2.5, rel=1e-15)
    assert est.bandwidth == 0.2 and est.method == "dq"


def test_difference_quotient_uniform():
    s = draws(Uniform(0, 1), 10**6, 1)
    est = difference_quotient_psi0(s)
    assert est.bandwidth == pytest.approx(10**-1.5)
    assert 0.97 <= est.psi0 <= 1.03


def test_difference_quotient_exponential():
    # F(h)/h at h = 10**-1.5 is 1.937 for rate 2; the sampling sd is about 0.011
    assert 1.9 <= difference_quotient_psi0(draws(Exponential(2), 10**6, 2)).psi0 <= 2.1


def test_difference_quotient_degenerate():
    with pytest.raises(DegenerateSampleError):
        difference_quotient_psi0(WeightSample([5.0, 6.0]), 0.5)


@pytest.mark.parametrize("model", [Uniform(0, 1), Exponential(1)])
def test_reflection_kernel_close_to_density(model):
    assert 0.9 <= reflection_kernel_psi0(draws(model, 10**5, 3)).psi0 <= 1.1


def test_reflection_kernel_all_zeros():
    h = 0.25
    est = reflection_kernel_psi0(WeightSample(np.zeros(10)), h)
    assert est.psi0 == pytest.approx(2 * 0.75 / h)


def test_reflection_kernel_degenerate():
    with pytest.raises(DegenerateSampleError):
        reflection_kernel_psi0(WeightSample([2.0, 3.0]), 0.5)


@pytest.mark.parametrize("model", [Uniform(0, 1), Exponential(1)])
def test_naive_kernel_is_half_biased(model):
    s = draws(model, 10**5, 4)
    assert 0.40 <= naive_kernel_psi0(s, s.m ** -0.2).psi0 <= 0.60


def test_naive_kernel_hand_value():
    assert naive_kernel_psi0(WeightSample([0.1, 0.3]), 0.2).psi0 == pytest.approx(1.40625, rel=1e-15)


def test_reflection_doubles_naive():
    s = draws(Exponential(1), 5000, 5)
    assert reflection_kernel_psi0(s, 0.3).psi0 == pytest.approx(2 * naive_kernel_psi0(s, 0.3).psi0)


def test_estimators_validate():
    with pytest.raises(ValidationError):
        estimate_psi0(WeightSample([0.1]), "dq")
    with pytest.raises(ValidationError):
        estimate_psi0(WeightSample([0.1, 0.2]), "mle")
    with pytest.raises(ValidationError):
        WeightSample([-0.1, 0.2])


def test_bootstrap_constant_source(rng):
    assert resample(Bootstrap(WeightSample([0.5])), 3, rng).tolist() == [0.5, 0.5, 0.5]


def test_bootstrap_draws_from_source(rng):
    source = WeightSample([0.1, 0.7, 0.7, 3.0])
    out = resample(Bootstrap(source), 1000, rng)
    assert set(out.tolist()) <= {0.1, 0.7, 3.0}


def test_smoothed_bootstrap_nonnegative(rng):
    source = draws(Exponential(1), 1000, 6)
    out = resample(SmoothedBootstrap(source, 0.3), 10**5, rng)
    assert out.min() >= 0


def test_epanechnikov_noise_law(rng):
    from mst_sketch.boundary import _epanechnikov_noise
    x = np.sort(_epanechnikov_noise(200_000, rng))
    grid = np.linspace(-1, 1, 41)
    analytic = 0.5 + 0.75 * grid - 0.25 * grid**3
    ecdf = np.searchsorted(x, grid, side="right") / x.size
    assert np.max(np.abs(ecdf - analytic)) < 0.005


def test_empty_source_rejected(rng):
    with pytest.raises(ValidationError):
        resample(Bootstrap(WeightSample([])), 3, rng)


def test_bootstrap_ecdf_converges_to_source():
    rng = np.random.default_rng(8)
    source = draws(Exponential(1), 500, 9)
    out = np.sort(resample(Bootstrap(source), 10**6, rng))
    grid = np.sort(source.values)
    src_cdf = np.arange(1, grid.size + 1) / grid.size
    res_cdf = np.searchsorted(out, grid, side="right") / out.size
    assert np.max(np.abs(res_cdf - src_cdf)) < 0.01


def test_lower_tail_rescaled_keeps_slope(rng):
    source = draws(Exponential(1), 200_000, 10)
    bad = LowerTailRescaled(source, 0.5)
    out = WeightSample(resample(bad, 200_000, rng))
    assert difference_quotient_psi0(out).psi0 == pytest.approx(1.0, abs=0.06)
    # but its mean is far from the exponential mean of 1
    assert out.values.mean() < 0.8


def test_make_and_parse_fhat():
    s = WeightSample([0.1, 0.2, 0.4])
    assert isinstance(make_fhat("bootstrap", s), Bootstrap)
    assert make_fhat("smoothed", s, 0.05).bandwidth == 0.05
    assert make_fhat("smoothed", s).bandwidth > 0
    assert parse_fhat("smoothed:0.1") == ("smoothed", 0.1)
    assert parse_fhat("bootstrap") == ("bootstrap", None)
    with pytest.raises(ValidationError):
        parse_fhat("kde")


def test_convergence_study_difference_quotient():
    rows = boundary_convergence_study(Uniform(0, 1), [10**3, 10**4, 10**5, 10**6], 50, "dq",
                                      np.random.default_rng(12))
    errors = [err for _, _, err in rows]
    assert all(a > b for a, b in zip(errors, errors[1:]))
    assert errors[-1] < 0.03


def test_convergence_study_naive_plateau():
    rows = boundary_convergence_study(Uniform(0, 1), [10**3, 10**5], 20, "naive",
                                      np.random.default_rng(13))
    assert 0.4 <= rows[-1][2] <= 0.6


def test_convergence_study_zero_reps(rng):
    assert boundary_convergence_study(Exponential(1), [100], 0, "dq", rng) == []


def test_convergence_study_rejects_weibull_control(rng):
    with pytest.raises(PreconditionError, match="zero density at zero"):
        boundary_convergence_study(Weibull(2.0), [100], 3, "dq", rng)


def test_consistency_discrimination():
    rng = np.random.default_rng(14)
    err = {m: [] for m in ("dq", "reflect", "naive")}
    for _ in range(10):
        s = WeightSample(rng.uniform(size=10**6))
        for method in err:
            err[method].append(abs(estimate_psi0(s, method).psi0 - 1.0))
    assert np.mean(err["dq"]) < 0.05
    assert np.mean(err["reflect"]) < 0.05
    assert np.mean(err["naive"]) > 0.3
