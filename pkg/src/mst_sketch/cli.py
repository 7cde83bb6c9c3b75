"""``mst-sketch`` command line.

Exit codes: 0 success, 2 validation error, 3 statistical precondition error,
4 size-cap error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import experiments
from .errors import MstSketchError, ValidationError
from .experiments import RunConfig

log = logging.getLogger("mst_sketch")


def _int_list(text: str) -> list[int]:
    try:
        return [int(float(x)) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _int(text: str) -> int:
    # accept 1e5 style sizes
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value != int(value):
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    return int(value)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mst-sketch",
        description="Estimate random-graph MST costs from small sketch graphs, and validate the estimator.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    # defaults are None so config-file values survive unless a flag is given
    common.add_argument("--config", help="JSON file with RunConfig fields; flags override it")
    common.add_argument("--model", help="uniform:a,b | exp:rate | weibull:shape,scale")
    common.add_argument("--phi1", help="identity | pow:p | log1p | scaled:c,<inner>")
    common.add_argument("--phi2", help="zero | hist:c1,c2,...")
    common.add_argument("--schedule", help="sqrt | logsq | explicit:n1=d1,...")
    common.add_argument("--n", type=_int)
    common.add_argument("--n-grid", dest="n_grid", type=_int_list)
    common.add_argument("--m-grid", dest="m_grid", type=_int_list, help="sample sizes for 'boundary'")
    common.add_argument("--reps", type=int)
    common.add_argument("--seed", type=int, help="master seed")
    common.add_argument("--workers", type=int)
    common.add_argument("--psi0", choices=["dq", "reflect", "naive"])
    common.add_argument("--fhat", help="bootstrap | smoothed[:h] | lowertail[:fraction]")
    common.add_argument("--bandwidth", help="auto | <value>")
    common.add_argument("--cap", type=_int, help="direct-solve cap on n (default 20000)")
    common.add_argument("--subsample-cap", dest="subsample_cap", type=_int,
                        help="max observed edge weights fed to the estimators (default 1e6)")
    common.add_argument("--auxiliary", choices=["complete", "erdos_renyi"])
    common.add_argument("--colors", help="color probabilities p1,...,pk for synthetic estimate")
    common.add_argument("--input", help="edge-list file for 'estimate'")
    common.add_argument("--out", help="primary output path (default stdout)")
    common.add_argument("--records", help="also write raw trial records CSV here")

    helps = {
        "frieze": "direct MST cost of random complete graphs vs the zeta(3)/F'(0) limit",
        "estimate": "one sketch estimate from an edge-list file or a synthetic model",
        "convergence": "sketch vs direct cost over a grid of n",
        "boundary": "compare F'(0) estimators, including the biased plain kernel",
        "bench": "wall time of direct MST vs the sketch pipeline",
    }
    for name in experiments.COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    data: dict = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(data, dict):
            raise ValidationError("config file must hold a JSON object")
    data.pop("command", None)
    for key, value in vars(args).items():
        if key in ("config", "verbose", "command") or value is None:
            continue
        data[key] = value
    return RunConfig.from_dict({"command": args.command, **data})


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = config_from_args(args)
        getattr(experiments, f"cmd_{cfg.command}")(cfg)
    except MstSketchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ValidationError.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
