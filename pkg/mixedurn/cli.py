"""mixed-urn command line.

    mixed-urn simulate --p 0.05 --steps 2000 --replicates 100000 --out run/
    mixed-urn exact --p 1/2 --n 10 --exact
    mixed-urn theory --alpha 1 --beta 2 --gamma 1 --p 1/2
    mixed-urn converge --steps 262144 --replicates 1000
    mixed-urn validate
    mixed-urn reproduce-figure --out figure/

Logging goes to stderr; `theory` and `validate` print JSON to stdout.
Exit codes: 0 ok, 2 invalid arguments, 3 I/O error, 4 exact frontier
overflow, 5 failed validation or internal consistency check.
"""

import argparse
import json
import logging
import sys
from os import path
from typing import Any, Optional, TypeVar

from pydantic import BaseModel, ValidationError

from mixedurn import validation
from mixedurn.config import Settings
from mixedurn.constants import (
    CONVERGENCE_COLUMNS,
    CONVERGENCE_FILE,
    DEFAULT_SEED,
    EXIT_IO,
    EXIT_OK,
    EXIT_VALIDATION,
    HISTOGRAM_COLUMNS,
    HISTOGRAM_FILE,
    MOMENTS_FILE,
    STATE_COLUMNS,
    STATES_FILE,
    SUMMARY_FILE,
    THEORY_ENVELOPE_STEPS,
    X_LAW_COLUMNS,
    X_LAW_FILE,
)
from mixedurn.engine import convergence_curve, run_replicates
from mixedurn.errors import UrnError, ValidationFailed
from mixedurn.exact import exact_distribution, mean_and_variance, state_rows, x_law_rows
from mixedurn.export import (
    output_dir,
    summary_histogram_rows,
    write_json,
    write_table,
)
from mixedurn.figure import reproduce_figure
from mixedurn.model import FigureConfig, RunConfig
from mixedurn.theory import (
    analyze,
    case3_p,
    envelope,
    envelope_band,
    paired_envelope,
)
from mixedurn.utils import parse_int_list

logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s [%(name)s] %(levelname)s: %(message)s",
)
logger = logging.getLogger(__name__)

settings = Settings()

ConfigT = TypeVar("ConfigT", bound=BaseModel)


def _json_number(value: Any) -> Any:
    # rationals are written as "num/den" strings
    return value if isinstance(value, (int, float)) else str(value)


def _config(args: argparse.Namespace, model: type[ConfigT]) -> ConfigT:
    """Validated config from parsed flags; unset flags fall back to settings."""
    fields = {
        name: value
        for name, value in vars(args).items()
        if name in model.model_fields and value is not None
    }
    fallbacks = {
        "out": settings.out_dir,
        "bins": settings.bins,
        "frontier_limit": settings.frontier_limit,
    }
    for name, value in fallbacks.items():
        if name in model.model_fields:
            fields.setdefault(name, value)
    return model(**fields)


def _run_config(args: argparse.Namespace) -> RunConfig:
    return _config(args, RunConfig)


def cmd_simulate(args: argparse.Namespace) -> int:
    config = _run_config(args)
    params = config.urn_params()
    summary = run_replicates(
        params,
        config.steps,
        config.replicates,
        config.seed,
        config.checkpoint_list(),
        config.bins,
        config.workers,
    )
    out = output_dir(config.out)
    write_table(
        out,
        HISTOGRAM_FILE,
        HISTOGRAM_COLUMNS,
        summary_histogram_rows(summary),
        config.format,
    )
    write_json(
        path.join(out, SUMMARY_FILE),
        {
            "theory": analyze(params).model_dump(mode="json"),
            "summary": summary.model_dump(mode="json"),
        },
    )
    return EXIT_OK


def cmd_exact(args: argparse.Namespace) -> int:
    config = _run_config(args)
    params = config.urn_params()
    dist = exact_distribution(
        params, config.steps, frontier_limit=config.frontier_limit, exact=args.exact
    )
    out = output_dir(config.out)
    write_table(out, X_LAW_FILE, X_LAW_COLUMNS, x_law_rows(dist), config.format)
    write_table(out, STATES_FILE, STATE_COLUMNS, state_rows(dist), config.format)
    mean, variance = mean_and_variance(dist)
    write_json(
        path.join(out, MOMENTS_FILE),
        {
            "n": dist.n,
            "exact": dist.exact,
            "states": len(dist.support),
            "mean": _json_number(mean),
            "variance": _json_number(variance),
        },
    )
    return EXIT_OK


def cmd_theory(args: argparse.Namespace) -> int:
    params = _run_config(args).urn_params()
    report = analyze(params)
    payload: dict[str, Any] = {
        "params": params.model_dump(mode="json"),
        "report": report.model_dump(mode="json"),
    }
    p_star = case3_p(params.alpha, params.beta, params.gamma)
    payload["case3_p"] = None if p_star is None else str(p_star)
    if params.within_theorem:
        payload["envelope"] = {
            str(n): envelope(params, n) for n in THEORY_ENVELOPE_STEPS
        }
        payload["paired_envelope"] = {
            str(n): paired_envelope(params, n) for n in THEORY_ENVELOPE_STEPS
        }
        payload["band"] = {
            str(n): list(envelope_band(params, n)) for n in THEORY_ENVELOPE_STEPS
        }
    print(json.dumps(payload, indent=4))
    return EXIT_OK


def cmd_converge(args: argparse.Namespace) -> int:
    config = _run_config(args)
    curve = convergence_curve(
        config.urn_params(), config.steps, config.replicates, config.seed, config.workers
    )
    out = output_dir(config.out)
    # the JSON curve below already carries every point
    if config.format == "csv":
        write_table(
            out,
            CONVERGENCE_FILE,
            CONVERGENCE_COLUMNS,
            ((pt.n, pt.mean, pt.variance, pt.q90_abs_dev) for pt in curve.points),
        )
    write_json(path.join(out, f"{CONVERGENCE_FILE}.json"), curve)
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    config = _run_config(args)
    report = validation.run_validation(
        config.urn_params(),
        config.replicates,
        config.seed,
        config.workers,
        kernel=validation.corrupted_kernel if args.corrupt_kernel else None,
        ks_steps=validation.KS_STEPS,
        ks_replicates=validation.KS_REPLICATES,
    )
    print(report.model_dump_json(indent=4))
    if not report.passed:
        raise ValidationFailed([check.name for check in report.checks if not check.passed])
    return EXIT_OK


def cmd_reproduce_figure(args: argparse.Namespace) -> int:
    config = _config(args, FigureConfig)
    reproduce_figure(
        config.seed,
        config.out,
        config.bins,
        config.workers,
        right_replicates=config.right_replicates,
        right_steps=config.right_steps,
        plot_script=config.plot_script,
    )
    return EXIT_OK


def _urn_flags() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    group = parser.add_argument_group("urn")
    group.add_argument("--y0", type=int, help="initial yellow balls (default 1)")
    group.add_argument("--b0", type=int, help="initial blue balls (default 1)")
    group.add_argument("--alpha", type=int, help="Friedman: balls of the drawn colour")
    group.add_argument("--beta", type=int, help="Friedman: balls of the other colour")
    group.add_argument("--gamma", type=int, help="Polya: balls of the drawn colour")
    group.add_argument(
        "--p", type=str, help='Friedman probability, decimal or "num/den" (default 0.05)'
    )
    return parser


def _run_flags() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument(
        "--workers", type=int, help="threads; MIXED_URN_WORKERS or every core if unset"
    )
    parser.add_argument("--out", type=str, help="output directory")
    parser.add_argument("--format", choices=["csv", "json"], default="csv")
    return parser


def _log_flags() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="defaults to MIXED_URN_LOG_LEVEL or INFO",
    )
    return parser


def build_parser() -> argparse.ArgumentParser:
    urn, run, log = _urn_flags(), _run_flags(), _log_flags()
    parser = argparse.ArgumentParser(
        prog="mixed-urn",
        description="Two-colour urn with mixed Friedman/Polya replacement.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser(
        "simulate", parents=[urn, run, log], help="Monte Carlo histograms of X_n"
    )
    sp.add_argument("--steps", type=int, default=2_000)
    sp.add_argument("--replicates", type=int, default=10_000)
    sp.add_argument(
        "--checkpoints", type=parse_int_list, help="comma list, default: --steps"
    )
    sp.add_argument("--bins", type=int)
    sp.set_defaults(func=cmd_simulate)

    ep = sub.add_parser(
        "exact", parents=[urn, run, log], help="exact law of X_n by dynamic programming"
    )
    ep.add_argument("--n", "--steps", dest="steps", type=int, default=10)
    ep.add_argument("--frontier-limit", dest="frontier_limit", type=int)
    ep.add_argument(
        "--exact", action="store_true", help="rational arithmetic (n <= 50)"
    )
    ep.set_defaults(func=cmd_exact)

    tp = sub.add_parser(
        "theory", parents=[urn, log], help="theta, slope, case and envelope as JSON"
    )
    tp.set_defaults(func=cmd_theory)

    cp = sub.add_parser(
        "converge", parents=[urn, run, log], help="convergence curve at n = 1, 2, 4, ..."
    )
    cp.add_argument("--steps", type=int, default=1 << 18, help="largest n")
    cp.add_argument("--replicates", type=int, default=1_000)
    cp.set_defaults(func=cmd_converge)

    vp = sub.add_parser(
        "validate", parents=[urn, run, log], help="Monte Carlo vs exact vs theory checks"
    )
    vp.add_argument("--replicates", type=int, default=1_000_000)
    vp.add_argument("--corrupt-kernel", action="store_true", help=argparse.SUPPRESS)
    vp.set_defaults(func=cmd_validate)

    fp = sub.add_parser(
        "reproduce-figure", parents=[log], help="the three histogram panels"
    )
    fp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    fp.add_argument("--workers", type=int)
    fp.add_argument("--out", type=str)
    fp.add_argument("--bins", type=int)
    fp.add_argument("--right-replicates", type=int)
    fp.add_argument("--right-steps", type=int)
    fp.add_argument("--no-plot-script", dest="plot_script", action="store_false")
    fp.set_defaults(func=cmd_reproduce_figure)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on bad flags and 0 on --help
        return e.code if isinstance(e.code, int) else EXIT_VALIDATION
    logging.getLogger().setLevel(args.log_level or settings.log_level)

    try:
        return args.func(args)
    except ValidationError as e:
        logger.error(f"invalid arguments: {e}")
        return EXIT_VALIDATION
    except UrnError as e:
        logger.error(str(e))
        return e.exit_code
    except OSError as e:
        logger.error(f"I/O error: {e}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
