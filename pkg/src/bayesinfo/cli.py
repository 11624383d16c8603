"""``bayesinfo`` command line.

Subcommands emit tables as CSV (default) or JSON. Options can also come from
a JSON file given with ``--config``; explicit flags win. Exit codes: 0 on
success, 2 on invalid input, 3 when ``verify`` finds an unexpected mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys

from pydantic import ValidationError

from bayesinfo import tables, verify
from bayesinfo.config import CONFIGS
from bayesinfo.core import DomainError

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_MISMATCH = 3


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="write output to this path instead of stdout")
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--unit", choices=["nats", "bits"])
    p.add_argument("--seed", type=int, help="unsigned 64-bit seed for Monte Carlo checks")
    p.add_argument("--config", help="JSON file with option values (flags take precedence)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bayesinfo", argument_default=argparse.SUPPRESS,
                                     description="Information measures for Bayesian design and prediction.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("linmodel", argument_default=argparse.SUPPRESS,
                       help="unit-norm prediction-direction sweep for the normal linear model (p=2)")
    _common(p)
    p.add_argument("--n", type=float, help="total sample size")
    p.add_argument("--eta", type=float, help="noise-to-prior variance ratio")
    p.add_argument("--prior-variances", dest="prior_variances", type=float, nargs=2)
    p.add_argument("--sweep", type=int, help="number of directions (0 gives a header-only table)")

    p = sub.add_parser("design", argument_default=argparse.SUPPRESS,
                       help="optimal prior-variance or sample-size allocations")
    _common(p)
    p.add_argument("--mode", choices=["prior", "sample"])
    p.add_argument("--c", type=float, help="prior variance budget")
    p.add_argument("--eta", type=float)
    p.add_argument("--kappa-max", dest="kappa_max", type=float)
    p.add_argument("--sweep", type=int)
    p.add_argument("--eigenvalues", type=float, nargs="+")
    p.add_argument("--n", type=float, help="sample budget (sample mode)")
    p.add_argument("--prior-variances", dest="prior_variances", type=float, nargs="+")
    p.add_argument("--point", type=float, nargs="+", help="prediction point (sample mode)")

    p = sub.add_parser("tte", argument_default=argparse.SUPPRESS,
                       help="TTE/gamma decomposition or censoring-loss tables")
    _common(p)
    p.add_argument("--table", choices=["decomposition", "censoring"])
    p.add_argument("--alphas", type=float, nargs="+")
    p.add_argument("--n-max", dest="n_max", type=int)

    p = sub.add_parser("dep", argument_default=argparse.SUPPRESS,
                       help="dependent-normal curves, joint minima and sample sizes")
    _common(p)
    p.add_argument("--table", choices=["curves", "joint", "minjoint", "samplesize"])
    p.add_argument("--families", nargs="+", choices=["UC", "IC", "SC"])
    p.add_argument("--etas", type=float, nargs="+")
    p.add_argument("--rhos", type=float, nargs="+")
    p.add_argument("--n-max", dest="n_max", type=int)
    p.add_argument("--ns", type=int, nargs="+")
    p.add_argument("--sweep", type=int)
    p.add_argument("--target", type=float)
    p.add_argument("--rule", choices=["nearest", "at_least"])

    p = sub.add_parser("orderstats", argument_default=argparse.SUPPRESS,
                       help="order-statistic parameter, dependence and joint curves")
    _common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--alphas", type=float, nargs="+")

    p = sub.add_parser("verify", argument_default=argparse.SUPPRESS,
                       help="run the oracle-agreement suite and print a JSON report")
    _common(p)
    p.add_argument("--tight", action="store_true",
                   help="drop quadrature error-bound allowances (negative control; expected to fail)")
    p.add_argument("--replications", type=int)
    return parser


def _load_config(command: str, args: dict):
    values = {}
    path = args.pop("config", None)
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            values = json.load(fh)
        if not isinstance(values, dict):
            raise DomainError("config file must contain a JSON object")
    values.update(args)
    return CONFIGS[command].model_validate(values)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


BUILDERS = {
    "linmodel": tables.build_linmodel,
    "design": tables.build_design,
    "tte": tables.build_tte,
    "dep": tables.build_dep,
    "orderstats": tables.build_orderstats,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = vars(parser.parse_args(argv))
    command = ns.pop("command")
    try:
        cfg = _load_config(command, ns)
        if command == "verify":
            report = verify.run_checks(seed=cfg.seed or 0, tight=cfg.tight,
                                       replications=cfg.replications)
            _emit(verify.report_json(report), cfg.out)
            return EXIT_OK if report["ok"] else EXIT_MISMATCH
        table = BUILDERS[command](cfg).in_unit(cfg.unit)
    except ValidationError as exc:
        print(f"bayesinfo {command}: invalid configuration\n{exc}", file=sys.stderr)
        return EXIT_INVALID
    except (DomainError, OSError, json.JSONDecodeError) as exc:
        print(f"bayesinfo {command}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    text = tables.to_csv(table) if cfg.format == "csv" else tables.to_json(table, cfg.unit)
    _emit(text, cfg.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
