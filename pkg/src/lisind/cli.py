"""Command-line front end.

Subcommands:

* ``lisind test INPUT.csv`` — run an independence test on paired data
  (CSV with header ``x,y``) and print a one-line machine-readable record::

      test=<name> n=<n> stat=<v> p=<p> method=<m> alpha=<a> reject=<bool>

* ``lisind table --n-max N --out PATH`` — build the exact null
  distribution table and write it as CSV.
* ``lisind tw --quantile P | --cdf T`` — query the Tracy–Widom
  distribution (10 significant digits).
* ``lisind power --config CFG.json --out PATH [--seed S]`` — run a
  Monte Carlo power study and write its CSV.

Exit codes: 0 success, 2 usage/input error, 3 internal numeric failure.
All output is deterministic given the flags (including ``--seed``).
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .ln_test import PValueVariant, TestReport, ln_test
from .permutation import (
    PairedSample,
    TiePolicy,
    TiesPresentError,
    permutation_from_sample,
)
from .reference import (
    AssociationStatistic,
    hoeffding_test,
    kendall_test,
    pearson_test,
    spearman_test,
)
from .tableaux import ExactLnTable, build_table, load_table, packaged_table, save_table
from .simulation import load_config, run_power_study
from .tracy_widom import tw_cdf, tw_quantile

__all__ = ["main", "run"]

_METHODS = ("ln", "pearson", "spearman", "kendall", "hoeffding")
_TEST_NAMES = {
    "ln": "Ln",
    "pearson": "Pearson",
    "spearman": "Spearman",
    "kendall": "Kendall",
    "hoeffding": "Hoeffding",
}
_REFERENCE_METHOD_LABELS = {
    "pearson": "StudentT",
    "spearman": "StudentT",
    "kendall": "NormalApprox",
    "hoeffding": "MonteCarloPermutation",
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lisind",
        description="Independence tests built on the longest increasing "
        "subsequence of the rank permutation, with reference tests, the "
        "exact null table, Tracy-Widom queries, and power studies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_test = sub.add_parser("test", help="run an independence test on a CSV of pairs")
    p_test.add_argument("input", help="CSV file with header 'x,y', one pair per row")
    p_test.add_argument(
        "--method",
        choices=_METHODS,
        default="ln",
        help="which test to run (default: ln)",
    )
    p_test.add_argument(
        "--alpha", type=float, default=0.05, help="significance level (default: 0.05)"
    )
    p_test.add_argument(
        "--ties",
        choices=("reject", "random"),
        default="reject",
        help="tie policy for rank-based methods: refuse tied values or break "
        "them uniformly at random (default: reject)",
    )
    p_test.add_argument(
        "--variant",
        choices=("doubled", "doubled-inclusive"),
        default="doubled",
        help="two-sided p-value convention for the exact ln method",
    )
    p_test.add_argument(
        "--table",
        default=None,
        help="exact-table CSV to use instead of the packaged asset (ln method)",
    )
    p_test.add_argument(
        "--seed",
        type=int,
        default=0,
        help="seed for random tie-breaking and Monte Carlo p-values",
    )
    p_test.add_argument(
        "--mc-reps",
        type=int,
        default=1000,
        help="permutation replications for the hoeffding p-value (default: 1000)",
    )
    p_test.add_argument(
        "--human",
        action="store_true",
        help="print a formatted block after the machine-readable record",
    )

    p_table = sub.add_parser("table", help="build and export the exact null table")
    p_table.add_argument("--n-max", type=int, required=True, dest="n_max")
    p_table.add_argument("--out", required=True, help="output CSV path")

    p_tw = sub.add_parser("tw", help="query the Tracy-Widom distribution")
    group = p_tw.add_mutually_exclusive_group(required=True)
    group.add_argument("--quantile", type=float, help="probability in (0, 1)")
    group.add_argument("--cdf", type=float, help="evaluation point t")

    p_power = sub.add_parser("power", help="run a Monte Carlo power study")
    p_power.add_argument("--config", required=True, help="JSON study configuration")
    p_power.add_argument("--out", required=True, help="output CSV path")
    p_power.add_argument(
        "--seed", type=int, default=None, help="override the configured seed"
    )
    return parser


def _read_pairs(path: str) -> PairedSample:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc}") from exc
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [c.strip() for c in rows[0]] != ["x", "y"]:
        raise ValueError(f"{path}: expected CSV header 'x,y'")
    xs: list[float] = []
    ys: list[float] = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 2:
            raise ValueError(f"{path}:{lineno}: expected two columns, got {len(row)}")
        try:
            xs.append(float(row[0]))
            ys.append(float(row[1]))
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: non-numeric value") from exc
    if not xs:
        raise ValueError(f"{path}: no data rows")
    return PairedSample.from_arrays(np.asarray(xs), np.asarray(ys))


def _record_line(
    name: str, n: int, stat: float, p: float, method: str, alpha: float, reject: bool
) -> str:
    return (
        f"test={name} n={n} stat={stat:.10g} p={p:.10g} "
        f"method={method} alpha={alpha:g} reject={str(reject).lower()}"
    )


def _human_block(fields: dict[str, object]) -> str:
    width = max(len(k) for k in fields)
    return "\n".join(f"  {k.ljust(width)} : {v}" for k, v in fields.items())


def _jittered_rank_sample(
    sample: PairedSample, seed: Optional[int]
) -> PairedSample:
    """Replace a tied sample by the jittered rank pairs used by rank tests."""
    perm = permutation_from_sample(
        sample, tie_policy=TiePolicy.RANDOM_BREAK, seed=seed
    )
    n = sample.n
    return PairedSample.from_arrays(
        np.arange(1, n + 1, dtype=float), np.asarray(perm.image, dtype=float)
    )


def _cmd_test(args: argparse.Namespace) -> int:
    sample = _read_pairs(args.input)
    if not 0.0 < args.alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {args.alpha}")
    policy = TiePolicy.REJECT if args.ties == "reject" else TiePolicy.RANDOM_BREAK
    name = _TEST_NAMES[args.method]

    if args.method == "ln":
        table = load_table(args.table) if args.table else packaged_table()
        variant = (
            PValueVariant.DOUBLED
            if args.variant == "doubled"
            else PValueVariant.DOUBLED_INCLUSIVE
        )
        report: TestReport = ln_test(
            sample,
            alpha=args.alpha,
            table=table,
            variant=variant,
            tie_policy=policy,
            seed=args.seed,
        )
        stat, p, method, reject, n = (
            report.statistic,
            report.p_value,
            report.method,
            report.reject,
            report.n,
        )
        stat_name = report.statistic_name
    else:
        work = sample
        if policy is TiePolicy.RANDOM_BREAK and (
            sample.has_tied_x() or sample.has_tied_y()
        ):
            work = _jittered_rank_sample(sample, args.seed)
        if args.method == "pearson":
            result: AssociationStatistic = pearson_test(sample)
        elif args.method == "spearman":
            result = spearman_test(work)
        elif args.method == "kendall":
            result = kendall_test(work)
        else:
            result = hoeffding_test(work, mc_reps=args.mc_reps, seed=args.seed)
        stat, p, n = result.value, result.p_value, result.n
        method = _REFERENCE_METHOD_LABELS[args.method]
        reject = p <= args.alpha
        stat_name = result.name

    print(_record_line(name, n, stat, p, method, args.alpha, reject))
    if args.human:
        print(
            _human_block(
                {
                    "test": name,
                    "sample size": n,
                    f"statistic ({stat_name})": f"{stat:.10g}",
                    "p-value": f"{p:.10g}",
                    "method": method,
                    "level": f"{args.alpha:g}",
                    "decision": "reject independence" if reject else "fail to reject",
                }
            )
        )
    return 0


def _cmd_table(args: argparse.Namespace) -> int:
    table = build_table(args.n_max)
    save_table(table, args.out)
    print(f"table n_max={table.n_max} out={args.out}")
    return 0


def _cmd_tw(args: argparse.Namespace) -> int:
    if args.quantile is not None:
        print(f"{tw_quantile(args.quantile):.10g}")
    else:
        print(f"{tw_cdf(args.cdf):.10g}")
    return 0


def _cmd_power(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    result = run_power_study(config)
    result.to_csv(args.out)
    print(f"power rows={len(result.rows)} out={args.out}")
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "test":
            return _cmd_test(args)
        if args.command == "table":
            return _cmd_table(args)
        if args.command == "tw":
            return _cmd_tw(args)
        return _cmd_power(args)
    except TiesPresentError:
        print(
            "error: tied coordinate values; rerun with --ties random "
            "or pre-process the data",
            file=sys.stderr,
        )
        return 2
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (RuntimeError, ArithmeticError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


def run() -> None:
    sys.exit(main())
