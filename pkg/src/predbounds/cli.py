"""Command-line entry point: one subcommand per analysis.

Exit codes: 0 success, 1 usage (no arguments), 2 data error, 3 single-class
input, 4 bad flags.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import bounds as bounds_mod
from . import features as features_mod
from . import oracle as oracle_mod
from . import overlap as overlap_mod
from . import splits as splits_mod
from .dataset import (
    ColumnSchema,
    Dataset,
    DatasetError,
    PatternTable,
    build_pattern_table,
    discretize,
    load_csv,
)

EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_SINGLE_CLASS = 3
EXIT_FLAGS = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_FLAGS)


def _parse_bins(specs):
    """--bin col:equal-width:4 or col:quantile:8, repeatable."""
    out = {}
    for spec in specs or []:
        parts = spec.split(":")
        if len(parts) != 3 or parts[1] not in ("equal-width", "quantile"):
            raise DatasetError(f"bad --bin spec {spec!r}")
        try:
            bins = int(parts[2])
        except ValueError:
            raise DatasetError(f"bad --bin spec {spec!r}") from None
        out[parts[0]] = (parts[1], bins)
    return out


def _load_table(args) -> PatternTable:
    if getattr(args, "pattern_table", None):
        with open(args.pattern_table, encoding="utf-8") as fh:
            return PatternTable.from_csv(fh.read())
    return build_pattern_table(_load_dataset(args))


def _load_dataset(args) -> Dataset:
    if not args.input:
        raise DatasetError("--input (or --pattern-table) is required")
    dataset = load_csv(args.input, args.label, args.positive)
    bins = _parse_bins(getattr(args, "bin", None))
    if bins:
        schema = tuple(
            ColumnSchema(name=c.name, kind="numeric",
                         binning=bins[c.name][0], bins=bins[c.name][1])
            if c.name in bins else c
            for c in dataset.schema)
        dataset = discretize(Dataset(schema=schema, samples=dataset.samples))
    return dataset


def _write(text: str, path):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _parse_grid(spec: str):
    """start:stop:step inclusive grid, e.g. 0.1:0.9:0.1."""
    try:
        start, stop, step = (float(v) for v in spec.split(":"))
    except ValueError:
        raise DatasetError(f"bad grid spec {spec!r}") from None
    if step <= 0 or stop < start:
        raise DatasetError(f"bad grid spec {spec!r}")
    grid = []
    k = 0
    while True:
        v = start + k * step
        if v > stop + 1e-12:
            break
        grid.append(round(v, 12))
        k += 1
    return grid


def cmd_bounds(args):
    table = _load_table(args)
    _write(bounds_mod.bounds_report(table).to_json(), args.output)


def cmd_curves(args):
    table = _load_table(args)
    roc = bounds_mod.optimal_roc_curve(table)
    pr = bounds_mod.optimal_pr_curve(table)
    _write(roc.to_csv(), args.roc_output)
    _write(pr.to_csv(), args.pr_output)
    print(f"roc_area={roc.area!r} pr_area={pr.area!r}", file=sys.stderr)


def cmd_split_analyze(args):
    if args.train and args.test:
        # one half may be single-class; require the positive token jointly
        train = load_csv(args.train, args.label, args.positive,
                         require_positive=False)
        test = load_csv(args.test, args.label, args.positive,
                        require_positive=False)
        if not any(s.label > 0 for s in train.samples + test.samples):
            raise DatasetError(
                f"positive token {args.positive!r} absent from both "
                f"train and test files")
        entries = {}
        for ds, offset in ((train, 0), (test, 2)):
            for s in ds.samples:
                quad = list(entries.get(s.features, (0, 0, 0, 0)))
                quad[offset + (0 if s.label > 0 else 1)] += 1
                entries[s.features] = tuple(quad)
        split = splits_mod.SplitTable(entries=entries)
    else:
        dataset = _load_dataset(args)
        if args.ratio is None:
            raise DatasetError("need either --train/--test or --input with --ratio")
        _, _, split = splits_mod.split_random(dataset, args.ratio, args.seed)
    report = splits_mod.delta_lower_bound(split)
    payload = {
        "delta": report.delta,
        "perfect": report.perfect,
        "per_pattern": {"|".join(str(t) for t in k): v
                        for k, v in sorted(report.per_pattern.items(), key=repr)},
    }
    if args.labeling:
        with open(args.labeling, encoding="utf-8") as fh:
            raw = json.load(fh)
        labeling = {k: raw["|".join(str(t) for t in k)] for k in split.entries}
        d_train, d_test = splits_mod.delta_of_classifier(split, labeling)
        payload["delta_train_f"] = d_train
        payload["delta_test_f"] = d_test
    _write(json.dumps(payload, indent=2), args.output)


def cmd_expected_sweep(args):
    table = _load_table(args)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["p", "expected_min_hinge", "expected_ac_upper", "expected_delta"])
    for p in _parse_grid(args.grid):
        writer.writerow([
            p,
            repr(splits_mod.expected_min_hinge(table, p, seed=args.seed)),
            repr(splits_mod.expected_accuracy_upper(table, p, seed=args.seed)),
            repr(splits_mod.expected_delta(table, p, seed=args.seed)),
        ])
    _write(buf.getvalue(), args.output)


def cmd_overlap(args):
    table = _load_table(args)
    _write(json.dumps({"overlap": overlap_mod.overlap_index(table)}, indent=2),
           args.output)


def cmd_envelope(args):
    config = overlap_mod.OptimizerConfig(
        starts=args.starts, max_iters=args.max_iters,
        tolerance=args.tolerance, seed=args.seed)
    env = overlap_mod.envelope(_parse_grid(args.grid), d=args.d, config=config)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["d_s", "ar_min", "ar_max"])
    for d_s, ar_min, ar_max in env.samples:
        writer.writerow([d_s, repr(ar_min), repr(ar_max)])
    _write(buf.getvalue(), args.output)
    for flag in env.flags:
        print(f"warning: {flag}", file=sys.stderr)


def cmd_features(args):
    dataset = _load_dataset(args)
    if args.k:
        if args.mode == "exhaustive":
            score = features_mod.exhaustive_best_subset(dataset, args.k,
                                                        budget=args.budget)
        else:
            score = features_mod.greedy_best_subset(dataset, args.k)
        payload = {"k": args.k, "best_subset": list(score.subset),
                   "ar_upper": score.ar_upper, "overlap": score.overlap}
        _write(json.dumps(payload, indent=2), args.output)
        return
    result = features_mod.optimal_dimension_kstar(dataset, mode=args.mode,
                                                  budget=args.budget)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["k", "best_subset", "ar_upper", "overlap"])
    for k, score in enumerate(result.per_k, start=1):
        writer.writerow([k, "|".join(score.subset),
                         repr(score.ar_upper), repr(score.overlap)])
    _write(buf.getvalue(), args.output)
    print(json.dumps({"k_star": result.k_star,
                      "global_subset": list(result.global_subset.subset),
                      "full_overlap": result.full_overlap}), file=sys.stderr)


def cmd_oracle_check(args):
    import numpy as np

    from .splits import SplitTable

    rng = np.random.default_rng(args.seed)
    results = []

    def random_table():
        d = int(rng.integers(1, 7))
        entries = {}
        for i in range(d):
            pos, neg = int(rng.integers(0, 5)), int(rng.integers(0, 5))
            if pos + neg == 0:
                pos = 1
            entries[(f"p{i}",)] = (pos, neg)
        return PatternTable.from_counts(entries)

    checks = {
        "auc_roc_upper == ordering oracle": lambda t: abs(
            bounds_mod.auc_roc_upper(t) - oracle_mod.brute_best_auc(t)[0]) < 1e-12,
        "auc_pr_upper == ordering oracle": lambda t: abs(
            bounds_mod.auc_pr_upper(t) - oracle_mod.brute_best_pr_area(t)) < 1e-12,
        "accuracy_upper == labeling oracle": lambda t: abs(
            bounds_mod.accuracy_upper(t) - oracle_mod.brute_best_accuracy(t)) < 1e-12,
        "min hinge == labeling oracle": lambda t: abs(
            bounds_mod.min_loss(t, "hinge") - oracle_mod.brute_min_hinge(t)) < 1e-12,
        "delta == labeling oracle": lambda t: _delta_check(t, rng),
    }

    def _delta_check(table, rng):
        entries = {}
        for k, (p, n) in table.entries.items():
            pt = int(rng.integers(0, p + 1))
            nt = int(rng.integers(0, n + 1))
            entries[k] = (pt, nt, p - pt, n - nt)
        split = SplitTable(entries=entries)
        return abs(splits_mod.delta_lower_bound(split).delta -
                   oracle_mod.brute_min_delta(split)) < 1e-12

    all_ok = True
    for name, check in checks.items():
        ok = True
        for _ in range(args.trials):
            table = random_table()
            if table.n_plus == 0 or table.n_minus == 0:
                continue
            if not check(table):
                ok = False
                break
        all_ok &= ok
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
    sys.exit(0 if all_ok else EXIT_DATA)


def _add_io_options(sub, dataset_only=False):
    sub.add_argument("--input", help="labeled CSV file")
    sub.add_argument("--label", help="label column name")
    sub.add_argument("--positive", help="positive label token")
    sub.add_argument("--bin", action="append",
                     help="numeric binning spec col:equal-width:B or col:quantile:B")
    if not dataset_only:
        sub.add_argument("--pattern-table",
                         help="pre-aggregated pattern,pos,neg CSV (bypasses --input)")
    sub.add_argument("--output", help="output path (default stdout)")


def build_parser() -> _Parser:
    parser = _Parser(prog="predbounds",
                     description="Predictability ceilings of binary datasets")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker cap (reserved; computations are single-threaded)")
    subs = parser.add_subparsers(dest="command")

    sub = subs.add_parser("bounds", help="ceilings and minimum losses")
    _add_io_options(sub)
    sub.set_defaults(func=cmd_bounds)

    sub = subs.add_parser("curves", help="optimal ROC and PR curve vertices")
    _add_io_options(sub)
    sub.add_argument("--roc-output", help="ROC CSV path (default stdout)")
    sub.add_argument("--pr-output", help="PR CSV path (default stdout)")
    sub.set_defaults(func=cmd_curves)

    sub = subs.add_parser("split-analyze", help="train/test joint-error bound")
    _add_io_options(sub)
    sub.add_argument("--train", help="explicit train CSV")
    sub.add_argument("--test", help="explicit test CSV")
    sub.add_argument("--ratio", type=float, help="random division ratio")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--labeling", help="JSON pattern->+/-1 labeling to evaluate")
    sub.set_defaults(func=cmd_split_analyze)

    sub = subs.add_parser("expected-sweep",
                          help="expected losses/ceilings over a ratio grid")
    _add_io_options(sub)
    sub.add_argument("--grid", required=True, help="start:stop:step, e.g. 0.1:0.9:0.1")
    sub.add_argument("--seed", type=int, default=0)
    sub.set_defaults(func=cmd_expected_sweep)

    sub = subs.add_parser("overlap", help="Jensen-Shannon overlap index")
    _add_io_options(sub)
    sub.set_defaults(func=cmd_overlap)

    sub = subs.add_parser("envelope", help="(overlap, AUC-ceiling) feasible region")
    sub.add_argument("--grid", required=True, help="start:stop:step overlap grid")
    sub.add_argument("--d", type=int, default=10, help="support size")
    sub.add_argument("--starts", type=int, default=16)
    sub.add_argument("--max-iters", type=int, default=300)
    sub.add_argument("--tolerance", type=float, default=1e-9)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--output", help="output path (default stdout)")
    sub.set_defaults(func=cmd_envelope)

    sub = subs.add_parser("features", help="bound-driven feature selection")
    _add_io_options(sub, dataset_only=True)
    sub.add_argument("--mode", choices=("exhaustive", "greedy"), default="exhaustive")
    sub.add_argument("--k", type=int, help="subset size (omit for full k sweep + k*)")
    sub.add_argument("--budget", type=int, default=features_mod.DEFAULT_BUDGET)
    sub.set_defaults(func=cmd_features)

    sub = subs.add_parser("oracle-check", help="brute-force agreement suite")
    sub.add_argument("--trials", type=int, default=50)
    sub.add_argument("--seed", type=int, default=0)
    sub.set_defaults(func=cmd_oracle_check)

    return parser


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    if not argv:
        parser.print_help()
        return EXIT_USAGE
    args = parser.parse_args(argv)
    if not getattr(args, "command", None):
        parser.print_help()
        return EXIT_USAGE
    try:
        args.func(args)
    except bounds_mod.SingleClassError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SINGLE_CLASS
    except (DatasetError, features_mod.BudgetExceededError) as exc:
        msg = str(exc)
        if "single class" in msg:
            print(f"error: {msg}", file=sys.stderr)
            return EXIT_SINGLE_CLASS
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_DATA
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return 0


if __name__ == "__main__":
    sys.exit(main())
