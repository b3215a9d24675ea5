"""Command-line runner for the experiment suites.

    bicontract --list-suites
    bicontract run --suite NAME [--config PATH] [--seed N] [--trials N] [--out DIR]
    bicontract run --suite all --out DIR
    bicontract replay DIR/report.json

``run`` writes ``report.json`` and ``trials.csv`` and exits 0 only if every
pass flag is true. ``replay`` recomputes each stored extremal witness.
"""

import argparse
import json
import sys
from pathlib import Path

from .errors import ConfigError
from .suites import SUITES, default_config, load_config, replay_witness, run_suite, write_report

EXIT_FAIL = 1
EXIT_CONFIG = 2


def _build_parser():
    parser = argparse.ArgumentParser(prog="bicontract", description=__doc__.splitlines()[0])
    parser.add_argument("--list-suites", action="store_true", help="print registered suites and exit")
    sub = parser.add_subparsers(dest="command")

    run = sub.add_parser("run", help="run one suite (or 'all') and write reports")
    run.add_argument("--suite", help="suite name, or 'all'")
    run.add_argument("--config", help="JSON config mirroring SuiteConfig")
    run.add_argument("--seed", type=int)
    run.add_argument("--trials", type=int)
    run.add_argument("--out", default="reports", help="output directory (default: reports)")

    rep = sub.add_parser("replay", help="recompute argmax witnesses stored in a report.json")
    rep.add_argument("report")
    rep.add_argument("--tol", type=float, default=1e-10)
    return parser


def _configs(args):
    overrides = {"seed": args.seed, "trials": args.trials}
    if args.config:
        doc = json.loads(Path(args.config).read_text()) if Path(args.config).exists() else None
        if doc is None:
            raise ConfigError("config file %s not found" % args.config)
        if args.suite and args.suite != "all":
            doc["suite"] = args.suite
        return [load_config(doc, **overrides)]
    if not args.suite:
        raise ConfigError("give --suite or --config")
    names = list(SUITES) if args.suite == "all" else [args.suite]
    clean = {k: v for k, v in overrides.items() if v is not None}
    return [default_config(name, **clean) for name in names]


def _run(args):
    try:
        configs = _configs(args)
    except (ConfigError, json.JSONDecodeError) as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return EXIT_CONFIG
    ok = True
    out = Path(args.out)
    for cfg in configs:
        report = run_suite(cfg)
        target = out / cfg.suite if len(configs) > 1 else out
        write_report(report, target)
        ok &= report.passed
        print("%-12s %s  %5.1fs  %s" % (cfg.suite, "PASS" if report.passed else "FAIL",
                                         report.elapsed, report.theorem))
        for kind, agg in report.aggregates.items():
            print("    %-16s max %-12.6g mean %-12.6g threshold %-8g n=%d%s" % (
                kind, agg["max_score"], agg["mean_score"], agg["threshold"], agg["count"],
                "" if agg["pass"] else "  <-- FAIL"))
    return 0 if ok else EXIT_FAIL


def _replay(args):
    try:
        doc = json.loads(Path(args.report).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        print("cannot read report: %s" % exc, file=sys.stderr)
        return EXIT_CONFIG
    ok = True
    for kind, agg in doc["aggregates"].items():
        w = agg["argmax_witness"]
        got = replay_witness(w)
        err = abs(got - w["score"])
        good = err <= args.tol * max(1.0, abs(w["score"]))
        ok &= good
        print("%-16s stored %-14.8g replayed %-14.8g %s" % (kind, w["score"], got, "ok" if good else "MISMATCH"))
    return 0 if ok else EXIT_FAIL


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.list_suites:
        width = max(map(len, SUITES))
        for name, suite in SUITES.items():
            print("%-*s  %s" % (width, name, suite.theorem))
        return 0
    if args.command == "run":
        return _run(args)
    if args.command == "replay":
        return _replay(args)
    parser.print_help()
    return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
