"""Command-line front end: ``cutkit run``, ``cutkit corpus`` and ``cutkit suite``.

Exit codes: 0 all jobs pass, 1 a job failed, 2 schema violation, 3 internal error.
Seed precedence: ``--seed`` over ``CUTKIT_SEED`` over the scenario's own seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import traceback
from concurrent.futures import ThreadPoolExecutor

from . import scenario
from .verify import registered_properties, run_property

EXIT_PASS, EXIT_FAIL, EXIT_SCHEMA, EXIT_INTERNAL = 0, 1, 2, 3
_EXIT_FOR_STATUS = {"pass": EXIT_PASS, "fail": EXIT_FAIL, "error": EXIT_INTERNAL}


def _seed(args) -> int | None:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("CUTKIT_SEED")
    if env is None or env == "":
        return None
    try:
        return int(env)
    except ValueError:
        raise scenario.ScenarioError(f"CUTKIT_SEED must be an integer, got {env!r}") from None


def _dump(payload, target: str | None) -> None:
    if target is None:
        return
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if target == "-":
        sys.stdout.write(text)
    else:
        with open(target, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load(source: str) -> dict:
    if os.path.exists(source):
        return scenario.load(source)
    if source in scenario.corpus_names():
        return scenario.corpus_scenario(source)
    raise scenario.ScenarioError(f"{source}: no such file or corpus scenario")


def _print_corpus() -> int:
    for name in scenario.corpus_names():
        data = scenario.corpus_scenario(name)
        print(f"{name:32} {data.get('description', '')}")
    return EXIT_PASS


def cmd_run(args) -> int:
    if args.list_corpus:
        return _print_corpus()
    if not args.scenario:
        raise scenario.ScenarioError("run needs a scenario path or corpus name")
    report = scenario.run_scenario(_load(args.scenario), seed=_seed(args), name_filter=args.filter)
    if args.json != "-":
        print(report.text())
    _dump(report.to_json(), args.json)
    return _EXIT_FOR_STATUS[report.status]


def cmd_corpus(args) -> int:
    if args.list or (not args.all and not args.name):
        return _print_corpus()
    names = scenario.corpus_names() if args.all else [args.name]
    seed = _seed(args)
    datas = [scenario.corpus_scenario(n) for n in names]
    with ThreadPoolExecutor() as pool:
        reports = list(pool.map(lambda d: scenario.run_scenario(d, seed=seed), datas))
    if args.json != "-":
        for r in reports:
            print(r.text())
        passed = sum(r.status == "pass" for r in reports)
        print(f"corpus: {passed}/{len(reports)} scenarios passed")
    _dump({"scenarios": [r.to_json() for r in reports]}, args.json)
    statuses = {r.status for r in reports}
    if "error" in statuses:
        return EXIT_INTERNAL
    return EXIT_FAIL if "fail" in statuses else EXIT_PASS


def suite_report(seed: int, only: list[str] | None = None, trials: int | None = None) -> dict:
    props = registered_properties()
    names = sorted(props) if not only else only
    unknown = [n for n in names if n not in props]
    if unknown:
        raise scenario.ScenarioError(f"unknown properties: {', '.join(unknown)}")
    results = [run_property(n, seed, n, trials).to_json() for n in names]
    counts = {s: sum(r["status"] == s for r in results) for s in ("pass", "fail", "error")}
    status = "error" if counts["error"] else ("fail" if counts["fail"] else "pass")
    return {"seed": seed, "status": status, "counts": counts, "properties": results}


def cmd_suite(args) -> int:
    seed = _seed(args)
    report = suite_report(42 if seed is None else seed, args.property or None, args.trials)
    if args.json != "-":
        for r in report["properties"]:
            details = ", ".join(f"{k}={v}" for k, v in sorted(r["details"].items()) if not isinstance(v, (dict, list)))
            print(f"{r['status'].upper():5} {r['name']:28} {details}")
        c = report["counts"]
        print(f"suite (seed {report['seed']}): {c['pass']}/{len(report['properties'])} properties passed")
    _dump(report, args.json)
    return _EXIT_FOR_STATUS[report["status"]]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cutkit", description="Circle cutting and radial blowup checks on local models.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario file or bundled corpus scenario")
    run.add_argument("scenario", nargs="?", help="path to a scenario JSON file, or a corpus name")
    run.add_argument("--json", metavar="PATH", help="write the JSON report here ('-' for stdout)")
    run.add_argument("--seed", type=int, help="override the scenario seed")
    run.add_argument("--filter", metavar="NAME", help="run only jobs whose name contains NAME")
    run.add_argument("--list-corpus", action="store_true", help="list bundled scenarios and exit")
    run.set_defaults(func=cmd_run)

    corpus = sub.add_parser("corpus", help="list or run the bundled scenarios")
    corpus.add_argument("name", nargs="?", help="run a single corpus scenario")
    corpus.add_argument("--all", action="store_true", help="run every bundled scenario")
    corpus.add_argument("--list", action="store_true", help="list bundled scenarios")
    corpus.add_argument("--json", metavar="PATH")
    corpus.add_argument("--seed", type=int)
    corpus.set_defaults(func=cmd_corpus)

    suite = sub.add_parser("suite", help="run the registered property suites")
    suite.add_argument("--seed", type=int, help="suite seed (default 42)")
    suite.add_argument("--property", action="append", metavar="ID", help="run only this property (repeatable)")
    suite.add_argument("--trials", type=int, help="override the trial count of every property")
    suite.add_argument("--json", metavar="PATH", help="write the JSON report here ('-' for stdout)")
    suite.set_defaults(func=cmd_suite)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except scenario.ScenarioError as exc:
        print(f"cutkit: schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except Exception:  # noqa: BLE001 - last-resort reporting
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
