"""Command-line entry point: run checks, run a profile, render cached reports."""

from __future__ import annotations

import argparse
import os
import sys

from .cache import ENV_VAR, ResultCache
from .cohomology import OverflowGuard
from .registry import (
    PROFILES,
    REGISTRY,
    SCHEMA_VERSION,
    GuardViolation,
    RunReport,
    UnknownCheck,
    dumps,
    execute_many,
    profile_jobs,
    resolve_params,
    validate,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-degree", "-D", dest="D", type=int, help="coefficient truncation D (default 4)")
    p.add_argument("--truncation", "-E", dest="E", type=int, help="per-factor cochain truncation E (default 4)")
    p.add_argument("--r", dest="r", type=int, help="Frobenius kernel index r (default 1)")
    p.add_argument("--i-max", dest="i_max", type=int, help="top cohomological degree (default 1)")
    p.add_argument("--json", action="store_true", help="print JSON instead of text")
    p.add_argument("--cache-dir", help=f"result cache directory (env {ENV_VAR})")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sl2check", description="Exact GF(2) checks for SL2 in characteristic two.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_list = sub.add_parser("list", help="list registered checks")
    p_list.add_argument("--json", action="store_true")

    p_run = sub.add_parser("run", help="run one check")
    p_run.add_argument("check", help="check name (see 'list')")
    _add_params(p_run)
    p_run.add_argument("--no-cache", action="store_true", help="do not persist the result")

    p_all = sub.add_parser("run-all", help="run every criterion check for a profile")
    p_all.add_argument("--profile", choices=sorted(PROFILES), default="quick")
    _add_params(p_all)
    p_all.add_argument("--jobs", type=int, default=min(4, os.cpu_count() or 1), help="worker processes")
    p_all.add_argument("--no-cache", action="store_true")

    p_rep = sub.add_parser("report", help="render cached results for a profile or one check")
    p_rep.add_argument("--profile", choices=sorted(PROFILES), default="quick")
    p_rep.add_argument("--check", help="single check instead of a profile")
    _add_params(p_rep)
    p_rep.add_argument("--format", choices=("text", "json"), default=None)
    return parser


def _overrides(args) -> dict:
    return {k: getattr(args, k, None) for k in ("D", "E", "r", "i_max")}


def _cache(args) -> ResultCache:
    return ResultCache(args.cache_dir) if getattr(args, "cache_dir", None) else ResultCache()


def _text_row(rep: RunReport) -> str:
    desc = REGISTRY[rep.check]
    crit = f"[{desc.criterion}]" if desc.criterion else "[-]"
    params = " ".join(f"{k}={v}" for k, v in rep.params.items()) or "-"
    return f"{rep.status.upper():<12} {crit:<5} {rep.check:<30} {params:<22} {rep.wall_time:7.2f}s  {desc.claim}"


def _document(reports: list[RunReport], missing: list[tuple[str, dict]], profile: str | None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "profile": profile,
        "reports": [r.payload() for r in reports],
        "missing": [{"check": n, "params": p} for n, p in missing],
    }


def _exit_code(reports: list[RunReport], missing=()) -> int:
    return EXIT_OK if reports and not missing and all(r.status == "pass" for r in reports) else EXIT_FAIL


def _emit(reports, missing, profile, as_json: bool) -> None:
    if as_json:
        doc = _document(reports, missing, profile)
        validate(doc)
        print(dumps(doc))
        return
    for r in reports:
        print(_text_row(r))
    for n, p in missing:
        params = " ".join(f"{k}={v}" for k, v in p.items()) or "-"
        print(f"{'MISSING':<12} {'':<5} {n:<30} {params}")
    counts = {s: sum(r.status == s for r in reports) for s in ("pass", "fail", "inconclusive")}
    print(f"-- {counts['pass']} pass, {counts['fail']} fail, {counts['inconclusive']} inconclusive, {len(missing)} missing")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "list":
            rows = [
                {"check": d.name, "criterion": d.criterion, "kind": d.kind, "params": list(d.params), "claim": d.claim}
                for d in REGISTRY.values()
            ]
            if args.json:
                print(dumps(rows))
            else:
                for r in rows:
                    crit = r["criterion"] or "-"
                    print(f"{r['check']:<30} [{crit}] {r['kind']:<15} {','.join(r['params']) or '-':<10} {r['claim']}")
            return EXIT_OK

        if args.command == "run":
            params = resolve_params(args.check, _overrides(args))
            (rep,) = execute_many([(args.check, params)])
            if not args.no_cache:
                _cache(args).put(rep)
            if args.json:
                payload = rep.payload()
                validate(payload)
                print(dumps(payload))
            else:
                _emit([rep], [], None, False)
            return EXIT_OK if rep.status == "pass" else EXIT_FAIL

        if args.command == "run-all":
            jobs = profile_jobs(args.profile, _overrides(args))
            reports = execute_many(jobs, max(1, args.jobs))
            if not args.no_cache:
                cache = _cache(args)
                for rep in reports:
                    cache.put(rep)
            _emit(reports, [], args.profile, args.json)
            return _exit_code(reports)

        if args.command == "report":
            if args.check:
                jobs = [(args.check, resolve_params(args.check, _overrides(args)))]
                profile = None
            else:
                jobs = profile_jobs(args.profile, _overrides(args))
                profile = args.profile
            cache = _cache(args)
            found, missing = [], []
            for name, params in jobs:
                rep = cache.get(name, params)
                (found if rep else missing).append(rep if rep else (name, params))
            as_json = (args.format == "json") or (args.format is None and args.json)
            _emit(found, missing, profile, as_json)
            return _exit_code(found, missing)
    except (UnknownCheck, GuardViolation, OverflowGuard) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        print(f"sl2check: error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE
