"""Running suites and rendering reports.

Checks run either in-process (``jobs == 1``) or in a pool of forked
workers.  Results are merged in a fixed order (registry order of suites,
then identity label, then parameters), so the report does not depend on the
worker count.  Wall times are left out unless asked for, because they are
the one field that is not reproducible.
"""
from __future__ import annotations

import json
import multiprocessing
import time

from .algebra import AlgebraContext
from .checks import Outcome
from .rtt import ENGINE_VERSION, CapError, cache_path, cache_rules, load_rules, register_table
from .suites import NOTES, SuiteConfig, Workspace, build_suites

# checks of the current run; set before forking so workers inherit them
_TASKS: list = []


def _run_one(index: int):
    check = _TASKS[index]
    t0 = time.perf_counter()
    try:
        out = check.run()
    except CapError as exc:
        out = Outcome(False, None, {"error": str(exc)})
    return index, out, time.perf_counter() - t0


def _execute(n_tasks: int, jobs: int) -> list:
    if jobs == 1 or n_tasks < 2:
        return [_run_one(i) for i in range(n_tasks)]
    ctx = multiprocessing.get_context("fork")
    # contiguous chunks keep checks that share memoized data on one worker
    chunk = max(1, n_tasks // (4 * jobs))
    with ctx.Pool(jobs) as pool:
        results = list(pool.imap_unordered(_run_one, range(n_tasks), chunksize=chunk))
    results.sort(key=lambda r: r[0])
    return results


def _load_cache(config: SuiteConfig):
    if not config.cache_dir:
        return None
    ctx = AlgebraContext(config.m, config.n, config.H, config.N)
    path = cache_path(config.cache_dir, config.m, config.n)
    if path.exists():
        # a stale header raises StaleCacheError; the CLI turns it into a usage error
        register_table(load_rules(path, ctx, config.level_cap))
    return path


def run(config: SuiteConfig) -> dict:
    """Build and run the selected suites; return the report as a dict."""
    global _TASKS
    _load_cache(config)
    ws = Workspace(config)
    suites = build_suites(ws)
    tasks, owner = [], []
    for name, checks in suites:
        for c in sorted(checks, key=lambda c: c.sort_key()):
            tasks.append(c)
            owner.append(name)
    _TASKS = tasks
    try:
        results = _execute(len(tasks), config.jobs)
    finally:
        _TASKS = []
    if config.cache_dir:
        cache_rules(ws.table, config.cache_dir, config.H)

    identities = []
    per_suite = {name: [0, 0] for name, _ in suites}
    for (idx, out, wall), check, name in zip(results, tasks, owner):
        rec = {
            "suite": name,
            "label": check.label,
            "anchor": check.anchor,
            "params": check.params,
            "passed": bool(out.passed),
            "counterexample": None if out.passed else out.counterexample,
        }
        if out.detail:
            rec["detail"] = out.detail
        if config.timings:
            rec["wall_time"] = round(wall, 4)
        identities.append(rec)
        per_suite[name][0 if out.passed else 1] += 1

    suite_recs = []
    for name, _ in suites:
        p, f = per_suite[name]
        rec = {"name": name, "passed": p, "failed": f, "total": p + f}
        if name in NOTES:
            rec["note"] = NOTES[name]
        suite_recs.append(rec)
    passed = sum(r["passed"] for r in suite_recs)
    failed = sum(r["failed"] for r in suite_recs)
    return {
        "engine_version": ENGINE_VERSION,
        "config": config.echo(),
        "suites": suite_recs,
        "identities": identities,
        "summary": {"total": passed + failed, "passed": passed, "failed": failed, "all_passed": failed == 0},
    }


def emit(report: dict, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (json.dumps(report, indent=2, sort_keys=True) + "\n").encode("utf-8")
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    cfg = report["config"]
    lines = [
        f"{report['engine_version']}  gl({cfg['m']}|{cfg['n']})  N={cfg['series_order']}  H={cfg['h_order']}"
        f"  cap={cfg['cap']}  seed={cfg['seed']}",
        "",
        f"{'suite':<22}{'label':<24}{'result':<8}params",
    ]
    for rec in report["identities"]:
        params = json.dumps(rec["params"], sort_keys=True)
        lines.append(f"{rec['suite']:<22}{rec['label']:<24}{'pass' if rec['passed'] else 'FAIL':<8}{params}")
        if not rec["passed"]:
            cx = rec["counterexample"] or rec.get("detail", {}).get("error", "")
            lines.append(f"{'':<22}counterexample: {cx}")
    lines.append("")
    for s in report["suites"]:
        line = f"{s['name']:<22}{s['passed']}/{s['total']} passed"
        if "note" in s:
            line += f"  ({s['note']})"
        lines.append(line)
    sm = report["summary"]
    lines.append(f"total: {sm['passed']}/{sm['total']} passed")
    return ("\n".join(lines) + "\n").encode("utf-8")


__all__ = ["run", "emit"]
