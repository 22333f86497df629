"""Command line front end.

    nearbycycles run session.json [--format text|machine] [--window W] [--strict] [--jobs N] [-v]
    nearbycycles list-tasks

Exit status: 0 when every assertion passes, 1 when one fails, 2 on malformed
input, 3 when a window turns out to be too small.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Mapping

from .errors import NearbyCyclesError, WindowTooSmall
from .session import SCHEMA, Session, SessionError, parse_session
from .tasks import ASSERTION, CATALOG, Context, list_tasks

log = logging.getLogger("nearbycycles")

REPORT_SCHEMA = "nearbycycles-report/" + SCHEMA
EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_WINDOW = 0, 1, 2, 3


@dataclass(frozen=True)
class Flags:
    window: int | None = None
    strict: bool = False
    jobs: int = 1


def _run_one(session: Session, j: int, flags: Flags) -> dict:
    spec = session.tasks[j]
    entry = CATALOG[spec.name]
    window = flags.window if flags.window is not None else spec.window
    ctx = Context(session.modules.get(spec.module) if spec.module else None, spec.params, window,
                  flags.strict, session.order)
    rec = {"index": spec.index, "name": spec.name, "module": spec.module, "window": window}
    try:
        out = entry.run(ctx)
    except WindowTooSmall as exc:
        rec.update(status="window-too-small", error=str(exc), failed_window=exc.window)
        return rec
    except SessionError as exc:
        rec.update(status="parse-error", error=str(exc))
        return rec
    except NearbyCyclesError as exc:
        rec.update(status="fail", error=f"{type(exc).__name__}: {exc}")
        return rec
    asserted = out.kind == ASSERTION or (flags.strict and out.ok is not None)
    if asserted:
        status = "pass" if out.ok else "fail"
    else:
        status = "info"
    rec.update(kind=out.kind, asserted=asserted, status=status, ok=out.ok, summary=out.summary, result=out.data)
    return rec


def _worker(raw: Mapping, js: list[int], flags: Flags) -> list[dict]:
    session = parse_session(raw)
    return [_run_one(session, j, flags) for j in js]


def _units(session: Session) -> list[list[int]]:
    """Task indices grouped by module, so per-module caches stay in one process."""
    groups: dict[str | None, list[int]] = {}
    for j, spec in enumerate(session.tasks):
        groups.setdefault(spec.module, []).append(j)
    units = [js for key, js in groups.items() if key is not None]
    # module-free tasks share nothing, so they can spread out
    units += [[j] for j in groups.get(None, [])]
    return sorted(units, key=len, reverse=True)


def run(session: Session, flags: Flags = Flags()) -> tuple[dict, int]:
    """Execute every task; the report lists them in input order whatever the execution order."""
    n = len(session.tasks)
    if flags.jobs > 1 and n > 1:
        units = _units(session)
        results = [None] * n
        with ProcessPoolExecutor(max_workers=flags.jobs) as pool:
            futures = [(js, pool.submit(_worker, session.raw, js, flags)) for js in units]
            for js, fut in futures:
                for j, rec in zip(js, fut.result()):
                    results[j] = rec
    else:
        results = []
        for j in range(n):
            log.info("task %d: %s", j, session.tasks[j].name)
            results.append(_run_one(session, j, flags))
    counts = {s: sum(r["status"] == s for r in results)
              for s in ("pass", "fail", "info", "window-too-small", "parse-error")}
    if counts["parse-error"]:
        code = EXIT_PARSE
    elif counts["window-too-small"]:
        code = EXIT_WINDOW
    elif counts["fail"]:
        code = EXIT_FAIL
    else:
        code = EXIT_OK
    report = {
        "schema": REPORT_SCHEMA,
        "field": {"cyclotomic_order": session.order, "requested": session.requested_order},
        "modules": {k: M.describe() for k, M in sorted(session.modules.items())},
        "strict": flags.strict,
        "tasks": results,
        "summary": counts,
        "exit_status": code,
    }
    return report, code


def render_machine(report: Mapping) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def render_text(report: Mapping) -> str:
    lines = [f"field: Q(zeta_{report['field']['cyclotomic_order']})(tau)"]
    for key, desc in report.get("modules", {}).items():
        lines.append(f"module {key}: {desc}")
    for r in report["tasks"]:
        tag = r["status"].upper()
        where = f" [{r['module']}]" if r.get("module") else ""
        msg = r.get("summary") or r.get("error", "")
        lines.append(f"{tag:>16}  #{r['index']} {r['name']}{where}: {msg}")
    s = report["summary"]
    lines.append(f"passed {s['pass']}, failed {s['fail']}, informational {s['info']}, "
                 f"window errors {s['window-too-small']}, input errors {s['parse-error']}; "
                 f"exit {report['exit_status']}")
    return "\n".join(lines) + "\n"


def _error_report(message: str) -> dict:
    return {"schema": REPORT_SCHEMA, "error": message, "exit_status": EXIT_PARSE, "tasks": []}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nearbycycles", description="Exact nearby-cycle computations on lattice modules.")
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run a session file")
    r.add_argument("input", help="session file (JSON), or - for stdin")
    r.add_argument("--format", choices=("text", "machine"), default="text")
    r.add_argument("--window", type=int, default=None, help="override every task window")
    r.add_argument("--strict", action="store_true", help="treat informational checks as assertions")
    r.add_argument("--jobs", type=int, default=1, help="run tasks in this many processes")
    r.add_argument("-o", "--output", default=None, help="write the report here instead of stdout")
    r.add_argument("-v", "--verbose", action="count", default=0)
    ls = sub.add_parser("list-tasks", help="print the task catalog")
    ls.add_argument("--format", choices=("text", "machine"), default="text")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list-tasks":
        cat = list_tasks()
        if args.format == "machine":
            sys.stdout.write(json.dumps(cat, sort_keys=True, indent=2) + "\n")
        else:
            for e in cat:
                params = ", ".join(f"{k}{'' if k in e['required'] else '?'}: {t}" for k, t in e["params"].items())
                sys.stdout.write(f"{e['name']:<20} {e['kind']:<13} {params}\n")
        return EXIT_OK

    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), stream=sys.stderr,
                        format="%(levelname)s %(message)s")
    render = render_machine if args.format == "machine" else render_text
    try:
        text = sys.stdin.read() if args.input == "-" else open(args.input, encoding="utf-8").read()
        session = parse_session(text)
    except (OSError, SessionError) as exc:
        log.error("%s", exc)
        _emit(render(_error_report(str(exc))) if args.format == "machine" else f"input error: {exc}\n", args.output)
        return EXIT_PARSE
    if args.window is not None and args.window < 0:
        log.error("window must be nonnegative")
        return EXIT_PARSE
    report, code = run(session, Flags(args.window, args.strict, max(1, args.jobs)))
    _emit(render(report), args.output)
    return code


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    raise SystemExit(main())
