"""Command-line interface.

Machine-readable JSON goes to stdout (or ``--out``), a one-line summary to
stderr.  Exit status: 0 success, 1 domain failure (no route, no repeater
line, failed check), 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any, Sequence

from ghzroute.errors import (
    GhzRouteError,
    GraphError,
    GridError,
    InvalidLineError,
    InvalidPathError,
    MajorizationError,
    NetworkFormatError,
    StaleVertexError,
)
from ghzroute.graph import combined_neighborhood
from ghzroute.grid import GridSpec, enumerate_shortest_paths, make_grid, rank_paths
from ghzroute.netio import (
    NetworkDocument,
    RunRequest,
    export_dot,
    network_json,
    parse_network,
    parse_plan,
    report_from_dict,
    report_to_dict,
)
from ghzroute.oracle import sweep
from ghzroute.protocols import (
    ProtocolReport,
    RepeaterLine,
    bell_ok,
    build_repeater_line,
    check_line,
    cost_with_isolation,
    cost_with_isolation_formula,
    cost_without_isolation,
    cost_without_isolation_formula,
    find_route,
    ghz_center,
    ghz_extract_lc_variant,
    ghz_extract_x_variant,
    ghz_ok,
    repeater_protocol,
    run_script,
    x_protocol,
)

SEED_ENV = "GHZROUTE_SEED"

INPUT_ERRORS = (NetworkFormatError, GraphError, GridError, InvalidLineError, InvalidPathError,
                MajorizationError, StaleVertexError)


class DomainFailure(GhzRouteError):
    """A run finished but its result failed the post-condition check."""


def _labels(text: str) -> list[int]:
    try:
        out = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated labels, got {text!r}") from None
    if not out:
        raise argparse.ArgumentTypeError("empty label list")
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ghzroute", description=__doc__.splitlines()[0])
    io = argparse.ArgumentParser(add_help=False)
    io.add_argument("--in", dest="infile", default="-", help="network JSON (default: stdin)")
    io.add_argument("--out", dest="outfile", default="-", help="output file (default: stdout)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("grid", parents=[io], help="emit a rows x cols grid network")
    p.add_argument("rows", type=int)
    p.add_argument("cols", type=int)

    p = sub.add_parser("route", parents=[io], help="route a Bell pair or a GHZ state")
    what = p.add_mutually_exclusive_group(required=True)
    what.add_argument("--bell", nargs=2, type=int, metavar=("A", "B"))
    what.add_argument("--ghz", type=_labels, metavar="T1,...,Tn")
    p.add_argument("--variant", choices=("x", "lc", "repeater"), default="x",
                   help="bell: x or repeater; ghz: x or lc (default x)")
    p.add_argument("--no-isolate", action="store_true", help="run on the embedded line, isolate at the end")
    p.add_argument("--final-lc", action="store_true", help="x variant: finish with LC to get the complete graph")
    p.add_argument("--line", type=_labels, help="explicit repeater line / path instead of searching")
    p.add_argument("--dot", help="also write the final graph as DOT to this file")

    p = sub.add_parser("paths", parents=[io], help="enumerate shortest grid paths between two vertices")
    p.add_argument("a", type=int)
    p.add_argument("b", type=int)
    p.add_argument("--rank", action="store_true", help="rank the paths by majorization")

    p = sub.add_parser("cost", parents=[io], help="measurement counts with and without isolation")
    p.add_argument("--line", type=_labels, required=True)
    p.add_argument("--targets", type=_labels, help="targets on the line (default: canonical layout)")

    p = sub.add_parser("oracle", parents=[io], help="state-vector check of the rewrite rules")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--cases", type=int, default=100)
    p.add_argument("--max-vertices", type=int, default=10)

    p = sub.add_parser("script", parents=[io], help="replay a measurement script")
    p.add_argument("file")
    p.add_argument("--targets", type=_labels)
    p.add_argument("--dot", help="also write the final graph as DOT to this file")
    return parser


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise NetworkFormatError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _dump(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _write_dot(path: str | None, report: ProtocolReport) -> None:
    if path:
        _write(path, export_dot(report.final_graph, {"targets": report.targets, "measured": report.measured}))


def execute(doc: NetworkDocument, req: RunRequest) -> tuple[dict, str]:
    """Run one request against a parsed network; returns (payload, summary)."""
    g = doc.to_graph()
    opts = req.options
    if req.task == "bell":
        a, b = req.targets
        path = tuple(opts["line"]) if opts.get("line") else find_route(g, a, b)
        if (path[0], path[-1]) != (a, b):
            raise InvalidPathError(f"path must run from {a} to {b}")
        proto = repeater_protocol if opts.get("variant") == "repeater" else x_protocol
        report = proto(g, path)
        if not bell_ok(report.final_graph, a, b):
            raise DomainFailure(f"no isolated Bell pair between {a} and {b}")
        payload = report_to_dict(report) | {"path": list(path)}
        summary = f"bell {a}-{b} via {list(path)}: {report.x_count} X + {report.z_count} Z"
        return payload, summary
    if req.task == "ghz":
        if opts.get("line"):
            rl = RepeaterLine.from_targets(opts["line"], req.targets)
        else:
            rl = build_repeater_line(g, req.targets)
        isolate = not opts.get("no_isolate", False)
        if opts.get("variant") == "lc":
            report = ghz_extract_lc_variant(g, rl, isolate)
        else:
            report = ghz_extract_x_variant(g, rl, isolate, opts.get("final_lc", False))
        if not ghz_ok(report.final_graph, rl.targets):
            raise DomainFailure(f"targets {list(rl.targets)} do not form an isolated GHZ graph")
        payload = report_to_dict(report) | {
            "line": list(rl.line),
            "canonical_line": list(rl.canonical().line),
            "center": ghz_center(rl),
        }
        summary = (f"ghz{rl.n} on {list(rl.targets)}: {report.measurement_count} measurements, "
                   f"{report.lc_count} LC")
        return payload, summary
    if req.task == "rank":
        if doc.grid is None:
            raise NetworkFormatError("paths needs a grid network")
        a, b = req.targets
        paths = enumerate_shortest_paths(doc.grid, a, b)
        payload: dict[str, Any] = {"paths": [list(p) for p in paths]}
        if opts.get("rank"):
            res = rank_paths(doc.grid, paths, g)
            payload["ranking"] = [
                {"path": list(p), "vector": list(v.entries), "first_axis": v.first_axis, "cost": c,
                 "combined_neighborhood": len(combined_neighborhood(g, p))}
                for p, v, c in zip(res.paths, res.vectors, res.costs)
            ]
            payload["minimal"] = [list(res.paths[i]) for i in res.minimal]
            payload["minimal_vectors"] = sorted({tuple(res.vectors[i].entries) for i in res.minimal})
            payload["comparisons"] = [
                {"i": i, "j": j, "order": o.value} for (i, j), o in sorted(res.comparisons.items())
            ]
            return payload, f"{len(paths)} paths, best {list(res.best)} {list(res.vectors[res.minimal[0]].entries)}"
        return payload, f"{len(paths)} shortest paths"
    if req.task == "cost":
        line = opts["line"]
        rl = RepeaterLine.from_targets(line, req.targets) if req.targets else RepeaterLine.canonical_for(line)
        check_line(g, rl)
        payload = {
            "line": list(rl.line),
            "targets": list(rl.targets),
            "with_isolation": cost_with_isolation(g, rl),
            "without_isolation": cost_without_isolation(g, rl),
            "with_isolation_formula": cost_with_isolation_formula(g, rl),
            "without_isolation_formula": cost_without_isolation_formula(g, rl),
        }
        return payload, f"with isolation {payload['with_isolation']}, without {payload['without_isolation']}"
    if req.task == "oracle":
        res = sweep(opts["seed"], opts["cases"], opts.get("max_vertices", 10))
        payload = {"seed": opts["seed"], **res.__dict__, "passed": res.passed()}
        if not res.passed():
            raise DomainFailure(f"oracle sweep failed: {payload}")
        return payload, f"oracle: {res.checks} checks over {res.cases} graphs passed"
    if req.task == "script":
        report = run_script(g, opts["plan"], req.targets)
        payload = report_to_dict(report)
        if req.targets:
            payload["ghz_ok"] = ghz_ok(report.final_graph, req.targets)
        return payload, f"script: {report.measurement_count} measurements, {report.lc_count} LC"
    raise AssertionError(req.task)


def _load_doc(args: argparse.Namespace) -> NetworkDocument:
    return parse_network(_read(args.infile))


def _dispatch(args: argparse.Namespace) -> tuple[str, str, ProtocolReport | None]:
    if args.command == "grid":
        spec = GridSpec(args.rows, args.cols)
        return network_json(make_grid(spec), spec) + "\n", f"grid {spec.rows}x{spec.cols}", None
    if args.command == "oracle":
        seed = args.seed
        if seed is None:
            env = os.environ.get(SEED_ENV)
            try:
                seed = int(env) if env else 0
            except ValueError:
                raise NetworkFormatError(f"{SEED_ENV} must be an integer, got {env!r}") from None
        req = RunRequest("oracle", options={"seed": seed, "cases": args.cases, "max_vertices": args.max_vertices})
        payload, summary = execute(NetworkDocument([], []), req)
        return _dump(payload), summary, None

    doc = _load_doc(args)
    if args.command == "route":
        opts = {"variant": args.variant, "no_isolate": args.no_isolate, "final_lc": args.final_lc,
                "line": args.line}
        if args.bell:
            if args.variant == "lc":
                raise NetworkFormatError("--variant lc applies to --ghz only")
            req = RunRequest("bell", list(args.bell), opts)
        else:
            if args.variant == "repeater":
                raise NetworkFormatError("--variant repeater applies to --bell only")
            req = RunRequest("ghz", args.ghz, opts)
    elif args.command == "paths":
        req = RunRequest("rank", [args.a, args.b], {"rank": args.rank})
    elif args.command == "cost":
        req = RunRequest("cost", args.targets or [], {"line": args.line})
    else:
        plan, file_targets = parse_plan(_read(args.file))
        req = RunRequest("script", args.targets or file_targets, {"plan": plan})
    payload, summary = execute(doc, req)
    report = None
    if "transcript" in payload:
        report = report_from_dict(payload)
    return _dump(payload), summary, report


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out, summary, report = _dispatch(args)
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GhzRouteError as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return 1
    _write(args.outfile, out)
    if report is not None:
        _write_dot(getattr(args, "dot", None), report)
    print(summary, file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
