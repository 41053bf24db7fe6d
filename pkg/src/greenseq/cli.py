"""Command line interface.

Exit codes: 0 success, 1 verification failure (or truncation under
``--strict``), 2 usage or parse error, 3 internal inconsistency between two
independent computations.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .errors import (
    GreenSeqError,
    InternalInconsistency,
    MutationAtFrozen,
    NotGreen,
    QuiverParseError,
    UnknownQuiverShape,
)
from .harness import (
    affine_preprojective_sincerity,
    format_table,
    verify_affine_spectrum,
    verify_type_a_spectrum,
)
from .mgs import build_exchange_graph, default_depth_bound, enumerate_mgs, quiver_shape
from .quiver import (
    ClusterQuiver,
    IceQuiver,
    describe_colours,
    format_quiver,
    framed,
    green_vertices,
    mutate,
    parse_quiver,
)
from .slices import descending_path, is_slice_tilting, mutate_slice_at_source, slice_sources
from .type_a import (
    IntervalModule,
    TypeAQuiver,
    coxeter_tau_oracle,
    ext_dim,
    ext_mutually_vanishes,
    hasse_quiver,
    interval_from_dim,
    tau_interval,
    tau_interval_formula,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3

# verification sizes allowed without --long-running
GATES = {"type-a": 5, "affine": 3}


class UsageError(Exception):
    pass


@dataclass
class Config:
    depth_bound: int | None = None
    threads: int = 1
    memoize: bool = True
    fmt: str = "json"
    long_running: bool = False

    def __post_init__(self):
        if self.threads < 1:
            raise UsageError("thread count must be at least 1")
        if self.fmt not in ("json", "table", "dot"):
            raise UsageError(f"unknown format {self.fmt!r}")


def _default_threads() -> int:
    raw = os.environ.get("GREENSEQ_THREADS", "1")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"GREENSEQ_THREADS must be an integer, got {raw!r}") from None


def _config(args) -> Config:
    threads = args.threads if args.threads is not None else _default_threads()
    return Config(
        depth_bound=getattr(args, "depth_bound", None),
        threads=threads,
        memoize=not args.no_memo,
        fmt=args.format,
        long_running=getattr(args, "long_running", False),
    )


def _load(path: str) -> ClusterQuiver | IceQuiver:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    return parse_quiver(text)


def _load_cluster(path: str) -> ClusterQuiver:
    Q = _load(path)
    if isinstance(Q, IceQuiver):
        raise UsageError(f"{path} describes an ice quiver; a cluster quiver is needed")
    return Q


def _bound(Q: ClusterQuiver, cfg: Config) -> int:
    if cfg.depth_bound is not None:
        return cfg.depth_bound
    return default_depth_bound(Q)


def _as_type_a(Q: ClusterQuiver) -> TypeAQuiver:
    kind, n = quiver_shape(Q)
    if kind != "A" or Q.labels != tuple(range(1, n + 1)):
        raise UnknownQuiverShape("Hasse quiver needs a type A quiver on vertices 1..n")
    signs = []
    for i in range(n - 1):
        if Q.arrows[i, i + 1]:
            signs.append("+")
        elif Q.arrows[i + 1, i]:
            signs.append("-")
        else:
            raise UnknownQuiverShape("type A vertices must be numbered along the path")
    return TypeAQuiver(tuple(signs))


def _emit(text: str, out: str | None = None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# commands


def cmd_mutate(args, cfg: Config) -> int:
    Q = _load(args.file)
    R = Q if isinstance(Q, IceQuiver) else framed(Q)
    for k in args.vertices:
        if k in R.frozen:
            raise MutationAtFrozen(f"vertex {k} is frozen")
        if args.green_only and k not in green_vertices(R):
            raise NotGreen(f"vertex {k} is not green")
        R = mutate(R, k)
    colours = dict(sorted(describe_colours(R).items()))
    if cfg.fmt == "json":
        payload = {"quiver": format_quiver(R), "arrows": R.arrow_list(), "colors": colours}
        _emit(json.dumps(payload) + "\n")
    else:
        _emit(format_quiver(R) + "colors: " + " ".join(f"{k}:{v}" for k, v in colours.items()) + "\n")
    return EXIT_OK


def cmd_spectrum(args, cfg: Config) -> int:
    Q = _load_cluster(args.file)
    rep = enumerate_mgs(Q, _bound(Q, cfg), memoize=cfg.memoize, threads=cfg.threads)
    if cfg.fmt == "table":
        lines = [f"{'length':>6}  count"] + [f"{l:>6}  {c}" for l, c in rep.counts.items()]
        lines.append(f"states visited: {rep.states_visited}  truncated: {rep.truncated}")
        _emit("\n".join(lines) + "\n")
    else:
        _emit(rep.to_json() + "\n")
    if args.strict and rep.truncated:
        print(f"truncated at depth bound {rep.depth_bound}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_enumerate(args, cfg: Config) -> int:
    Q = _load_cluster(args.file)
    out = sys.stdout
    emitted = [0]

    def visit(seq):
        if args.limit is None or emitted[0] < args.limit:
            out.write(" ".join(map(str, seq)) + "\n")
        emitted[0] += 1

    rep = enumerate_mgs(Q, _bound(Q, cfg), visitor=visit)
    print(rep.to_json(), file=sys.stderr)
    return EXIT_OK


def cmd_verify(args, cfg: Config) -> int:
    gate = GATES[args.target]
    if args.n > gate and not cfg.long_running:
        raise UsageError(
            f"verify {args.target} {args.n} exceeds the default gate (n <= {gate}); "
            "pass --long-running to run it anyway"
        )
    if args.target == "type-a":
        orient = args.orientations or "all"
        reports = verify_type_a_spectrum(args.n, orient, threads=cfg.threads)
        extra = {}
    else:
        reports = [verify_affine_spectrum(args.n)]
        extra = {"sincerity_depth_10": affine_preprojective_sincerity(args.n, 10)}
    ok = all(r.passed for r in reports) and all(extra.values())
    if cfg.fmt == "table":
        text = format_table(reports)
        for k, v in extra.items():
            text += f"{k}: {'PASS' if v else 'FAIL'}\n"
        _emit(text)
    else:
        _emit(json.dumps({"passed": ok, "reports": [r.to_dict() for r in reports], **extra}) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_graph(args, cfg: Config) -> int:
    Q = _load_cluster(args.file)
    if args.kind == "hasse":
        text = hasse_quiver(_as_type_a(Q)).to_dot()
    else:
        text = build_exchange_graph(Q, _bound(Q, cfg)).to_dot()
    _emit(text, args.output)
    return EXIT_OK


def _interval(pair) -> IntervalModule:
    try:
        return IntervalModule(int(pair[0]), int(pair[1]))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _orientation(text: str, n_hint: int) -> TypeAQuiver:
    if text in ("", "."):
        return TypeAQuiver(())
    Q = TypeAQuiver.parse(text)
    if Q.n < n_hint:
        raise UsageError(f"orientation {text!r} has rank {Q.n}, interval needs {n_hint}")
    return Q


def cmd_compat(args, cfg: Config) -> int:
    a, b = _interval(args.a), _interval(args.b)
    Q = _orientation(args.orientation, max(a.j, b.j))
    crit = ext_mutually_vanishes(Q, a, b)
    e_ab, e_ba = ext_dim(Q, a, b), ext_dim(Q, b, a)
    if crit != (e_ab == 0 and e_ba == 0):
        raise InternalInconsistency(f"criterion {crit} disagrees with Ext dims {e_ab}, {e_ba}")
    _emit(json.dumps({"a": a.token(), "b": b.token(), "compatible": crit, "ext_ab": e_ab, "ext_ba": e_ba}) + "\n")
    return EXIT_OK


def cmd_tau(args, cfg: Config) -> int:
    x = _interval(args.x)
    Q = _orientation(args.orientation, x.j)
    t = tau_interval(Q, x)
    formula = tau_interval_formula(Q, x)
    d = coxeter_tau_oracle(Q, x.dim(Q.n))
    payload = {
        "x": x.token(),
        "tau": t.token() if t else None,
        "formula": list(formula) if formula and t else None,
        "coxeter": interval_from_dim(d).token() if d is not None else None,
    }
    _emit(json.dumps(payload) + "\n")
    return EXIT_OK


def _vector(text: str) -> tuple[int, ...]:
    try:
        v = json.loads(text)
    except json.JSONDecodeError:
        raise UsageError(f"slice vector must be a JSON array, got {text!r}") from None
    if not isinstance(v, list) or not all(isinstance(x, int) for x in v):
        raise UsageError(f"slice vector must be a JSON array of integers, got {text!r}")
    return tuple(v)


def cmd_slice(args, cfg: Config) -> int:
    Q = _load_cluster(args.file)
    s = _vector(args.vector)
    if args.action == "check":
        payload = {"vector": list(s), "slice": is_slice_tilting(Q, s)}
        if payload["slice"]:
            payload["sources"] = slice_sources(Q, s)
    elif args.action == "mutate":
        if args.at is None:
            raise UsageError("slice mutate needs --at VERTEX")
        payload = {"vector": list(mutate_slice_at_source(Q, s, args.at))}
    else:
        if args.to is None:
            raise UsageError("slice path needs --to VECTOR")
        path = descending_path(Q, s, _vector(args.to))
        payload = {"path": [list(v) for v in path], "length": len(path) - 1}
    _emit(json.dumps(payload) + "\n")
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=None, help="worker threads (env GREENSEQ_THREADS)")
    common.add_argument("--no-memo", action="store_true", help="disable canonical-key memoisation")
    common.add_argument("--format", choices=("json", "table", "dot"), default="json")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="greenseq", description="Maximal green sequences and support tilting.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("mutate", parents=[common], help="mutate the framed quiver of FILE")
    s.add_argument("file")
    s.add_argument("vertices", nargs="*", type=int)
    s.add_argument("--green-only", action="store_true", help="reject non-green mutation vertices")
    s.set_defaults(func=cmd_mutate)

    s = sub.add_parser("spectrum", parents=[common], help="MGS length spectrum")
    s.add_argument("file")
    s.add_argument("--depth-bound", type=int)
    s.add_argument("--strict", action="store_true", help="exit 1 if the search was truncated")
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("enumerate", parents=[common], help="list maximal green sequences")
    s.add_argument("file")
    s.add_argument("--depth-bound", type=int)
    s.add_argument("--limit", type=int, help="print at most this many sequences")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("verify", parents=[common], help="check an MGS length interval end to end")
    s.add_argument("target", choices=("type-a", "affine"))
    s.add_argument("n", type=int)
    s.add_argument("--orientations", nargs="+", help="sign strings (type-a only; default all)")
    s.add_argument("--long-running", action="store_true")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("graph", parents=[common], help="DOT export of the exchange graph or Hasse quiver")
    s.add_argument("file")
    s.add_argument("--kind", choices=("exchange", "hasse"), default="exchange")
    s.add_argument("--depth-bound", type=int)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_graph)

    s = sub.add_parser("compat", parents=[common], help="mutual Ext-vanishing of two intervals")
    s.add_argument("orientation", help="sign string, e.g. '+-+' ('.' for rank 1)")
    s.add_argument("a", nargs=2, metavar=("I", "J"))
    s.add_argument("b", nargs=2, metavar=("K", "L"))
    s.set_defaults(func=cmd_compat)

    s = sub.add_parser("tau", parents=[common], help="AR translate of an interval module")
    s.add_argument("orientation")
    s.add_argument("x", nargs=2, metavar=("I", "J"))
    s.set_defaults(func=cmd_tau)

    s = sub.add_parser("slice", parents=[common], help="slice vector queries")
    s.add_argument("action", choices=("check", "mutate", "path"))
    s.add_argument("file")
    s.add_argument("vector", help="JSON array indexed by vertex")
    s.add_argument("--at", type=int, help="source vertex (mutate)")
    s.add_argument("--to", help="target vector (path)")
    s.set_defaults(func=cmd_slice)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = _config(args)
        return args.func(args, cfg)
    except InternalInconsistency as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (UsageError, QuiverParseError, GreenSeqError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
