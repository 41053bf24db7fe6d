"""Maximal green sequence enumeration and oriented exchange graphs."""

from __future__ import annotations

import hashlib
import json
import logging
import threading
import warnings
from collections import Counter, deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from . import _kernels
from .errors import NotBicolored, UnknownQuiverShape
from .quiver import (
    ClusterQuiver,
    IceQuiver,
    canonical_key,
    framed,
    green_vertices,
    mutate,
)

log = logging.getLogger(__name__)

Visitor = Callable[[tuple[int, ...]], None]


class TruncatedSpectrumWarning(UserWarning):
    pass


@dataclass
class SpectrumReport:
    lengths: tuple[int, ...]
    counts: dict[int, int]
    states_visited: int
    depth_bound: int
    truncated: bool
    pruned: int = 0
    bound_certified: bool = False
    terminal_keys: frozenset[bytes] = field(default_factory=frozenset, repr=False, compare=False)

    def to_dict(self) -> dict:
        return {
            "lengths": list(self.lengths),
            "counts": {str(k): self.counts[k] for k in sorted(self.counts)},
            "states_visited": self.states_visited,
            "truncated": self.truncated,
            "depth_bound": self.depth_bound,
            "pruned": self.pruned,
            "bound_certified": self.bound_certified,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "SpectrumReport":
        counts = {int(k): int(v) for k, v in d["counts"].items()}
        if sorted(counts) != list(d["lengths"]):
            raise ValueError("lengths must equal the keys of counts")
        return cls(
            lengths=tuple(d["lengths"]),
            counts=counts,
            states_visited=int(d["states_visited"]),
            depth_bound=int(d.get("depth_bound", -1)),
            truncated=bool(d["truncated"]),
            pruned=int(d.get("pruned", 0)),
            bound_certified=bool(d.get("bound_certified", False)),
        )

    @classmethod
    def from_json(cls, text: str) -> "SpectrumReport":
        return cls.from_dict(json.loads(text))


def _report(counts: Counter, visited: int, bound: int, truncated: bool, pruned: int, terminals=()):
    counts = {int(k): int(v) for k, v in counts.items() if v}
    return SpectrumReport(
        lengths=tuple(sorted(counts)),
        counts=dict(sorted(counts.items())),
        states_visited=visited,
        depth_bound=bound,
        truncated=truncated,
        pruned=pruned,
        terminal_keys=frozenset(terminals),
    )


class _Memo:
    """Per-iso-class results. ``complete`` holds suffix-length counters of
    states whose every green continuation terminated inside the budget; those
    answer queries for any budget. Truncated results are keyed by budget."""

    def __init__(self):
        self.complete: dict[bytes, Counter] = {}
        self.partial: dict[tuple[bytes, int], Counter] = {}
        self.visited = 0
        self.pruned = 0
        self.terminals: set[bytes] = set()
        self.lock = threading.Lock()

    def solve(self, R: IceQuiver, remaining: int) -> tuple[Counter, bool]:
        key = canonical_key(R)
        done = self.complete.get(key)
        if done is not None:
            return Counter({l: c for l, c in done.items() if l <= remaining}), max(done) > remaining
        part = self.partial.get((key, remaining))
        if part is not None:
            return part, True
        with self.lock:
            self.visited += 1
        greens = green_vertices(R)
        if not greens:
            acc, trunc = Counter({0: 1}), False
            with self.lock:
                self.terminals.add(key)
        elif remaining == 0:
            acc, trunc = Counter(), True
            with self.lock:
                self.pruned += 1
        else:
            acc, trunc = Counter(), False
            for k in greens:
                sub, t = self.solve(mutate(R, k), remaining - 1)
                for l, c in sub.items():
                    acc[l + 1] += c
                trunc = trunc or t
        if trunc:
            self.partial[(key, remaining)] = acc
        else:
            self.complete[key] = acc
        return acc, trunc


def _check_bound(depth_bound: int) -> None:
    if depth_bound < 1:
        raise ValueError("depth_bound must be at least 1")


def _enumerate_memo(Q: ClusterQuiver, depth_bound: int, threads: int) -> SpectrumReport:
    memo = _Memo()
    root = framed(Q)
    if threads <= 1:
        counts, trunc = memo.solve(root, depth_bound)
        return _report(counts, memo.visited, depth_bound, trunc, memo.pruned, memo.terminals)
    memo.visited += 1
    greens = green_vertices(root)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda k: memo.solve(mutate(root, k), depth_bound - 1), greens))
    counts = Counter()
    trunc = False
    for sub, t in parts:
        for l, c in sub.items():
            counts[l + 1] += c
        trunc = trunc or t
    return _report(counts, memo.visited, depth_bound, trunc, memo.pruned, memo.terminals)


def _kernel_counts(R: IceQuiver, bound: int):
    counts, visited, pruned, bad = _kernels.count_mgs(R.arrows, R._nonfrozen, R._frozen_mask, bound)
    if bad:
        raise NotBicolored(f"{bad} vertex colourings failed during enumeration")
    return counts, int(visited), int(pruned)


def _enumerate_plain(Q: ClusterQuiver, depth_bound: int, threads: int) -> SpectrumReport:
    root = framed(Q)
    if threads <= 1:
        counts, visited, pruned = _kernel_counts(root, depth_bound)
        total = Counter({l: int(c) for l, c in enumerate(counts)})
        return _report(total, visited, depth_bound, pruned > 0, pruned)
    greens = green_vertices(root)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda k: _kernel_counts(mutate(root, k), depth_bound - 1), greens))
    total = Counter()
    visited, pruned = 1, 0
    for counts, v, p in parts:
        for l, c in enumerate(counts):
            total[l + 1] += int(c)
        visited += v
        pruned += p
    return _report(total, visited, depth_bound, pruned > 0, pruned)


def _enumerate_streaming(Q: ClusterQuiver, depth_bound: int, visitor: Visitor) -> SpectrumReport:
    counts = Counter()
    stats = {"visited": 0, "pruned": 0}
    terminals = set()
    path: list[int] = []

    def walk(R: IceQuiver):
        stats["visited"] += 1
        greens = green_vertices(R)
        if not greens:
            counts[len(path)] += 1
            terminals.add(canonical_key(R))
            visitor(tuple(path))
            return
        if len(path) == depth_bound:
            stats["pruned"] += 1
            return
        for k in greens:
            path.append(k)
            walk(mutate(R, k))
            path.pop()

    walk(framed(Q))
    return _report(counts, stats["visited"], depth_bound, stats["pruned"] > 0, stats["pruned"], terminals)


def enumerate_mgs(
    Q: ClusterQuiver,
    depth_bound: int,
    visitor: Visitor | None = None,
    *,
    memoize: bool = True,
    threads: int = 1,
) -> SpectrumReport:
    """Exhaustive green-mutation DFS from ``framed(Q)``, children in ascending
    label order.

    ``truncated`` is set when a branch reaches ``depth_bound`` with green
    vertices left. For Ã_{n,1} at a bound of at least ``n(n+3)/2`` (the maximal
    MGS length) such branches are dead; they are counted in ``pruned`` and the
    report is marked ``bound_certified`` instead of truncated.

    Without a visitor the search is memoised on :func:`canonical_key` (or, with
    ``memoize=False``, runs the compiled no-memo kernel). A visitor needs every
    sequence, so passing one switches to a plain streaming DFS; memoisation is
    then not used.
    """
    _check_bound(depth_bound)
    if visitor is not None:
        rep = _enumerate_streaming(Q, depth_bound, visitor)
    elif memoize:
        rep = _enumerate_memo(Q, depth_bound, threads)
    else:
        rep = _enumerate_plain(Q, depth_bound, threads)
    return _certify(Q, rep)


def _certify(Q: ClusterQuiver, rep: SpectrumReport) -> SpectrumReport:
    # Affine quivers carry infinite green sequences, so some branch is always
    # pruned. At or above the proven maximal MGS length those branches cannot
    # end in an MGS and the spectrum is exact.
    if not rep.truncated:
        return rep
    try:
        kind, _ = quiver_shape(Q)
    except UnknownQuiverShape:
        return rep
    if kind == "affine" and rep.depth_bound >= default_depth_bound(Q):
        rep.truncated = False
        rep.bound_certified = True
        log.debug("pruned %d non-terminating branches at certified bound %d", rep.pruned, rep.depth_bound)
    return rep


def length_spectrum(Q: ClusterQuiver, depth_bound: int, **kwargs) -> set[int]:
    """Set of MGS lengths found within ``depth_bound``. Exact unless a
    :class:`TruncatedSpectrumWarning` is emitted."""
    rep = enumerate_mgs(Q, depth_bound, **kwargs)
    if rep.truncated:
        warnings.warn(
            f"depth bound {depth_bound} pruned {rep.pruned} branches; spectrum may be incomplete",
            TruncatedSpectrumWarning,
            stacklevel=2,
        )
    return set(rep.lengths)


# --------------------------------------------------------------------------
# shape detection


def _undirected_degrees(Q: ClusterQuiver) -> np.ndarray:
    return (Q.arrows + Q.arrows.T).sum(axis=1)


def quiver_shape(Q: ClusterQuiver) -> tuple[str, int]:
    """``("A", n)`` for a path, ``("affine", n)`` for Ã_{n,1}; else raises."""
    A = Q.arrows
    N = Q.n
    if A.max(initial=0) > 1:
        raise UnknownQuiverShape("multiple arrows")
    narrows = int(A.sum())
    deg = _undirected_degrees(Q)
    if narrows == N - 1 and deg.max(initial=0) <= 2:
        return "A", N
    if N >= 3 and narrows == N and (deg == 2).all() and Q.is_acyclic():
        indeg = A.sum(axis=0)
        outdeg = A.sum(axis=1)
        sources = np.flatnonzero(indeg == 0)
        sinks = np.flatnonzero(outdeg == 0)
        if len(sources) == 1 and len(sinks) == 1 and A[sources[0], sinks[0]] == 1:
            return "affine", N - 1
    raise UnknownQuiverShape("quiver is neither of type A_n nor of type Ã_{n,1}")


def default_depth_bound(Q: ClusterQuiver) -> int:
    """``n(n+1)/2`` for A_n, ``n(n+3)/2`` for Ã_{n,1}."""
    kind, n = quiver_shape(Q)
    if kind == "A":
        return n * (n + 1) // 2
    return n * (n + 3) // 2


# --------------------------------------------------------------------------
# oriented exchange graph


def key_digest(key: bytes) -> str:
    return hashlib.sha1(key).hexdigest()[:12]


@dataclass
class OrientedExchangeGraph:
    nodes: dict[bytes, IceQuiver]
    edges: list[tuple[bytes, int, bytes]]
    root: bytes
    truncated: bool = False

    def successors(self) -> dict[bytes, list[bytes]]:
        out = {k: [] for k in self.nodes}
        for s, _, t in self.edges:
            out[s].append(t)
        return out

    def to_dot(self, name: str = "exchange") -> str:
        lines = [f"digraph {name} {{"]
        for key in sorted(self.nodes):
            h = key_digest(key)
            extra = ", shape=doublecircle" if key == self.root else ""
            lines.append(f'  n{h} [label="{h}"{extra}];')
        for s, k, t in sorted(self.edges):
            lines.append(f'  n{key_digest(s)} -> n{key_digest(t)} [label="μ{k}", color=green];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_exchange_graph(Q: ClusterQuiver, depth_bound: int) -> OrientedExchangeGraph:
    """BFS over green mutations from ``framed(Q)``, nodes deduplicated up to
    frozen-fixing isomorphism."""
    _check_bound(depth_bound)
    root = framed(Q)
    rkey = canonical_key(root)
    nodes = {rkey: root}
    dist = {rkey: 0}
    edges = []
    truncated = False
    todo = deque([rkey])
    while todo:
        key = todo.popleft()
        R = nodes[key]
        greens = green_vertices(R)
        if dist[key] == depth_bound:
            truncated = truncated or bool(greens)
            continue
        for k in greens:
            S = mutate(R, k)
            skey = canonical_key(S)
            if skey not in nodes:
                nodes[skey] = S
                dist[skey] = dist[key] + 1
                todo.append(skey)
            edges.append((key, k, skey))
    return OrientedExchangeGraph(nodes, edges, rkey, truncated)


def path_length_spectrum(succ: dict, start) -> set[int]:
    """Lengths of maximal directed paths leaving ``start`` in a finite DAG."""
    memo: dict = {}

    def go(v):
        if v in memo:
            return memo[v]
        nxt = succ.get(v, ())
        res = {0} if not nxt else {l + 1 for w in nxt for l in go(w)}
        memo[v] = res
        return res

    return go(start)


def graph_spectrum(graph: OrientedExchangeGraph) -> set[int]:
    return path_length_spectrum(graph.successors(), graph.root)


def replay(Q: ClusterQuiver, steps: Iterable[int]) -> IceQuiver:
    """Mutate ``framed(Q)`` along ``steps``, checking each step is green."""
    R = framed(Q)
    for k in steps:
        if k not in green_vertices(R):
            raise ValueError(f"vertex {k} is not green at this step")
        R = mutate(R, k)
    return R
