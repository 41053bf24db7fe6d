"""Slices of the preprojective component.

``tau^{-r} P(x)`` sits at vertex ``(r, x)`` of the translation quiver ZQ^op,
whose arrows are ``(r, u) -> (r, v)`` for every arrow ``v -> u`` of Q and
``(r, u) -> (r+1, v)`` for every arrow ``u -> v`` of Q. A slice vector assigns
one level ``r_x >= 0`` to each vertex and stands for ``(+)_x tau^{-r_x} P(x)``.
Vectors are tuples aligned with ``Q.labels``.
"""

from __future__ import annotations

import itertools
import logging
from collections import deque
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from .errors import InternalInconsistency, NotASlice, NotASource, NotComparable, WindowTooSmall
from .hereditary import preprojective_dim
from .quiver import ClusterQuiver
from .type_a import IntervalModule, TypeAQuiver, ext_dim, interval_from_dim

log = logging.getLogger(__name__)

SliceVector = tuple[int, ...]


class ZQVertex(NamedTuple):
    r: int
    x: int


@lru_cache(maxsize=None)
def _lq_table(Q: ClusterQuiver) -> np.ndarray:
    n = Q.n
    adj = [[] for _ in range(n)]
    for u, v in zip(*np.nonzero(Q.arrows)):
        adj[u].append((int(v), 1))  # along the arrow
        adj[v].append((int(u), 0))  # against it
    table = np.zeros((n, n), dtype=np.int64)
    for s in range(n):
        dist = [None] * n
        dist[s] = 0
        dq = deque([s])
        while dq:
            u = dq.popleft()
            for v, w in adj[u]:
                nd = dist[u] + w
                if dist[v] is None or nd < dist[v]:
                    dist[v] = nd
                    if w == 0:
                        dq.appendleft(v)
                    else:
                        dq.append(v)
        table[s] = dist
    return table


def l_q(Q: ClusterQuiver, x: int, y: int) -> int:
    """Fewest arrows traversed forwards by a walk from ``x`` to ``y``."""
    return int(_lq_table(Q)[Q.index(x), Q.index(y)])


def zq_path_exists(Q: ClusterQuiver, a: ZQVertex, b: ZQVertex) -> bool:
    if not Q.arrows.any():
        return a == b  # single vertex: ZQ^op has no arrows
    return b.r >= a.r + l_q(Q, a.x, b.x)


def zq_successors(Q: ClusterQuiver, v: ZQVertex) -> list[ZQVertex]:
    out = []
    p = Q.index(v.x)
    for q in np.flatnonzero(Q.arrows[:, p]):  # arrow y -> x gives (r, x) -> (r, y)
        out.append(ZQVertex(v.r, Q.labels[q]))
    for q in np.flatnonzero(Q.arrows[p, :]):  # arrow x -> y gives (r, x) -> (r+1, y)
        out.append(ZQVertex(v.r + 1, Q.labels[q]))
    return out


def zq_path_exists_bfs_oracle(Q: ClusterQuiver, a: ZQVertex, b: ZQVertex, window: int) -> bool:
    """Reachability in the explicitly materialised ZQ^op, levels restricted to
    ``[-window - n, window + n]``. Levels never decrease along arrows, so any
    path between vertices inside the window stays inside it."""
    if abs(a.r) > window or abs(b.r) > window:
        raise WindowTooSmall(f"{a} or {b} lies outside window {window}")
    lo, hi = -window - Q.n, window + Q.n
    seen = {a}
    todo = deque([a])
    while todo:
        v = todo.popleft()
        if v == b:
            return True
        for w in zq_successors(Q, v):
            if lo <= w.r <= hi and w not in seen:
                seen.add(w)
                todo.append(w)
    return False


def _check_vector(Q: ClusterQuiver, s: Sequence[int]) -> tuple[int, ...]:
    s = tuple(int(v) for v in s)
    if len(s) != Q.n:
        raise ValueError(f"slice vector needs {Q.n} entries, got {len(s)}")
    if min(s) < 0:
        raise ValueError("slice levels must be non-negative")
    return s


def is_slice_tilting(Q: ClusterQuiver, s: Sequence[int]) -> bool:
    """``r_y <= r_x + l_Q(x, y)`` for every ordered pair."""
    r = np.array(_check_vector(Q, s), dtype=np.int64)
    L = _lq_table(Q)
    return bool((r[None, :] <= r[:, None] + L).all())


def slice_sources(Q: ClusterQuiver, s: Sequence[int]) -> list[int]:
    """Labels whose slice vertex receives no arrow from another slice vertex."""
    s = _check_vector(Q, s)
    if not is_slice_tilting(Q, s):
        raise NotASlice(f"{s} is not a slice vector")
    A = Q.arrows
    out = []
    for p in range(Q.n):
        incoming = False
        for q in range(Q.n):
            if A[p, q] and s[q] == s[p]:
                incoming = True
            if A[q, p] and s[q] + 1 == s[p]:
                incoming = True
        if not incoming:
            out.append(Q.labels[p])
    return sorted(out)


def mutate_slice_at_source(Q: ClusterQuiver, s: Sequence[int], x: int) -> SliceVector:
    """Replace ``tau^{-r_x} P(x)`` by ``tau^{-r_x - 1} P(x)``."""
    s = _check_vector(Q, s)
    if x not in slice_sources(Q, s):
        raise NotASource(f"{x} is not a source of {s}")
    out = list(s)
    out[Q.index(x)] += 1
    out = tuple(out)
    if not is_slice_tilting(Q, out):
        raise InternalInconsistency(f"mutating {s} at {x} left the slice set")
    return out


def descending_path(Q: ClusterQuiver, s: Sequence[int], t: Sequence[int]) -> list[SliceVector]:
    """Slice vectors ``s = v_0, ..., v_L = t``, each step a source mutation at
    the lowest-labelled source still below its target level."""
    s, t = _check_vector(Q, s), _check_vector(Q, t)
    for v in (s, t):
        if not is_slice_tilting(Q, v):
            raise NotASlice(f"{v} is not a slice vector")
    if any(b < a for a, b in zip(s, t)):
        raise NotComparable(f"{t} is not above {s} coordinatewise")
    path = [s]
    cur = s
    while cur != t:
        eligible = [a for a in slice_sources(Q, cur) if t[Q.index(a)] > cur[Q.index(a)]]
        if not eligible:
            raise InternalInconsistency(f"no source of {cur} can move towards {t}")
        cur = mutate_slice_at_source(Q, cur, eligible[0])
        path.append(cur)
    return path


# --------------------------------------------------------------------------
# module-level realisation (type A)


def preprojective_window(Q: TypeAQuiver) -> list[int]:
    """Largest ``r`` with ``tau^{-r} P(x)`` a module, per vertex ``x``."""
    C = Q.to_cluster_quiver()
    out = []
    for x in C.labels:
        r = 0
        while preprojective_dim(C, x, r + 1) is not None:
            r += 1
        out.append(r)
    return out


def realise_slice(Q: TypeAQuiver, s: Sequence[int]) -> list[IntervalModule] | None:
    """The interval modules ``tau^{-r_x} P(x)``, or ``None`` if some shift
    leaves the module category."""
    C = Q.to_cluster_quiver()
    s = _check_vector(C, s)
    out = []
    for x, r in zip(C.labels, s):
        d = preprojective_dim(C, x, r)
        if d is None:
            return None
        iv = interval_from_dim(d)
        if iv is None:
            raise InternalInconsistency(f"tau^-{r} P({x}) on {Q} is not an interval")
        out.append(iv)
    return out


def is_rigid_n_summand(Q: TypeAQuiver, mods: Sequence[IntervalModule]) -> bool:
    """``n`` distinct intervals with vanishing Ext between all pairs."""
    if len(set(mods)) != Q.n:
        return False
    return all(ext_dim(Q, a, b) == 0 for a in mods for b in mods)


def window_vectors(Q: TypeAQuiver):
    """Every vector inside the preprojective window."""
    return itertools.product(*(range(m + 1) for m in preprojective_window(Q)))
