"""Interval modules over type-A path algebras.

A module is a representation of the quiver itself: a vector space per vertex
and a linear map along each arrow, in the arrow's direction. ``L(i, j)`` is the
interval module with a one-dimensional space at each vertex ``i+1..j`` and
identity maps between neighbouring support vertices.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

import numpy as np

from . import _kernels
from .errors import InternalInconsistency, InvalidQuiver, NoNonzeroHom
from .hereditary import coxeter_matrix, euler_form_matrix
from .mgs import path_length_spectrum
from .quiver import ClusterQuiver

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TypeAQuiver:
    """Path quiver ``1 - 2 - ... - n``; ``signs[i-1]`` is ``d(i)``: ``+`` for
    ``i -> i+1`` and ``-`` for ``i <- i+1``."""

    signs: tuple[str, ...]

    def __post_init__(self):
        signs = tuple(self.signs)
        if any(s not in "+-" or len(s) != 1 for s in signs):
            raise InvalidQuiver(f"orientation must be a string of '+'/'-', got {self.signs!r}")
        object.__setattr__(self, "signs", signs)

    @classmethod
    def parse(cls, text: str) -> "TypeAQuiver":
        return cls(tuple(text.strip()))

    @classmethod
    def linear(cls, n: int) -> "TypeAQuiver":
        return cls(("+",) * (n - 1))

    @classmethod
    def all_orientations(cls, n: int) -> list["TypeAQuiver"]:
        return [cls(p) for p in itertools.product("+-", repeat=n - 1)]

    @property
    def n(self) -> int:
        return len(self.signs) + 1

    def __str__(self):
        return "".join(self.signs)

    def d(self, i: int) -> str:
        if not 1 <= i <= self.n - 1:
            raise ValueError(f"d({i}) undefined for n={self.n}")
        return self.signs[i - 1]

    def arrows(self) -> list[tuple[int, int]]:
        return [(i, i + 1) if s == "+" else (i + 1, i) for i, s in enumerate(self.signs, start=1)]

    def is_sink(self, v: int) -> bool:
        return all(u != v for u, _ in self.arrows())

    def is_source(self, v: int) -> bool:
        return all(w != v for _, w in self.arrows())

    def opposite(self) -> "TypeAQuiver":
        return TypeAQuiver(tuple("-" if s == "+" else "+" for s in self.signs))

    def to_cluster_quiver(self) -> ClusterQuiver:
        return ClusterQuiver.from_arrows(self.n, self.arrows())

    def arrow_matrix(self) -> np.ndarray:
        A = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.arrows():
            A[u - 1, v - 1] = 1
        return A


@dataclass(frozen=True, order=True)
class IntervalModule:
    i: int
    j: int

    def __post_init__(self):
        if not 0 <= self.i < self.j:
            raise ValueError(f"bad interval ({self.i}, {self.j})")

    @property
    def support(self) -> range:
        return range(self.i + 1, self.j + 1)

    def dim(self, n: int) -> np.ndarray:
        if self.j > n:
            raise ValueError(f"{self} does not fit in rank {n}")
        d = np.zeros(n, dtype=np.int64)
        d[self.i : self.j] = 1
        return d

    def token(self) -> str:
        return f"[{self.i},{self.j}]"

    def __str__(self):
        return f"L({self.i},{self.j})"


def intervals(n: int) -> list[IntervalModule]:
    """All ``n(n+1)/2`` interval modules in lexicographic order."""
    return [IntervalModule(i, j) for i in range(n) for j in range(i + 1, n + 1)]


def interval_from_dim(d) -> IntervalModule | None:
    """The interval whose indicator is ``d``, or ``None``."""
    d = np.asarray(d)
    nz = np.flatnonzero(d)
    if nz.size == 0 or (d < 0).any() or (d > 1).any():
        return None
    if nz[-1] - nz[0] + 1 != nz.size:
        return None
    return IntervalModule(int(nz[0]), int(nz[-1]) + 1)


def _check(Q: TypeAQuiver, *xs: IntervalModule) -> None:
    for x in xs:
        if x.j > Q.n:
            raise ValueError(f"{x} does not fit in rank {Q.n}")


# --------------------------------------------------------------------------
# Ext-vanishing criterion


def ext_mutually_vanishes(Q: TypeAQuiver, a: IntervalModule, b: IntervalModule) -> bool:
    """Combinatorial test for ``Ext^1(a, b) = 0 = Ext^1(b, a)``."""
    _check(Q, a, b)
    i, j, k, l = a.i, a.j, b.i, b.j
    d = Q.d
    if j < k or l < i:
        return True
    if i == k or j == l:
        return True
    if i < k < j < l:
        return d(j) != d(k)
    if k < i < l < j:
        return d(i) != d(l)
    if i < k < l < j:
        return d(k) == d(l)
    if k < i < j < l:
        return d(i) == d(j)
    # the touching cases i < k = j < l and k < i = l < j
    return False


# --------------------------------------------------------------------------
# exact Hom / Ext


def _hom_system(Q: TypeAQuiver, x: IntervalModule, y: IntervalModule):
    shared = [a for a in x.support if a in y.support]
    col = {a: c for c, a in enumerate(shared)}
    rows = []
    sx, sy = set(x.support), set(y.support)
    for u, v in Q.arrows():
        # f_v X(u->v) = Y(u->v) f_u
        row = [0] * len(shared)
        if u in sy and v in sy and u in col:
            row[col[u]] += 1
        if u in sx and v in sx and v in col:
            row[col[v]] -= 1
        if any(row):
            rows.append(row)
    return shared, rows


@lru_cache(maxsize=None)
def hom_dim(Q: TypeAQuiver, x: IntervalModule, y: IntervalModule) -> int:
    """``dim Hom(x, y)`` by exact rank of the commutativity constraints."""
    _check(Q, x, y)
    shared, rows = _hom_system(Q, x, y)
    if not shared:
        return 0
    if not rows:
        return len(shared)
    return len(shared) - int(_kernels.int_rank(np.array(rows, dtype=np.int64)))


def _nullspace(rows: list[list[int]], ncols: int) -> list[list[Fraction]]:
    M = [[Fraction(v) for v in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        piv = M[r][c]
        M[r] = [v / piv for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for row_i, pc in enumerate(pivots):
            v[pc] = -M[row_i][free]
        basis.append(v)
    return basis


def hom_basis(Q: TypeAQuiver, x: IntervalModule, y: IntervalModule) -> list[dict[int, Fraction]]:
    """Basis of ``Hom(x, y)``; each morphism maps a vertex to its scalar component
    (vertices outside the shared support have component 0 and are omitted)."""
    _check(Q, x, y)
    shared, rows = _hom_system(Q, x, y)
    basis = _nullspace(rows, len(shared)) if shared else []
    return [dict(zip(shared, v)) for v in basis]


@dataclass(frozen=True)
class HomProfile:
    shared_support: tuple[int, ...]
    nonzero: tuple[int, ...]


def hom_component_profile(Q: TypeAQuiver, x: IntervalModule, y: IntervalModule) -> HomProfile:
    """Which components of a basis morphism ``x -> y`` are nonzero."""
    basis = hom_basis(Q, x, y)
    if not basis:
        raise NoNonzeroHom(f"Hom({x}, {y}) = 0")
    f = basis[0]
    shared = tuple(a for a in x.support if a in y.support)
    return HomProfile(shared, tuple(a for a in shared if f.get(a, 0) != 0))


def euler_form(Q: TypeAQuiver, dx, dy) -> int:
    return euler_form_matrix(Q.arrow_matrix(), dx, dy)


@lru_cache(maxsize=None)
def ext_dim(Q: TypeAQuiver, x: IntervalModule, y: IntervalModule) -> int:
    """``dim Ext^1(x, y) = dim Hom(x, y) - <dim x, dim y>`` (hereditary)."""
    e = hom_dim(Q, x, y) - euler_form(Q, x.dim(Q.n), y.dim(Q.n))
    if e < 0:
        raise InternalInconsistency(f"negative Ext dimension for ({x}, {y}) on {Q}")
    return e


# --------------------------------------------------------------------------
# AR translation


@lru_cache(maxsize=None)
def _coxeter(Q: TypeAQuiver) -> np.ndarray:
    return coxeter_matrix(Q.arrow_matrix())


def coxeter_tau_oracle(Q: TypeAQuiver, dx) -> np.ndarray | None:
    """``Phi(dx)`` when it is again an interval indicator, else ``None``
    (``dx`` was projective)."""
    out = _coxeter(Q) @ np.asarray(dx, dtype=np.int64)
    if interval_from_dim(out) is None:
        return None
    return out


def _tau_endpoint(Q: TypeAQuiver, e: int) -> int | None:
    n = Q.n
    inside = lambda v: 1 <= v <= n
    if inside(e) and Q.is_sink(e):
        srcs = [a for a in range(1, e) if Q.is_source(a)]
        return max(srcs) - 1 if srcs else None
    if inside(e + 1) and Q.is_sink(e + 1):
        srcs = [a for a in range(e + 1, n + 1) if Q.is_source(a)]
        return min(srcs) if srcs else None
    if inside(e) and inside(e + 1):
        return e + 1 if Q.d(e) == "+" else e - 1
    return None


def tau_interval_formula(Q: TypeAQuiver, x: IntervalModule) -> tuple[int, int] | None:
    """Endpoint rule for ``tau L(i, j)``; ``None`` when some endpoint sits on a
    boundary where the rule refers to a missing vertex or an empty source set."""
    _check(Q, x)
    i2 = _tau_endpoint(Q, x.i)
    j2 = _tau_endpoint(Q, x.j)
    if i2 is None or j2 is None:
        return None
    return i2, j2


def tau_interval(Q: TypeAQuiver, x: IntervalModule) -> IntervalModule | None:
    """``tau x``, or ``None`` for projective ``x``.

    Uses the endpoint rule whenever it is defined and checks it against the
    Coxeter matrix; falls back to the Coxeter result on boundary cases.
    """
    d = coxeter_tau_oracle(Q, x.dim(Q.n))
    if d is None:
        return None
    oracle = interval_from_dim(d)
    formula = tau_interval_formula(Q, x)
    if formula is None:
        log.debug("tau endpoint rule undefined for %s on %s; using Coxeter result", x, Q)
        return oracle
    if formula != (oracle.i, oracle.j):
        raise InternalInconsistency(f"tau {x} on {Q}: rule gives {formula}, Coxeter gives {oracle}")
    return oracle


def tau_inverse_interval(Q: TypeAQuiver, x: IntervalModule) -> IntervalModule | None:
    """``tau^{-1} x`` or ``None`` for injective ``x``; by inverting ``tau`` on intervals."""
    for y in intervals(Q.n):
        if tau_interval(Q, y) == x:
            return y
    return None


def projective_interval(Q: TypeAQuiver, v: int) -> IntervalModule:
    """``P(v)``: the vertices reachable from ``v`` along arrows."""
    lo = v
    while lo > 1 and Q.d(lo - 1) == "-":
        lo -= 1
    hi = v
    while hi < Q.n and Q.d(hi) == "+":
        hi += 1
    return IntervalModule(lo - 1, hi)


# --------------------------------------------------------------------------
# support tilting modules


def support_of(S: Iterable[IntervalModule]) -> frozenset[int]:
    return frozenset(v for x in S for v in x.support)


def enumerate_support_tilting(Q: TypeAQuiver) -> list[frozenset[IntervalModule]]:
    """All sets of pairwise Ext-orthogonal intervals whose size equals the size
    of their joint support, the empty set included."""
    ivs = intervals(Q.n)
    ok = {(a, b): ext_mutually_vanishes(Q, a, b) for a in ivs for b in ivs}
    out: list[frozenset[IntervalModule]] = []

    def extend(chosen: list[IntervalModule], start: int):
        if len(chosen) == len(support_of(chosen)):
            out.append(frozenset(chosen))
        for p in range(start, len(ivs)):
            x = ivs[p]
            if all(ok[x, y] for y in chosen):
                chosen.append(x)
                extend(chosen, p + 1)
                chosen.pop()

    extend([], 0)
    return out


def stilt_leq(Q: TypeAQuiver, M: Iterable[IntervalModule], N: Iterable[IntervalModule]) -> bool:
    """``M <= N``: ``Ext^1(N, M) = 0`` and ``supp M`` inside ``supp N``."""
    M, N = list(M), list(N)
    if not support_of(M) <= support_of(N):
        return False
    return all(ext_dim(Q, x, y) == 0 for x in N for y in M)


def format_set(S: Iterable[IntervalModule]) -> list[str]:
    return [x.token() for x in sorted(S)]


def parse_set(tokens: Iterable[str]) -> frozenset[IntervalModule]:
    out = []
    for t in tokens:
        i, j = t.strip().strip("[]").split(",")
        out.append(IntervalModule(int(i), int(j)))
    return frozenset(out)


@dataclass
class HasseQuiver:
    nodes: list[frozenset[IntervalModule]]
    edges: list[tuple[int, int]]  # (larger, smaller) node indices
    top: int
    bottom: int

    def successors(self) -> dict[int, list[int]]:
        out = {i: [] for i in range(len(self.nodes))}
        for s, t in self.edges:
            out[s].append(t)
        return out

    def to_dot(self, name: str = "hasse") -> str:
        lines = [f"digraph {name} {{"]
        for idx, S in enumerate(self.nodes):
            label = " ".join(format_set(S)) or "0"
            lines.append(f'  s{idx} [label="{label}"];')
        for s, t in sorted(self.edges):
            lines.append(f"  s{s} -> s{t};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def hasse_quiver(Q: TypeAQuiver) -> HasseQuiver:
    """Cover relations of the support-tilting poset, arrows pointing down."""
    nodes = sorted(enumerate_support_tilting(Q), key=lambda S: (-len(support_of(S)), format_set(S)))
    m = len(nodes)
    leq = [[stilt_leq(Q, nodes[a], nodes[b]) for b in range(m)] for a in range(m)]
    edges = []
    for big in range(m):
        for small in range(m):
            if big == small or not leq[small][big]:
                continue
            if any(
                c not in (big, small) and leq[small][c] and leq[c][big]
                for c in range(m)
            ):
                continue
            edges.append((big, small))
    top = next(i for i in range(m) if all(leq[j][i] for j in range(m)))
    bottom = next(i for i in range(m) if all(leq[i][j] for j in range(m)))
    return HasseQuiver(nodes, edges, top, bottom)


def mgs_spectrum_from_hasse(Q: TypeAQuiver) -> set[int]:
    """Lengths of maximal paths from the top of the Hasse quiver."""
    H = hasse_quiver(Q)
    return path_length_spectrum(H.successors(), H.top)
