"""Cluster quivers, ice quivers and green/red mutation.

Quivers are stored as ``int64`` arrow-multiplicity matrices indexed by vertex
*position*; ``labels[p]`` is the user-facing name of position ``p``. Framing a
quiver on labels ``1..n`` adds frozen vertices ``n+1..2n`` with ``c(i) = n+i``;
in general ``c`` of the vertex at position ``p`` is ``max(labels) + 1 + p``.
"""

from __future__ import annotations

import enum
import itertools
import struct
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _kernels
from .errors import InvalidQuiver, MutationAtFrozen, NotBicolored, QuiverParseError


def _as_matrix(arrows) -> np.ndarray:
    A = np.array(arrows, dtype=np.int64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidQuiver("arrow matrix must be square")
    A.setflags(write=False)
    return A


def _check_arrows(A: np.ndarray) -> None:
    if (A < 0).any():
        raise InvalidQuiver("negative arrow multiplicity")
    if np.diagonal(A).any():
        raise InvalidQuiver("quiver has a loop")
    if (np.minimum(A, A.T) > 0).any():
        raise InvalidQuiver("quiver has a 2-cycle")


def _is_connected(A: np.ndarray) -> bool:
    n = A.shape[0]
    if n == 0:
        return False
    adj = (A + A.T) > 0
    seen = {0}
    todo = [0]
    while todo:
        u = todo.pop()
        for v in np.flatnonzero(adj[u]):
            v = int(v)
            if v not in seen:
                seen.add(v)
                todo.append(v)
    return len(seen) == n


def _arrow_list(labels, A) -> list[tuple[int, int]]:
    out = []
    for u, v in zip(*np.nonzero(A)):
        out.extend([(labels[u], labels[v])] * int(A[u, v]))
    return out


@dataclass(frozen=True, eq=False)
class ClusterQuiver:
    """A connected quiver without loops or 2-cycles."""

    labels: tuple[int, ...]
    arrows: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(int(x) for x in self.labels))
        A = _as_matrix(self.arrows)
        object.__setattr__(self, "arrows", A)
        if len(set(self.labels)) != len(self.labels) or A.shape[0] != len(self.labels):
            raise InvalidQuiver("labels must be distinct and match the matrix size")
        _check_arrows(A)
        if not _is_connected(A):
            raise InvalidQuiver("quiver is not connected")

    @classmethod
    def from_arrows(cls, vertices: int | Sequence[int], arrows: Iterable[tuple[int, int]]):
        """Build from ``vertices`` (a count meaning ``1..n``, or explicit labels)
        and a list of ``(u, v)`` pairs; repeated pairs add multiplicity."""
        labels = tuple(range(1, vertices + 1)) if isinstance(vertices, int) else tuple(vertices)
        pos = {lab: p for p, lab in enumerate(labels)}
        A = np.zeros((len(labels), len(labels)), dtype=np.int64)
        for u, v in arrows:
            if u not in pos or v not in pos:
                raise InvalidQuiver(f"arrow {u}->{v} uses an unknown vertex")
            A[pos[u], pos[v]] += 1
        return cls(labels, A)

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, label: int) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"no vertex {label}") from None

    def arrow_list(self) -> list[tuple[int, int]]:
        return _arrow_list(self.labels, self.arrows)

    def opposite(self) -> "ClusterQuiver":
        return ClusterQuiver(self.labels, self.arrows.T.copy())

    def is_acyclic(self) -> bool:
        indeg = (self.arrows > 0).sum(axis=0)
        todo = [p for p in range(self.n) if indeg[p] == 0]
        seen = 0
        indeg = indeg.copy()
        while todo:
            u = todo.pop()
            seen += 1
            for v in np.flatnonzero(self.arrows[u]):
                indeg[v] -= 1
                if indeg[v] == 0:
                    todo.append(int(v))
        return seen == self.n

    def __eq__(self, other):
        if not isinstance(other, ClusterQuiver):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.arrows, other.arrows)

    def __hash__(self):
        return hash((self.labels, self.arrows.tobytes()))

    def __repr__(self):
        arrows = ", ".join(f"{u}->{v}" for u, v in self.arrow_list())
        return f"ClusterQuiver({list(self.labels)}; {arrows})"


class VertexColor(enum.Enum):
    GREEN = "green"
    RED = "red"


@dataclass(frozen=True, eq=False)
class IceQuiver:
    """Quiver with a frozen vertex set and no frozen-frozen arrows."""

    labels: tuple[int, ...]
    arrows: np.ndarray
    frozen: frozenset[int]
    frozen_of: Mapping[int, int] | None = None
    _frozen_mask: np.ndarray = field(init=False, repr=False)
    _nonfrozen: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(int(x) for x in self.labels))
        object.__setattr__(self, "frozen", frozenset(int(x) for x in self.frozen))
        A = _as_matrix(self.arrows)
        object.__setattr__(self, "arrows", A)
        if len(set(self.labels)) != len(self.labels) or A.shape[0] != len(self.labels):
            raise InvalidQuiver("labels must be distinct and match the matrix size")
        if not self.frozen <= set(self.labels):
            raise InvalidQuiver("frozen vertex not in the vertex set")
        _check_arrows(A)
        mask = np.array([lab in self.frozen for lab in self.labels], dtype=np.bool_)
        if A[np.ix_(mask, mask)].any():
            raise InvalidQuiver("arrow between two frozen vertices")
        mask.setflags(write=False)
        nf = np.flatnonzero(~mask).astype(np.int64)
        nf.setflags(write=False)
        object.__setattr__(self, "_frozen_mask", mask)
        object.__setattr__(self, "_nonfrozen", nf)

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def mutable(self) -> tuple[int, ...]:
        """Non-frozen labels in position order."""
        return tuple(self.labels[p] for p in self._nonfrozen)

    def index(self, label: int) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"no vertex {label}") from None

    def arrow_list(self) -> list[tuple[int, int]]:
        return _arrow_list(self.labels, self.arrows)

    def __eq__(self, other):
        if not isinstance(other, IceQuiver):
            return NotImplemented
        return (
            self.labels == other.labels
            and self.frozen == other.frozen
            and np.array_equal(self.arrows, other.arrows)
        )

    def __hash__(self):
        return hash((self.labels, self.frozen, self.arrows.tobytes()))

    def __repr__(self):
        arrows = ", ".join(f"{u}->{v}" for u, v in self.arrow_list())
        return f"IceQuiver({list(self.labels)}; {arrows}; frozen={sorted(self.frozen)})"


def _framing(Q: ClusterQuiver, reverse: bool) -> IceQuiver:
    n = Q.n
    top = max(Q.labels)
    frozen_of = {lab: top + 1 + p for p, lab in enumerate(Q.labels)}
    labels = Q.labels + tuple(frozen_of[lab] for lab in Q.labels)
    A = np.zeros((2 * n, 2 * n), dtype=np.int64)
    A[:n, :n] = Q.arrows
    for p in range(n):
        if reverse:
            A[n + p, p] = 1
        else:
            A[p, n + p] = 1
    return IceQuiver(labels, A, frozenset(frozen_of.values()), frozen_of)


def framed(Q: ClusterQuiver) -> IceQuiver:
    """``Q`` plus a frozen copy ``c(i)`` of each vertex and arrows ``i -> c(i)``."""
    return _framing(Q, reverse=False)


def coframed(Q: ClusterQuiver) -> IceQuiver:
    """Like :func:`framed` with the framing arrows ``c(i) -> i``."""
    return _framing(Q, reverse=True)


def mutate(R: IceQuiver, k: int) -> IceQuiver:
    """Mutate ``R`` at the non-frozen vertex labelled ``k``."""
    if k in R.frozen:
        raise MutationAtFrozen(f"vertex {k} is frozen")
    p = R.index(k)
    B = _kernels.mutate_arrows(R.arrows, p, R._frozen_mask)
    return IceQuiver(R.labels, B, R.frozen, R.frozen_of)


def mutate_sequence(R: IceQuiver, ks: Iterable[int]) -> IceQuiver:
    for k in ks:
        R = mutate(R, k)
    return R


def _colours(R: IceQuiver) -> np.ndarray:
    return _kernels.colour_codes(R.arrows, R._nonfrozen, R._frozen_mask)


def color_of(R: IceQuiver, i: int) -> VertexColor:
    """Green iff no arrow enters ``i`` from a frozen vertex; red iff none leaves
    ``i`` towards one. Raises :class:`NotBicolored` unless exactly one holds."""
    if i in R.frozen:
        raise ValueError(f"vertex {i} is frozen")
    p = R.index(i)
    code = int(_colours(R)[int(np.searchsorted(R._nonfrozen, p))])
    if code == 1:
        return VertexColor.GREEN
    if code == 2:
        return VertexColor.RED
    raise NotBicolored(f"vertex {i} is {'both green and red' if code == 3 else 'neither green nor red'}")


def colouring(R: IceQuiver) -> dict[int, VertexColor]:
    codes = _colours(R)
    out = {}
    for p, code in zip(R._nonfrozen, codes):
        lab = R.labels[p]
        if code == 1:
            out[lab] = VertexColor.GREEN
        elif code == 2:
            out[lab] = VertexColor.RED
        else:
            raise NotBicolored(f"vertex {lab} is not bicoloured")
    return out


_CODE_NAMES = {0: "neither", 1: "green", 2: "red", 3: "both"}


def describe_colours(R: IceQuiver) -> dict[int, str]:
    """Like :func:`colouring` but never raises; failures show as ``"neither"``
    or ``"both"``."""
    return {R.labels[p]: _CODE_NAMES[int(c)] for p, c in zip(R._nonfrozen, _colours(R))}


def green_vertices(R: IceQuiver) -> list[int]:
    """Ascending list of green labels."""
    return sorted(lab for lab, c in colouring(R).items() if c is VertexColor.GREEN)


def red_vertices(R: IceQuiver) -> list[int]:
    return sorted(lab for lab, c in colouring(R).items() if c is VertexColor.RED)


def iso_fixing_frozen(R: IceQuiver, S: IceQuiver) -> dict[int, int] | None:
    """Brute-force search for a relabelling of the non-frozen vertices that
    carries ``R`` onto ``S`` and fixes every frozen vertex."""
    if set(R.labels) != set(S.labels) or R.frozen != S.frozen:
        raise ValueError("ice quivers must share vertex and frozen sets")
    mut = sorted(R.mutable)
    rpos = [R.index(lab) for lab in R.labels]
    for perm in itertools.permutations(mut):
        sigma = dict(zip(mut, perm))
        sigma.update({f: f for f in R.frozen})
        img = [S.index(sigma[lab]) for lab in R.labels]
        if np.array_equal(R.arrows[np.ix_(rpos, rpos)], S.arrows[np.ix_(img, img)]):
            return {lab: sigma[lab] for lab in mut}
    return None


def canonical_key(R: IceQuiver) -> bytes:
    """Byte string equal for two ice quivers iff a frozen-fixing isomorphism
    relates them.

    Non-frozen vertices are first ordered by their arrow counts to and from
    each frozen vertex (an isomorphism invariant); only ties are resolved by
    trying every permutation and keeping the smallest serialisation.
    """
    frozen_pos = sorted((R.index(f) for f in R.frozen), key=lambda p: R.labels[p])
    A = R.arrows
    profile = {
        int(p): tuple(A[p, frozen_pos].tolist()) + tuple(A[frozen_pos, p].tolist())
        for p in R._nonfrozen
    }
    ordered = sorted(profile, key=profile.get)
    blocks = [list(g) for _, g in itertools.groupby(ordered, key=profile.get)]
    names = sorted(R.mutable) + [R.labels[p] for p in frozen_pos]
    header = struct.pack("<qq", len(R._nonfrozen), len(frozen_pos)) + np.array(
        names, dtype=np.int64
    ).tobytes()
    best = None
    for choice in itertools.product(*(itertools.permutations(b) for b in blocks)):
        order = [p for block in choice for p in block] + frozen_pos
        blob = np.ascontiguousarray(A[np.ix_(order, order)]).tobytes()
        if best is None or blob < best:
            best = blob
    return header + (best or b"")


# --------------------------------------------------------------------------
# text format


def _parse_vertices(spec: str, line: int) -> tuple[int, ...]:
    spec = spec.strip()
    try:
        if ".." in spec:
            lo, hi = spec.split("..")
            return tuple(range(int(lo), int(hi) + 1))
        toks = spec.split()
        if len(toks) == 1:
            return tuple(range(1, int(toks[0]) + 1))
        return tuple(int(t) for t in toks)
    except ValueError:
        raise QuiverParseError(f"bad vertex specification {spec!r}", line) from None


def parse_quiver(text: str) -> ClusterQuiver | IceQuiver:
    """Parse the line format::

        vertices: 2
        1 -> 2
        frozen: 3 4      # optional; makes the result an IceQuiver

    ``vertices:`` takes a count (labels ``1..n``), a range ``a..b`` or an
    explicit label list. Repeated arrow lines add multiplicity.
    """
    labels = None
    frozen = None
    arrows: list[tuple[int, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("vertices:"):
            if labels is not None:
                raise QuiverParseError("duplicate vertices line", lineno)
            labels = _parse_vertices(line[len("vertices:"):], lineno)
        elif line.startswith("frozen:"):
            try:
                frozen = frozenset(int(t) for t in line[len("frozen:"):].split())
            except ValueError:
                raise QuiverParseError("bad frozen list", lineno) from None
        elif "->" in line:
            parts = line.split("->")
            if len(parts) != 2:
                raise QuiverParseError(f"cannot parse arrow {line!r}", lineno)
            try:
                arrows.append((int(parts[0]), int(parts[1]), lineno))
            except ValueError:
                raise QuiverParseError(f"cannot parse arrow {line!r}", lineno) from None
        else:
            raise QuiverParseError(f"unrecognised line {line!r}", lineno)
    if labels is None:
        raise QuiverParseError("missing 'vertices:' line")
    pos = {lab: p for p, lab in enumerate(labels)}
    A = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for u, v, lineno in arrows:
        if u not in pos or v not in pos:
            raise QuiverParseError(f"arrow {u} -> {v} uses an unknown vertex", lineno)
        A[pos[u], pos[v]] += 1
    try:
        if frozen is None:
            return ClusterQuiver(labels, A)
        return IceQuiver(labels, A, frozen)
    except InvalidQuiver as exc:
        raise QuiverParseError(str(exc)) from None


def format_quiver(Q: ClusterQuiver | IceQuiver) -> str:
    labels = Q.labels
    if labels == tuple(range(1, len(labels) + 1)):
        head = f"vertices: {len(labels)}"
    else:
        head = "vertices: " + " ".join(map(str, labels))
    lines = [head] + [f"{u} -> {v}" for u, v in Q.arrow_list()]
    if isinstance(Q, IceQuiver):
        order = {lab: p for p, lab in enumerate(labels)}
        lines.append("frozen: " + " ".join(str(f) for f in sorted(Q.frozen, key=order.get)))
    return "\n".join(lines) + "\n"
