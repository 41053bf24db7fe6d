"""Fixtures and end-to-end checks of the MGS length spectra."""

from __future__ import annotations

import itertools
import logging
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import RankTooSmall
from .hereditary import preprojective_dim
from .mgs import default_depth_bound, enumerate_mgs
from .quiver import ClusterQuiver
from .type_a import TypeAQuiver

log = logging.getLogger(__name__)

# Extra depth explored past the proven bound to look for longer sequences.
OVERSHOOT = 3


def build_affine(n: int) -> ClusterQuiver:
    """Ã_{n,1}: vertices ``0..n``, arrows ``i -> i+1`` and ``0 -> n``."""
    if n < 2:
        raise RankTooSmall("Ã_{n,1} needs n >= 2")
    arrows = [(i, i + 1) for i in range(n)] + [(0, n)]
    return ClusterQuiver.from_arrows(list(range(n + 1)), arrows)


def build_type_a(orientation: str | Sequence[str]) -> ClusterQuiver:
    """Path quiver on ``1..n`` from a sign string such as ``"+-"``."""
    return TypeAQuiver(tuple(orientation)).to_cluster_quiver()


@dataclass
class VerificationReport:
    quiver: str
    expected: tuple[int, int]
    observed: tuple[int, ...]
    passed: bool
    truncated: bool
    runtime: float
    states_visited: int
    depth_bound: int
    overshoot_bound: int | None = None
    overshoot_lengths: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        d = asdict(self)
        d["expected"] = list(self.expected)
        d["observed"] = list(self.observed)
        d["overshoot_lengths"] = list(self.overshoot_lengths)
        return d


def _verify(name: str, Q: ClusterQuiver, lo: int, hi: int, overshoot: int = 0) -> VerificationReport:
    bound = default_depth_bound(Q)
    t0 = time.perf_counter()
    rep = enumerate_mgs(Q, bound)
    extra_bound, extra = None, ()
    if overshoot:
        extra_bound = bound + overshoot
        extra = enumerate_mgs(Q, extra_bound).lengths
    dt = time.perf_counter() - t0
    passed = (
        tuple(rep.lengths) == tuple(range(lo, hi + 1))
        and not rep.truncated
        and (not overshoot or tuple(extra) == tuple(rep.lengths))
    )
    if not passed:
        log.warning("%s: expected [%d, %d], observed %s", name, lo, hi, rep.lengths)
    return VerificationReport(
        quiver=name,
        expected=(lo, hi),
        observed=tuple(rep.lengths),
        passed=passed,
        truncated=rep.truncated,
        runtime=dt,
        states_visited=rep.states_visited,
        depth_bound=bound,
        overshoot_bound=extra_bound,
        overshoot_lengths=tuple(extra),
    )


def _pool_map(fn, items, threads: int):
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def verify_type_a_spectrum(
    n: int, orientations: str | Iterable[str] = "all", threads: int = 1
) -> list[VerificationReport]:
    """One report per orientation; expected spectrum ``[n, n(n+1)/2]``."""
    if orientations == "all":
        if n > 5:
            warnings.warn(f"enumerating all {2 ** (n - 1)} orientations of A_{n}", RuntimeWarning, stacklevel=2)
        signs = ["".join(p) for p in itertools.product("+-", repeat=n - 1)]
    else:
        signs = ["".join(o) for o in orientations]
        if n > 5:
            warnings.warn(f"A_{n} enumeration can be slow", RuntimeWarning, stacklevel=2)
    hi = n * (n + 1) // 2

    def one(sign: str) -> VerificationReport:
        return _verify(f"A{n}[{sign}]", build_type_a(sign), n, hi)

    return _pool_map(one, signs, threads)


def verify_affine_spectrum(n: int, overshoot: int = OVERSHOOT) -> VerificationReport:
    """Expected spectrum ``[n+1, n(n+3)/2]`` at depth bound ``n(n+3)/2``.

    With ``overshoot > 0`` the search is repeated that many levels deeper and
    must find nothing new.
    """
    return _verify(f"Ã{n},1", build_affine(n), n + 1, n * (n + 3) // 2, overshoot)


def affine_preprojective_sincerity(n: int, depth: int) -> bool:
    """Every ``tau^{-r} P(i)``, ``1 <= r <= depth``, has no zero coordinate."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    Q = build_affine(n)
    for i in Q.labels:
        for r in range(1, depth + 1):
            d = preprojective_dim(Q, i, r)
            if d is None or (np.asarray(d) < 1).any():
                log.info("tau^-%d P(%d) on Ã_%d,1 has dim %s", r, i, n, d)
                return False
    return True


def format_table(reports: Sequence[VerificationReport]) -> str:
    rows = [("quiver", "expected", "observed", "states", "time[s]", "result")]
    for r in reports:
        obs = f"[{min(r.observed)},{max(r.observed)}]" if r.observed else "{}"
        if r.observed and tuple(r.observed) != tuple(range(min(r.observed), max(r.observed) + 1)):
            obs = "{" + ",".join(map(str, r.observed)) + "}"
        rows.append(
            (
                r.quiver,
                f"[{r.expected[0]},{r.expected[1]}]",
                obs,
                str(r.states_visited),
                f"{r.runtime:.3f}",
                "PASS" if r.passed else "FAIL",
            )
        )
    widths = [max(len(row[c]) for row in rows) for c in range(len(rows[0]))]
    return "\n".join("  ".join(cell.ljust(w) for cell, w in zip(row, widths)) for row in rows) + "\n"
