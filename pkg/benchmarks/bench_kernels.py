"""Time the compiled loop kernels against the numpy fallbacks.

    python3 benchmarks/bench_kernels.py --repeat 5

Both implementations are imported directly from ``greenseq._kernels`` so the
comparison does not depend on ``GREENSEQ_DISABLE_NUMBA``. When numba is
disabled the "loops" column runs as plain Python.
"""

from __future__ import annotations

import argparse
import json
import time

import numpy as np

from greenseq import _accel
from greenseq._kernels import IMPLEMENTATIONS
from greenseq.harness import build_affine, build_type_a
from greenseq.quiver import framed, mutate


def _states(count: int, seed: int):
    rng = np.random.default_rng(seed)
    R0 = framed(build_affine(4))
    out = []
    for _ in range(count):
        R = R0
        for _ in range(int(rng.integers(0, 10))):
            R = mutate(R, R.mutable[rng.integers(len(R.mutable))])
        out.append(R)
    return out


def _cases(seed: int):
    states = _states(2000, seed)
    A5 = framed(build_type_a("++++"))
    aff3 = framed(build_affine(3))
    rng = np.random.default_rng(seed)
    mats = [rng.integers(-3, 4, size=(8, 10)) for _ in range(500)]

    def mutation(impl):
        f = impl["mutate_arrows"]
        for R in states:
            f(R.arrows, int(R._nonfrozen[0]), R._frozen_mask)

    def colours(impl):
        f = impl["colour_codes"]
        for R in states:
            f(R.arrows, R._nonfrozen, R._frozen_mask)

    def count_a5(impl):
        impl["count_mgs"](A5.arrows, A5._nonfrozen, A5._frozen_mask, 15)

    def count_aff3(impl):
        impl["count_mgs"](aff3.arrows, aff3._nonfrozen, aff3._frozen_mask, 9)

    def rank(impl):
        f = impl["int_rank"]
        for M in mats:
            f(M)

    return {
        "mutate x2000": mutation,
        "colour x2000": colours,
        "count_mgs A5 bound 15": count_a5,
        "count_mgs Ã3,1 bound 9": count_aff3,
        "int_rank 8x10 x500": rank,
    }


def _best(fn, impl, repeat: int) -> float:
    fn(impl)  # warm-up, includes JIT compilation
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(impl)
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    args = ap.parse_args(argv)

    rows = []
    for name, fn in _cases(args.seed).items():
        loops = _best(fn, IMPLEMENTATIONS["loops"], args.repeat)
        vec = _best(fn, IMPLEMENTATIONS["numpy"], args.repeat)
        rows.append({"case": name, "loops_s": loops, "numpy_s": vec, "speedup": vec / loops})

    if args.json:
        print(json.dumps({"backend": _accel.backend(), "rows": rows}, indent=2))
        return 0
    print(f"loops kernels compiled with numba: {_accel.USE_NUMBA}")
    print(f"{'case':<26}{'loops [s]':>12}{'numpy [s]':>12}{'speedup':>10}")
    for r in rows:
        print(f"{r['case']:<26}{r['loops_s']:>12.4f}{r['numpy_s']:>12.4f}{r['speedup']:>9.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
