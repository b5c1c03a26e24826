"""Compiled vs pure-Python kernels.

Micro-benchmarks call both kernel modules directly on identical random
inputs (and check that they agree).  End-to-end timings run a workload in a
subprocess once per backend, switching with QUIVERCOUNT_PURE.

    python benchmarks/bench_kernels.py [--repeat N] [--skip-e2e]
"""

from __future__ import annotations

import argparse
import os
import random
import subprocess
import sys
import timeit

from quivercount import _kernels_py

try:
    from quivercount import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

P = 2147483629
E2E = {
    "tm_sg(5)": "from quivercount.treemodules import tm_sg; tm_sg(5)",
    "ff count (2,2,1) over F_2": (
        "from quivercount.kac import count_abs_indec_ff, example_wild_quiver;"
        "count_abs_indec_ff(example_wild_quiver(), (2, 2, 1), 2)"
    ),
    "kac S_2 d=3": "from quivercount.kac import kac_polynomial; from quivercount.quivers import Quiver;"
                   "kac_polynomial(Quiver.loops(2), (3,))",
}


def _matrix(rng, n, m, mod):
    return [[rng.randrange(mod) for _ in range(m)] for _ in range(n)]


def _gf4_tables():
    # F_4 = F_2[x]/(x^2+x+1), elements as bit patterns
    def mul(a, b):
        r = 0
        for i in range(2):
            if b >> i & 1:
                r ^= a << i
        if r & 4:
            r ^= 0b111
        return r

    add = [a ^ b for a in range(4) for b in range(4)]
    mult = [mul(a, b) for a in range(4) for b in range(4)]
    inv = [0] + [next(b for b in range(1, 4) if mul(a, b) == 1) for a in range(1, 4)]
    return add, mult, list(range(4)), inv


def micro(repeat: int) -> list[tuple[str, float, float]]:
    rng = random.Random(0)
    add, mul, neg, inv = _gf4_tables()
    cases = []
    for n in (16, 48):
        a = _matrix(rng, n, n + 8, P)
        b = _matrix(rng, n + 8, n, P)
        t4 = _matrix(rng, n, n + 8, 4)
        cases += [
            (f"rref mod p {n}x{n + 8}", "rref_mod_p", (a, n + 8, P)),
            (f"matmul mod p {n}x{n + 8}.{n + 8}x{n}", "matmul_mod_p", (a, b, P)),
            (f"rref F_4 {n}x{n + 8}", "rref_table", (t4, n + 8, 4, add, mul, neg, inv)),
        ]
    out = []
    for label, fn, args in cases:
        py = getattr(_kernels_py, fn)
        t_py = min(timeit.repeat(lambda: py(*args), number=1, repeat=repeat))
        t_c = float("nan")
        if _compiled is not None:
            c = getattr(_compiled, fn)
            if c(*args) != py(*args):
                raise SystemExit(f"backends disagree on {label}")
            t_c = min(timeit.repeat(lambda: c(*args), number=1, repeat=repeat))
        out.append((label, t_py, t_c))
    return out


def end_to_end(stmt: str, pure: bool) -> float:
    env = dict(os.environ)
    env.pop("QUIVERCOUNT_PURE", None)
    if pure:
        env["QUIVERCOUNT_PURE"] = "1"
    code = (
        "import time,sys\n"
        "from quivercount import kernels\n"
        f"t=time.perf_counter()\n{stmt}\n"
        "print(kernels.BACKEND, time.perf_counter()-t)"
    )
    res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    backend, secs = res.stdout.split()
    if backend != ("python" if pure else "compiled") and not (pure is False and _compiled is None):
        raise SystemExit(f"expected backend switch, got {backend}")
    return float(secs)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--skip-e2e", action="store_true")
    args = ap.parse_args(argv)
    if _compiled is None:
        print("compiled extension not built; only the Python column is meaningful")
    print(f"{'kernel':38} {'python s':>10} {'compiled s':>11} {'speedup':>8}")
    for label, t_py, t_c in micro(args.repeat):
        print(f"{label:38} {t_py:10.5f} {t_c:11.5f} {t_py / t_c:8.1f}x")
    if not args.skip_e2e:
        print(f"\n{'workload':38} {'python s':>10} {'compiled s':>11} {'speedup':>8}")
        for label, stmt in E2E.items():
            t_py = end_to_end(stmt, pure=True)
            t_c = end_to_end(stmt, pure=False)
            print(f"{label:38} {t_py:10.3f} {t_c:11.3f} {t_py / t_c:8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
