"""Compare the compiled Smith normal form kernel with the pure-Python one.

Usage: python3 benchmarks/bench_snf.py [--repeat N] [--sizes 10,20,40] [--no-workload]

Part 1 times both kernels on sparse random integer matrices and on the
coboundary matrices of the M16 cochain complex, with and without the
transforms U, V, checking that the outputs agree.  "overflow" marks cases
where the compiled kernel hands back to Python (the transforms outgrow 64
bits on larger random inputs).
Part 2 times an end-to-end workload in two subprocesses, one with
AMITSUR_PURE_PYTHON=1.
"""
import argparse
import os
import random
import subprocess
import sys
import time

from amitsur import _pycore
from amitsur.amitsur import standard_resolution
from amitsur.cohom import hom_complex
from amitsur.fingroup import modular16
from amitsur.gmod import regular, trivial

try:
    from amitsur import _core
except ImportError:
    _core = None

WORKLOAD = """
import amitsur.amitsur as am
from amitsur.fingroup import modular16
from amitsur.gmod import trivial
G = modular16()
P = am.standard_resolution(G, 7)
for n in range(2, 7):
    am.bogomolov_kernel(G, trivial(G, 1), n, P=P)
am.dp2_verify()
"""


def best_of(fn, repeat):
    best = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        dt = time.perf_counter() - t
        best = dt if best is None else min(best, dt)
    return best, out


def random_matrix(rng, m, n):
    """Sparse entries in {0, 1, -1, 2}, like group-ring differentials."""
    return [[rng.choice([0] * 8 + [1, -1, 2]) for _ in range(n)] for _ in range(m)]


def m16_coboundaries(top=5):
    G = modular16()
    P = standard_resolution(G, top + 1)
    mats = []
    for label, M in (("Z", trivial(G, 1)), ("Z[G]", regular(G))):
        cx = hom_complex(P, M)
        for n in range(1, top):
            mats.append(("M16 %s delta^%d" % (label, n), cx.delta(n)))
    return mats


def bench_kernels(sizes, repeat):
    rng = random.Random(0)
    cases = [("random %dx%d" % (s, s), random_matrix(rng, s, s)) for s in sizes]
    cases += m16_coboundaries()
    print("%-24s %-5s %10s %10s %8s" % ("matrix", "mode", "compiled", "python", "speedup"))
    for name, A in cases:
        m = len(A)
        n = len(A[0]) if A else 0
        for mode, want in (("diag", False), ("full", True)):
            tp, rp = best_of(lambda: _pycore.smith(A, m, n, want, want), repeat)
            if _core is None:
                print("%-24s %-5s %10s %9.5fs %8s" % (name, mode, "n/a", tp, "-"))
                continue
            try:
                tc, rc = best_of(lambda: _core.smith(A, m, n, want, want), repeat)
            except OverflowError:
                print("%-24s %-5s %10s %9.5fs %8s" % (name, mode, "overflow", tp, "-"))
                continue
            if rc != rp:
                raise SystemExit("kernels disagree on %s" % name)
            print("%-24s %-5s %9.5fs %9.5fs %7.1fx" % (name, mode, tc, tp, tp / tc))


def bench_workload():
    print("\nend-to-end workload (M16 restriction kernels n = 2..6 and dp2_verify)")
    for label, pure in (("compiled", "0"), ("python", "1")):
        env = dict(os.environ, AMITSUR_PURE_PYTHON=pure)
        t = time.perf_counter()
        subprocess.run([sys.executable, "-c", WORKLOAD], env=env, check=True)
        print("  %-9s %7.2fs" % (label, time.perf_counter() - t))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--sizes", default="10,20,40")
    ap.add_argument("--no-workload", action="store_true")
    args = ap.parse_args()
    if _core is None:
        print("compiled kernel not built; timing the Python kernel only")
    bench_kernels([int(s) for s in args.sizes.split(",")], args.repeat)
    if not args.no_workload:
        bench_workload()


if __name__ == "__main__":
    main()
