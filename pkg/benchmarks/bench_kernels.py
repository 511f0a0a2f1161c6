"""Compiled vs pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat N] [--end-to-end]

Prints one line per workload with the best time of each backend and the
speedup.  ``--end-to-end`` also times a few library calls in two fresh
interpreters, one with ``FREEFID_PURE_PYTHON=1``.
"""
import argparse
import os
import subprocess
import sys
import textwrap
import timeit

from freefid import kernels
from freefid.cumulants import _integer_matrix, exact_moments, free_cumulants, hankel_matrix
from freefid.distributions import BetaPrime, Gamma


def _hankel_int(d, k):
    r = free_cumulants(exact_moments(d, 2 * k))
    return _integer_matrix(hankel_matrix(r, k))[0]


def workloads():
    exp16 = _hankel_int(Gamma(1), 16)
    bp26 = _hankel_int(BetaPrime(1, 60), 26)
    pts = [0.3 + 0.2j, -0.45 + 0.1j, 0.6j, 0.7 - 0.3j]
    return {
        "hyp2f1 series, 4 points |z|<0.8": lambda k: [k.hyp2f1_series(0.45, 1.35, 2.9, z) for z in pts],
        "hyp2f1 series, slow z=0.95": lambda k: k.hyp2f1_series(0.5, 1.5, 2.5, 0.95 + 0.0j),
        "taylor step x100": lambda k: [k.taylor_step(0.45, 1.35, 2.9, 0.5 + 0.5j, 1.2 + 0.1j, 0.3 - 0.2j, 0.2)
                                       for _ in range(100)],
        "bareiss det 16x16 exponential": lambda k: k.bareiss_det(exp16),
        "leading minors 26x26 beta prime q=60": lambda k: k.bareiss_leading_minors(bp26),
    }


def bench(repeat):
    if kernels.compiled_backend is None:
        print("compiled backend not available; build with pip install -e . --no-build-isolation")
        return 1
    backends = {"cython": kernels.compiled_backend, "python": kernels.python_backend}
    print(f"{'workload':42s} {'cython':>11s} {'python':>11s} {'speedup':>8s}")
    for name, fn in workloads().items():
        t = {}
        for label, mod in backends.items():
            timer = timeit.Timer(lambda: fn(mod))
            n, _ = timer.autorange()
            t[label] = min(timer.repeat(repeat, n)) / n
        print(f"{name:42s} {t['cython'] * 1e6:9.1f}us {t['python'] * 1e6:9.1f}us "
              f"{t['python'] / t['cython']:7.1f}x")
    return 0


END_TO_END = textwrap.dedent("""
    import time
    from freefid import BACKEND
    from freefid.cumulants import hankel_fid_test
    from freefid.distributions import Beta, BetaPrime
    from freefid.transforms import cauchy_G, upper_grid
    t0 = time.perf_counter(); hankel_fid_test(BetaPrime(1, 60), 26); t1 = time.perf_counter()
    for z in upper_grid(200):
        cauchy_G(Beta(0.45, 2.9), z)
    t2 = time.perf_counter()
    print(BACKEND, t1 - t0, t2 - t1)
""")


def end_to_end():
    rows = []
    for pure in ("0", "1"):
        env = dict(os.environ, FREEFID_PURE_PYTHON=pure)
        out = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True,
                             text=True, check=True).stdout.split()
        rows.append((out[0], float(out[1]), float(out[2])))
    print(f"\n{'backend':8s} {'hankel beta prime q=60':>24s} {'200 beta transforms':>20s}")
    for b, h, g in rows:
        print(f"{b:8s} {h:23.3f}s {g:19.3f}s")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--end-to-end", action="store_true")
    a = ap.parse_args(argv)
    code = bench(a.repeat)
    if a.end_to_end and code == 0:
        end_to_end()
    return code


if __name__ == "__main__":
    sys.exit(main())
