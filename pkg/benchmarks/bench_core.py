"""Time the compiled and numpy Jacobi eigensolvers on Gram matrices of Ginibre products.

Usage: python3 benchmarks/bench_core.py [--sizes 20,50,100,150] [--repeat 3]
"""

import argparse
import time

import numpy as np

from raneylab import _pycore
from raneylab.rmt import ginibre

try:
    from raneylab import _core
except ImportError:
    _core = None


def best_time(fn, a, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(a)
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="20,50,100,150")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(0)
    print(f"{'N':>5} {'compiled [s]':>13} {'python [s]':>11} {'lapack [s]':>11} {'speedup':>8} "
          f"{'max |dw|':>10}")
    for n in (int(s) for s in args.sizes.split(",")):
        g = ginibre(n, rng) @ ginibre(n, rng)
        w = g @ g.conj().T
        t_py = best_time(_pycore.hermitian_eigh, w, args.repeat)
        t_la = best_time(np.linalg.eigvalsh, w, args.repeat)
        ref = np.linalg.eigvalsh(w)
        dev = np.max(np.abs(_pycore.hermitian_eigh(w)[0] - ref))
        if _core is not None:
            t_c = best_time(_core.hermitian_eigh, w, args.repeat)
            dev = max(dev, np.max(np.abs(_core.hermitian_eigh(w)[0] - ref)))
            print(f"{n:>5} {t_c:>13.4f} {t_py:>11.4f} {t_la:>11.4f} {t_py / t_c:>7.1f}x "
                  f"{dev:>10.2e}")
        else:
            print(f"{n:>5} {'n/a':>13} {t_py:>11.4f} {t_la:>11.4f} {'n/a':>8} {dev:>10.2e}")


if __name__ == "__main__":
    main()
