"""Compare the compiled pair-scan kernels with the numpy fallback.

Usage:
    python3 benchmarks/bench_kernels.py [--repeats 5]
"""

import argparse
import time

import numpy as np

from bayes_security import _kernels_py

try:
    from bayes_security import _kernels
except ImportError:  # extension not built
    _kernels = None

SHAPES = [(30, 12), (100, 50), (300, 100), (1000, 20)]


def _time(fn, rows, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(rows)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    backends = {"python": _kernels_py}
    if _kernels is not None:
        backends["compiled"] = _kernels
    print(f"{'kernel':<18}{'n x m':>12}" + "".join(f"{b:>14}" for b in backends) + f"{'speedup':>10}")
    for n, m in SHAPES:
        rows = rng.dirichlet(np.ones(m), size=n)
        for name in ("max_pairwise_tv", "pruned_max_tv"):
            times = {b: _time(getattr(mod, name), rows, args.repeats) for b, mod in backends.items()}
            cells = "".join(f"{times[b] * 1e3:>12.3f}ms" for b in backends)
            speed = f"{times['python'] / times['compiled']:>9.1f}x" if "compiled" in times else ""
            print(f"{name:<18}{f'{n} x {m}':>12}{cells}{speed}")


if __name__ == "__main__":
    main()
