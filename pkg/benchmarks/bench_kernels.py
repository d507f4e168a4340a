"""Compare the compiled and pure-Python integration kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from instanton_lab import _kernels_py
from instanton_lab.quat import GaugeAlgebra

try:
    from instanton_lab import _kernels
except ImportError:
    _kernels = None


def cases():
    c = GaugeAlgebra.su2().structure_constants
    T0 = np.diag([1.0, 0.5, -0.3]) * 0.2
    return {
        "ym_rk4 (50k steps)": lambda k: k.ym_rk4(0.1, -1 / 1.01, 0.0, 1e-3, 49_900, 1e100),
        "nahm_rk4 (5k steps)": lambda k: k.nahm_rk4(T0, c, 1e-3, 5_000, 1e8),
    }


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    print(f"{'kernel':<22}{'python [s]':>12}{'compiled [s]':>14}{'speedup':>10}  max |diff|")
    for name, fn in cases().items():
        t_py = min(timeit.repeat(lambda: fn(_kernels_py), number=1, repeat=args.repeat))
        if _kernels is None:
            print(f"{name:<22}{t_py:>12.4f}{'n/a':>14}{'':>10}")
            continue
        t_c = min(timeit.repeat(lambda: fn(_kernels), number=1, repeat=args.repeat))
        a, b = fn(_kernels_py), fn(_kernels)
        diff = max(float(np.max(np.abs(np.asarray(x) - np.asarray(y)))) for x, y in zip(a, b) if np.ndim(x))
        print(f"{name:<22}{t_py:>12.4f}{t_c:>14.4f}{t_py / t_c:>10.1f}  {diff:.1e}")


if __name__ == "__main__":
    main()
