"""Compare the compiled kernels against the NumPy fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--threads 4]

Both backends get identical inputs; the script also checks that their answers
agree before printing timings.
"""

import argparse
import math
import time

import numpy as np

from coherent_amp import _purepy
from coherent_amp.fock import CoherentLabel
from coherent_amp.geometry import gram
from coherent_amp.transform import _search_scale

try:
    from coherent_amp import _kernels
except ImportError:
    _kernels = None


def dykstra_case(n, p):
    labels_a = [CoherentLabel(1.0, 2 * math.pi * k / n) for k in range(n)]
    labels_b = [lab.scaled(2.0) for lab in labels_a]
    a, b = gram(labels_a).entries, gram(labels_b).entries
    return (a, b, np.full(n, p), _search_scale(b), 50000, 1e-9, 1e-8, 50)


def sweep_case(steps):
    return (
        np.linspace(0.1, 3.0, steps),
        np.linspace(0.1, 3.0, steps),
        np.linspace(0.0, math.pi, steps),
        np.linspace(0.5, 2.5, steps),
        np.linspace(0.5, 2.5, steps),
    )


def best_time(fn, repeat):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--sweep-steps", type=int, default=30)
    args = ap.parse_args()
    if _kernels is None:
        print("compiled kernels not built; run `python setup.py build_ext --inplace`")
        return 1

    print(f"{'kernel':<28}{'python [s]':>12}{'cython [s]':>12}{'speedup':>10}  agree")
    # probabilities just past (or, for the third case, just inside) the largest
    # feasible uniform value, so the search runs to a stall or a slow convergence
    for n, p in ((2, 0.88), (3, 0.575), (4, 0.2476), (4, 0.258)):
        case = dykstra_case(n, p)
        tp, rp = best_time(lambda: _purepy.lifted_dykstra(*case), args.repeat)
        tc, rc = best_time(lambda: _kernels.lifted_dykstra(*case), args.repeat)
        agree = rp[0] == rc[0] and rp[2] == rc[2] and np.allclose(rp[1], rc[1], atol=1e-9)
        label = f"dykstra n={n} ({rc[2]} iters)"
        print(f"{label:<28}{tp:>12.4f}{tc:>12.4f}{tp / tc:>10.1f}  {agree}")

    case = sweep_case(args.sweep_steps)
    tp, rp = best_time(lambda: _purepy.sweep_grid(*case, num_threads=args.threads), args.repeat)
    tc, rc = best_time(lambda: _kernels.sweep_grid(*case, num_threads=args.threads), args.repeat)
    agree = np.array_equal(rp[0], rc[0]) and np.array_equal(rp[1], rc[1], equal_nan=True)
    label = f"sweep {args.sweep_steps}^5 points"
    print(f"{label:<28}{tp:>12.4f}{tc:>12.4f}{tp / tc:>10.1f}  {agree}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
