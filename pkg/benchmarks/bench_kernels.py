"""Compare the numba and numpy kernel backends on full frame scans.

Run as a script:

    python3 benchmarks/bench_kernels.py [--n 4] [--repeat 3]

The first numba call includes compilation unless a disk cache exists, so
each kernel is warmed once before timing.
"""

import argparse
import time

import numpy as np

from qmodal.kernels import numpy_impl

try:
    from qmodal.kernels import numba_impl
except ImportError:
    numba_impl = None

KERNELS = ["classify_frames", "semantic_flags", "op_distribution_flags",
           "fact1_all"]


def time_call(fn, n, masks, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(n, masks)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=4,
                        help="state count; scans all 2^(n*n) relations")
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    n = args.n
    if n > 5:
        raise SystemExit("n > 5 scans more than 2^25 relations; refusing")
    total = 1 << (n * n)
    # cap the slow subset-quantified kernels at n=5 scan sizes
    masks = np.arange(total, dtype=np.int64)
    print(f"n={n}: {total} relation masks, best of {args.repeat}")

    for name in KERNELS:
        np_time, np_out = time_call(getattr(numpy_impl, name), n, masks,
                                    args.repeat)
        line = f"{name:24s} numpy {np_time * 1000:10.1f} ms"
        if numba_impl is not None:
            fn = getattr(numba_impl, name)
            fn(n, masks[:8])  # warm the jit once
            nb_time, nb_out = time_call(fn, n, masks, args.repeat)
            agree = np.array_equal(np_out, nb_out)
            line += (f"   numba {nb_time * 1000:10.1f} ms"
                     f"   speedup {np_time / nb_time:6.1f}x"
                     f"   agree={agree}")
        print(line)


if __name__ == "__main__":
    main()
