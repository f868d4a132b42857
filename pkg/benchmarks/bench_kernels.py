"""Time the Fock basis kernels under both backends.

    python3 benchmarks/bench_kernels.py --d 4 --N 8 --repeat 5

Each numba kernel is called once before timing so compilation is excluded.
"""

import argparse
import time

import numpy as np

from fockforge import _kernels


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def cases(d, N, rng):
    h = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    weights = rng.uniform(0.1, 0.9, d)
    return {
        "creation_coo(left)": lambda b: _kernels.creation_coo(d, N, h, True, backend=b),
        "creation_coo(right)": lambda b: _kernels.creation_coo(d, N, h, False, backend=b),
        "flip_permutation": lambda b: _kernels.flip_permutation(d, N, backend=b),
        "product_diagonal": lambda b: _kernels.product_diagonal(d, N, weights, backend=b),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--d", type=int, default=4)
    parser.add_argument("--N", type=int, default=8)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    dim = int(_kernels.sector_offsets(args.d, args.N)[-1])
    print(f"d={args.d} N={args.N} dim={dim} numba available: {_kernels.NUMBA_AVAILABLE}")
    backends = ["numpy"] + (["numba"] if _kernels.NUMBA_AVAILABLE else [])
    print(f"{'kernel':<22}" + "".join(f"{b:>12}" for b in backends) + ("     speedup" if len(backends) == 2 else ""))
    for name, fn in cases(args.d, args.N, np.random.default_rng(args.seed)).items():
        if "numba" in backends:
            fn("numba")  # compile
        times = [best_of(lambda: fn(b), args.repeat) for b in backends]
        row = f"{name:<22}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times)
        if len(times) == 2:
            row += f"{times[0] / times[1]:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
