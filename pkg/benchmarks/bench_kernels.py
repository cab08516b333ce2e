"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--size 200000] [--repeat 5]
"""

import argparse
import time

import numpy as np

from yeegrid import _kernels_py

try:
    from yeegrid import _kernels
except ImportError:
    _kernels = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return min(times), result


def cases(size, rng):
    positions = np.sort(rng.uniform(0, 1, size))
    min_cell = 0.5 / size
    sizes = 10 ** rng.uniform(-4, -1, size)
    frozen = rng.random(size) < 0.05
    return {
        "merge_close": lambda k: k.merge_close(positions, min_cell),
        "grading_levels": lambda k: k.grading_levels(sizes, 2.0, 1e-5, frozen),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    backends = [("python", _kernels_py)] + ([("cython", _kernels)] if _kernels else [])
    if _kernels is None:
        print("compiled extension not built; timing the fallback only")
    print(f"{'kernel':<16}{'backend':<9}{'best [ms]':>11}{'speedup':>9}")
    for name, call in cases(args.size, np.random.default_rng(args.seed)).items():
        base = None
        outputs = []
        for label, mod in backends:
            t, out = best_of(lambda: call(mod), args.repeat)
            outputs.append(out)
            base = base or t
            print(f"{name:<16}{label:<9}{t * 1e3:>11.2f}{base / t:>8.1f}x")
        if len(outputs) == 2:
            a, b = outputs
            same = all(np.array_equal(x, y) for x, y in zip(a, b)) if isinstance(a, tuple) else np.array_equal(a, b)
            print(f"{'':<16}outputs identical: {same}")


if __name__ == "__main__":
    main()
