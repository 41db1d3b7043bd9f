"""Time the pure-Python and compiled series kernels side by side.

    python benchmarks/bench_kernels.py [--size 400] [--repeat 5] [--order 40]
"""
import argparse
import random
import sys
import time
from contextlib import contextmanager

from heckeconst import _pykernels, hecke, kernels

try:
    from heckeconst import _ckernels
except ImportError:
    _ckernels = None


@contextmanager
def use_backend(mod):
    saved = kernels.convolve, kernels.reciprocal, kernels.normalize
    kernels.convolve, kernels.reciprocal, kernels.normalize = mod.convolve, mod.reciprocal, mod.normalize
    try:
        yield
    finally:
        kernels.convolve, kernels.reciprocal, kernels.normalize = saved


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def pipeline(order):
    hecke.clear_memo()
    for m in (3, 5, 8, 12):
        exp = hecke.canonical_expansion(m, order)
        for k in (2, 4, 8):
            hecke.power_expansion(hecke.KBAR, k, m, order // 2)
    return exp


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--size", type=int, default=400, help="coefficients per operand")
    ap.add_argument("--bits", type=int, default=200, help="bit length of operand coefficients")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--order", type=int, default=40, help="expansion order for the pipeline case")
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)

    rng = random.Random(args.seed)
    a = [rng.getrandbits(args.bits) - (1 << (args.bits - 1)) for _ in range(args.size)]
    b = [rng.getrandbits(args.bits) - (1 << (args.bits - 1)) for _ in range(args.size)]
    a[0] = b[0] = 3
    small = a[: args.size // 4]

    backends = [("python", _pykernels)]
    if _ckernels is None:
        print("compiled extension not built; timing the python backend only", file=sys.stderr)
    else:
        backends.append(("cython", _ckernels))

    cases = [
        ("convolve", lambda m: m.convolve(a, b, args.size)),
        ("reciprocal", lambda m: m.reciprocal(small, len(small))),
        ("normalize", lambda m: m.normalize([x * 6 for x in a], 18)),
    ]
    results = {}
    print(f"{'case':<12}" + "".join(f"{name:>12}" for name, _ in backends) + f"{'speedup':>10}")
    for case, fn in cases + [("pipeline", None)]:
        row = []
        for name, mod in backends:
            if fn is None:
                with use_backend(mod):
                    row.append(best_of(lambda: pipeline(args.order), args.repeat))
                    results[(case, name)] = pipeline(args.order)
            else:
                row.append(best_of(lambda: fn(mod), args.repeat))
                results[(case, name)] = fn(mod)
        speed = f"{row[0] / row[1]:>9.2f}x" if len(row) == 2 else ""
        print(f"{case:<12}" + "".join(f"{t * 1e3:>10.2f}ms" for t in row) + speed)

    if len(backends) == 2:
        agree = all(results[(c, "python")] == results[(c, "cython")] for c, _ in cases + [("pipeline", None)])
        print("backends agree:", agree)
        return 0 if agree else 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
