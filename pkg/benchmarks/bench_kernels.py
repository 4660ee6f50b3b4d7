"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--nodes 200000] [--degree 8] [--block 8]
"""

import argparse
import timeit

import numpy as np

from reduced_google import _pykernels, oracle

try:
    from reduced_google import _ckernels
except ImportError:
    _ckernels = None


def best_of(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, default=200_000)
    ap.add_argument("--degree", type=float, default=8.0)
    ap.add_argument("--block", type=int, default=8, help="columns per matmat call")
    ap.add_argument("--steps", type=int, default=1_000_000, help="random surfer steps")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    g = oracle.random_graph(args.nodes, args.degree, seed=0)
    rng = np.random.default_rng(0)
    x = rng.random((args.nodes, args.block))
    coins, picks = rng.random(args.steps), rng.random(args.steps)
    print(f"N={g.node_count} edges={g.edge_count} block={args.block} surfer steps={args.steps}")

    backends = {"python": _pykernels}
    if _ckernels is not None:
        backends["cython"] = _ckernels
    else:
        print("compiled extension not built; timing the fallback only")

    results = {}
    for name, k in backends.items():
        counts = np.zeros(g.node_count, dtype=np.int64)
        results[name] = {
            "matmat": best_of(lambda: k.transition_matmat(g.indptr, g.indices, x), args.repeat),
            "rmatmat": best_of(lambda: k.transition_rmatmat(g.indptr, g.indices, x), args.repeat),
            "surfer": best_of(lambda: k.surfer_walk(g.indptr, g.indices, 0.85, coins, picks, 0, counts), 1),
        }

    print(f"{'kernel':<10}" + "".join(f"{name:>12}" for name in results) + ("     speedup" if len(results) > 1 else ""))
    for kernel in ("matmat", "rmatmat", "surfer"):
        row = f"{kernel:<10}" + "".join(f"{r[kernel] * 1e3:>10.1f}ms" for r in results.values())
        if len(results) > 1:
            row += f"{results['python'][kernel] / results['cython'][kernel]:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
