"""Compare the compiled and pure-Python kernels on grid and random bipartite graphs.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import timeit

from quadric import _kernels
from quadric.graph import grid_graph, SimplicialGraph


def random_bipartite(n, p, seed):
    rng = random.Random(seed)
    left = [f"a{i}" for i in range(n)]
    right = [f"b{i}" for i in range(n)]
    edges = [(u, w) for u in left for w in right if rng.random() < p]
    return SimplicialGraph(left + right, edges)


def cases():
    yield "grid 8x8", grid_graph(8, 8)
    yield "grid 12x12", grid_graph(12, 12)
    yield "bipartite 2x15 p=0.3", random_bipartite(15, 0.3, 1)


def run(repeat):
    rows = []
    for name, g in cases():
        adj = g._adj_index
        dist = _kernels.all_pairs_distances(adj)
        jobs = {
            "distances": lambda: _kernels.all_pairs_distances(adj),
            "cycles<=6": lambda: _kernels.embedded_cycles(adj, 6),
            "isometric<=8": lambda: _kernels.isometric_cycles(adj, dist, 8),
        }
        for job, fn in jobs.items():
            times = {}
            for b in _kernels.available_backends():
                _kernels.use_backend(b)
                times[b] = min(timeit.repeat(fn, number=1, repeat=repeat))
            rows.append((name, job, times))
    _kernels.use_backend(_kernels.available_backends()[0])
    return rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = _kernels.available_backends()
    print(f"{'graph':24} {'kernel':14} " + " ".join(f"{b:>10}" for b in backends) + "   speedup")
    for name, job, times in run(args.repeat):
        cols = " ".join(f"{times[b] * 1e3:9.2f}ms" for b in backends)
        sp = times["python"] / times["cython"] if "cython" in times and times["cython"] else float("nan")
        print(f"{name:24} {job:14} {cols}   {sp:6.1f}x")


if __name__ == "__main__":
    main()
