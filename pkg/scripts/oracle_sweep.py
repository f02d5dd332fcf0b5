"""Brute force vs solver vs covering formula vs density on seeded random graphs."""

import argparse
import math
import sys

from orientlab import generators, solver
from orientlab.graph import UndirectedGraph


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--max-n", type=int, default=7)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)

    gen = generators.rng(args.seed)
    bad = 0
    for i in range(args.count):
        n = int(gen.integers(2, args.max_n + 1))
        prob = float(gen.uniform(0.1, 1.0))
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if gen.random() < prob]
        g = UndirectedGraph.from_edges(n, edges)
        if not edges:
            continue
        vals = (solver.brute_force_orientation_number(g), solver.orientation_number(g)[0],
                solver.edmonds_bound(g),
                math.ceil(solver.max_density_subgraph(g).density))
        if len(set(vals)) != 1:
            bad += 1
            print(f"mismatch #{i}: {vals} on {g.edges}")
    print(f"{args.count} graphs, {bad} mismatches")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
