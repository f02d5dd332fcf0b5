"""Stages needed by the expansive dynamics to reach max out-degree ceil(d/2)."""

import argparse
import sys
import time

from orientlab import analysis, dynamics, generators
from orientlab.graph import VertexMeasure


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n", type=int, default=10_000)
    p.add_argument("--d", type=int, nargs="+", default=[4, 6])
    p.add_argument("--seeds", type=int, default=3)
    p.add_argument("--stages", type=int, default=40)
    args = p.parse_args(argv)

    for d in args.d:
        for seed in range(args.seeds):
            g = generators.gen_random_regular(args.n, d, seed)
            mu = VertexMeasure.uniform(g.vertex_count)
            t0 = time.perf_counter()
            final, trace = dynamics.run_expansive_dynamics(
                g, mu, dynamics.random_orientation(g, seed), args.stages)
            secs = time.perf_counter() - t0
            fied = analysis.laplacian_fiedler(g, seed)
            print(f"d={d} seed={seed} fiedler={fied:.3f} stages={len(trace.records) - 1} "
                  f"max out={final.max_out_degree()} target={(d + 1) // 2} "
                  f"truncated={trace.truncated} {secs:.1f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
