"""Command line: ``orientlab {orient,simulate,verify,density,expansion,gen}``.

Exit codes: 0 success, 1 a checked bound failed, 2 input error,
3 a run was truncated by the path budget.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
import warnings
from fractions import Fraction

from . import analysis, dynamics, generators, report, solver
from .graph import (GraphFormatError, GraphValidationError, UndirectedGraph, VertexMeasure,
                    format_edge_list, format_weights, parse_edge_list, parse_weights)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_TRUNCATED = 0, 1, 2, 3

log = logging.getLogger("orientlab")


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# inputs


def load_source(input_path: str | None, spec: str | None) -> tuple[UndirectedGraph, dict]:
    if (input_path is None) == (spec is None):
        raise InputError("give exactly one of --input or --spec")
    if spec is not None:
        return generators.from_spec(spec), {"spec": str(generators.GeneratorSpec.parse(spec))}
    with open(input_path, encoding="utf-8") as fh:
        g = parse_edge_list(fh.read())
    return g, {"file": input_path, "sha256": report.file_digest(input_path)}


def load_measure(graph: UndirectedGraph, weights: str | None, seed: int) -> tuple[VertexMeasure, str]:
    if weights is None:
        return VertexMeasure.uniform(graph.vertex_count), "uniform"
    if os.path.isfile(weights):
        with open(weights, encoding="utf-8") as fh:
            return parse_weights(fh.read(), graph.vertex_count), f"file:{report.file_digest(weights)}"
    return generators.gen_weights(graph, weights, seed), weights


# ---------------------------------------------------------------------------
# commands


def cmd_orient(graph: UndirectedGraph, source: dict, k: int | None = None) -> tuple[dict, int]:
    rep = report.new_report("orient", source, {"k": k})
    res = rep["results"]
    res["vertices"] = graph.vertex_count
    res["edges"] = graph.edge_count
    if k is not None:
        out = solver.k_orient(graph, k)
        res["feasible"] = out.feasible
        if out.feasible:
            res["max_out_degree"] = out.orientation.max_out_degree()
            res["orientation"] = out.orientation.arcs()
        else:
            c = out.certificate
            res["certificate"] = {"subset": sorted(c.subset), "edge_count": c.edge_count,
                                  "size": len(c.subset), "density": c.density}
            rep["checks"].append(report.inequality(
                "infeasibility: e(R) > k|R|", c.edge_count, ">", k * len(c.subset),
                c.edge_count > k * len(c.subset)))
        return rep, EXIT_OK if all(ch["pass"] for ch in rep["checks"]) else EXIT_FAIL

    number, o = solver.orientation_number(graph)
    res["orientation_number"] = number
    res["orientation"] = o.arcs()
    if graph.edge_count:
        cover = solver.sidewalk_cover(graph, o, number)
        res["sidewalk_cover"] = [list(map(list, cls)) for cls in cover.classes]
        valid = cover.is_valid(graph)
        rep["checks"].append(report.inequality("sidewalk classes", len(cover), "==", number,
                                               len(cover) == number and valid))
        dens = solver.max_density_subgraph(graph)
        res["density_certificate"] = {"subset": sorted(dens.subset), "edge_count": dens.edge_count,
                                      "density": dens.density}
        rep["checks"].append(report.inequality("ceil(max density) == o(G)",
                                               solver._ceil(dens.density), "==", number,
                                               solver._ceil(dens.density) == number))
    rep["checks"].append(report.inequality("max out-degree", o.max_out_degree(), "<=", number,
                                           o.max_out_degree() <= number))
    return rep, EXIT_OK if all(ch["pass"] for ch in rep["checks"]) else EXIT_FAIL


def default_k(graph: UndirectedGraph, measure: VertexMeasure, alpha: Fraction) -> int:
    """Smallest integer strictly above rho^2 alpha."""
    rho = measure.cocycle_bound(graph)
    bound = rho * rho * alpha
    return bound.numerator // bound.denominator + 1


def cmd_simulate(graph: UndirectedGraph, source: dict, *, k: int | None = None, stages: int = 12,
                 seed: int = 0, weights: str | None = None, mode: str = "theorem",
                 budget: int = dynamics.DEFAULT_BUDGET) -> tuple[dict, str, int]:
    """Run the staged dynamics and check every stage against the proven bounds.

    Returns the report, the CSV trace and the exit code.
    """
    measure, weight_desc = load_measure(graph, weights, seed)
    initial = dynamics.random_orientation(graph, seed)
    if mode == "expansive":
        if measure.cocycle_bound(graph) != 1:
            raise InputError("expansive mode needs an invariant (uniform) measure")
        if not graph.is_regular():
            raise InputError("expansive mode needs a regular graph")
        final, trace = dynamics.run_expansive_dynamics(graph, measure, initial, stages,
                                                       budget=budget)
        k = trace.k
    elif mode == "theorem":
        alpha = solver.max_density_subgraph(graph, measure).density
        if k is None:
            k = default_k(graph, measure, alpha)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", dynamics.HypothesisWarning)
            final, trace = dynamics.run_theorem_dynamics(graph, measure, initial, k, stages,
                                                         alpha=alpha, budget=budget)
    else:
        raise InputError(f"unknown mode {mode!r}")

    rep = report.new_report("simulate", source, {
        "k": k, "stages": stages, "seed": seed, "weights": weight_desc, "mode": mode,
        "budget": budget})
    res = rep["results"]
    res.update({
        "vertices": graph.vertex_count, "edges": graph.edge_count,
        "degree_bound": graph.degree_bound, "rho": trace.rho, "alpha": trace.alpha,
        "hypothesis_k_gt_rho2_alpha": trace.hypothesis_holds,
        "stages_run": len(trace.records) - 1, "truncated": trace.truncated,
        "final_max_out_degree": final.max_out_degree(),
        "final_mu_O": trace.records[-1].mu_O, "final_mu_I": trace.records[-1].mu_I,
        "total_flips": sum(r.flips for r in trace.records),
    })
    if mode == "expansive" and graph.is_regular():
        res["target"] = k
        rep["checks"].append(report.inequality("expansive endpoint: max out-degree",
                                               final.max_out_degree(), "<=", k,
                                               final.max_out_degree() <= k))
    fit = analysis.fit_decay(trace.mu_O_series()[1:], trace.rho * trace.alpha / k if k else Fraction(0))
    res["decay_fit"] = {"rate": fit.rate, "envelope_rate": fit.envelope_rate, "omitted": fit.omitted}
    for r in trace.records[1:]:
        rhs = analysis.lemma_bound(r.stage, trace.degree_bound, trace.rho, r.mu_O_start, r.mu_I_start)
        rep["checks"].append(report.inequality(f"stage {r.stage} lemma flipped measure",
                                               r.flipped_measure, "<=", rhs, r.flipped_measure <= rhs))
        if k > 0 and r.min_chain > r.stage:
            env = (trace.rho * trace.alpha / k) ** r.stage
            rep["checks"].append(report.inequality(f"stage {r.stage} claim2 mu(O)", r.mu_O, "<=",
                                                   env, r.mu_O <= env))
    if any(ch["pass"] is False for ch in rep["checks"]):
        code = EXIT_FAIL
    elif trace.truncated:
        code = EXIT_TRUNCATED
    else:
        code = EXIT_OK
    return rep, trace.to_csv(), code


def cmd_verify(graph: UndirectedGraph, source: dict) -> tuple[dict, int]:
    rep = report.new_report("verify", source, {})
    res = rep["results"]
    values = {}
    try:
        values["brute_force"] = solver.brute_force_orientation_number(graph)
    except solver.UnsupportedSize:
        values["brute_force"] = None
    values["orientation_number"] = solver.orientation_number(graph)[0]
    if graph.edge_count:
        values["edmonds"] = solver.edmonds_bound(graph)
        values["ceil_density"] = solver._ceil(solver.max_density_subgraph(graph).density)
    else:
        values["edmonds"] = values["ceil_density"] = 0
    res.update(values)
    got = {v for v in values.values() if v is not None}
    res["agree"] = len(got) == 1
    rep["checks"].append(report.inequality("oracle battery agrees", len(got), "==", 1, len(got) == 1))
    return rep, EXIT_OK if res["agree"] else EXIT_FAIL


def cmd_density(graph: UndirectedGraph, source: dict, weights: str | None, seed: int) -> tuple[dict, int]:
    measure, desc = load_measure(graph, weights, seed)
    rep = report.new_report("density", source, {"weights": desc})
    cert = solver.max_density_subgraph(graph, measure)
    rho = measure.cocycle_bound(graph)
    rep["results"].update({
        "subset": sorted(cert.subset), "edge_count": cert.edge_count,
        "vertex_mass": cert.vertex_mass, "edge_mass": cert.edge_mass, "alpha": cert.density,
        "rho": rho, "cost_lower_bound": solver._ceil(2 * cert.density / (1 + rho)),
    })
    return rep, EXIT_OK


def cmd_expansion(graph: UndirectedGraph, source: dict, weights: str | None, seed: int) -> tuple[dict, int]:
    measure, desc = load_measure(graph, weights, seed)
    rep = report.new_report("expansion", source, {"weights": desc, "seed": seed})
    est = analysis.expansion_constant(graph, measure, seed)
    res = rep["results"]
    res.update({"exact": est.exact, "spectral_lower": round(est.spectral_lower, 9),
                "fiedler": round(est.fiedler, 9),
                "witness": sorted(est.witness_set) if est.witness_set is not None else None})
    if graph.is_regular() and measure.is_uniform():
        lam = float(est.exact) if est.exact is not None else est.spectral_lower
        res["expansive_c"] = round(analysis.expansive_constant(graph.degree_bound, lam), 9)
    if est.exact is not None:
        ok = float(est.exact) >= est.spectral_lower - 1e-6
        rep["checks"].append(report.inequality("exact >= spectral lower bound", est.exact, ">=",
                                               Fraction(est.spectral_lower).limit_denominator(10**9), ok))
        return rep, EXIT_OK if ok else EXIT_FAIL
    return rep, EXIT_OK


# ---------------------------------------------------------------------------
# argparse


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="orientlab", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, weights=False):
        src = sp.add_mutually_exclusive_group(required=True)
        src.add_argument("--input", help="edge-list file")
        src.add_argument("--spec", help="generator spec, e.g. torus:dims=64x64")
        sp.add_argument("--out", help="write the JSON report here instead of stdout")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--timings", action="store_true", help="include wall-clock timings")
        if weights:
            sp.add_argument("--weights", help="weight file or profile (uniform, two-level:r, random:lo:hi)")

    sp = sub.add_parser("orient", help="orientation number or a k-orientation")
    common(sp)
    sp.add_argument("--k", type=int)

    sp = sub.add_parser("simulate", help="staged augmenting-chain dynamics")
    common(sp, weights=True)
    sp.add_argument("--k", type=int)
    sp.add_argument("--stages", type=int, default=12)
    sp.add_argument("--mode", choices=("theorem", "expansive"), default="theorem")
    sp.add_argument("--trace", help="CSV trace path")
    sp.add_argument("--budget", type=int, default=dynamics.DEFAULT_BUDGET)

    sp = sub.add_parser("verify", help="brute force vs solver vs covering formula vs density")
    common(sp)

    sp = sub.add_parser("density", help="maximum-density subgraph")
    common(sp, weights=True)

    sp = sub.add_parser("expansion", help="expansion constant estimate")
    common(sp, weights=True)

    sp = sub.add_parser("gen", help="emit a generated graph as an edge list")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--out")
    sp.add_argument("--weights", help="weight profile to emit alongside")
    sp.add_argument("--weights-out")
    sp.add_argument("--seed", type=int, default=0)
    return p


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    t0 = time.perf_counter()
    try:
        if args.command == "gen":
            g = generators.from_spec(args.spec)
            text = format_edge_list(g)
            if args.out:
                report.write_atomic(args.out, text)
            else:
                sys.stdout.write(text)
            if args.weights:
                wtext = format_weights(generators.gen_weights(g, args.weights, args.seed))
                if not args.weights_out:
                    raise InputError("--weights needs --weights-out")
                report.write_atomic(args.weights_out, wtext)
            return EXIT_OK

        graph, source = load_source(args.input, args.spec)
        t_load = time.perf_counter()
        trace_csv = None
        if args.command == "orient":
            rep, code = cmd_orient(graph, source, args.k)
        elif args.command == "simulate":
            rep, trace_csv, code = cmd_simulate(graph, source, k=args.k, stages=args.stages,
                                                seed=args.seed, weights=args.weights,
                                                mode=args.mode, budget=args.budget)
        elif args.command == "verify":
            rep, code = cmd_verify(graph, source)
        elif args.command == "density":
            rep, code = cmd_density(graph, source, args.weights, args.seed)
        else:
            rep, code = cmd_expansion(graph, source, args.weights, args.seed)
    except (InputError, GraphFormatError, GraphValidationError, solver.UnsupportedSize,
            generators.GenerationError, OSError, ValueError) as exc:
        print(f"orientlab: error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    if args.timings:
        rep["timings"] = {"load_s": round(t_load - t0, 6),
                          "total_s": round(time.perf_counter() - t0, 6)}
    text = report.to_json(rep)
    if args.out:
        report.write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    if trace_csv is not None and getattr(args, "trace", None):
        report.write_atomic(args.trace, trace_csv)
    return code


if __name__ == "__main__":
    sys.exit(main())
