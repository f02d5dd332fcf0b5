"""Minimum-outdegree orientations: exact solvers and augmenting-chain dynamics."""

__version__ = "0.1.0"

from .graph import (Orientation, UndirectedGraph, VertexMeasure, edge_measure, load_graph,
                    oriented_ball)
from .solver import (brute_force_orientation_number, cost_lower_bound, edmonds_bound,
                     is_sidewalk, k_orient, max_density_subgraph, orientation_number,
                     sidewalk_cover)
from .dynamics import (build_chain_pool, flip_chain, is_augmenting_chain, over_under_sets,
                       run_expansive_dynamics, run_lemma_augment, run_theorem_dynamics,
                       shortest_augmenting_chain_length, verify_claim1)

__all__ = [
    "Orientation", "UndirectedGraph", "VertexMeasure", "edge_measure", "load_graph",
    "oriented_ball", "brute_force_orientation_number", "cost_lower_bound", "edmonds_bound",
    "is_sidewalk", "k_orient", "max_density_subgraph", "orientation_number", "sidewalk_cover",
    "build_chain_pool", "flip_chain", "is_augmenting_chain", "over_under_sets",
    "run_expansive_dynamics", "run_lemma_augment", "run_theorem_dynamics",
    "shortest_augmenting_chain_length", "verify_claim1",
]
