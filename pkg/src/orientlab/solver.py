"""Exact answers on finite graphs.

Orientation number by path reversal, maximum-density subgraphs by min-cut,
the bicircular-matroid covering formula, and pseudoforest (sidewalk) covers.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import networkx as nx
import numpy as np

from .graph import Orientation, UndirectedGraph, VertexMeasure, oriented_ball

ENUMERATION_LIMIT = 20
BRUTE_FORCE_EDGE_LIMIT = 22


class UnsupportedSize(ValueError):
    pass


def _ceil(q: Fraction) -> int:
    return -(-q.numerator // q.denominator)


@dataclass(frozen=True)
class DensityCertificate:
    """A vertex set with its (weighted) edge mass, vertex mass and their ratio.

    Uniform measure: ``edge_mass`` = |E(G|S)| and ``vertex_mass`` = |S|.
    Weighted: ``vertex_mass`` = mu(S) and ``edge_mass`` = 1/2 sum_{x in S} w(x)|G_x & S|,
    so ``density`` is the cost of G restricted to S.
    """

    subset: frozenset[int]
    edge_count: int
    vertex_mass: Fraction
    edge_mass: Fraction
    density: Fraction

    def __post_init__(self):
        if not self.subset:
            raise ValueError("density certificate needs a nonempty subset")
        if self.density != self.edge_mass / self.vertex_mass:
            raise ValueError("density does not match edge_mass / vertex_mass")


def certificate_for(graph: UndirectedGraph, subset: Iterable[int],
                    measure: VertexMeasure | None = None) -> DensityCertificate:
    s = frozenset(subset)
    inner = [(u, v) for u, v in graph.edges if u in s and v in s]
    if measure is None or measure.is_uniform():
        vm, em = Fraction(len(s)), Fraction(len(inner))
    else:
        a = measure.numerators
        vm = Fraction(sum(a[x] for x in s), measure.total)
        em = Fraction(sum(a[u] + a[v] for u, v in inner), 2 * measure.total)
    return DensityCertificate(s, len(inner), vm, em, em / vm)


# ---------------------------------------------------------------------------
# k-orientations by path reversal


def balanced_orientation(graph: UndirectedGraph) -> Orientation:
    """Orientation with |out(x) - in(x)| <= 1 everywhere, from Euler circuits.

    Odd-degree vertices are joined to a virtual vertex, every trail of
    Hierholzer's walk is oriented in walking order, and the virtual edges are
    dropped.
    """
    n = graph.vertex_count
    virtual = n
    adj: list[list[tuple[int, int]]] = [list(zip(graph.adjacency[x], graph.incidence[x]))
                                        for x in range(n)]
    adj.append([])
    m = graph.edge_count
    extra = m
    for x in range(n):
        if len(adj[x]) % 2:
            adj[x].append((virtual, extra))
            adj[virtual].append((x, extra))
            extra += 1
    used = bytearray(extra)
    flipped = bytearray(m)
    ptr = [0] * (n + 1)
    for start in range(n + 1):
        stack = [start]
        while stack:
            x = stack[-1]
            row = adj[x]
            i = ptr[x]
            while i < len(row) and used[row[i][1]]:
                i += 1
            ptr[x] = i
            if i == len(row):
                stack.pop()
                continue
            y, e = row[i]
            used[e] = 1
            if e < m:
                flipped[e] = 1 if x > y else 0
            stack.append(y)
    return Orientation(graph, flipped)


@dataclass
class KOrientResult:
    feasible: bool
    orientation: Orientation
    certificate: DensityCertificate | None = None


def _reverse_to_underfull(o: Orientation, x: int, k: int) -> bool:
    """BFS from x along oriented edges to a vertex with out < k; flip that path."""
    g = o.graph
    adj, inc, fl, out = g.adjacency, g.incidence, o.flipped, o.out
    parent = {x: (-1, -1)}
    q = deque([x])
    while q:
        v = q.popleft()
        for w, e in zip(adj[v], inc[v]):
            if w in parent or fl[e] != (v > w):
                continue
            parent[w] = (v, e)
            if out[w] < k:
                while w != x:
                    w, e = parent[w]
                    o.flip_edge(e)
                return True
            q.append(w)
    return False


def k_orient(graph: UndirectedGraph, k: int, initial: Orientation | None = None) -> KOrientResult:
    """Find an orientation with max out-degree <= k, or certify there is none.

    The certificate is the set R reachable along oriented edges from a stuck
    over-full vertex; every edge leaving a vertex of R stays in R and all of R
    has out-degree >= k, so |E(G|R)| > k|R|.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    o = balanced_orientation(graph) if initial is None else initial.copy()
    out = o.out
    for x in range(graph.vertex_count):
        while out[x] > k:
            if not _reverse_to_underfull(o, x, k):
                reach = oriented_ball(o, [x], graph.vertex_count, +1)
                return KOrientResult(False, o, certificate_for(graph, reach))
    return KOrientResult(True, o)


def orientation_number(graph: UndirectedGraph) -> tuple[int, Orientation]:
    """Least k with a k-orientation, and an orientation attaining it."""
    if graph.edge_count == 0:
        return 0, Orientation(graph)
    best = balanced_orientation(graph)
    hi = best.max_out_degree()
    lo = max(1, _ceil(Fraction(graph.edge_count, graph.vertex_count)))
    while lo < hi:
        mid = (lo + hi) // 2
        res = k_orient(graph, mid, best)
        if res.feasible:
            hi, best = mid, res.orientation
        else:
            lo = max(mid + 1, _ceil(res.certificate.density))
    return hi, best


# ---------------------------------------------------------------------------
# maximum density


def _edge_masses(graph: UndirectedGraph, measure: VertexMeasure | None) -> tuple[list[int], list[int]]:
    n = graph.vertex_count
    if measure is None or measure.is_uniform():
        return [1] * n, [2] * graph.edge_count
    a = measure.numerators
    return list(a), [a[u] + a[v] for u, v in graph.edges]


def _best_improvement(graph: UndirectedGraph, w: list[int], c: list[int], g: Fraction) -> frozenset[int]:
    """Source side of a min cut maximising c(E(A)) - 2 g w(A) (c(E(A)) counts both ends)."""
    p, q = g.numerator, g.denominator
    n = graph.vertex_count
    dcap = [0] * n
    net = nx.DiGraph()
    for (u, v), cu in zip(graph.edges, c):
        net.add_edge(u, v, capacity=q * cu)
        net.add_edge(v, u, capacity=q * cu)
        dcap[u] += q * cu
        dcap[v] += q * cu
    big = max(dcap, default=0) + 1
    for v in range(n):
        net.add_edge("s", v, capacity=big)
        net.add_edge(v, "t", capacity=big - dcap[v] + 4 * p * w[v])
    _, (side, _) = nx.minimum_cut(net, "s", "t")
    return frozenset(v for v in side if v != "s")


def _density_by_flow(graph: UndirectedGraph, measure: VertexMeasure | None) -> DensityCertificate:
    # Dinkelbach: each round jumps to the density of a strictly better set.
    w, c = _edge_masses(graph, measure)
    best = certificate_for(graph, range(graph.vertex_count), measure)
    while True:
        cand = _best_improvement(graph, w, c, best.density)
        if not cand:
            return best
        cert = certificate_for(graph, cand, measure)
        if cert.density <= best.density:
            return best
        best = cert


def _density_by_enumeration(graph: UndirectedGraph, measure: VertexMeasure | None) -> DensityCertificate:
    n = graph.vertex_count
    if n > ENUMERATION_LIMIT:
        raise UnsupportedSize(f"exact enumeration limited to n <= {ENUMERATION_LIMIT}, got {n}")
    w, c = _edge_masses(graph, measure)
    masks = np.arange(1, 1 << n, dtype=np.int64)
    wsum = np.zeros(masks.shape, dtype=np.int64)
    for v in range(n):
        wsum += ((masks >> v) & 1) * w[v]
    csum = np.zeros(masks.shape, dtype=np.int64)
    for (u, v), cu in zip(graph.edges, c):
        csum += ((masks >> u) & (masks >> v) & 1) * cu
    ratio = csum / wsum
    top = ratio.max()
    cands = masks[ratio >= top - 1e-9 * max(1.0, top)]
    best = None
    for mask in cands.tolist():
        cert = certificate_for(graph, (v for v in range(n) if mask >> v & 1), measure)
        if best is None or cert.density > best.density or (
                cert.density == best.density and len(cert.subset) > len(best.subset)):
            best = cert
    return best


def max_density_subgraph(graph: UndirectedGraph, measure: VertexMeasure | None = None,
                         method: str = "auto") -> DensityCertificate:
    """Vertex set maximising the cost of G restricted to it (edges per vertex
    when uniform).  ``method`` is ``auto``, ``flow`` or ``enumerate``."""
    if graph.vertex_count == 0:
        raise ValueError("empty vertex set")
    if method == "enumerate":
        return _density_by_enumeration(graph, measure)
    if method not in ("auto", "flow"):
        raise ValueError(f"unknown method {method!r}")
    if graph.edge_count == 0:
        return certificate_for(graph, range(graph.vertex_count), measure)
    if method == "auto" and graph.is_regular():
        # sum_{x in A} w(x)|G_x & A| <= d w(A), with equality at A = V
        return certificate_for(graph, range(graph.vertex_count), measure)
    return _density_by_flow(graph, measure)


def cost_lower_bound(graph: UndirectedGraph, measure: VertexMeasure) -> int:
    """ceil(2 alpha / (1 + rho)), a lower bound on the orientation number."""
    alpha = max_density_subgraph(graph, measure).density
    rho = measure.cocycle_bound(graph)
    return _ceil(2 * alpha / (1 + rho))


# ---------------------------------------------------------------------------
# bicircular matroid


def _components(mask: int, nb: list[int]) -> list[int]:
    comps = []
    rest = mask
    while rest:
        low = rest & -rest
        comp = frontier = low
        while frontier:
            nxt = 0
            f = frontier
            while f:
                b = f & -f
                nxt |= nb[b.bit_length() - 1]
                f ^= b
            nxt &= mask & ~comp
            comp |= nxt
            frontier = nxt
        comps.append(comp)
        rest &= ~comp
    return comps


def _inner_edges(mask: int, nb: list[int]) -> int:
    twice = 0
    m = mask
    while m:
        b = m & -m
        twice += (nb[b.bit_length() - 1] & mask).bit_count()
        m ^= b
    return twice // 2


def bicircular_rank(graph: UndirectedGraph, subset: Iterable[int]) -> int:
    """|S| minus the number of acyclic components of G|S."""
    nb = _neighbor_masks(graph)
    mask = sum(1 << v for v in set(subset))
    rank = 0
    for comp in _components(mask, nb):
        size = comp.bit_count()
        rank += size if _inner_edges(comp, nb) >= size else size - 1
    return rank


def _neighbor_masks(graph: UndirectedGraph) -> list[int]:
    return [sum(1 << y for y in row) for row in graph.adjacency]


def edmonds_bound(graph: UndirectedGraph, method: str = "auto") -> int:
    """max over vertex sets S of ceil(|E(G|S)| / rank(S)), rank from the bicircular matroid."""
    if graph.edge_count == 0:
        raise ValueError("graph has no edges")
    n = graph.vertex_count
    if method == "flow" or (method == "auto" and n > ENUMERATION_LIMIT):
        return _ceil(max_density_subgraph(graph).density)
    if n > ENUMERATION_LIMIT:
        raise UnsupportedSize(f"exact enumeration limited to n <= {ENUMERATION_LIMIT}, got {n}")
    nb = _neighbor_masks(graph)
    best = 0
    for mask in range(1, 1 << n):
        e = _inner_edges(mask, nb)
        if e == 0:
            continue
        rank = 0
        for comp in _components(mask, nb):
            size = comp.bit_count()
            rank += size if _inner_edges(comp, nb) >= size else size - 1
        best = max(best, -(-e // rank))
    return best


# ---------------------------------------------------------------------------
# sidewalks


@dataclass(frozen=True)
class SidewalkCover:
    classes: tuple[tuple[tuple[int, int], ...], ...]

    def __len__(self):
        return len(self.classes)

    def is_valid(self, graph: UndirectedGraph) -> bool:
        flat = [e for cls in self.classes for e in cls]
        if sorted(flat) != list(graph.edges):
            return False
        return all(is_sidewalk(UndirectedGraph.from_edges(graph.vertex_count, cls))
                   for cls in self.classes)


def is_sidewalk(graph: UndirectedGraph) -> bool:
    """Every connected component has at most as many edges as vertices."""
    n = graph.vertex_count
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in graph.edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    verts = [0] * n
    edges = [0] * n
    for x in range(n):
        verts[find(x)] += 1
    for u, _ in graph.edges:
        edges[find(u)] += 1
    return all(edges[r] <= verts[r] for r in range(n))


def sidewalk_cover(graph: UndirectedGraph, orientation: Orientation, k: int | None = None) -> SidewalkCover:
    """Split every vertex's out-edges over k classes; each class is a functional graph."""
    if k is None:
        k = orientation.max_out_degree()
    if orientation.max_out_degree() > k:
        raise ValueError(f"orientation has out-degree {orientation.max_out_degree()} > k={k}")
    classes: list[list[tuple[int, int]]] = [[] for _ in range(k)]
    for x in range(graph.vertex_count):
        for i, y in enumerate(orientation.out_neighbors(x)):
            classes[i].append((x, y) if x < y else (y, x))
    return SidewalkCover(tuple(tuple(sorted(c)) for c in classes))


# ---------------------------------------------------------------------------
# brute force oracle


def brute_force_orientation_number(graph: UndirectedGraph) -> int:
    """Minimum over all 2^m orientations of the maximum out-degree."""
    m = graph.edge_count
    if m > BRUTE_FORCE_EDGE_LIMIT:
        raise UnsupportedSize(f"brute force limited to {BRUTE_FORCE_EDGE_LIMIT} edges, got {m}")
    if m == 0:
        return 0
    n = graph.vertex_count
    best = m
    chunk = 1 << min(m, 18)
    for start in range(0, 1 << m, chunk):
        masks = np.arange(start, start + chunk, dtype=np.int64)
        out = np.zeros((n, chunk), dtype=np.int8)
        for e, (u, v) in enumerate(graph.edges):
            bit = ((masks >> e) & 1).astype(np.int8)
            out[u] += 1 - bit
            out[v] += bit
        best = min(best, int(out.max(axis=0).min()))
    return best
