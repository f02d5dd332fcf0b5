"""Augmenting-chain dynamics on finite graphs.

An augmenting chain for threshold ``k`` is an oriented simple path from a
vertex of out-degree > k to a vertex of out-degree < k.  Reversing every edge
of such a chain moves one unit of out-degree from its first vertex to its last
and leaves every other out-degree unchanged.

One *stage* with parameter ``n`` repeatedly sweeps a proper colouring of the
space of unoriented simple paths of length <= n, flipping, colour class by
colour class, every path that is currently an augmenting chain, until a sweep
flips nothing.  Two colourings are available:

* an explicit :class:`ChainPool` (every path enumerated, greedily coloured in
  lexicographic order) -- only practical on small graphs;
* the *anchored* colouring used by default: a path is read from its smaller
  endpoint (its anchor) and each path is its own class, classes ordered by the
  anchored vertex sequence.  Sweeping this order only needs to look at paths
  anchored at over-full or under-full vertices, which keeps large instances
  tractable.
"""

from __future__ import annotations

import csv
import io
import logging
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .graph import (Orientation, UndirectedGraph, VertexMeasure, changed_edge_measure,
                    oriented_ball, oriented_distances)

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10_000_000

TRACE_COLUMNS = ("stage", "color", "flips", "mu_O", "mu_I", "flipped_measure", "min_chain")


class ChainBudgetExceeded(RuntimeError):
    def __init__(self, count: int, budget: int):
        self.count = count
        self.budget = budget
        super().__init__(f"path budget exceeded: {count} paths > budget {budget}")


class HypothesisWarning(UserWarning):
    """k does not exceed rho^2 * alpha; the decay guarantee does not apply."""


# ---------------------------------------------------------------------------
# basic chain operations


def over_under_sets(orientation: Orientation, k: int) -> tuple[frozenset[int], frozenset[int]]:
    out = orientation.out
    over = frozenset(x for x, d in enumerate(out) if d > k)
    under = frozenset(x for x, d in enumerate(out) if d < k)
    return over, under


def is_oriented_path(orientation: Orientation, path: Sequence[int]) -> bool:
    g = orientation.graph
    if len(path) < 2 or len(set(path)) != len(path):
        return False
    for x, y in zip(path, path[1:]):
        if not g.has_edge(x, y) or not orientation.points(x, y):
            return False
    return True


def is_augmenting_chain(orientation: Orientation, k: int, path: Sequence[int]) -> bool:
    out = orientation.out
    return (is_oriented_path(orientation, path)
            and out[path[0]] > k and out[path[-1]] < k)


def flip_path_inplace(orientation: Orientation, path: Sequence[int]) -> None:
    g = orientation.graph
    for x, y in zip(path, path[1:]):
        orientation.flip_edge(g.edge_id(x, y))


def flip_chain(orientation: Orientation, path: Sequence[int]) -> Orientation:
    """Copy of ``orientation`` with every edge of the oriented path reversed."""
    if not is_oriented_path(orientation, path):
        raise ValueError(f"{tuple(path)} is not an oriented simple path")
    o = orientation.copy()
    flip_path_inplace(o, path)
    return o


def shortest_augmenting_chain_length(orientation: Orientation, k: int) -> float:
    """Length of the shortest augmenting chain, or ``math.inf``."""
    over, under = over_under_sets(orientation, k)
    if not over or not under:
        return math.inf
    dist = oriented_distances(orientation, over, +1)
    return min(dist[x] for x in under)


# ---------------------------------------------------------------------------
# explicit chain pool


@dataclass
class ChainPool:
    n: int
    paths: list[tuple[int, ...]]
    color: list[int]
    color_count: int
    classes: list[list[int]] = field(repr=False)


def enumerate_paths(graph: UndirectedGraph, n: int, budget: int = DEFAULT_BUDGET) -> list[tuple[int, ...]]:
    """All unoriented simple paths of length 1..n, each once, as the vertex
    sequence read from its smaller endpoint, sorted lexicographically."""
    adj = graph.adjacency
    found: list[tuple[int, ...]] = []

    def extend(path: list[int], on: set[int]):
        x = path[-1]
        for y in adj[x]:
            if y in on:
                continue
            path.append(y)
            if y > path[0]:
                found.append(tuple(path))
                if len(found) > budget:
                    raise ChainBudgetExceeded(len(found), budget)
            if len(path) <= n:
                on.add(y)
                extend(path, on)
                on.discard(y)
            path.pop()

    for a in range(graph.vertex_count):
        extend([a], {a})
    found.sort()
    return found


def build_chain_pool(graph: UndirectedGraph, n: int, budget: int = DEFAULT_BUDGET) -> ChainPool:
    """Enumerate paths of length <= n and greedily colour their intersection graph."""
    if n < 1:
        raise ValueError("n must be >= 1")
    paths = enumerate_paths(graph, n, budget)
    used_at: list[set[int]] = [set() for _ in range(graph.vertex_count)]
    color = []
    for p in paths:
        taken = set().union(*(used_at[x] for x in p))
        c = 0
        while c in taken:
            c += 1
        color.append(c)
        for x in p:
            used_at[x].add(c)
    count = max(color, default=-1) + 1
    classes: list[list[int]] = [[] for _ in range(count)]
    for i, c in enumerate(color):
        classes[c].append(i)
    return ChainPool(n, paths, color, count, classes)


# ---------------------------------------------------------------------------
# one stage


@dataclass
class StageMetrics:
    stage: int
    k: int
    flips: int = 0
    classes_flipped: int = 0
    sweeps: int = 0
    mu_O_start: Fraction = Fraction(0)
    mu_I_start: Fraction = Fraction(0)
    mu_O: Fraction = Fraction(0)
    mu_I: Fraction = Fraction(0)
    flipped_measure: Fraction = Fraction(0)
    min_chain: float = math.inf
    truncated: bool = False
    visited: int = 0

    def row(self) -> dict:
        return {
            "stage": self.stage,
            "color": self.classes_flipped,
            "flips": self.flips,
            "mu_O": self.mu_O,
            "mu_I": self.mu_I,
            "flipped_measure": self.flipped_measure,
            "min_chain": self.min_chain,
        }


FlipHook = Callable[[Orientation, tuple[int, ...]], None]


class _AnchoredSweeper:
    """Sweeps paths in anchored-lexicographic order, flipping augmenting ones."""

    def __init__(self, o: Orientation, k: int, n: int, budget: int, prune: bool,
                 on_flip: FlipHook | None):
        self.o = o
        self.k = k
        self.n = n
        self.budget = budget
        self.prune = prune
        self.on_flip = on_flip
        self.visited = 0
        self.flips = 0
        self.mark = bytearray(o.graph.vertex_count)
        self.dist_fwd: list[float] | None = None
        self.dist_bwd: list[float] | None = None

    def _distances(self):
        over, under = over_under_sets(self.o, self.k)
        # forward search needs distance to I, backward search distance from O
        self.dist_fwd = oriented_distances(self.o, under, -1)
        self.dist_bwd = oriented_distances(self.o, over, +1)

    def sweep(self) -> int:
        o, k = self.o, self.k
        before = self.flips
        out = o.out
        anchors = [x for x, d in enumerate(out) if d != k]
        if self.prune:
            self._distances()
        for a in anchors:
            if out[a] > k:
                self._search(a, True)
            elif out[a] < k:
                self._search(a, False)
        return self.flips - before

    def _search(self, a: int, forward: bool):
        o, k, n = self.o, self.k, self.n
        g = o.graph
        adj, inc, fl, out = g.adjacency, g.incidence, o.flipped, o.out
        mark = self.mark
        path = [a]
        eids: list[int] = []

        def ok_end(v):
            return v > a and (out[v] < k if forward else out[v] > k)

        def dfs(v: int, depth: int) -> bool:
            self.visited += 1
            if self.visited > self.budget:
                raise ChainBudgetExceeded(self.visited, self.budget)
            if ok_end(v):
                self._flip(path, eids, forward)
                return True
            if depth == n:
                return False
            dist = self.dist_fwd if forward else self.dist_bwd
            mark[v] = 1
            try:
                for w, e in zip(adj[v], inc[v]):
                    if mark[w] or (fl[e] == (v > w)) != forward:
                        continue
                    if dist is not None and depth + 1 + dist[w] > n:
                        continue
                    path.append(w)
                    eids.append(e)
                    hit = dfs(w, depth + 1)
                    path.pop()
                    eids.pop()
                    if hit:
                        return True
                return False
            finally:
                mark[v] = 0

        dist = self.dist_fwd if forward else self.dist_bwd
        if dist is not None and dist[a] > n:
            return
        mark[a] = 1
        try:
            for w, e in zip(adj[a], inc[a]):
                if (out[a] <= k) if forward else (out[a] >= k):
                    break
                if mark[w] or (fl[e] == (a > w)) != forward:
                    continue
                dist = self.dist_fwd if forward else self.dist_bwd
                if dist is not None and 1 + dist[w] > n:
                    continue
                path.append(w)
                eids.append(e)
                dfs(w, 1)
                path.pop()
                eids.pop()
        finally:
            mark[a] = 0

    def _flip(self, path: list[int], eids: list[int], forward: bool):
        o = self.o
        for e in eids:
            o.flip_edge(e)
        self.flips += 1
        if self.prune:
            self._distances()
        if self.on_flip is not None:
            chain = tuple(path) if forward else tuple(reversed(path))
            self.on_flip(o, chain)


def _pool_sweep(o: Orientation, k: int, pool: ChainPool, on_flip: FlipHook | None) -> tuple[int, int]:
    out = o.out
    flips = 0
    active = 0
    for members in pool.classes:
        batch = []
        for i in members:
            p = pool.paths[i]
            if out[p[0]] > k and out[p[-1]] < k and is_oriented_path(o, p):
                batch.append(p)
            elif out[p[-1]] > k and out[p[0]] < k:
                rp = p[::-1]
                if is_oriented_path(o, rp):
                    batch.append(rp)
        for p in batch:
            flip_path_inplace(o, p)
            if on_flip is not None:
                on_flip(o, p)
        flips += len(batch)
        active += bool(batch)
    return flips, active


def run_lemma_augment(graph: UndirectedGraph, measure: VertexMeasure, orientation: Orientation,
                      k: int, n: int, *, pool: ChainPool | None = None,
                      budget: int = DEFAULT_BUDGET, prune: bool | None = None,
                      on_flip: FlipHook | None = None) -> tuple[Orientation, StageMetrics]:
    """Flip augmenting chains of length <= n until none is left.

    Returns the new orientation and the stage's metrics.  With ``pool`` the
    explicit greedy colouring is swept; otherwise the anchored colouring.
    ``budget`` caps the number of path visits of the stage; exceeding it stops
    the stage early with ``truncated=True``.
    """
    if k != int(k) or k < 0:
        raise ValueError("k must be a non-negative integer")
    if n < 1:
        raise ValueError("n must be >= 1")
    if pool is not None and pool.n != n:
        raise ValueError(f"pool built for n={pool.n}, stage needs n={n}")
    o = orientation.copy()
    over, under = over_under_sets(o, k)
    m = StageMetrics(stage=n, k=k, mu_O_start=measure.mass(over), mu_I_start=measure.mass(under))

    if pool is not None:
        while True:
            flips, active = _pool_sweep(o, k, pool, on_flip)
            m.sweeps += 1
            m.flips += flips
            m.classes_flipped += active
            if flips == 0:
                break
    else:
        sweeper = _AnchoredSweeper(o, k, n, budget, n >= 3 if prune is None else prune, on_flip)
        try:
            while True:
                flips = sweeper.sweep()
                m.sweeps += 1
                if flips == 0:
                    break
        except ChainBudgetExceeded:
            m.truncated = True
            log.warning("stage %d truncated after %d path visits", n, sweeper.visited)
        m.flips = sweeper.flips
        # every class of the anchored colouring is a single path
        m.classes_flipped = sweeper.flips
        m.visited = sweeper.visited

    over, under = over_under_sets(o, k)
    m.mu_O = measure.mass(over)
    m.mu_I = measure.mass(under)
    m.flipped_measure = changed_edge_measure(graph, measure, orientation.differing_edges(o))
    m.min_chain = shortest_augmenting_chain_length(o, k)
    return o, m


# ---------------------------------------------------------------------------
# staged runs


@dataclass
class DynamicsTrace:
    k: int
    rho: Fraction
    alpha: Fraction
    degree_bound: int
    hypothesis_holds: bool
    records: list[StageMetrics] = field(default_factory=list)
    truncated: bool = False

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(TRACE_COLUMNS)
        for r in self.records:
            row = r.row()
            w.writerow([_fmt(row[c]) for c in TRACE_COLUMNS])
        return buf.getvalue()

    def mu_O_series(self) -> list[Fraction]:
        return [r.mu_O for r in self.records]


def _fmt(v) -> str:
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    return str(v)


def random_orientation(graph: UndirectedGraph, seed: int) -> Orientation:
    from .generators import rng
    bits = rng(seed).integers(0, 2, size=graph.edge_count).tolist()
    return Orientation(graph, bits)


def _initial_record(measure: VertexMeasure, o: Orientation, k: int) -> StageMetrics:
    over, under = over_under_sets(o, k)
    mo, mi = measure.mass(over), measure.mass(under)
    return StageMetrics(stage=0, k=k, mu_O_start=mo, mu_I_start=mi, mu_O=mo, mu_I=mi,
                        min_chain=shortest_augmenting_chain_length(o, k))


def run_theorem_dynamics(graph: UndirectedGraph, measure: VertexMeasure, initial: Orientation,
                         k: int, stages: int, *, alpha: Fraction | None = None,
                         explicit_pool: bool = False, budget: int = DEFAULT_BUDGET,
                         stop_when_done: bool = True,
                         on_flip: FlipHook | None = None) -> tuple[Orientation, DynamicsTrace]:
    """Apply :func:`run_lemma_augment` with n = 1, 2, ..., stages.

    Stops after the first stage that leaves no over-full vertex (when
    ``stop_when_done``) or after a truncated stage.
    """
    if alpha is None:
        from .solver import max_density_subgraph
        alpha = max_density_subgraph(graph, measure).density
    rho = measure.cocycle_bound(graph)
    ok = k > rho * rho * alpha
    if not ok:
        warnings.warn(f"k={k} <= rho^2*alpha={rho * rho * alpha}", HypothesisWarning, stacklevel=2)
    trace = DynamicsTrace(k, rho, alpha, graph.degree_bound, ok)
    o = initial.copy()
    trace.records.append(_initial_record(measure, o, k))
    for n in range(1, stages + 1):
        pool = build_chain_pool(graph, n, budget) if explicit_pool else None
        o, m = run_lemma_augment(graph, measure, o, k, n, pool=pool, budget=budget, on_flip=on_flip)
        trace.records.append(m)
        log.info("stage %d: flips=%d mu_O=%s mu_I=%s min_chain=%s",
                 n, m.flips, m.mu_O, m.mu_I, m.min_chain)
        if m.truncated:
            trace.truncated = True
            break
        if stop_when_done and m.mu_O == 0:
            break
    return o, trace


def run_expansive_dynamics(graph: UndirectedGraph, measure: VertexMeasure, initial: Orientation,
                           stages: int, *, budget: int = DEFAULT_BUDGET,
                           explicit_pool: bool = False) -> tuple[Orientation, DynamicsTrace]:
    """Staged dynamics on a d-regular graph at k = ceil(d/2).

    Runs until one of the over-full / under-full sets is empty, then returns
    whichever of o and its reversal has fewer over-full vertices.
    """
    if not graph.is_regular():
        raise ValueError("expansive dynamics needs a regular graph")
    d = graph.degree_bound
    k = -(-d // 2)
    rho = measure.cocycle_bound(graph)
    alpha = Fraction(d, 2)
    trace = DynamicsTrace(k, rho, alpha, d, k > rho * rho * alpha)
    o = initial.copy()
    trace.records.append(_initial_record(measure, o, k))
    for n in range(1, stages + 1):
        if trace.records[-1].mu_O == 0 or trace.records[-1].mu_I == 0:
            break
        pool = build_chain_pool(graph, n, budget) if explicit_pool else None
        o, m = run_lemma_augment(graph, measure, o, k, n, pool=pool, budget=budget)
        trace.records.append(m)
        log.info("stage %d: flips=%d mu_O=%s mu_I=%s", n, m.flips, m.mu_O, m.mu_I)
        if m.truncated:
            trace.truncated = True
            break
    rev = o.reversed()
    over_o = sum(1 for d_ in o.out if d_ > k)
    over_r = sum(1 for d_ in rev.out if d_ > k)
    return (rev if over_r < over_o else o), trace


# ---------------------------------------------------------------------------
# claim checks


@dataclass
class Claim1Check:
    holds: bool
    ball_mass: Fraction
    required: Fraction


def verify_claim1(graph: UndirectedGraph, measure: VertexMeasure, orientation: Orientation,
                  k: int, subset, alpha: Fraction, rho: Fraction | None = None) -> Claim1Check:
    """mu(B+(A)) >= k / (rho * alpha) * mu(A) for A whose vertices all have out >= k."""
    subset = frozenset(subset)
    bad = [x for x in subset if orientation.out[x] < k]
    if bad:
        raise ValueError(f"vertex {min(bad)} has out-degree < {k}")
    if rho is None:
        rho = measure.cocycle_bound(graph)
    ball = measure.mass(oriented_ball(orientation, subset, 1, +1))
    a_mass = measure.mass(subset)
    if not subset:
        return Claim1Check(True, ball, Fraction(0))
    required = Fraction(k) / (rho * alpha) * a_mass
    return Claim1Check(ball >= required, ball, required)
