"""Finite graphs, single-direction orientations and vertex-weight measures.

Vertices are the dense integers ``0..n-1``.  Edges are stored once, as
``(u, v)`` with ``u < v``, and addressed by their index in ``graph.edges``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence


class GraphFormatError(ValueError):
    """Malformed edge-list or weight document."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class GraphValidationError(ValueError):
    """Well-formed document describing something that is not a simple graph."""


@dataclass(frozen=True, eq=False)
class UndirectedGraph:
    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[tuple[int, ...], ...] = field(repr=False)
    incidence: tuple[tuple[int, ...], ...] = field(repr=False)
    degree_bound: int
    _index: dict = field(repr=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "UndirectedGraph":
        if n < 0:
            raise GraphValidationError("vertex count must be non-negative")
        seen: set[tuple[int, int]] = set()
        ordered = []
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise GraphValidationError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphValidationError(f"edge ({u}, {v}) out of range for n={n}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise GraphValidationError(f"duplicate edge {key}")
            seen.add(key)
            ordered.append(key)
        ordered.sort()
        nbrs: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for e, (u, v) in enumerate(ordered):
            nbrs[u].append((v, e))
            nbrs[v].append((u, e))
        adjacency = []
        incidence = []
        for row in nbrs:
            row.sort()
            adjacency.append(tuple(y for y, _ in row))
            incidence.append(tuple(e for _, e in row))
        index = {key: e for e, key in enumerate(ordered)}
        delta = max((len(a) for a in adjacency), default=0)
        return cls(n, tuple(ordered), tuple(adjacency), tuple(incidence), delta, index)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degree(self, x: int) -> int:
        return len(self.adjacency[x])

    def has_edge(self, x: int, y: int) -> bool:
        return ((x, y) if x < y else (y, x)) in self._index

    def edge_id(self, x: int, y: int) -> int:
        try:
            return self._index[(x, y) if x < y else (y, x)]
        except KeyError:
            raise KeyError(f"({x}, {y}) is not an edge") from None

    def is_regular(self) -> bool:
        return self.vertex_count > 0 and all(len(a) == self.degree_bound for a in self.adjacency)

    def induced_edge_count(self, subset: Iterable[int]) -> int:
        s = set(subset)
        return sum(1 for u, v in self.edges if u in s and v in s)

    def subgraph_edges(self, edge_ids: Iterable[int]) -> "UndirectedGraph":
        """Spanning subgraph on the same vertex range with the given edges."""
        return UndirectedGraph.from_edges(self.vertex_count, (self.edges[e] for e in edge_ids))

    def __eq__(self, other):
        if not isinstance(other, UndirectedGraph):
            return NotImplemented
        return self.vertex_count == other.vertex_count and self.edges == other.edges

    def __hash__(self):
        return hash((self.vertex_count, self.edges))


class Orientation:
    """One direction per edge of ``graph``.

    ``flipped[e] == 0`` means edge ``(u, v)`` (``u < v``) points ``u -> v``;
    ``1`` means ``v -> u``.  Out-degrees are kept in sync on every flip.
    """

    __slots__ = ("graph", "flipped", "out")

    def __init__(self, graph: UndirectedGraph, flipped: Sequence[int] | None = None):
        self.graph = graph
        m = graph.edge_count
        if flipped is None:
            self.flipped = bytearray(m)
        else:
            if len(flipped) != m:
                raise ValueError(f"expected {m} directions, got {len(flipped)}")
            self.flipped = bytearray(1 if b else 0 for b in flipped)
        out = [0] * graph.vertex_count
        for e, (u, v) in enumerate(graph.edges):
            out[v if self.flipped[e] else u] += 1
        self.out = out

    @classmethod
    def from_arcs(cls, graph: UndirectedGraph, arcs: Iterable[tuple[int, int]]) -> "Orientation":
        flipped = bytearray(graph.edge_count)
        covered = bytearray(graph.edge_count)
        for x, y in arcs:
            e = graph.edge_id(x, y)
            if covered[e]:
                raise ValueError(f"edge {graph.edges[e]} oriented twice")
            covered[e] = 1
            flipped[e] = 1 if x > y else 0
        if not all(covered):
            missing = graph.edges[covered.index(0)]
            raise ValueError(f"edge {missing} has no direction")
        return cls(graph, flipped)

    def copy(self) -> "Orientation":
        o = Orientation.__new__(Orientation)
        o.graph = self.graph
        o.flipped = bytearray(self.flipped)
        o.out = list(self.out)
        return o

    def reversed(self) -> "Orientation":
        return Orientation(self.graph, bytes(1 - b for b in self.flipped))

    def out_degree(self, x: int) -> int:
        return self.out[x]

    def in_degree(self, x: int) -> int:
        return len(self.graph.adjacency[x]) - self.out[x]

    def max_out_degree(self) -> int:
        return max(self.out, default=0)

    def tail(self, e: int) -> int:
        u, v = self.graph.edges[e]
        return v if self.flipped[e] else u

    def head(self, e: int) -> int:
        u, v = self.graph.edges[e]
        return u if self.flipped[e] else v

    def points(self, x: int, y: int) -> bool:
        """True iff the edge {x, y} is oriented x -> y."""
        e = self.graph.edge_id(x, y)
        return bool(self.flipped[e]) == (x > y)

    def arc(self, e: int) -> tuple[int, int]:
        u, v = self.graph.edges[e]
        return (v, u) if self.flipped[e] else (u, v)

    def arcs(self) -> list[tuple[int, int]]:
        return [self.arc(e) for e in range(self.graph.edge_count)]

    def out_neighbors(self, x: int) -> list[int]:
        fl = self.flipped
        return [y for y, e in zip(self.graph.adjacency[x], self.graph.incidence[x])
                if fl[e] == (x > y)]

    def in_neighbors(self, x: int) -> list[int]:
        fl = self.flipped
        return [y for y, e in zip(self.graph.adjacency[x], self.graph.incidence[x])
                if fl[e] != (x > y)]

    def flip_edge(self, e: int) -> None:
        u, v = self.graph.edges[e]
        if self.flipped[e]:
            self.out[v] -= 1
            self.out[u] += 1
            self.flipped[e] = 0
        else:
            self.out[u] -= 1
            self.out[v] += 1
            self.flipped[e] = 1

    def differing_edges(self, other: "Orientation") -> list[int]:
        return [e for e, (a, b) in enumerate(zip(self.flipped, other.flipped)) if a != b]

    def __eq__(self, other):
        if not isinstance(other, Orientation):
            return NotImplemented
        return self.graph == other.graph and self.flipped == other.flipped

    def __repr__(self):
        return f"Orientation(n={self.graph.vertex_count}, max_out={self.max_out_degree()})"


@dataclass(frozen=True)
class VertexMeasure:
    """Strictly positive vertex weights ``w(x) = numerators[x] / total``."""

    numerators: tuple[int, ...]
    total: int

    def __post_init__(self):
        if any(a <= 0 for a in self.numerators):
            raise ValueError("vertex weights must be strictly positive")
        if self.total != sum(self.numerators):
            raise ValueError("total must equal the sum of numerators")

    @classmethod
    def uniform(cls, n: int) -> "VertexMeasure":
        return cls((1,) * n, n)

    @classmethod
    def from_weights(cls, weights: Sequence) -> "VertexMeasure":
        """Normalize arbitrary positive rationals (ints, Fractions, decimal strings)."""
        fr = [Fraction(w) for w in weights]
        if any(w <= 0 for w in fr):
            raise ValueError("vertex weights must be strictly positive")
        den = math.lcm(*(w.denominator for w in fr)) if fr else 1
        nums = [int(w * den) for w in fr]
        g = math.gcd(*nums) if nums else 1
        nums = [a // g for a in nums]
        return cls(tuple(nums), sum(nums))

    def __len__(self):
        return len(self.numerators)

    def weight(self, x: int) -> Fraction:
        return Fraction(self.numerators[x], self.total)

    def mass(self, vertices: Iterable[int]) -> Fraction:
        a = self.numerators
        return Fraction(sum(a[x] for x in vertices), self.total)

    def is_uniform(self) -> bool:
        return len(set(self.numerators)) <= 1

    def cocycle(self, x: int, y: int) -> Fraction:
        return Fraction(self.numerators[y], self.numerators[x])

    def cocycle_bound(self, graph: UndirectedGraph) -> Fraction:
        """sup over (ordered) edges of w(y)/w(x); 1 for an edgeless graph."""
        a = self.numerators
        best = Fraction(1)
        for u, v in graph.edges:
            hi, lo = (a[u], a[v]) if a[u] >= a[v] else (a[v], a[u])
            if hi * best.denominator > best.numerator * lo:
                best = Fraction(hi, lo)
        return best


def edge_measure(graph: UndirectedGraph, measure: VertexMeasure,
                 arcs: Iterable[tuple[int, int]]) -> Fraction:
    """Measure of a set of ordered pairs: each (x, y) contributes w(x)."""
    a = measure.numerators
    total = 0
    for x, y in set(arcs):
        if not graph.has_edge(x, y):
            raise KeyError(f"({x}, {y}) is not an edge")
        total += a[x]
    return Fraction(total, measure.total)


def changed_edge_measure(graph: UndirectedGraph, measure: VertexMeasure,
                         edge_ids: Iterable[int]) -> Fraction:
    """Measure of {e : o(e) != o'(e)}; a flipped edge changes both ordered copies."""
    a = measure.numerators
    total = 0
    for e in edge_ids:
        u, v = graph.edges[e]
        total += a[u] + a[v]
    return Fraction(total, measure.total)


def oriented_ball(orientation: Orientation, sources: Iterable[int], radius: int,
                  sign: int = +1) -> frozenset[int]:
    """B+_n(A) (sign=+1) or B-_n(A) (sign=-1); length-0 paths included."""
    if radius < 0:
        raise ValueError("radius must be non-negative")
    graph = orientation.graph
    fl = orientation.flipped
    adj, inc = graph.adjacency, graph.incidence
    forward = sign > 0
    seen = set(sources)
    frontier = list(seen)
    for _ in range(radius):
        nxt = []
        for x in frontier:
            for y, e in zip(adj[x], inc[x]):
                if y in seen:
                    continue
                # edge points x -> y iff fl[e] == (x > y)
                if (fl[e] == (x > y)) == forward:
                    seen.add(y)
                    nxt.append(y)
        if not nxt:
            break
        frontier = nxt
    return frozenset(seen)


def oriented_distances(orientation: Orientation, sources: Iterable[int],
                       sign: int = +1) -> list[float]:
    """Multi-source BFS distance along oriented (or reversed) edges; inf if unreachable."""
    graph = orientation.graph
    fl = orientation.flipped
    adj, inc = graph.adjacency, graph.incidence
    forward = sign > 0
    dist = [math.inf] * graph.vertex_count
    q = deque()
    for s in sources:
        if dist[s] != 0:
            dist[s] = 0
            q.append(s)
    while q:
        x = q.popleft()
        dx = dist[x] + 1
        for y, e in zip(adj[x], inc[x]):
            if dist[y] > dx and (fl[e] == (x > y)) == forward:
                dist[y] = dx
                q.append(y)
    return dist


# ---------------------------------------------------------------------------
# text formats


def parse_edge_list(text: str) -> UndirectedGraph:
    lines = text.split("\n")
    rows = [(i + 1, ln.strip()) for i, ln in enumerate(lines)]
    rows = [(i, ln) for i, ln in rows if ln]
    if not rows:
        raise GraphFormatError("empty document", 1)
    lineno, header = rows[0]
    parts = header.split()
    if len(parts) != 2:
        raise GraphFormatError("header must be 'n m'", lineno)
    try:
        n, m = int(parts[0]), int(parts[1])
    except ValueError:
        raise GraphFormatError("header must be two integers", lineno) from None
    if n < 0 or m < 0:
        raise GraphFormatError("negative size in header", lineno)
    body = rows[1:]
    if len(body) != m:
        raise GraphFormatError(f"header announces {m} edges, found {len(body)}",
                               body[-1][0] if body else lineno)
    edges = []
    for lineno, ln in body:
        parts = ln.split()
        if len(parts) != 2:
            raise GraphFormatError("edge line must be 'u v'", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError("edge endpoints must be integers", lineno) from None
        edges.append((u, v))
    return UndirectedGraph.from_edges(n, edges)


load_graph = parse_edge_list


def format_edge_list(graph: UndirectedGraph) -> str:
    out = [f"{graph.vertex_count} {graph.edge_count}"]
    out.extend(f"{u} {v}" for u, v in graph.edges)
    return "\n".join(out) + "\n"


def parse_weights(text: str, n: int) -> VertexMeasure:
    """Weight file: one line ``v numerator denominator`` per vertex."""
    weights: dict[int, Fraction] = {}
    for lineno, ln in enumerate(text.split("\n"), start=1):
        ln = ln.strip()
        if not ln:
            continue
        parts = ln.split()
        if len(parts) != 3:
            raise GraphFormatError("weight line must be 'v numerator denominator'", lineno)
        try:
            v, p, q = (int(s) for s in parts)
        except ValueError:
            raise GraphFormatError("weight fields must be integers", lineno) from None
        if not 0 <= v < n:
            raise GraphFormatError(f"vertex {v} out of range", lineno)
        if v in weights:
            raise GraphFormatError(f"vertex {v} listed twice", lineno)
        if p <= 0 or q <= 0:
            raise GraphFormatError("weights must be positive", lineno)
        weights[v] = Fraction(p, q)
    if len(weights) != n:
        missing = next(v for v in range(n) if v not in weights)
        raise GraphFormatError(f"no weight for vertex {missing}")
    return VertexMeasure.from_weights([weights[v] for v in range(n)])


def format_weights(measure: VertexMeasure) -> str:
    lines = []
    for v, a in enumerate(measure.numerators):
        w = Fraction(a, measure.total)
        lines.append(f"{v} {w.numerator} {w.denominator}")
    return "\n".join(lines) + "\n"
