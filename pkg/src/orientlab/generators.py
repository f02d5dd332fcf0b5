"""Seeded instance families.

Every generator draws from ``numpy.random.Generator(PCG64(seed))`` and is a
pure function of its arguments.  Outputs are post-checked for simplicity and
the advertised regularity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .graph import UndirectedGraph, VertexMeasure

REJECTION_BUDGET = 1000


class GenerationError(RuntimeError):
    pass


def rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _check_regular(g: UndirectedGraph, d: int) -> UndirectedGraph:
    if any(len(a) != d for a in g.adjacency):
        raise GenerationError(f"generator produced a non-{d}-regular graph")
    return g


def gen_cycle(n: int) -> UndirectedGraph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return UndirectedGraph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def gen_path(n: int) -> UndirectedGraph:
    return UndirectedGraph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def gen_complete(n: int) -> UndirectedGraph:
    return UndirectedGraph.from_edges(n, itertools.combinations(range(n), 2))


def gen_star(leaves: int) -> UndirectedGraph:
    return UndirectedGraph.from_edges(leaves + 1, ((0, i) for i in range(1, leaves + 1)))


def gen_petersen() -> UndirectedGraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return UndirectedGraph.from_edges(10, outer + spokes + inner)


def gen_z2_free_product(n: int, m: int, seed: int) -> UndirectedGraph:
    """Union of m random perfect matchings: a Schreier graph of (Z/2Z)^{*m}.

    Each matching is a fixed-point-free involution of the n points.  Whole
    tuples with a repeated edge are rejected, so the output is uniform over
    m-tuples of pairwise edge-disjoint matchings.
    """
    if n <= 0 or n % 2:
        raise ValueError("n must be a positive even integer")
    if m < 1:
        raise ValueError("m must be >= 1")
    if m > n - 1:
        raise ValueError("need m <= n-1 edge-disjoint perfect matchings")
    gen = rng(seed)
    for _ in range(REJECTION_BUDGET):
        edges = []
        for _ in range(m):
            p = gen.permutation(n)
            a, b = p[0::2], p[1::2]
            edges.extend(zip(np.minimum(a, b).tolist(), np.maximum(a, b).tolist()))
        if len(set(edges)) == len(edges):
            return _check_regular(UndirectedGraph.from_edges(n, edges), m)
    raise GenerationError(f"z2 free product n={n} m={m}: rejection budget exhausted")


def gen_free_group(n: int, m: int, seed: int) -> UndirectedGraph:
    """Edges {x, s_j(x)} for m random permutations: a Schreier graph of F_m.

    Fixed points, 2-cycles and coincidences with earlier generators would
    create loops or multi-edges.  Each permutation is redrawn until it has
    none of these, so s_j is uniform given s_1..s_{j-1}.
    """
    if n < 3:
        raise ValueError("n must be >= 3")
    if m < 1:
        raise ValueError("m must be >= 1")
    if 2 * m > n - 1:
        raise ValueError("2m-regular graph needs 2m < n")
    gen = rng(seed)
    idx = np.arange(n)
    used: set[tuple[int, int]] = set()
    for j in range(m):
        for _ in range(REJECTION_BUDGET):
            s = gen.permutation(n)
            if np.any(s == idx) or np.any(s[s] == idx):
                continue
            new = list(zip(np.minimum(idx, s).tolist(), np.maximum(idx, s).tolist()))
            if used.isdisjoint(new):
                used.update(new)
                break
        else:
            raise GenerationError(f"free group n={n} m={m}: rejection budget exhausted "
                                  f"at generator {j + 1}")
    return _check_regular(UndirectedGraph.from_edges(n, sorted(used)), 2 * m)


def gen_torus(dims: list[int]) -> UndirectedGraph:
    """Grid torus Z/d_1 x ... x Z/d_r, a 2r-regular graph of polynomial growth."""
    if not dims or any(d < 3 for d in dims):
        raise ValueError("each torus dimension must be >= 3")
    strides = [1]
    for d in dims[:-1]:
        strides.append(strides[-1] * d)
    n = strides[-1] * dims[-1]
    edges = []
    for x in range(n):
        for d, s in zip(dims, strides):
            coord = (x // s) % d
            y = x - coord * s + ((coord + 1) % d) * s
            edges.append((x, y))
    return _check_regular(UndirectedGraph.from_edges(n, edges), 2 * len(dims))


def gen_random_regular(n: int, d: int, seed: int) -> UndirectedGraph:
    """Random simple d-regular graph from the pairing (configuration) model.

    Stubs are shuffled and paired; pairs that would make a loop or a repeated
    edge are returned to the pool and re-paired.  If the pool gets stuck the
    attempt restarts, up to the rejection budget.
    """
    if (n * d) % 2:
        raise ValueError("n*d must be even")
    if not 0 <= d < n:
        raise ValueError("need 0 <= d < n")
    gen = rng(seed)
    for _ in range(REJECTION_BUDGET):
        edges = _try_pairing(n, d, gen)
        if edges is not None:
            return _check_regular(UndirectedGraph.from_edges(n, edges), d)
    raise GenerationError(f"random regular n={n} d={d}: rejection budget exhausted")


def _try_pairing(n: int, d: int, gen: np.random.Generator):
    edges: set[tuple[int, int]] = set()
    stubs = np.repeat(np.arange(n), d)
    while stubs.size:
        gen.shuffle(stubs)
        leftover = []
        for a, b in zip(stubs[0::2].tolist(), stubs[1::2].tolist()):
            key = (a, b) if a < b else (b, a)
            if a != b and key not in edges:
                edges.add(key)
            else:
                leftover.append(a)
                leftover.append(b)
        if leftover and not _pairable(leftover, edges):
            return None
        stubs = np.array(sorted(leftover), dtype=np.int64)
    return sorted(edges)


def _pairable(stubs: list[int], edges: set) -> bool:
    verts = sorted(set(stubs))
    for i, a in enumerate(verts):
        for b in verts[i + 1:]:
            if (a, b) not in edges:
                return True
    return False


# ---------------------------------------------------------------------------
# weights


def gen_weights(graph: UndirectedGraph, profile: str = "uniform", seed: int = 0) -> VertexMeasure:
    """Vertex measures by profile name.

    ``uniform``; ``two-level:r`` (first half of the vertices weighted r, the
    rest 1); ``random:lo:hi`` (seeded, multiples of 1/1000 in [lo, hi]).
    """
    n = graph.vertex_count
    kind, _, rest = profile.partition(":")
    if kind == "uniform":
        return VertexMeasure.uniform(n)
    if kind in ("two-level", "twolevel"):
        r = Fraction(rest or "2")
        if r <= 0:
            raise ValueError("two-level ratio must be positive")
        half = n // 2
        return VertexMeasure.from_weights([r] * half + [Fraction(1)] * (n - half))
    if kind == "random":
        lo_s, _, hi_s = rest.partition(":")
        lo, hi = Fraction(lo_s or "1"), Fraction(hi_s or "2")
        if not 0 < lo <= hi:
            raise ValueError("random weights need 0 < lo <= hi")
        scale = 1000
        a, b = int(lo * scale), int(hi * scale)
        draws = rng(seed).integers(a, b, size=n, endpoint=True).tolist()
        return VertexMeasure.from_weights([Fraction(x, scale) for x in draws])
    raise ValueError(f"unknown weight profile {profile!r}")


# ---------------------------------------------------------------------------
# spec strings


@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    params: dict = field(default_factory=dict)

    @classmethod
    def parse(cls, text: str) -> "GeneratorSpec":
        family, _, rest = text.strip().partition(":")
        family = _ALIASES.get(family, family)
        if family not in _BUILDERS:
            raise ValueError(f"unknown generator family {family!r}")
        params = {}
        for item in filter(None, rest.split(",")):
            key, eq, val = item.partition("=")
            if not eq:
                raise ValueError(f"malformed parameter {item!r} in {text!r}")
            key = key.strip()
            if key == "dims":
                params[key] = [int(v) for v in val.split("x")]
            else:
                params[key] = int(val)
        return cls(family, params)

    def __str__(self):
        def fmt(v):
            return "x".join(map(str, v)) if isinstance(v, list) else str(v)
        body = ",".join(f"{k}={fmt(v)}" for k, v in sorted(self.params.items()))
        return f"{self.family}:{body}" if body else self.family

    def build(self) -> UndirectedGraph:
        builder, required = _BUILDERS[self.family]
        missing = [k for k in required if k not in self.params]
        if missing:
            raise ValueError(f"{self.family} needs parameters {missing}")
        extra = set(self.params) - set(required) - {"seed"}
        if extra:
            raise ValueError(f"{self.family} does not take {sorted(extra)}")
        return builder(self.params)


_ALIASES = {"rr": "random-regular", "free": "free-group", "z2-free-product": "z2",
            "complete": "K", "k": "K"}

_BUILDERS = {
    "z2": (lambda p: gen_z2_free_product(p["n"], p["m"], p.get("seed", 0)), ("n", "m")),
    "free-group": (lambda p: gen_free_group(p["n"], p["m"], p.get("seed", 0)), ("n", "m")),
    "torus": (lambda p: gen_torus(p["dims"]), ("dims",)),
    "random-regular": (lambda p: gen_random_regular(p["n"], p["d"], p.get("seed", 0)), ("n", "d")),
    "cycle": (lambda p: gen_cycle(p["n"]), ("n",)),
    "path": (lambda p: gen_path(p["n"]), ("n",)),
    "K": (lambda p: gen_complete(p["n"]), ("n",)),
    "petersen": (lambda p: gen_petersen(), ()),
}


def from_spec(text: str) -> UndirectedGraph:
    return GeneratorSpec.parse(text).build()
