"""Expansion constants, decay envelopes and per-stage bound checks."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .graph import UndirectedGraph, VertexMeasure
from .solver import ENUMERATION_LIMIT, max_density_subgraph

POWER_TOL = 1e-8
POWER_MAX_ITER = 10_000


@dataclass
class ExpansionEstimate:
    exact: Fraction | None
    spectral_lower: float
    witness_set: frozenset[int] | None = None
    fiedler: float = 0.0


def _exact_expansion(graph: UndirectedGraph, measure: VertexMeasure) -> tuple[Fraction, frozenset[int]]:
    n = graph.vertex_count
    a = measure.numerators
    masks = np.arange(1, 1 << n, dtype=np.int64)
    mass = np.zeros(masks.shape, dtype=np.int64)
    for v in range(n):
        mass += ((masks >> v) & 1) * a[v]
    keep = 2 * mass <= measure.total
    masks, mass = masks[keep], mass[keep]
    boundary = np.zeros(masks.shape, dtype=np.int64)
    for u, v in graph.edges:
        bu = (masks >> u) & 1
        bv = (masks >> v) & 1
        boundary += bu * (1 - bv) * a[u] + bv * (1 - bu) * a[v]
    ratio = boundary / mass
    low = ratio.min()
    best = None
    for i in np.flatnonzero(ratio <= low + 1e-9 * max(1.0, low)).tolist():
        val = Fraction(int(boundary[i]), int(mass[i]))
        if best is None or val < best[0]:
            best = (val, int(masks[i]))
    val, mask = best
    return val, frozenset(v for v in range(n) if mask >> v & 1)


def laplacian_fiedler(graph: UndirectedGraph, seed: int = 0) -> float:
    """Second-smallest Laplacian eigenvalue by deflated power iteration."""
    n = graph.vertex_count
    if n < 2:
        return 0.0
    rows = [u for u, v in graph.edges] + [v for u, v in graph.edges]
    cols = [v for u, v in graph.edges] + [u for u, v in graph.edges]
    adj = sp.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    deg = np.asarray(adj.sum(axis=1)).ravel()
    shift = 2.0 * max(graph.degree_bound, 1)
    ones = np.ones(n) / math.sqrt(n)

    def apply(x):
        # (shift*I - L) x, whose top eigenvector is the constant vector
        return shift * x - deg * x + adj @ x

    x = np.random.Generator(np.random.PCG64(seed)).standard_normal(n)
    lam = 0.0
    for _ in range(POWER_MAX_ITER):
        x -= ones * (ones @ x)
        x /= np.linalg.norm(x)
        y = apply(x)
        new = float(x @ y)
        if abs(new - lam) <= POWER_TOL * max(1.0, abs(new)):
            lam = new
            break
        lam = new
        x = y
    return max(0.0, shift - lam)


def spectral_expansion_lower(graph: UndirectedGraph, measure: VertexMeasure, fiedler: float) -> float:
    """Lower bound on the expansion constant from the Laplacian's Fiedler value.

    |boundary(A)| >= a |A| |A^c| / n; weights enter through their min/max ratio.
    """
    a = measure.numerators
    n = graph.vertex_count
    wmin, wmax = min(a), max(a)
    complement_share = measure.total / (2 * n * wmax)
    return (wmin / wmax) * fiedler * min(1.0, complement_share)


def expansion_constant(graph: UndirectedGraph, measure: VertexMeasure | None = None,
                       seed: int = 0) -> ExpansionEstimate:
    """inf over 0 < mu(A) <= 1/2 of sum_{x in A} w(x)|G_x \\ A| / mu(A)."""
    if measure is None:
        measure = VertexMeasure.uniform(graph.vertex_count)
    fied = laplacian_fiedler(graph, seed)
    lower = spectral_expansion_lower(graph, measure, fied)
    if graph.vertex_count <= ENUMERATION_LIMIT and graph.vertex_count >= 2:
        exact, witness = _exact_expansion(graph, measure)
        return ExpansionEstimate(exact, lower, witness, fied)
    return ExpansionEstimate(None, lower, None, fied)


def expansive_constant(d: int, lam: float) -> float:
    """c = d / (d - lambda) from the expansive-graph argument (advisory only)."""
    return d / (d - lam) if lam < d else math.inf


def claim2_envelope(graph: UndirectedGraph, measure: VertexMeasure, k: int, N: int,
                    alpha: Fraction | None = None) -> list[Fraction]:
    """[(rho alpha / k)^n for n = 1..N] with exact alpha and rho."""
    if k <= 0:
        raise ValueError("k must be positive")
    if alpha is None:
        alpha = max_density_subgraph(graph, measure).density
    base = measure.cocycle_bound(graph) * alpha / k
    return [base ** n for n in range(1, N + 1)]


def lemma_bound(n: int, degree_bound: int, rho: Fraction, mu_O: Fraction, mu_I: Fraction) -> Fraction:
    return 2 * n * degree_bound * rho ** n * min(mu_O, mu_I)


def check_lemma_bound(metrics, degree_bound: int, rho: Fraction, n: int | None = None) -> bool:
    """Flipped-edge measure of a stage <= 2 n Delta rho^n min(mu(O), mu(I)) at its start."""
    if n is None:
        n = metrics.stage
    return metrics.flipped_measure <= lemma_bound(n, degree_bound, rho,
                                                  metrics.mu_O_start, metrics.mu_I_start)


def check_claim2(metrics, rho: Fraction, alpha: Fraction, k: int) -> bool | None:
    """mu(O) <= (rho alpha / k)^n when no augmenting chain of length <= n is left.

    Returns None when the premise does not hold (chain of length <= n remains).
    """
    n = metrics.stage
    if n < 1 or not metrics.min_chain > n:
        return None
    return metrics.mu_O <= (rho * alpha / k) ** n


@dataclass
class DecayFit:
    series: list[Fraction]
    rate: float | None
    envelope_rate: Fraction
    omitted: bool


def fit_decay(series: Sequence[Fraction], envelope_rate: Fraction) -> DecayFit:
    """Least-squares geometric rate of the positive entries of a mu(O) series."""
    series = list(series)
    pts = [(i, float(v)) for i, v in enumerate(series) if v > 0]
    if len(pts) < 3:
        return DecayFit(series, None, envelope_rate, True)
    xs = np.array([p[0] for p in pts], dtype=float)
    ys = np.log(np.array([p[1] for p in pts]))
    slope, _ = np.polyfit(xs, ys, 1)
    return DecayFit(series, float(math.exp(slope)), envelope_rate, False)
