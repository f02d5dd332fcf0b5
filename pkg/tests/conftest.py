import itertools
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from orientlab.graph import Orientation, UndirectedGraph, VertexMeasure


@st.composite
def small_graphs(draw, max_n=7, min_edges=0):
    n = draw(st.integers(min_value=2, max_value=max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, min_size=min(min_edges, len(pairs))))
    return UndirectedGraph.from_edges(n, chosen)


@st.composite
def oriented_graphs(draw, max_n=7, min_edges=1):
    g = draw(small_graphs(max_n=max_n, min_edges=min_edges))
    bits = draw(st.lists(st.integers(0, 1), min_size=g.edge_count, max_size=g.edge_count))
    return Orientation(g, bits)


@st.composite
def measures(draw, n):
    nums = draw(st.lists(st.integers(1, 6), min_size=n, max_size=n))
    return VertexMeasure.from_weights(nums)


def brute_orientation_number(g):
    """Pure itertools oracle, independent of the numpy brute force."""
    best = None
    for bits in itertools.product((0, 1), repeat=g.edge_count):
        out = [0] * g.vertex_count
        for (u, v), b in zip(g.edges, bits):
            out[v if b else u] += 1
        top = max(out, default=0)
        best = top if best is None else min(best, top)
    return best if best is not None else 0


def brute_max_density(g, weights=None):
    """max over nonempty A of sum_{x in A} w(x)|G_x & A| / (2 w(A))."""
    w = weights or [1] * g.vertex_count
    best = None
    for r in range(1, g.vertex_count + 1):
        for a in itertools.combinations(range(g.vertex_count), r):
            s = set(a)
            num = sum(w[u] + w[v] for u, v in g.edges if u in s and v in s)
            val = Fraction(num, 2 * sum(w[x] for x in s))
            best = val if best is None else max(best, val)
    return best


@pytest.fixture
def k4():
    return UndirectedGraph.from_edges(4, itertools.combinations(range(4), 2))


@pytest.fixture
def triangle():
    return UndirectedGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def bowtie():
    """Two triangles sharing vertex 2."""
    return UndirectedGraph.from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])


# ---------------------------------------------------------------------------
# one summary line per acceptance criterion

_criteria: dict[int, tuple[str, str, float]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when == "teardown":
        return
    n, title = mark.args
    _, prev_status, prev_secs = _criteria.get(n, (title, "PASS", 0.0))
    status = "PASS" if rep.passed and prev_status == "PASS" else "FAIL"
    # fixture setup time counts toward the criterion it feeds
    _criteria[n] = (title, status, prev_secs + rep.duration)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        title, status, secs = _criteria[n]
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {title}  ({secs:.1f}s)")
