import numpy as np
import pytest


def planted(rng, m, n, r, scale=1.0):
    """Random m-by-n matrix of exact rank r (r <= min(m, n))."""
    if r == 0:
        return np.zeros((m, n))
    return scale * rng.standard_normal((m, r)) @ rng.standard_normal((r, n))


def oracle_pinv(A):
    """Independent pseudoinverse from numpy's LAPACK-backed SVD."""
    return np.linalg.pinv(np.asarray(A, dtype=float), rcond=1e-10)


def oracle_rank(A):
    A = np.asarray(A, dtype=float)
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    return int(np.sum(s > max(A.shape) * np.finfo(float).eps * s[0])) if s[0] > 0 else 0


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def A51():
    return np.array([[1.0, 4, 5], [2, 3, 5]])


@pytest.fixture
def A51_pinv():
    return np.array([[-8.0, 9], [7, -6], [-1, 3]]) / 15


@pytest.fixture
def path4():
    from geninv.graph import WeightedGraph
    return WeightedGraph(4, ((0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)))


def random_connected_graph(rng, n, p=0.3, wmin=0.1, wmax=5.0):
    """Random spanning tree plus Erdos-Renyi extra edges, random conductances."""
    from geninv.graph import WeightedGraph
    order = rng.permutation(n)
    edges = []
    for k in range(1, n):
        edges.append((int(order[k]), int(order[rng.integers(0, k)]), float(rng.uniform(wmin, wmax))))
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                edges.append((i, j, float(rng.uniform(wmin, wmax))))
    return WeightedGraph(n, tuple(edges))


# acceptance criteria register their verdicts here; printed at session end
ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(ACCEPTANCE_RESULTS[n])
