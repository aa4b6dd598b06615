"""Effective resistance on weighted graphs.

Exact resistances come from the Laplacian pseudoinverse. The cheap estimate
``d^T L_SS^+ d`` with ``S = {i, j}`` and ``d = [1, -1]`` only looks at the
2-by-2 principal submatrix; it never exceeds the true resistance and is off
by at most ``2 / lambda_2(L)``.
"""

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .errors import DisconnectedGraphError, PreconditionError
from .linalg import EPS, as_matrix, pinv_oracle, symmetric_eigen
from .randomized import geninv_compact

LESS = "less"
GREATER = "greater"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected graph on nodes ``0..node_count-1`` with positive conductances.

    Parallel edges are allowed; their conductances add.
    """

    node_count: int
    edges: Tuple[Tuple[int, int, float], ...] = ()

    def __post_init__(self):
        n = int(self.node_count)
        if n < 0:
            raise ValueError("node_count must be nonnegative")
        edges = []
        for e in self.edges:
            i, j, w = int(e[0]), int(e[1]), float(e[2])
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) out of range for {n} nodes")
            if i == j:
                raise ValueError(f"self-loop at node {i}")
            if not (w > 0 and np.isfinite(w)):
                raise ValueError(f"conductance must be positive and finite, got {w}")
            edges.append((i, j, w))
        object.__setattr__(self, "node_count", n)
        object.__setattr__(self, "edges", tuple(edges))

    def components(self):
        return _components(self.node_count, [(i, j) for i, j, _ in self.edges])

    @property
    def is_connected(self):
        return len(self.components()) <= 1


def _components(n, pairs):
    """Connected components by union-find, each as a sorted node list."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in pairs:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    groups = {}
    for v in range(n):
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values())


def incidence_matrix(g):
    """Edge-by-node incidence: row e has -1 at the tail and +1 at the head."""
    A = np.zeros((len(g.edges), g.node_count))
    for e, (i, j, _) in enumerate(g.edges):
        A[e, i] = -1.0
        A[e, j] = 1.0
    return A


def laplacian(g):
    """Weighted Laplacian ``A^T W A``."""
    A = incidence_matrix(g)
    w = np.array([e[2] for e in g.edges])
    return A.T @ (w[:, None] * A)


def _check_laplacian(L):
    L = as_matrix(L, "L")
    n = L.shape[0]
    if L.shape != (n, n):
        raise PreconditionError(f"Laplacian must be square, got {L.shape}")
    return L


def laplacian_components(L):
    """Components of the graph whose edges are the nonzero off-diagonals of L."""
    L = _check_laplacian(L)
    n = L.shape[0]
    scale = np.abs(L).max() if L.size else 0.0
    ii, jj = np.nonzero(np.abs(np.triu(L, 1)) > EPS * scale)
    return _components(n, zip(ii.tolist(), jj.tolist()))


def algebraic_connectivity(L):
    """Second-smallest Laplacian eigenvalue."""
    L = _check_laplacian(L)
    if L.shape[0] < 2:
        raise PreconditionError("need at least two nodes")
    return float(symmetric_eigen(L)[0][1])


def require_connected(L):
    """Raise :class:`DisconnectedGraphError` unless the graph of L is connected.

    Connectivity is decided twice, by union-find on the edge pattern and by
    ``lambda_2 > n * eps * lambda_max``; disagreement is also an error.
    Returns ``lambda_2``.
    """
    L = _check_laplacian(L)
    n = L.shape[0]
    comps = laplacian_components(L)
    w = symmetric_eigen(L)[0] if n else np.zeros(0)
    lam2 = float(w[1]) if n >= 2 else 0.0
    spectral_ok = n >= 2 and lam2 > n * EPS * float(w[-1])
    if len(comps) > 1 or not spectral_ok:
        raise DisconnectedGraphError(
            f"graph is disconnected: components {comps}", components=comps
        )
    return lam2


def gamma_bound(L):
    """``2 / lambda_2(L)`` for a connected Laplacian."""
    return 2.0 / require_connected(L)


def _diff(n, i, j):
    if i == j or not (0 <= i < n and 0 <= j < n):
        raise PreconditionError(f"need distinct nodes in [0, {n}), got ({i}, {j})")
    d = np.zeros(n)
    d[i], d[j] = 1.0, -1.0
    return d


def resistance_exact(L, i, j):
    """``(e_i - e_j)^T L^+ (e_i - e_j)``."""
    L = _check_laplacian(L)
    require_connected(L)
    d = _diff(L.shape[0], i, j)
    return float(d @ pinv_oracle(L) @ d)


def resistance_from_pinv(Lplus):
    """``diag(L^+) 1^T + 1 diag(L^+)^T - 2 L^+``."""
    dg = np.diag(Lplus)
    return dg[:, None] + dg[None, :] - 2.0 * Lplus


def resistance_matrix(L):
    L = _check_laplacian(L)
    require_connected(L)
    return resistance_from_pinv(pinv_oracle(L))


def kron_reduce(L, S):
    """Schur complement ``L_SS - L_ST L_TT^+ L_TS`` keeping the nodes in S."""
    L = _check_laplacian(L)
    n = L.shape[0]
    S = [int(s) for s in S]
    if not S or len(set(S)) != len(S) or min(S) < 0 or max(S) >= n:
        raise PreconditionError(f"invalid node subset {S}")
    T = [t for t in range(n) if t not in set(S)]
    LSS = L[np.ix_(S, S)]
    if not T:
        return LSS.copy()
    K = LSS - L[np.ix_(S, T)] @ pinv_oracle(L[np.ix_(T, T)]) @ L[np.ix_(T, S)]
    K = 0.5 * (K + K.T)
    scale = np.abs(L).max()
    if np.abs(L.sum(axis=1)).max() <= n * EPS * scale * 16:
        # the Schur complement of a Laplacian is a Laplacian; rebuilding the
        # diagonal from the off-diagonals keeps the all-ones null vector
        # exact instead of leaving a roundoff eigenvalue above the rank cut
        off = K - np.diag(np.diag(K))
        K = off - np.diag(off.sum(axis=1))
    return K


def pinv_sym2(a, b, c):
    """Pseudoinverse of the symmetric matrix ``[[a, b], [b, c]]`` in closed form."""
    mean = 0.5 * (a + c)
    rad = np.hypot(0.5 * (a - c), b)
    lams = (mean + rad, mean - rad)
    if rad == 0.0:
        vecs = (np.array([1.0, 0.0]), np.array([0.0, 1.0]))
    else:
        # eigenvector of the larger eigenvalue, then its orthogonal partner
        if a >= c:
            v = np.array([lams[0] - c, b])
        else:
            v = np.array([b, lams[0] - a])
        v /= np.linalg.norm(v)
        vecs = (v, np.array([-v[1], v[0]]))
    tol = 2 * EPS * max(abs(lams[0]), abs(lams[1]))
    out = np.zeros((2, 2))
    for lam, v in zip(lams, vecs):
        if abs(lam) > tol:
            out += np.outer(v, v) / lam
    return out


def resistance_submatrix(L, i, j):
    """``d^T L_SS^+ d`` for ``S = {i, j}``, ``d = [1, -1]``."""
    L = _check_laplacian(L)
    _diff(L.shape[0], i, j)
    M = pinv_sym2(L[i, i], L[i, j], L[j, j])
    return float(M[0, 0] + M[1, 1] - M[0, 1] - M[1, 0])


@dataclass(frozen=True)
class ResistanceEstimate:
    i: int
    j: int
    exact: float
    approx: float
    gamma: float

    @property
    def epsilon(self):
        return self.exact - self.approx

    def as_dict(self):
        return {"i": self.i, "j": self.j, "exact": self.exact, "approx": self.approx,
                "epsilon": self.epsilon, "gamma": self.gamma}


def resistance_estimates(L, pairs):
    """:class:`ResistanceEstimate` for each (i, j) in `pairs`, sharing one
    pseudoinverse and one eigen-decomposition of L."""
    L = _check_laplacian(L)
    lam2 = require_connected(L)
    gamma = 2.0 / lam2
    R = resistance_from_pinv(pinv_oracle(L))
    out = []
    for i, j in pairs:
        approx = resistance_submatrix(L, i, j)
        out.append(ResistanceEstimate(int(i), int(j), float(R[i, j]), approx, gamma))
    return out


def resistance_submatrix_estimate(L, i, j):
    return resistance_estimates(L, [(i, j)])[0]


def all_pairs(n):
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


@dataclass(frozen=True)
class OrderingInference:
    verdict: str


def infer_ordering(rt_ij, rt_ik, gamma):
    """Decide the sign of ``R_ij - R_ik`` from estimates when the estimated
    gap exceeds gamma; otherwise inconclusive."""
    if not gamma > 0:
        raise PreconditionError("gamma must be positive")
    delta = rt_ij - rt_ik
    if delta < -gamma:
        return OrderingInference(LESS)
    if delta > gamma:
        return OrderingInference(GREATER)
    return OrderingInference(INCONCLUSIVE)


def resistance_randomized(L, sketch, rtol=None):
    """Resistance matrix built from the sketched inverse ``Q (P^T L Q)^+ P^T``."""
    L = _check_laplacian(L)
    Lp = geninv_compact(L, sketch, rtol=rtol, require_preserved=False)
    return resistance_from_pinv(Lp)


def parse_edge_list(text, one_based=False):
    """Parse ``i j w`` lines (``#`` starts a comment) into a :class:`WeightedGraph`.

    The node count is one more than the largest index seen. Raises
    ``ValueError`` with the 1-based line number on malformed input.
    """
    edges: List[Tuple[int, int, float]] = []
    shift = 1 if one_based else 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ValueError(f"line {lineno}: expected 'i j w', got {raw!r}")
        try:
            i, j = int(parts[0]) - shift, int(parts[1]) - shift
            w = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError:
            raise ValueError(f"line {lineno}: cannot parse {raw!r}") from None
        if i < 0 or j < 0:
            raise ValueError(f"line {lineno}: negative node index")
        if i == j:
            raise ValueError(f"line {lineno}: self-loop at node {i + shift}")
        if not (w > 0 and np.isfinite(w)):
            raise ValueError(f"line {lineno}: conductance must be positive")
        edges.append((i, j, w))
    n = 1 + max((max(i, j) for i, j, _ in edges), default=-1)
    return WeightedGraph(n, tuple(edges))
