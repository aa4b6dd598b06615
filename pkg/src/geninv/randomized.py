"""Sketching matrices and sketched generalized inverses.

With row sketch P (m-by-p) and column sketch Q (n-by-q) for an m-by-n A:

* ``(P^T A)^+ P^T A Q (A Q)^+`` is exactly ``A^+`` iff the sketches keep
  the rank, ``rank(P^T A) = rank(A Q) = rank(A)``;
* replacing the two pseudoinverses by any {1}-inverses gives a
  {1,2}-inverse under the same condition;
* ``Q (P^T A Q)^+ P^T`` is a {1,2}-inverse under the same condition, and
  the pseudoinverse when P and Q are square orthogonal.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import PreconditionError, RankHypothesisError, ShapeError
from .factorization import cr_factorize
from .geninverse import pinv_reverse_order
from .linalg import as_matrix, frob, numeric_rank, pinv_oracle, qr_column_pivoted

KINDS = ("gaussian", "orthonormal", "column_select", "user")
DEFAULT_OVERSAMPLING = 5


@dataclass(frozen=True)
class SketchPair:
    P: np.ndarray
    Q: np.ndarray
    kind: str = "user"
    seed: Optional[int] = None
    row_indices: Optional[tuple] = field(default=None, compare=False)
    col_indices: Optional[tuple] = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown sketch kind {self.kind!r}")
        object.__setattr__(self, "P", as_matrix(self.P, "P"))
        object.__setattr__(self, "Q", as_matrix(self.Q, "Q"))

    @property
    def shape(self):
        """``(m, n, p, q)``."""
        return self.P.shape + self.Q.shape


def selection_matrix(size, indices):
    """Columns of the identity ``I_size`` picked by `indices`."""
    indices = [int(i) for i in indices]
    if len(set(indices)) != len(indices):
        raise PreconditionError(f"duplicate indices in {indices}")
    if any(i < 0 or i >= size for i in indices):
        raise PreconditionError(f"indices {indices} out of range for size {size}")
    return np.eye(size)[:, indices]


def oversampled_width(rank_target, limit, oversampling=DEFAULT_OVERSAMPLING):
    return min(limit, rank_target + oversampling)


def make_sketch(kind, m, n, p, q, seed=None, row_indices=None, col_indices=None):
    """Build a :class:`SketchPair` of the given kind.

    gaussian
        i.i.d. standard normal entries from ``numpy.random.default_rng(seed)``.
    orthonormal
        the Q factor of a Gaussian draw, so ``P^T P = I_p`` (needs p <= m).
    column_select
        columns of the identity; explicit `row_indices` / `col_indices`, or
        a seeded random choice of p rows and q columns.
    """
    if kind not in ("gaussian", "orthonormal", "column_select"):
        raise PreconditionError(f"cannot generate sketch of kind {kind!r}")
    if min(m, n, p, q) < 0:
        raise PreconditionError("dimensions must be nonnegative")
    if kind == "column_select":
        if (row_indices is None or col_indices is None) and seed is None:
            raise PreconditionError("column_select needs indices or a seed")
        rng = np.random.default_rng(seed)
        if row_indices is None:
            if p > m:
                raise PreconditionError(f"p={p} exceeds m={m}")
            row_indices = sorted(rng.choice(m, size=p, replace=False).tolist())
        if col_indices is None:
            if q > n:
                raise PreconditionError(f"q={q} exceeds n={n}")
            col_indices = sorted(rng.choice(n, size=q, replace=False).tolist())
        P = selection_matrix(m, row_indices)
        Q = selection_matrix(n, col_indices)
        return SketchPair(P, Q, kind, seed, tuple(int(i) for i in row_indices),
                          tuple(int(j) for j in col_indices))
    if seed is None:
        raise PreconditionError(f"{kind} sketches need a seed")
    rng = np.random.default_rng(seed)
    P = rng.standard_normal((m, p))
    Q = rng.standard_normal((n, q))
    if kind == "orthonormal":
        if p > m or q > n:
            raise PreconditionError(f"orthonormal sketch needs p <= m and q <= n, got {(m, n, p, q)}")
        P = np.linalg.qr(P)[0]
        Q = np.linalg.qr(Q)[0]
    return SketchPair(P, Q, kind, seed)


def _conform(A, sketch):
    A = as_matrix(A)
    m, n = A.shape
    if sketch.P.shape[0] != m or sketch.Q.shape[0] != n:
        raise ShapeError(
            f"sketch P {sketch.P.shape}, Q {sketch.Q.shape} do not conform with A {A.shape}"
        )
    return A, sketch.P, sketch.Q


@dataclass(frozen=True)
class RankPreservationReport:
    rank_A: int
    rank_PTA: int
    rank_AQ: int

    @property
    def preserved(self):
        return self.rank_PTA == self.rank_A and self.rank_AQ == self.rank_A

    def as_dict(self):
        return {"rank_A": self.rank_A, "rank_PTA": self.rank_PTA,
                "rank_AQ": self.rank_AQ, "preserved": self.preserved}


def check_rank_preservation(A, sketch, tol=None, rtol=None):
    """Numeric ranks of A, ``P^T A`` and ``A Q`` under one threshold rule."""
    A, P, Q = _conform(A, sketch)
    return RankPreservationReport(
        numeric_rank(A, tol, rtol).numeric_rank,
        numeric_rank(P.T @ A, tol, rtol).numeric_rank,
        numeric_rank(A @ Q, tol, rtol).numeric_rank,
    )


def pinv_randomized(A, sketch, rtol=None):
    """``(P^T A)^+ P^T A Q (A Q)^+``.

    Equal to ``A^+`` exactly when the sketch preserves rank; otherwise an
    approximation of lower rank.
    """
    A, P, Q = _conform(A, sketch)
    PTA = P.T @ A
    AQ = A @ Q
    return (pinv_oracle(PTA, rtol=rtol) @ (PTA @ Q)) @ pinv_oracle(AQ, rtol=rtol)


def pinv_randomized_factored(F, sketch):
    """The two halves ``(P^T C R)^+ P^T C`` and ``R Q (C R Q)^+`` whose
    product is :func:`pinv_randomized` of ``A = C R``."""
    A, P, Q = _conform(F.C @ F.R, sketch)
    left = pinv_oracle(P.T @ A) @ (P.T @ F.C)
    right = (F.R @ Q) @ pinv_oracle(A @ Q)
    return left, right


def one_inverse_qr(M, tol=None, rtol=None):
    """A {1}-inverse of M from column-pivoted QR.

    With ``M[:, perm] = Qf Rf`` and ``R11`` the leading k-by-k block of Rf
    (k the numeric rank read off ``|diag(Rf)|``), returns
    ``Pi [[R11^{-1}, 0], [0, 0]] Qf^T``.
    """
    M = as_matrix(M, "M")
    m, n = M.shape
    G = np.zeros((n, m))
    if M.size == 0:
        return G
    Qf, Rf, perm = qr_column_pivoted(M)
    d = np.abs(np.diag(Rf))
    if tol is None:
        tol = (rtol if rtol is not None else max(m, n) * np.finfo(float).eps) * (d[0] if d.size else 0.0)
    k = int(np.sum(d > tol))
    if k == 0:
        return G
    R11 = Rf[:k, :k]
    # back substitution against Qf^T
    block = np.linalg.solve(R11, Qf[:, :k].T)
    G[perm[:k], :] = block
    return G


def _require_preserved(A, sketch, rtol, what):
    report = check_rank_preservation(A, sketch, rtol=rtol)
    if not report.preserved:
        raise RankHypothesisError(
            f"{what} needs rank(P^T A) = rank(A Q) = rank(A); got "
            f"rank(A)={report.rank_A}, rank(P^T A)={report.rank_PTA}, rank(A Q)={report.rank_AQ}"
        )
    return report


def geninv_randomized(A, sketch, rtol=None):
    """``(P^T A)^g P^T A Q (A Q)^g`` with QR-based {1}-inverses.

    A {1,2}-inverse of A; requires rank preservation.
    """
    A, P, Q = _conform(A, sketch)
    _require_preserved(A, sketch, rtol, "geninv_randomized")
    PTA = P.T @ A
    AQ = A @ Q
    return one_inverse_qr(PTA, rtol=rtol) @ (PTA @ Q) @ one_inverse_qr(AQ, rtol=rtol)


def geninv_compact(A, sketch, rtol=None, require_preserved=True):
    """``Q (C R)^+ P^T`` where ``C R`` is the CR factorization of ``P^T A Q``.

    A {1,2}-inverse of A under rank preservation. With
    ``require_preserved=False`` the formula is evaluated regardless (the
    graph resistance estimators use that).
    """
    A, P, Q = _conform(A, sketch)
    if require_preserved:
        _require_preserved(A, sketch, rtol, "geninv_compact")
    S = P.T @ A @ Q
    if require_preserved:
        F = cr_factorize(S, _rref_tol(S, rtol))
        core = pinv_reverse_order(F) if F.rank else np.zeros(S.T.shape)
    else:
        core = pinv_oracle(S, rtol=rtol)
    return Q @ core @ P.T


def _rref_tol(S, rtol):
    if rtol is None:
        return None
    return rtol * (np.abs(S).max() if S.size else 0.0)


def is_orthogonal(M, tol=1e-10):
    M = as_matrix(M)
    return M.shape[0] == M.shape[1] and frob(M.T @ M - np.eye(M.shape[0])) <= tol


def pinv_orthogonal_sketch(A, sketch, rtol=None):
    """``Q (P^T A Q)^+ P^T`` for square orthogonal P and Q; equals ``A^+``."""
    A, P, Q = _conform(A, sketch)
    if not (is_orthogonal(P) and is_orthogonal(Q)):
        raise PreconditionError("P and Q must be square orthogonal matrices")
    return Q @ pinv_oracle(P.T @ A @ Q, rtol=rtol) @ P.T


def sketched_inverse_qr(A, sketch, rtol=None):
    """``Q (P^T A Q)^+ P^T`` evaluated through a thin QR of the core.

    When the core ``P^T A Q`` has full column rank this is
    ``(Q Rbar^{-1}) (P Qbar)^T`` with ``P^T A Q = Qbar Rbar``; otherwise the
    core pseudoinverse comes from the SVD oracle.
    """
    A, P, Q = _conform(A, sketch)
    S = P.T @ A @ Q
    p, q = S.shape
    if q and p >= q and numeric_rank(S, rtol=rtol).numeric_rank == q:
        Qbar, Rbar = np.linalg.qr(S)
        return np.linalg.solve(Rbar.T, Q.T).T @ (P @ Qbar).T
    return Q @ pinv_oracle(S, rtol=rtol) @ P.T
