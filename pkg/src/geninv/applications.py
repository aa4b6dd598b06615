"""Sketched pseudoinverses in practice: randomized SVD, CUR, generalized
Nystrom, and sparse sensor placement from pivoted QR / LU."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import PreconditionError
from .linalg import (
    as_matrix,
    frob,
    lu_complete_pivoted_indices,
    numeric_rank,
    pinv_oracle,
    qr_column_pivoted,
)
from .randomized import make_sketch, sketched_inverse_qr


@dataclass(frozen=True)
class SensorPlacement:
    row_indices: tuple
    method: str
    col_indices: Optional[tuple] = None

    def __post_init__(self):
        if self.method not in ("qr_pivot", "lu_pivot"):
            raise ValueError(f"unknown placement method {self.method!r}")
        if len(set(self.row_indices)) != len(self.row_indices):
            raise ValueError("row indices must be distinct")
        if self.col_indices is not None and len(set(self.col_indices)) != len(self.col_indices):
            raise ValueError("column indices must be distinct")


@dataclass(frozen=True)
class ReconstructionReport:
    approximation_error: float
    pinv_error: float
    rank_used: int

    def as_dict(self):
        return {"approximation_error": self.approximation_error,
                "pinv_error": self.pinv_error, "rank_used": self.rank_used}


def orthonormal_range(M, rtol=None):
    """Orthonormal basis of the column space of M, from pivoted QR truncated
    at the numeric rank."""
    M = as_matrix(M)
    k = numeric_rank(M, rtol=rtol).numeric_rank
    Qf, _, _ = qr_column_pivoted(M)
    return Qf[:, :k]


def randomized_svd_pinv(A, q, seed, rtol=None):
    """``(Qbar^T A)^+ Qbar^T`` with Qbar an orthonormal basis of ``A Omega``
    for a Gaussian n-by-q test matrix Omega.

    Exact whenever ``rank(A Omega) = rank(A)``; the projector
    ``A (Qbar^T A)^+ Qbar^T`` is then the orthogonal projector onto C(A).
    """
    A = as_matrix(A)
    m, n = A.shape
    if not 1 <= q <= n:
        raise PreconditionError(f"sketch width q={q} must be in [1, {n}]")
    Omega = make_sketch("gaussian", m, n, 0, q, seed).Q
    Qbar = orthonormal_range(A @ Omega, rtol)
    return pinv_oracle(Qbar.T @ A, rtol=rtol) @ Qbar.T


def cur_pinv(A, rows, cols, rtol=None):
    """``A(I,:)^+ A(I,J) A(:,J)^+``.

    The same as the sketched formula with ``P = I_m(:, I)`` and
    ``Q = I_n(:, J)``, so it is ``A^+`` exactly when the selected rows and
    columns each keep the rank of A.
    """
    A = as_matrix(A)
    rows = [int(i) for i in rows]
    cols = [int(j) for j in cols]
    if not rows or not cols:
        raise PreconditionError("row and column index sets must be nonempty")
    m, n = A.shape
    for idx, size, label in ((rows, m, "row"), (cols, n, "column")):
        if len(set(idx)) != len(idx):
            raise PreconditionError(f"duplicate {label} indices")
        if min(idx) < 0 or max(idx) >= size:
            raise PreconditionError(f"{label} indices out of range")
    AI = A[rows, :]
    AJ = A[:, cols]
    return (pinv_oracle(AI, rtol=rtol) @ A[np.ix_(rows, cols)]) @ pinv_oracle(AJ, rtol=rtol)


def generalized_nystrom(A, sketch, rtol=None):
    """Generalized Nystrom reconstruction ``A Q (P^T A Q)^+ P^T A``.

    Returns
    -------
    A_hat : ndarray
    report : ReconstructionReport
        ``||A - A_hat||_F``, ``||A_p^+ - A^+||_F`` and the numeric rank of
        the sketched core.
    """
    A = as_matrix(A)
    Ap = sketched_inverse_qr(A, sketch, rtol)
    A_hat = A @ Ap @ A
    core_rank = numeric_rank(sketch.P.T @ A @ sketch.Q, rtol=rtol).numeric_rank
    report = ReconstructionReport(frob(A - A_hat), frob(Ap - pinv_oracle(A)), core_rank)
    return A_hat, report


def sensor_place_qr(A, p):
    """Pick p rows of A as the first p pivots of column-pivoted QR of A^T."""
    A = as_matrix(A)
    m = A.shape[0]
    if not 1 <= p <= m:
        raise PreconditionError(f"p={p} must be in [1, {m}]")
    _, _, perm = qr_column_pivoted(A.T)
    if p > len(perm):
        raise PreconditionError(f"p={p} exceeds the number of rows {len(perm)}")
    return SensorPlacement(tuple(int(i) for i in perm[:p]), "qr_pivot")


def sensor_place_lu(A, p, q=None):
    """Pick p rows and q columns (q defaults to p) from the leading pivots of
    LU with complete pivoting."""
    A = as_matrix(A)
    m, n = A.shape
    q = p if q is None else q
    if not 1 <= p <= m:
        raise PreconditionError(f"p={p} must be in [1, {m}]")
    if not 1 <= q <= n:
        raise PreconditionError(f"q={q} must be in [1, {n}]")
    _, _, rows, cols = lu_complete_pivoted_indices(A)
    return SensorPlacement(tuple(int(i) for i in rows[:p]), "lu_pivot",
                           tuple(int(j) for j in cols[:q]))


def placement_estimator(A, placement, rtol=None):
    """The n-by-m pseudoinverse estimate used by a placement.

    qr_pivot: ``(P_p^T A)^+ P_p^T``. lu_pivot: ``D_q (B_p A D_q)^+ B_p``.
    """
    A = as_matrix(A)
    m, n = A.shape
    rows = list(placement.row_indices)
    G = np.zeros((n, m))
    if placement.method == "qr_pivot":
        G[:, rows] = pinv_oracle(A[rows, :], rtol=rtol)
    else:
        cols = list(placement.col_indices)
        G[np.ix_(cols, rows)] = pinv_oracle(A[np.ix_(rows, cols)], rtol=rtol)
    return G


def reconstruct_signal(A, placement, y, rtol=None):
    """Estimate ``y_e = A A_p^+ y`` from the samples of y at the placement."""
    A = as_matrix(A)
    y = np.asarray(y, dtype=float).ravel()
    if y.shape != (A.shape[0],):
        raise PreconditionError(f"signal must have length {A.shape[0]}, got {y.shape}")
    return A @ (placement_estimator(A, placement, rtol) @ y)
