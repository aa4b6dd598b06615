"""Dense matrix helpers and the classical decompositions.

Matrices are plain ``numpy.ndarray`` objects of dtype float64 and ndim 2.
Nothing here mutates its arguments.

Contents
--------
as_matrix
    validate and convert to a finite real 2-D array
svd
    thin SVD by one-sided (Hestenes) Jacobi
numeric_rank
    rank decision from singular values
pinv_oracle
    SVD-based Moore-Penrose pseudoinverse
qr_column_pivoted
    Householder QR with column pivoting
lu_complete_pivoted
    Gaussian elimination with complete pivoting
rref
    reduced row echelon form
symmetric_eigen
    cyclic two-sided Jacobi for symmetric matrices
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, PreconditionError

EPS = np.finfo(np.float64).eps
MAX_SWEEPS = 60


def as_matrix(A, name="A"):
    """Return `A` as a finite float64 2-D array (a copy is never promised)."""
    M = np.asarray(A, dtype=np.float64)
    if M.ndim == 1:
        M = M.reshape(-1, 1)
    if M.ndim != 2:
        raise PreconditionError(f"{name} must be 2-D, got ndim={M.ndim}")
    if not np.all(np.isfinite(M)):
        raise PreconditionError(f"{name} has non-finite entries")
    return M


def frob(A):
    return float(np.linalg.norm(A)) if np.size(A) else 0.0


def _round_robin(n):
    """Pairings for a parallel Jacobi sweep: n-1 (or n) rounds of disjoint pairs."""
    idx = list(range(n))
    if n % 2:
        idx.append(-1)
    size = len(idx)
    rounds = []
    for _ in range(size - 1):
        ps, qs = [], []
        for k in range(size // 2):
            a, b = idx[k], idx[size - 1 - k]
            if a >= 0 and b >= 0:
                ps.append(min(a, b))
                qs.append(max(a, b))
        if ps:
            rounds.append((np.array(ps), np.array(qs)))
        idx = [idx[0]] + [idx[-1]] + idx[1:-1]
    return rounds


def _jacobi_tangent(zeta):
    # smaller root of t^2 + 2 zeta t - 1 = 0
    sign = np.where(zeta >= 0, 1.0, -1.0)
    return sign / (np.abs(zeta) + np.hypot(1.0, zeta))


def svd(A, max_sweeps=MAX_SWEEPS):
    """Thin singular value decomposition ``A = U @ diag(S) @ V.T``.

    One-sided Jacobi on the columns of `A` (or of ``A.T`` when `A` is wide),
    with the round-robin ordering so that each round rotates disjoint column
    pairs in one vectorized step.

    Parameters
    ----------
    A : array_like, shape (m, n)
    max_sweeps : int
        Iteration cap; exceeding it raises :class:`ConvergenceError`.

    Returns
    -------
    U : ndarray, shape (m, k)
        Orthonormal columns, ``k = min(m, n)``.
    S : ndarray, shape (k,)
        Singular values in descending order.
    V : ndarray, shape (n, k)
        Orthonormal columns.
    """
    A = as_matrix(A)
    m, n = A.shape
    if m < n:
        V, S, U = svd(A.T, max_sweeps)
        return U, S, V
    if n == 0:
        return np.zeros((m, 0)), np.zeros(0), np.zeros((0, 0))

    W = A.copy()
    V = np.eye(n)
    tol = EPS * m
    rounds = _round_robin(n)
    sweeps = 0
    while True:
        rotated = False
        for ps, qs in rounds:
            Wp, Wq = W[:, ps], W[:, qs]
            alpha = np.einsum("ij,ij->j", Wp, Wp)
            beta = np.einsum("ij,ij->j", Wq, Wq)
            gamma = np.einsum("ij,ij->j", Wp, Wq)
            active = np.abs(gamma) > tol * np.sqrt(alpha * beta)
            if not active.any():
                continue
            rotated = True
            ps, qs = ps[active], qs[active]
            Wp, Wq = Wp[:, active], Wq[:, active]
            zeta = (beta[active] - alpha[active]) / (2.0 * gamma[active])
            t = _jacobi_tangent(zeta)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = c * t
            W[:, ps], W[:, qs] = c * Wp - s * Wq, s * Wp + c * Wq
            Vp, Vq = V[:, ps], V[:, qs]
            V[:, ps], V[:, qs] = c * Vp - s * Vq, s * Vp + c * Vq
        if not rotated:
            break
        sweeps += 1
        if sweeps >= max_sweeps:
            raise ConvergenceError(
                f"Jacobi SVD did not converge after {sweeps} sweeps", sweeps
            )

    S = np.linalg.norm(W, axis=0)
    order = np.argsort(-S, kind="stable")
    S, W, V = S[order], W[:, order], V[:, order]
    good = S > (S[0] if n else 0.0) * m * EPS
    good &= S > 0
    k = int(good.sum())
    U = np.empty((m, n))
    U[:, :k] = W[:, :k] / S[:k]
    if k < n:
        U[:, k:] = _orthonormal_complement(U[:, :k], m)[:, : n - k]
    return U, S, V


def _orthonormal_complement(B, m):
    """Orthonormal basis of the orthogonal complement of the columns of `B` (orthonormal)."""
    k = B.shape[1]
    if k == 0:
        return np.eye(m)
    Qfull, _ = np.linalg.qr(B, mode="complete")
    return Qfull[:, k:]


def default_tolerance(S, shape):
    smax = float(S[0]) if len(S) else 0.0
    return smax * max(shape) * EPS


@dataclass(frozen=True)
class RankDecision:
    numeric_rank: int
    singular_values: np.ndarray
    tolerance_used: float


def numeric_rank(A, tol=None, rtol=None):
    """Numeric rank of `A` as the count of singular values above a threshold.

    The threshold is `tol` if given, else ``rtol * sigma_max`` if `rtol` is
    given, else ``sigma_max * max(m, n) * eps``.
    """
    A = as_matrix(A)
    S = svd(A)[1]
    if tol is None:
        if rtol is not None:
            tol = rtol * (float(S[0]) if len(S) else 0.0)
        else:
            tol = default_tolerance(S, A.shape)
    return RankDecision(int(np.sum(S > tol)), S, float(tol))


def rank(A, tol=None, rtol=None):
    return numeric_rank(A, tol, rtol).numeric_rank


def pinv_oracle(A, tol=None, rtol=None):
    """Moore-Penrose pseudoinverse from the Jacobi SVD.

    Singular values at or below the threshold (see :func:`numeric_rank`)
    are treated as zero. The pseudoinverse of an m-by-n zero matrix is the
    n-by-m zero matrix, including the empty cases.
    """
    A = as_matrix(A)
    m, n = A.shape
    if m == 0 or n == 0:
        return np.zeros((n, m))
    U, S, V = svd(A)
    if tol is None:
        tol = rtol * S[0] if rtol is not None else default_tolerance(S, A.shape)
    keep = S > tol
    return (V[:, keep] / S[keep]) @ U[:, keep].T


def pinv_truncated(A, r):
    """Pseudoinverse of the best rank-`r` approximation of `A`."""
    A = as_matrix(A)
    m, n = A.shape
    r = int(r)
    if r < 0 or r > min(m, n):
        raise PreconditionError(f"rank {r} out of range for shape {A.shape}")
    if r == 0:
        return np.zeros((n, m))
    U, S, V = svd(A)
    return (V[:, :r] / S[:r]) @ U[:, :r].T


def qr_column_pivoted(A):
    """Householder QR with column pivoting, ``A[:, perm] = Qf @ Rf``.

    At step k the remaining column of largest norm (recomputed, not
    downdated) is moved into position k; ties go to the smallest original
    index. The diagonal of `Rf` is made nonnegative.

    Returns
    -------
    Qf : ndarray, shape (m, k)
    Rf : ndarray, shape (k, n)
    perm : ndarray of int, shape (n,)
        ``k = min(m, n)``.
    """
    A = as_matrix(A)
    m, n = A.shape
    k = min(m, n)
    R = A.copy()
    Q = np.eye(m)
    perm = np.arange(n)
    for j in range(k):
        norms = np.linalg.norm(R[j:, j:], axis=0)
        piv = j + int(np.argmax(norms)) if norms.size else j
        if piv != j:
            R[:, [j, piv]] = R[:, [piv, j]]
            perm[[j, piv]] = perm[[piv, j]]
        x = R[j:, j]
        nx = np.linalg.norm(x)
        if nx == 0.0:
            continue
        v = x.copy()
        v[0] += np.copysign(nx, x[0])
        v /= np.linalg.norm(v)
        R[j:, j:] -= 2.0 * np.outer(v, v @ R[j:, j:])
        R[j + 1 :, j] = 0.0
        Q[:, j:] -= 2.0 * np.outer(Q[:, j:] @ v, v)
    Qf, Rf = Q[:, :k], np.triu(R[:k, :])
    signs = np.where(np.diag(Rf) < 0, -1.0, 1.0)
    return Qf * signs, Rf * signs[:, None], perm


def lu_complete_pivoted(A):
    """LU factorization with complete pivoting, ``B @ A @ D = Lf @ Uf``.

    The pivot at each step is an entry of maximal magnitude in the active
    submatrix (first in row-major order on ties). Elimination stops early
    once the active submatrix is exactly zero.

    Returns
    -------
    Lf : ndarray, shape (m, k)
        Unit lower trapezoidal, entries bounded by 1 in magnitude.
    Uf : ndarray, shape (k, n)
        Upper trapezoidal.
    B : ndarray, shape (m, m)
        Row permutation matrix.
    D : ndarray, shape (n, n)
        Column permutation matrix.
    """
    Lf, Uf, rows, cols = lu_complete_pivoted_indices(A)
    m, n = len(rows), len(cols)
    B = np.eye(m)[rows, :]
    D = np.eye(n)[:, cols]
    return Lf, Uf, B, D


def lu_complete_pivoted_indices(A):
    """Like :func:`lu_complete_pivoted` but returns the permutations as index
    vectors: ``A[rows][:, cols] = Lf @ Uf``."""
    A = as_matrix(A)
    m, n = A.shape
    k = min(m, n)
    W = A.copy()
    rows = np.arange(m)
    cols = np.arange(n)
    L = np.zeros((m, k))
    for j in range(k):
        active = np.abs(W[j:, j:])
        flat = int(np.argmax(active))
        i, c = divmod(flat, n - j)
        if active[i, c] == 0.0:
            break
        i += j
        c += j
        if i != j:
            W[[j, i], :] = W[[i, j], :]
            L[[j, i], :] = L[[i, j], :]
            rows[[j, i]] = rows[[i, j]]
        if c != j:
            W[:, [j, c]] = W[:, [c, j]]
            cols[[j, c]] = cols[[c, j]]
        mult = W[j + 1 :, j] / W[j, j]
        L[j + 1 :, j] = mult
        W[j + 1 :, j:] -= np.outer(mult, W[j, j:])
        W[j + 1 :, j] = 0.0
    L[np.arange(k), np.arange(k)] = 1.0
    U = np.triu(W[:k, :])
    return L, U, rows, cols


def rref(A, tol=None):
    """Reduced row echelon form by Gauss-Jordan elimination.

    Columns are scanned left to right; within a column the remaining row
    with the largest magnitude is the pivot candidate, and the column is a
    pivot column only if that magnitude exceeds `tol`.

    Without an explicit `tol` the threshold starts at
    ``max(m, n) * eps * max|A|`` and is raised by factors of ten (at most
    twelve times) until the pivot count agrees with the SVD numeric rank,
    since elimination roundoff can leave dependent columns with residual
    pivots well above machine precision.

    Returns
    -------
    R0 : ndarray, shape (m, n)
    pivot_cols : list of int
    """
    A = as_matrix(A)
    m, n = A.shape
    if tol is None:
        base = max(m, n, 1) * EPS * (np.abs(A).max() if A.size else 0.0)
        target = numeric_rank(A).numeric_rank
        best = None
        for k in range(13):
            R0, pivots = _rref(A, base * 10.0**k)
            if len(pivots) == target:
                return R0, pivots
            if best is None or abs(len(pivots) - target) < abs(len(best[1]) - target):
                best = (R0, pivots)
        return best
    if tol < 0:
        raise PreconditionError("tol must be nonnegative")
    return _rref(A, tol)


def _rref(A, tol):
    m, n = A.shape
    R0 = A.copy()
    pivots = []
    row = 0
    for col in range(n):
        if row >= m:
            break
        i = row + int(np.argmax(np.abs(R0[row:, col])))
        if abs(R0[i, col]) <= tol:
            R0[row:, col] = 0.0
            continue
        if i != row:
            R0[[row, i], :] = R0[[i, row], :]
        R0[row, :] /= R0[row, col]
        others = np.arange(m) != row
        R0[others, :] -= np.outer(R0[others, col], R0[row, :])
        R0[others, col] = 0.0
        R0[row, col] = 1.0
        pivots.append(col)
        row += 1
    R0[row:, :] = 0.0
    return R0, pivots


def symmetric_eigen(S, max_sweeps=MAX_SWEEPS):
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns eigenvalues in ascending order and orthonormal eigenvectors as
    columns, so that ``S @ V = V @ diag(w)``.
    """
    S = as_matrix(S, "S")
    n, n2 = S.shape
    if n != n2:
        raise PreconditionError(f"matrix must be square, got {S.shape}")
    scale = frob(S)
    if frob(S - S.T) > 1e-10 * scale:
        raise PreconditionError("matrix is not symmetric")
    M = 0.5 * (S + S.T)
    V = np.eye(n)
    if n <= 1 or scale == 0.0:
        return np.diag(M).copy(), V
    rounds = _round_robin(n)
    thresh = EPS * scale * 1e-2
    sweeps = 0
    while True:
        off = frob(M - np.diag(np.diag(M)))
        if off <= EPS * scale:
            break
        rotated = False
        for ps, qs in rounds:
            apq = M[ps, qs]
            active = np.abs(apq) > thresh
            if not active.any():
                continue
            rotated = True
            ps, qs, apq = ps[active], qs[active], apq[active]
            zeta = (M[qs, qs] - M[ps, ps]) / (2.0 * apq)
            t = _jacobi_tangent(zeta)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = c * t
            Mp, Mq = M[:, ps], M[:, qs]
            M[:, ps], M[:, qs] = c * Mp - s * Mq, s * Mp + c * Mq
            Mp, Mq = M[ps, :], M[qs, :]
            M[ps, :], M[qs, :] = c[:, None] * Mp - s[:, None] * Mq, s[:, None] * Mp + c[:, None] * Mq
            M[ps, qs] = 0.0
            M[qs, ps] = 0.0
            Vp, Vq = V[:, ps], V[:, qs]
            V[:, ps], V[:, qs] = c * Vp - s * Vq, s * Vp + c * Vq
        if not rotated:
            break
        sweeps += 1
        if sweeps >= max_sweeps:
            raise ConvergenceError(
                f"Jacobi eigensolver did not converge after {sweeps} sweeps", sweeps
            )
    w = np.diag(M).copy()
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]
