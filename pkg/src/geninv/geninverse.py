"""Classical generalized inverses of products ``A = C R``.

Penrose residuals and classification, the reverse order law with its
full-rank hypothesis, Greville's conditions, the product formula that
always works, the MacDuffee form, block-parametrized {1}-inverses,
Penrose's solvability test for ``Cbar X Rbar = A`` and general solutions
of consistent linear systems.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    GeninvError,
    InconsistentSystemError,
    RankHypothesisError,
    ShapeError,
)
from .factorization import CRFactorization, cr_factorize, is_full_column_rank, is_full_row_rank
from .linalg import as_matrix, frob, numeric_rank, pinv_oracle, pinv_truncated

DEFAULT_RTOL = 1e-9


def scaled_tol(*mats, rtol=DEFAULT_RTOL):
    """``rtol * max(1, ||M||_F for M in mats)``."""
    return rtol * max([1.0] + [frob(M) for M in mats])


class Classification(str, Enum):
    NOT_AN_INVERSE = "not_an_inverse"
    ONE_INVERSE = "one_inverse"
    ONE_TWO_INVERSE = "one_two_inverse"
    PSEUDOINVERSE = "pseudoinverse"

    @property
    def level(self):
        return list(Classification).index(self)

    def at_least(self, other):
        return self.level >= Classification(other).level


@dataclass(frozen=True)
class PenroseReport:
    """Frobenius residuals of the four Penrose identities for a candidate G."""

    r1: float
    r2: float
    r3: float
    r4: float
    tol: float
    classification: Classification

    def as_dict(self):
        return {
            "r1": self.r1,
            "r2": self.r2,
            "r3": self.r3,
            "r4": self.r4,
            "tol": self.tol,
            "classification": self.classification.value,
        }


def verify_penrose(A, G, tol=None):
    """Residuals ``||AGA-A||, ||GAG-G||, ||(GA)^T-GA||, ||(AG)^T-AG||``.

    The default tolerance is ``1e-9 * max(1, ||A||_F, ||G||_F)``. A candidate
    is a pseudoinverse when all four residuals are within tolerance, a
    {1,2}-inverse when the first two are, a {1}-inverse when the first is.
    """
    A = as_matrix(A, "A")
    G = as_matrix(G, "G")
    m, n = A.shape
    if G.shape != (n, m):
        raise ShapeError(f"G must be {n}x{m} for A of shape {A.shape}, got {G.shape}")
    if tol is None:
        tol = scaled_tol(A, G)
    AG = A @ G
    GA = G @ A
    r1 = frob(AG @ A - A)
    r2 = frob(GA @ G - G)
    r3 = frob(GA.T - GA)
    r4 = frob(AG.T - AG)
    if r1 > tol:
        cls = Classification.NOT_AN_INVERSE
    elif r2 > tol:
        cls = Classification.ONE_INVERSE
    elif r3 > tol or r4 > tol:
        cls = Classification.ONE_TWO_INVERSE
    else:
        cls = Classification.PSEUDOINVERSE
    return PenroseReport(r1, r2, r3, r4, float(tol), cls)


def _factors(F):
    if isinstance(F, CRFactorization):
        return F.C, F.R
    C, R = F
    return as_matrix(C, "C"), as_matrix(R, "R")


def _check_full_rank(C, R, tol=None):
    if not is_full_column_rank(C, tol):
        raise RankHypothesisError(
            f"C ({C.shape[0]}x{C.shape[1]}) does not have full column rank "
            f"(rank {numeric_rank(C, tol).numeric_rank} < {C.shape[1]})"
        )
    if not is_full_row_rank(R, tol):
        raise RankHypothesisError(
            f"R ({R.shape[0]}x{R.shape[1]}) does not have full row rank "
            f"(rank {numeric_rank(R, tol).numeric_rank} < {R.shape[0]})"
        )


def left_inverse(C):
    """``(C^T C)^{-1} C^T`` for C of full column rank."""
    return np.linalg.solve(C.T @ C, C.T)


def right_inverse(R):
    """``R^T (R R^T)^{-1}`` for R of full row rank."""
    return np.linalg.solve(R @ R.T, R).T


def pinv_reverse_order(F, tol=None):
    """``R^+ C^+`` for a full-rank factorization, with both hypotheses checked.

    Raises
    ------
    RankHypothesisError
        If C lacks full column rank or R lacks full row rank. The product
        ``R^+ C^+`` is then not the pseudoinverse of ``CR`` in general; use
        :func:`reverse_order_product` to form it anyway.
    """
    C, R = _factors(F)
    _check_full_rank(C, R, tol)
    if C.shape[1] == 0:
        return np.zeros((R.shape[1], C.shape[0]))
    return right_inverse(R) @ left_inverse(C)


def reverse_order_product(C, R):
    """Unchecked ``pinv(R) @ pinv(C)``."""
    return pinv_oracle(R) @ pinv_oracle(C)


def pinv_corrected(C, R, tol=None):
    """``(C^+ C R)^+ (C R R^+)^+``, the pseudoinverse of CR for any factors.

    Both inner products have the rank of CR in exact arithmetic, but the
    extra multiplication can lift roundoff singular values above the
    default threshold; the two outer pseudoinverses are therefore truncated
    at the numeric rank of CR (decided with `tol`).
    """
    C = as_matrix(C, "C")
    R = as_matrix(R, "R")
    if C.shape[1] != R.shape[0]:
        raise ShapeError(f"inner dimensions differ: C {C.shape}, R {R.shape}")
    CR = C @ R
    r = numeric_rank(CR, tol).numeric_rank
    left = pinv_truncated(pinv_oracle(C) @ CR, r)
    right = pinv_truncated(CR @ pinv_oracle(R), r)
    return left @ right


def pinv_macduffee(F, tol=None):
    """``R^T (C^T A R^T)^{-1} C^T`` with ``A = C R``."""
    C, R = _factors(F)
    _check_full_rank(C, R, tol)
    r = C.shape[1]
    if r == 0:
        return np.zeros((R.shape[1], C.shape[0]))
    core = C.T @ (C @ R) @ R.T
    if numeric_rank(core).numeric_rank < r:
        raise RankHypothesisError("C^T A R^T is numerically singular")
    return R.T @ np.linalg.solve(core, C.T)


def _in_column_space(base, M, rtol):
    """Whether C(M) is contained in C(base), by a rank comparison after
    scaling both blocks to unit Frobenius norm."""
    nM = frob(M)
    if nM == 0.0:
        return True
    nb = frob(base)
    if nb == 0.0:
        return False
    base = base / nb
    stacked = np.hstack([base, M / nM])
    return numeric_rank(stacked, tol=rtol).numeric_rank == numeric_rank(base, tol=rtol).numeric_rank


def greville_conditions(C, R, tol=DEFAULT_RTOL):
    """The two subspace inclusions under which ``(CR)^+ = R^+ C^+``.

    ``C(R R^T C^T) in C(C^T)`` and ``C(C^T C R) in C(R)``, each decided by a
    rank equality with threshold `tol` relative to unit-normalized blocks.
    """
    C = as_matrix(C, "C")
    R = as_matrix(R, "R")
    if C.shape[1] != R.shape[0]:
        raise ShapeError(f"inner dimensions differ: C {C.shape}, R {R.shape}")
    cond1 = _in_column_space(C.T, R @ R.T @ C.T, tol)
    cond2 = _in_column_space(R, C.T @ C @ R, tol)
    return cond1, cond2


def two_sided_projection_residual(C, R):
    """``||C^+ C M R R^+ - M||_F`` with ``M = R R^T C^T C``."""
    C = as_matrix(C, "C")
    R = as_matrix(R, "R")
    if C.shape[1] != R.shape[0]:
        raise ShapeError(f"inner dimensions differ: C {C.shape}, R {R.shape}")
    M = R @ R.T @ C.T @ C
    return frob(pinv_oracle(C) @ C @ M @ R @ pinv_oracle(R) - M)


@dataclass(frozen=True)
class OneInverseSpec:
    """Free blocks of a {1}-inverse in completed-basis coordinates.

    With ``r = rank(A)`` for an m-by-n A: `Z12` is r-by-(m-r), `Z21` is
    (n-r)-by-r and `Z22` is (n-r)-by-(m-r).
    """

    Z12: np.ndarray
    Z21: np.ndarray
    Z22: np.ndarray

    @classmethod
    def zeros(cls, r, m, n):
        return cls(np.zeros((r, m - r)), np.zeros((n - r, r)), np.zeros((n - r, m - r)))

    @property
    def product_gap(self):
        """``||Z22 - Z21 Z12||_F``; zero exactly for {1,2}-inverses."""
        return frob(self.Z22 - self.Z21 @ self.Z12)


def basis_completions(A, tol=None):
    """Square invertible completions ``[C0 C1]`` and ``[R0; R1]``.

    ``A = C0 R0`` is the CR factorization; C1 is an orthonormal basis of the
    left nullspace and the rows of R1 an orthonormal basis of the nullspace.
    """
    A = as_matrix(A)
    m, n = A.shape
    F = cr_factorize(A, tol)
    r = F.rank
    C1 = np.linalg.qr(F.C, mode="complete")[0][:, r:] if r else np.eye(m)
    R1 = (np.linalg.qr(F.R.T, mode="complete")[0][:, r:] if r else np.eye(n)).T
    return np.hstack([F.C, C1]), np.vstack([F.R, R1]), r


def construct_one_inverse(A, spec, tol=None):
    """Assemble ``[R0; R1]^{-1} [[I, Z12], [Z21, Z22]] [C0 C1]^{-1}``.

    The result always satisfies ``A G A = A``; it also satisfies
    ``G A G = G`` exactly when ``Z22 = Z21 Z12``. All-zero blocks give the
    pseudoinverse because the completions are orthonormal.
    """
    A = as_matrix(A)
    m, n = A.shape
    Cfull, Rfull, r = basis_completions(A, tol)
    Z12, Z21, Z22 = (as_matrix(Z, name) for Z, name in
                     ((spec.Z12, "Z12"), (spec.Z21, "Z21"), (spec.Z22, "Z22")))
    expected = {"Z12": (r, m - r), "Z21": (n - r, r), "Z22": (n - r, m - r)}
    for name, Z in (("Z12", Z12), ("Z21", Z21), ("Z22", Z22)):
        if Z.size == 0 and 0 in expected[name]:
            continue
        if Z.shape != expected[name]:
            raise ShapeError(f"{name} must be {expected[name]} for rank {r}, got {Z.shape}")
    middle = np.zeros((n, m))
    middle[:r, :r] = np.eye(r)
    middle[:r, r:] = Z12.reshape(r, m - r)
    middle[r:, :r] = Z21.reshape(n - r, r)
    middle[r:, r:] = Z22.reshape(n - r, m - r)
    if numeric_rank(Cfull).numeric_rank < m or numeric_rank(Rfull).numeric_rank < n:
        raise GeninvError("basis completion is singular")
    X = np.linalg.solve(Rfull, middle)
    return np.linalg.solve(Cfull.T, X.T).T


def one_inverse_blocks(A, G, tol=None):
    """Recover the :class:`OneInverseSpec` that reproduces a {1}-inverse G.

    ``[R0; R1] G [C0 C1]`` has the identity as its leading r-by-r block when
    ``A G A = A``; the remaining blocks are returned.
    """
    A = as_matrix(A)
    G = as_matrix(G, "G")
    Cfull, Rfull, r = basis_completions(A, tol)
    M = Rfull @ G @ Cfull
    return OneInverseSpec(M[:r, r:], M[r:, :r], M[r:, r:])


def solve_matrix_equation(Cbar, A, Rbar, Z=None, tol=None):
    """Solve ``Cbar X Rbar = A`` when it is solvable.

    Solvable iff ``Cbar G A H Rbar = A`` for {1}-inverses G, H of Cbar and
    Rbar (pseudoinverses here). Then ``X = G A H + Z - G Cbar Z Rbar H`` for
    any Z (zero by default).

    Returns
    -------
    solvable : bool
    X : ndarray or None
    """
    Cbar = as_matrix(Cbar, "Cbar")
    A = as_matrix(A, "A")
    Rbar = as_matrix(Rbar, "Rbar")
    if Cbar.shape[0] != A.shape[0] or Rbar.shape[1] != A.shape[1]:
        raise ShapeError(
            f"Cbar {Cbar.shape}, A {A.shape}, Rbar {Rbar.shape} do not conform"
        )
    if tol is None:
        tol = scaled_tol(A)
    G = pinv_oracle(Cbar)
    H = pinv_oracle(Rbar)
    if frob(Cbar @ G @ A @ H @ Rbar - A) > tol:
        return False, None
    if Z is None:
        Z = np.zeros((Cbar.shape[1], Rbar.shape[0]))
    Z = as_matrix(Z, "Z")
    if Z.shape != (Cbar.shape[1], Rbar.shape[0]):
        raise ShapeError(f"Z must be {(Cbar.shape[1], Rbar.shape[0])}, got {Z.shape}")
    return True, G @ A @ H + Z - (G @ Cbar) @ Z @ (Rbar @ H)


def general_solution_x(A, G, b, z, tol=DEFAULT_RTOL):
    """``x = G b + (I - G A) z`` for a consistent system ``A x = b``.

    G must be a {1}-inverse of A. Raises :class:`InconsistentSystemError`
    when b is not in the column space of A (detected as ``A G b != b``).
    """
    A = as_matrix(A, "A")
    G = as_matrix(G, "G")
    b = np.asarray(b, dtype=float).ravel()
    z = np.asarray(z, dtype=float).ravel()
    m, n = A.shape
    if G.shape != (n, m) or b.shape != (m,) or z.shape != (n,):
        raise ShapeError("A, G, b, z do not conform")
    if frob(A @ G @ A - A) > scaled_tol(A, G, rtol=tol):
        raise RankHypothesisError("G is not a {1}-inverse of A")
    Gb = G @ b
    if np.linalg.norm(A @ Gb - b) > tol * max(1.0, np.linalg.norm(b)):
        raise InconsistentSystemError("b is not in the column space of A")
    return Gb + z - G @ (A @ z)
