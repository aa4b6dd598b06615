"""Full-rank factorization ``A = C R`` from row reduction."""

from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix, numeric_rank, rref


@dataclass(frozen=True)
class CRFactorization:
    """A factor pair whose product is the source matrix.

    `C` is m-by-r and `R` is r-by-n. When produced by :func:`cr_factorize`
    both factors have full rank r; a hand-built pair carries no such
    guarantee, and :attr:`rank` is simply the inner dimension.
    """

    C: np.ndarray
    R: np.ndarray

    def __post_init__(self):
        C = as_matrix(self.C, "C")
        R = as_matrix(self.R, "R")
        if C.shape[1] != R.shape[0]:
            raise ValueError(f"inner dimensions differ: C {C.shape}, R {R.shape}")
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "R", R)

    @property
    def rank(self):
        return self.C.shape[1]

    @property
    def product(self):
        return self.C @ self.R


def cr_factorize(A, tol=None):
    """Column-row factorization of `A`.

    `C` holds the pivot columns of `A` itself (the first independent columns,
    left to right) and `R` holds the nonzero rows of the reduced row echelon
    form. A zero matrix factors as an m-by-0 times 0-by-n product.

    >>> F = cr_factorize([[1, 4, 5], [2, 3, 5]])
    >>> F.C.tolist(), F.R.tolist()
    ([[1.0, 4.0], [2.0, 3.0]], [[1.0, 0.0, 1.0], [0.0, 1.0, 1.0]])
    """
    A = as_matrix(A)
    R0, pivots = rref(A, tol)
    r = len(pivots)
    return CRFactorization(A[:, pivots].copy(), R0[:r, :].copy())


def is_full_column_rank(M, tol=None):
    M = as_matrix(M, "M")
    if M.shape[1] == 0:
        return True
    return numeric_rank(M, tol).numeric_rank == M.shape[1]


def is_full_row_rank(M, tol=None):
    M = as_matrix(M, "M")
    if M.shape[0] == 0:
        return True
    return numeric_rank(M, tol).numeric_rank == M.shape[0]
