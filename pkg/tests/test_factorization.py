import numpy as np

from conftest import planted
from geninv.factorization import cr_factorize, is_full_column_rank, is_full_row_rank


def test_reference_factorization(A51):
    F = cr_factorize(A51)
    np.testing.assert_array_equal(F.C, [[1, 4], [2, 3]])
    np.testing.assert_allclose(F.R, [[1, 0, 1], [0, 1, 1]], atol=1e-15)
    assert F.rank == 2


def test_identity():
    F = cr_factorize(np.eye(2))
    np.testing.assert_array_equal(F.C, np.eye(2))
    np.testing.assert_array_equal(F.R, np.eye(2))


def test_rank_one():
    F = cr_factorize(np.ones((2, 2)))
    assert F.rank == 1
    np.testing.assert_array_equal(F.C, [[1], [1]])
    np.testing.assert_allclose(F.R, [[1, 1]])


def test_zero_matrix():
    F = cr_factorize(np.zeros((3, 4)))
    assert F.C.shape == (3, 0) and F.R.shape == (0, 4)
    np.testing.assert_array_equal(F.product, np.zeros((3, 4)))


def test_first_independent_columns():
    # column 1 duplicates column 0, so the pivots are columns 0 and 2
    A = np.array([[1.0, 1, 0], [2, 2, 1], [0, 0, 3]])
    F = cr_factorize(A)
    np.testing.assert_array_equal(F.C, A[:, [0, 2]])


def test_full_rank_predicates():
    C = np.array([[1.0, 0.0]])
    assert is_full_row_rank(C) and not is_full_column_rank(C)
    assert is_full_column_rank(np.array([[1.0], [1.0]]))
    Z = np.zeros((2, 2))
    assert not is_full_row_rank(Z) and not is_full_column_rank(Z)


def test_planted_ranks(rng):
    for _ in range(100):
        m, n = rng.integers(1, 13, size=2)
        r = int(rng.integers(0, min(m, n) + 1))
        A = planted(rng, m, n, r)
        F = cr_factorize(A)
        assert F.rank == r
        assert np.linalg.norm(A - F.product) <= 1e-10 * max(1, np.linalg.norm(A))
        if r:
            assert is_full_column_rank(F.C) and is_full_row_rank(F.R)
            # pivot columns of R form an identity block
            piv = [int(np.flatnonzero(np.abs(row) > 1e-12)[0]) for row in F.R]
            np.testing.assert_allclose(F.R[:, piv], np.eye(r), atol=1e-12)
