import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import oracle_pinv, oracle_rank, planted
from geninv.errors import InconsistentSystemError, RankHypothesisError, ShapeError
from geninv.factorization import CRFactorization, cr_factorize
from geninv.geninverse import (
    Classification,
    OneInverseSpec,
    construct_one_inverse,
    general_solution_x,
    greville_conditions,
    one_inverse_blocks,
    pinv_corrected,
    pinv_macduffee,
    pinv_reverse_order,
    reverse_order_product,
    solve_matrix_equation,
    two_sided_projection_residual,
    verify_penrose,
)

C1 = np.array([[1.0, 0.0]])
R1 = np.array([[1.0], [1.0]])
A42 = np.array([[1.0, 0], [0, 0], [0, 0]])
AG42 = np.array([[1.0, 3, 2], [3, 3, 2]])


class TestVerifyPenrose:
    def test_pseudoinverse(self, A51, A51_pinv):
        rep = verify_penrose(A51, A51_pinv)
        assert rep.classification is Classification.PSEUDOINVERSE

    def test_one_inverse_only(self):
        rep = verify_penrose(A42, AG42)
        assert rep.classification is Classification.ONE_INVERSE
        assert rep.r1 == 0 and rep.r2 > 1

    def test_identity(self):
        rep = verify_penrose(np.eye(2), np.eye(2))
        assert (rep.r1, rep.r2, rep.r3, rep.r4) == (0, 0, 0, 0)

    def test_shape_mismatch(self, A51):
        with pytest.raises(ShapeError):
            verify_penrose(A51, A51)

    def test_levels_ordered(self):
        assert Classification.PSEUDOINVERSE.at_least("one_inverse")
        assert not Classification.ONE_INVERSE.at_least(Classification.ONE_TWO_INVERSE)


class TestReverseOrder:
    def test_reference_example(self, A51_pinv):
        F = CRFactorization([[1, 4], [2, 3]], [[1, 0, 1], [0, 1, 1]])
        np.testing.assert_allclose(pinv_reverse_order(F), A51_pinv, atol=1e-14)

    def test_identity(self):
        np.testing.assert_allclose(pinv_reverse_order((np.eye(2), np.eye(2))), np.eye(2))

    def test_counterexample_rejected(self):
        with pytest.raises(RankHypothesisError, match="C .*column rank"):
            pinv_reverse_order((C1, R1))
        np.testing.assert_allclose(reverse_order_product(C1, R1), [[0.5]], atol=1e-15)
        np.testing.assert_allclose(oracle_pinv(C1 @ R1), [[1.0]])

    def test_rejects_bad_R(self):
        with pytest.raises(RankHypothesisError, match="R "):
            pinv_reverse_order((np.eye(2), np.ones((2, 2))))


class TestCorrected:
    def test_counterexample(self):
        np.testing.assert_allclose(pinv_corrected(C1, R1), [[1.0]], atol=1e-15)

    def test_rank_deficient(self):
        C = np.ones((2, 2))
        R = np.array([[1.0, 0], [1, 0]])
        np.testing.assert_allclose(pinv_corrected(C, R), [[0.25, 0.25], [0, 0]], atol=1e-15)

    def test_universal(self, rng):
        for _ in range(200):
            m, k, n = rng.integers(1, 8, size=3)
            C = planted(rng, m, k, rng.integers(0, min(m, k) + 1))
            R = planted(rng, k, n, rng.integers(0, min(k, n) + 1))
            expected = oracle_pinv(C @ R)
            got = pinv_corrected(C, R)
            assert np.linalg.norm(got - expected) <= 1e-8 * max(1, np.linalg.norm(expected))


class TestMacDuffee:
    def test_reference_example(self, A51, A51_pinv):
        np.testing.assert_allclose(pinv_macduffee(cr_factorize(A51)), A51_pinv, atol=1e-13)

    def test_identity(self):
        np.testing.assert_allclose(pinv_macduffee(cr_factorize(np.eye(2))), np.eye(2))

    def test_random_rank2(self, rng):
        A = planted(rng, 5, 3, 2)
        F = cr_factorize(A)
        np.testing.assert_allclose(pinv_macduffee(F), oracle_pinv(A), atol=1e-9)
        np.testing.assert_allclose(pinv_macduffee(F), pinv_reverse_order(F),
                                   atol=1e-10 * np.linalg.norm(oracle_pinv(A)))

    def test_broken_hypothesis(self):
        with pytest.raises(RankHypothesisError):
            pinv_macduffee((C1, R1))


class TestGreville:
    def test_counterexample(self):
        assert not all(greville_conditions(C1, R1))
        assert two_sided_projection_residual(C1, R1) > 1e-6

    def test_full_rank_pair(self):
        C = np.array([[1.0, 4], [2, 3]])
        R = np.array([[1.0, 0, 1], [0, 1, 1]])
        assert greville_conditions(C, R) == (True, True)
        assert two_sided_projection_residual(C, R) <= 1e-10

    def test_rank_deficient_law_holds(self):
        C = np.ones((2, 2))
        R = np.array([[1.0, 0], [1, 0]])
        assert greville_conditions(C, R) == (True, True)
        np.testing.assert_allclose(oracle_pinv(C @ R), oracle_pinv(R) @ oracle_pinv(C), atol=1e-12)

    def test_identity(self):
        assert two_sided_projection_residual(np.eye(2), np.eye(2)) == 0


class TestOneInverse:
    def test_reference_blocks_roundtrip(self):
        G = AG42.T.T  # 2x3, n-by-m for the 3x2 matrix
        spec = one_inverse_blocks(A42, G)
        rebuilt = construct_one_inverse(A42, spec)
        np.testing.assert_allclose(rebuilt, G, atol=1e-12)
        rep = verify_penrose(A42, rebuilt)
        assert rep.classification is Classification.ONE_INVERSE
        assert oracle_rank(rebuilt) == 2 > oracle_rank(A42) == 1

    def test_reference_subspace_chain(self):
        y = np.array([0.0, 3, 2])
        x = AG42 @ y
        np.testing.assert_array_equal(x, [13, 13])
        np.testing.assert_array_equal(A42 @ x, [13, 0, 0])
        np.testing.assert_array_equal(AG42 @ A42 @ x, [13, 39])

    def test_zero_blocks_give_pinv(self, rng):
        for _ in range(20):
            m, n = rng.integers(1, 9, size=2)
            r = int(rng.integers(0, min(m, n) + 1))
            A = planted(rng, m, n, r)
            G = construct_one_inverse(A, OneInverseSpec.zeros(r, m, n))
            np.testing.assert_allclose(G, oracle_pinv(A), atol=1e-9 * max(1, np.linalg.norm(G)))

    def test_product_blocks_give_one_two(self, rng):
        for _ in range(50):
            m, n = rng.integers(2, 9, size=2)
            r = int(rng.integers(1, min(m, n)))
            A = planted(rng, m, n, r)
            Z12 = rng.standard_normal((r, m - r))
            Z21 = rng.standard_normal((n - r, r))
            G = construct_one_inverse(A, OneInverseSpec(Z12, Z21, Z21 @ Z12))
            rep = verify_penrose(A, G)
            assert rep.classification.at_least(Classification.ONE_TWO_INVERSE)
            assert oracle_rank(G) == r

    def test_shape_checked(self):
        with pytest.raises(ShapeError):
            construct_one_inverse(A42, OneInverseSpec(np.zeros((1, 1)), np.zeros((1, 1)), np.zeros((1, 1))))


class TestMatrixEquation:
    def test_identity(self, rng):
        A = rng.standard_normal((3, 3))
        Z = rng.standard_normal((3, 3))
        ok, X = solve_matrix_equation(np.eye(3), A, np.eye(3), Z)
        assert ok
        np.testing.assert_allclose(X, A, atol=1e-12)

    def test_unsolvable(self):
        ok, X = solve_matrix_equation([[1.0], [0.0]], [[0.0], [1.0]], [[1.0]])
        assert not ok and X is None

    def test_constructed(self, rng):
        Cb = planted(rng, 5, 3, 2)
        Rb = planted(rng, 4, 6, 3)
        A = Cb @ rng.standard_normal((3, 4)) @ Rb
        for _ in range(20):
            ok, X = solve_matrix_equation(Cb, A, Rb, rng.standard_normal((3, 4)))
            assert ok
            assert np.linalg.norm(Cb @ X @ Rb - A) <= 1e-9 * max(1, np.linalg.norm(A))


class TestGeneralSolution:
    def test_identity(self):
        b = np.array([1.0, -2])
        np.testing.assert_allclose(general_solution_x(np.eye(2), np.eye(2), b, [5, 7]), b)

    def test_reference_subspace(self, rng):
        b = np.array([13.0, 0, 0])
        for _ in range(10):
            x = general_solution_x(A42, AG42, b, rng.standard_normal(2))
            np.testing.assert_allclose(A42 @ x, b, atol=1e-12)

    def test_random(self, rng):
        A = planted(rng, 4, 3, 2)
        G = oracle_pinv(A)
        b = A @ rng.standard_normal(3)
        for _ in range(20):
            x = general_solution_x(A, G, b, rng.standard_normal(3))
            assert np.linalg.norm(A @ x - b) <= 1e-10 * max(1, np.linalg.norm(b))

    def test_inconsistent(self):
        with pytest.raises(InconsistentSystemError):
            general_solution_x(A42, AG42, [0.0, 1, 0], [0, 0])

    def test_not_a_one_inverse(self):
        with pytest.raises(RankHypothesisError):
            general_solution_x(A42, np.zeros((2, 3)), [1.0, 0, 0], [0, 0])


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_one_two_implies_equal_rank(m, k, n, seed):
    rng = np.random.default_rng(seed)
    A = planted(rng, m, n, min(k, m, n))
    r = oracle_rank(A)
    Z12 = rng.standard_normal((r, m - r))
    Z21 = rng.standard_normal((n - r, r))
    Z22 = Z21 @ Z12 if rng.random() < 0.5 else rng.standard_normal((n - r, m - r))
    G = construct_one_inverse(A, OneInverseSpec(Z12, Z21, Z22))
    rep = verify_penrose(A, G)
    assert rep.classification.at_least("one_inverse")
    if rep.classification.at_least("one_two_inverse"):
        assert oracle_rank(G) == r
