import numpy as np
import pytest
import scipy.linalg as la

from laplace_krylov.krylov import arnoldi, arnoldi_approximation
from laplace_krylov.operators import LinearOperator, SparseMatrix


def op_from_dense(a, hermitian=None):
    return LinearOperator.from_dense(np.asarray(a, dtype=float), hermitian=hermitian)


def relation_residual(op, dec):
    a = np.column_stack([op.apply(dec.V[:, j]) for j in range(dec.m)])
    r = a - dec.V @ dec.H
    if dec.h_next != 0.0:
        r[:, -1] -= dec.h_next * dec.v_next
    return np.linalg.norm(r)


class TestArnoldiBasics:
    def test_eigenvector_start_breaks_down(self):
        dec = arnoldi(op_from_dense(np.diag([1.0, 2.0])), np.array([1.0, 0.0]), 1)
        assert dec.H == pytest.approx(np.array([[1.0]]))
        assert dec.h_next == 0.0
        assert dec.breakdown

    def test_full_space_reproduces_spectrum(self):
        dec = arnoldi(op_from_dense(np.diag([1.0, 2.0, 3.0])),
                      np.ones(3) / np.sqrt(3), 3)
        assert np.sort(la.eigvalsh(dec.H)) == pytest.approx([1.0, 2.0, 3.0])

    def test_lanczos_structure(self):
        rng = np.random.default_rng(0)
        a = rng.standard_normal((10, 10))
        a = a + a.T
        dec = arnoldi(op_from_dense(a), rng.standard_normal(10), 5)
        off = dec.H - np.tril(np.triu(dec.H, -1), 1)
        assert np.abs(off).max() <= 1e-12
        assert np.linalg.norm(dec.V.T @ dec.V - np.eye(5)) <= 1e-12

    def test_invariants_random_50(self):
        rng = np.random.default_rng(1)
        a = rng.standard_normal((50, 50))
        op = op_from_dense(a)
        dec = arnoldi(op, rng.standard_normal(50), 20)
        assert np.linalg.norm(dec.V.conj().T @ dec.V - np.eye(20)) <= 1e-10
        scale = np.linalg.norm(a) * np.linalg.norm(dec.V)
        assert relation_residual(op_from_dense(a), dec) <= 1e-10 * scale

    def test_rejects_zero_start(self):
        with pytest.raises(ValueError):
            arnoldi(op_from_dense(np.eye(3)), np.zeros(3), 2)

    def test_rejects_m_above_n(self):
        with pytest.raises(ValueError):
            arnoldi(op_from_dense(np.eye(3)), np.ones(3), 4)

    def test_truncation_on_breakdown(self):
        # b spans a 2-dimensional invariant subspace of a 4x4 diagonal
        a = np.diag([1.0, 2.0, 3.0, 4.0])
        b = np.array([1.0, 1.0, 0.0, 0.0])
        dec = arnoldi(op_from_dense(a), b, 3)
        assert dec.m == 2
        assert dec.h_next == 0.0
        assert np.sort(la.eigvalsh(dec.H)) == pytest.approx([1.0, 2.0])


class TestArnoldiApproximation:
    def test_identity_function(self):
        dec = arnoldi(op_from_dense(np.diag([1.0, 2.0, 3.0])),
                      np.array([1.0, 0.0, 0.0]), 1)
        out = arnoldi_approximation(dec, lambda h: np.array([1.0]))
        assert out == pytest.approx([1.0, 0.0, 0.0])

    def test_inverse_full_space(self):
        rng = np.random.default_rng(2)
        a = rng.standard_normal((6, 6)) + 6 * np.eye(6)
        b = rng.standard_normal(6)
        dec = arnoldi(op_from_dense(a), b, 6)
        out = arnoldi_approximation(
            dec, lambda h: la.solve(h, np.eye(len(h))[:, 0]))
        assert np.allclose(out, la.solve(a, b), atol=1e-9 * np.linalg.norm(b))

    def test_exp_full_space(self):
        rng = np.random.default_rng(3)
        a = rng.standard_normal((7, 7))
        a = a + a.T
        b = rng.standard_normal(7)
        dec = arnoldi(op_from_dense(a), b, 7)

        def small(h):
            w, q = la.eigh(h)
            return q @ (np.exp(-w) * q.T[:, 0])

        w, q = la.eigh(a)
        exact = q @ (np.exp(-w) * (q.T @ b))
        assert np.allclose(arnoldi_approximation(dec, small), exact,
                           atol=1e-10 * np.linalg.norm(exact))

    def test_dimension_mismatch(self):
        dec = arnoldi(op_from_dense(np.eye(3)), np.ones(3), 1)
        with pytest.raises(ValueError):
            arnoldi_approximation(dec, lambda h: np.ones(5))


class TestShiftAndSignStructure:
    def test_shift_invariance_of_basis(self):
        rng = np.random.default_rng(4)
        a = rng.standard_normal((8, 8))
        b = rng.standard_normal(8)
        d1 = arnoldi(op_from_dense(a), b, 5)
        d2 = arnoldi(op_from_dense(a + np.eye(8)), b, 5)
        overlap = np.abs(d1.V.T @ d2.V)
        assert np.allclose(overlap, np.eye(5), atol=1e-8)

    def test_negated_operator_spans_same_space(self):
        rng = np.random.default_rng(5)
        a = rng.standard_normal((8, 8))
        b = rng.standard_normal(8)
        d1 = arnoldi(op_from_dense(a), b, 4)
        d2 = arnoldi(op_from_dense(-a), b, 4)
        p1 = d1.V @ d1.V.T
        p2 = d2.V @ d2.V.T
        assert np.linalg.norm(p1 - p2) <= 1e-10
        # H(-A) = -D H(A) D with D = diag(+1, -1, +1, ...), h_next unchanged
        signs = np.array([(-1.0) ** j for j in range(4)])
        assert np.allclose(d2.H, -np.outer(signs, signs) * d1.H, atol=1e-10)
        assert d2.h_next == pytest.approx(d1.h_next)
        # the flip relation used by two-sided runs: (-A)V = V(-H) - h v e_m^T
        opn = op_from_dense(-a)
        r = np.column_stack([opn.apply(d1.V[:, j]) for j in range(4)])
        r -= d1.V @ (-d1.H)
        r[:, -1] -= -d1.h_next * d1.v_next
        assert np.linalg.norm(r) <= 1e-10 * np.linalg.norm(a)

    def test_complex_hermitian_gives_real_tridiagonal(self):
        rng = np.random.default_rng(6)
        a = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        a = a + a.conj().T + 8 * np.eye(6)
        op = LinearOperator(lambda x: a @ x, 6, hermitian=True)
        b = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        dec = arnoldi(op, b, 4)
        assert not np.iscomplexobj(dec.H)
        assert np.abs(dec.H - dec.H.T).max() <= 1e-12
        assert np.linalg.norm(dec.V.conj().T @ dec.V - np.eye(4)) <= 1e-12
        r = a @ dec.V - dec.V @ dec.H
        r[:, -1] -= dec.h_next * dec.v_next
        assert np.linalg.norm(r) <= 1e-12 * np.linalg.norm(a)

    def test_consecutive_cycles_consume_m_matvecs(self):
        mat = SparseMatrix.from_dense(np.diag(np.arange(1.0, 21.0)))
        op = LinearOperator.from_matrix(mat)
        b = np.ones(20)
        d1 = arnoldi(op, b, 6)
        assert op.matvec_count == 6
        arnoldi(op, d1.v_next, 6)
        assert op.matvec_count == 12
