import numpy as np
import pytest
from scipy.linalg import expm

from src.linalg.core import (
    adjoint,
    chunked,
    hermitian_exp,
    hermiticity_defect,
    operator_norm,
    polar_unitary,
    require_hermitian,
    step_unitaries,
    trace_inner,
    unitarity_defect,
)
from src.utils.errors import NonHermitianError, ValidationError


def random_hermitian(rng, dim, scale=10.0):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * (a + a.conj().T) / 2


def random_unitary(rng, dim):
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


# ── Exponential ─────────────────────────────────────────────────────────


class TestHermitianExp:
    def test_zero_generator_gives_identity(self):
        assert np.allclose(hermitian_exp(np.zeros((4, 4)), 0.7), np.eye(4), atol=1e-15)

    def test_diagonal_phases(self):
        h = np.diag([0.0, 0.0, 10.0, -10.0])
        u = hermitian_exp(h, np.pi / 10)
        assert np.allclose(u, np.diag([1, 1, -1, -1]), atol=1e-12)

    @pytest.mark.parametrize("dim", [2, 4, 9])
    def test_matches_scipy_expm(self, rng, dim):
        h = random_hermitian(rng, dim)
        assert np.allclose(hermitian_exp(h, 0.37), expm(-1j * h * 0.37), atol=1e-9)

    def test_result_is_unitary(self, rng):
        u = hermitian_exp(random_hermitian(rng, 9, scale=100.0), 0.05)
        assert unitarity_defect(u) < 1e-12

    def test_steps_compose(self, rng):
        h = random_hermitian(rng, 4)
        assert np.allclose(hermitian_exp(h, 0.3), hermitian_exp(h, 0.1) @ hermitian_exp(h, 0.2), atol=1e-12)

    def test_negative_step_is_adjoint(self, rng):
        h = random_hermitian(rng, 4)
        assert np.allclose(hermitian_exp(h, -0.2), adjoint(hermitian_exp(h, 0.2)), atol=1e-12)

    def test_non_finite_step_rejected(self):
        with pytest.raises(ValidationError, match="finite"):
            hermitian_exp(np.eye(2), float("inf"))

    def test_non_hermitian_names_the_entry(self):
        h = np.zeros((4, 4), dtype=complex)
        h[0, 1] = 1.0
        with pytest.raises(NonHermitianError, match=r"H\[0,1\]"):
            hermitian_exp(h, 0.1)


class TestStepUnitaries:
    def test_batched_matches_single(self, rng):
        hs = np.stack([random_hermitian(rng, 4) for _ in range(5)])
        unitaries, _ = step_unitaries(hs, 0.01)
        for h, u in zip(hs, unitaries):
            assert np.allclose(u, expm(-1j * h * 0.01), atol=1e-10)

    def test_reports_largest_eigenvalue(self):
        hs = np.stack([np.diag([1.0, -3.0]), np.diag([2.0, 0.5])])
        _, max_eig = step_unitaries(hs, 0.1)
        assert max_eig == pytest.approx(3.0)

    def test_stack_error_names_the_matrix(self):
        hs = np.zeros((3, 2, 2), dtype=complex)
        hs[2, 1, 0] = 1e-6
        with pytest.raises(NonHermitianError, match="matrix 2"):
            step_unitaries(hs, 0.1)

    def test_tolerance_is_respected(self):
        h = np.array([[0.0, 1e-9], [0.0, 0.0]])
        require_hermitian(h, tol=1e-8)
        with pytest.raises(NonHermitianError):
            require_hermitian(h, tol=1e-12)


# ── Helpers ─────────────────────────────────────────────────────────────


class TestHelpers:
    def test_hermiticity_defect(self):
        assert hermiticity_defect(np.array([[1.0, 2.0], [2.0, 1.0]])) == 0.0
        assert hermiticity_defect(np.array([[0.0, 1.0], [0.0, 0.0]])) == 1.0

    def test_unitarity_defect(self):
        assert unitarity_defect(np.eye(3)) == 0.0
        assert unitarity_defect(2 * np.eye(3)) == pytest.approx(3.0)

    def test_unitarity_defect_needs_square(self):
        with pytest.raises(ValidationError, match="square"):
            unitarity_defect(np.ones((2, 3)))

    def test_operator_norm(self):
        assert operator_norm(np.diag([1.0, -4.0, 2.0])) == pytest.approx(4.0)

    def test_polar_unitary_recovers_scaled_unitary(self, rng):
        u = random_unitary(rng, 2)
        assert np.allclose(polar_unitary(1.5 * u), u, atol=1e-12)

    def test_trace_inner_is_conjugate_symmetric(self, rng):
        a, b = random_unitary(rng, 2), random_unitary(rng, 2)
        assert trace_inner(a, b) == pytest.approx(np.conj(trace_inner(b, a)))
        assert trace_inner(a, a) == pytest.approx(2.0)

    def test_chunked_covers_everything(self):
        times = np.arange(10.0)
        chunks = list(chunked(times, size=4))
        assert [len(c) for c in chunks] == [4, 4, 2]
        assert np.array_equal(np.concatenate(chunks), times)

    def test_chunked_empty(self):
        assert list(chunked(np.array([]))) == []
