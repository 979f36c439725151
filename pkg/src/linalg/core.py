"""Dense complex linear algebra for the small model dimensions (2, 4, 9).

Everything here accepts either a single matrix ``(d, d)`` or a stack
``(n, d, d)``; stacked inputs are processed with one batched LAPACK call.
"""

from collections.abc import Iterator

import numpy as np

from src.config import default_tolerances
from src.utils.errors import NonHermitianError, ValidationError

# Batched eigendecompositions are chunked to bound peak memory on long grids.
STEP_CHUNK = 20_000


def adjoint(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def hermiticity_defect(a: np.ndarray) -> float:
    """Max entrywise ``|A - A^dagger|`` over the whole (possibly stacked) input."""
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - adjoint(a))))


def unitarity_defect(u: np.ndarray) -> float:
    """Max entrywise ``|U^dagger U - I|``."""
    u = np.asarray(u)
    if u.shape[-1] != u.shape[-2]:
        raise ValidationError(f"unitarity_defect needs a square matrix, got shape {u.shape}")
    gram = adjoint(u) @ u
    eye = np.eye(u.shape[-1])
    return float(np.max(np.abs(gram - eye)))


def operator_norm(a: np.ndarray) -> float:
    """Spectral norm (largest singular value)."""
    return float(np.linalg.norm(a, 2))


def require_hermitian(h: np.ndarray, tol: float | None = None) -> None:
    """Raise :class:`NonHermitianError` naming the worst entry if ``h`` is not Hermitian."""
    tol = default_tolerances().hermitian if tol is None else tol
    h = np.asarray(h)
    diff = np.abs(h - adjoint(h))
    worst = float(np.max(diff)) if diff.size else 0.0
    if worst > tol:
        idx = np.unravel_index(int(np.argmax(diff)), diff.shape)
        row, col = idx[-2], idx[-1]
        where = f" in matrix {idx[0]}" if h.ndim == 3 else ""
        raise NonHermitianError(
            f"Generator is not Hermitian: |H[{row},{col}] - conj(H[{col},{row}])| = "
            f"{worst:.3e}{where} exceeds {tol:.1e}"
        )


def hermitian_exp(h: np.ndarray, dt: float, tol: float | None = None) -> np.ndarray:
    """Return ``exp(-i H dt)`` for a Hermitian ``H`` via its eigendecomposition."""
    if not np.isfinite(dt):
        raise ValidationError(f"dt must be finite, got {dt}")
    unitary, _ = step_unitaries(h, dt, tol)
    return unitary


def step_unitaries(
    hs: np.ndarray, dt: float, tol: float | None = None
) -> tuple[np.ndarray, float]:
    """Exponentiate a stack of midpoint generators.

    Returns:
        ``(unitaries, max_abs_eigenvalue)``; the second value feeds the
        stability guard ``dt * max|E| <= guard``.
    """
    hs = np.asarray(hs, dtype=complex)
    require_hermitian(hs, tol)
    hs = 0.5 * (hs + adjoint(hs))
    w, v = np.linalg.eigh(hs)
    phases = np.exp(-1j * w * dt)
    unitaries = (v * phases[..., None, :]) @ adjoint(v)
    max_eig = float(np.max(np.abs(w))) if w.size else 0.0
    return unitaries, max_eig


def chunked(times: np.ndarray, size: int = STEP_CHUNK) -> Iterator[np.ndarray]:
    for start in range(0, len(times), size):
        yield times[start : start + size]


def polar_unitary(a: np.ndarray) -> np.ndarray:
    """Closest unitary to ``a`` in Frobenius norm (polar factor ``W V^dagger``)."""
    w, _, vh = np.linalg.svd(np.asarray(a, dtype=complex))
    return w @ vh


def trace_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product ``Tr(A^dagger B)``."""
    return complex(np.trace(adjoint(np.asarray(a)) @ np.asarray(b)))
