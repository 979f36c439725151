"""Qubit-gate extraction, leakage and the trace fidelity."""

import math

import numpy as np

from src.config import default_tolerances
from src.linalg.core import trace_inner, unitarity_defect
from src.model.states import anti_dark_vector, dark_vector
from src.utils.errors import DimensionMismatchError, NonUnitaryError, ValidationError


def extract_qubit_gate(
    u_full: np.ndarray, qubit_indices: tuple[int, int] = (0, 1), tol: float | None = None
) -> tuple[np.ndarray, float]:
    """Return the qubit block of ``u_full`` and its leakage ``1 - mean column norm^2``."""
    tol = default_tolerances().extract_unitary if tol is None else tol
    u_full = np.asarray(u_full, dtype=complex)
    dim = u_full.shape[0]
    i, j = qubit_indices
    if i == j or not (0 <= i < dim and 0 <= j < dim):
        raise ValidationError(f"Qubit indices {qubit_indices} must be distinct and below {dim}")
    defect = unitarity_defect(u_full)
    if defect > tol:
        raise NonUnitaryError(f"Propagator unitarity defect {defect:.3e} exceeds {tol:.1e}")
    idx = [i, j]
    block = u_full[np.ix_(idx, idx)]
    column_weight = np.sum(np.abs(block) ** 2, axis=0)
    leakage = max(0.0, 1.0 - float(np.mean(column_weight)))
    return block, leakage


def operator_fidelity(u_ideal: np.ndarray, u_actual: np.ndarray) -> float:
    """``|Tr(U_ideal^dagger U_actual)| / 2`` on the 2x2 qubit block."""
    u_ideal = np.asarray(u_ideal)
    u_actual = np.asarray(u_actual)
    if u_ideal.shape != (2, 2) or u_actual.shape != (2, 2):
        raise DimensionMismatchError(
            f"operator_fidelity scores 2x2 blocks, got {u_ideal.shape} and {u_actual.shape}"
        )
    return min(1.0, abs(trace_inner(u_ideal, u_actual)) / 2.0)


def _dark_basis(chi: float, phi: float) -> np.ndarray:
    """Columns ``|D>, |-D>``."""
    return np.stack([dark_vector(chi, phi), anti_dark_vector(chi, phi)], axis=1)


def eigenbasis_offdiagonal(gate: np.ndarray, chi: float, phi: float) -> float:
    """Largest off-diagonal element of ``gate`` in the ``|D>, |-D>`` basis."""
    basis = _dark_basis(chi, phi)
    rotated = np.conj(basis.T) @ np.asarray(gate) @ basis
    return float(max(abs(rotated[0, 1]), abs(rotated[1, 0])))


def propagation_phase_gamma(
    gate: np.ndarray, chi: float, phi: float, tol: float | None = None
) -> float:
    """Relative phase ``arg<-D|U|-D> - arg<D|U|D>`` wrapped to ``(-pi, pi]``."""
    tol = default_tolerances().extract_unitary if tol is None else tol
    gate = np.asarray(gate, dtype=complex)
    if gate.shape != (2, 2):
        raise DimensionMismatchError(f"Expected a 2x2 gate, got {gate.shape}")
    defect = unitarity_defect(gate)
    if defect > tol:
        raise NonUnitaryError(f"Gate unitarity defect {defect:.3e} exceeds {tol:.1e}")
    d = dark_vector(chi, phi)
    anti = anti_dark_vector(chi, phi)
    relative = np.vdot(anti, gate @ anti) * np.conj(np.vdot(d, gate @ d))
    gamma = math.atan2(relative.imag, relative.real)
    return math.pi if gamma == -math.pi else gamma
