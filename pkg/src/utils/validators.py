"""Precondition checks that explain themselves instead of raising."""

import numpy as np

from src.model.four_level import FourLevelParams


def validate_dark_regime(params: FourLevelParams, tol: float = 1e-12) -> tuple[bool, str]:
    """Check the equalities that make two eigenvalues of the four-level Hamiltonian vanish.

    Returns:
        Tuple of (is_valid, error_message). error_message is empty if valid.
    """
    failures = []
    omega0 = params.schedule.omega0
    if abs(params.d1 - params.d2) > tol:
        failures.append(f"delta1 = delta2 fails ({params.d1:g} vs {params.d2:g})")
    if abs(params.d1 - omega0) > tol:
        failures.append(f"delta1 = omega0 fails ({params.d1:g} vs {omega0:g})")
    if abs(params.factor("p1") - params.factor("p2")) > tol:
        failures.append("Omega_p1 = Omega_p2 fails (pump overrides differ)")
    if abs(params.factor("s1") - params.factor("s2")) > tol:
        failures.append("Omega_s1 = Omega_s2 fails (Stokes overrides differ)")
    if failures:
        return False, "; ".join(failures)
    return True, ""


def validate_normalized(state: np.ndarray, tol: float = 1e-10) -> tuple[bool, str]:
    """Validate that a state vector is finite and unit-norm within ``tol``."""
    state = np.asarray(state)
    if state.ndim != 1 or state.size == 0:
        return False, f"State must be a non-empty vector, got shape {state.shape}."
    if not np.all(np.isfinite(state)):
        return False, "State contains non-finite amplitudes."
    drift = abs(float(np.linalg.norm(state)) - 1.0)
    if drift > tol:
        return False, f"State norm deviates from 1 by {drift:.3e} (tolerance {tol:.1e})."
    return True, ""
