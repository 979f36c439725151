"""Analytic dark and bright states and the ideal holonomic gate.

Four-level basis ordering is ``|1>, |2>, |3>, |4>``; the qubit lives on
``|1>, |2>``.
"""

import math

import numpy as np

from src.utils.errors import DegenerateStateError

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _norm(omega_p, omega_s) -> np.ndarray:
    return np.hypot(np.abs(omega_p), np.abs(omega_s))


def dark_states(omega_p, omega_s, omega0: float, direction=None) -> tuple[np.ndarray, np.ndarray]:
    """Return the two zero-energy states ``(|D1>, |D2>)`` of the dark-regime Hamiltonian.

    Inputs may be scalars or arrays of equal shape; outputs have a trailing
    axis of length 4. Where ``Omega = 0`` the pump/Stokes direction is taken
    from ``direction = (u_p, u_s)``, which must then be supplied.

    Raises:
        DegenerateStateError: ``Omega = 0`` without a direction, or
            ``Omega = 0`` together with ``omega0 = 0``.
    """
    omega_p = np.asarray(omega_p, dtype=complex)
    omega_s = np.asarray(omega_s, dtype=complex)
    omega = _norm(omega_p, omega_s)
    vanishing = omega == 0
    if np.any(vanishing):
        if direction is None:
            raise DegenerateStateError(
                "Dark states are undefined at Omega = 0 without a pump/Stokes direction"
            )
        if omega0 == 0:
            raise DegenerateStateError("Dark states are degenerate at Omega = 0 and omega0 = 0")
        u_p = np.asarray(direction[0], dtype=complex) * np.ones_like(omega_p)
        u_s = np.asarray(direction[1], dtype=complex) * np.ones_like(omega_s)
        safe = np.where(vanishing, 1.0, omega)
        u_p = np.where(vanishing, u_p, omega_p / safe)
        u_s = np.where(vanishing, u_s, omega_s / safe)
    else:
        u_p, u_s = omega_p / omega, omega_s / omega
    return dark_states_from_components(omega, u_p, u_s, omega0)


def dark_states_from_components(omega, u_p, u_s, omega0: float) -> tuple[np.ndarray, np.ndarray]:
    """Dark states from ``(Omega, u_p, u_s)`` with ``|u_p|^2 + |u_s|^2 = 1``."""
    omega = np.asarray(omega, dtype=float)
    u_p = np.asarray(u_p, dtype=complex)
    u_s = np.asarray(u_s, dtype=complex)
    theta = np.sqrt(omega**2 + 2.0 * omega0**2)
    if np.any(theta == 0):
        raise DegenerateStateError("Second dark state is undefined at Omega = 0 and omega0 = 0")
    zero = np.zeros_like(u_p)
    d1 = np.stack([np.conj(u_s), np.conj(u_p), zero, zero], axis=-1)
    ground = math.sqrt(2.0) * omega0 / theta
    excited = 1j * omega / (math.sqrt(2.0) * theta)
    d2 = np.stack([ground * u_p, -ground * u_s, excited, -excited], axis=-1)
    return d1, d2


def bright_state(omega_p, omega_s) -> np.ndarray:
    """``|B1> = (Omega_p |1> - Omega_s |2>) / Omega``, orthogonal to ``|D1>``."""
    omega_p = np.asarray(omega_p, dtype=complex)
    omega_s = np.asarray(omega_s, dtype=complex)
    omega = _norm(omega_p, omega_s)
    if np.any(omega == 0):
        raise DegenerateStateError("Bright state is undefined at Omega = 0")
    zero = np.zeros_like(omega_p)
    return np.stack([omega_p / omega, -omega_s / omega, zero, zero], axis=-1)


# ── Qubit-level vectors and gates ───────────────────────────────────────


def dark_vector(chi: float, phi: float) -> np.ndarray:
    """``|D> = sin(chi) e^{-i phi} |1> + cos(chi) e^{i phi} |2>``."""
    return np.array(
        [math.sin(chi) * np.exp(-1j * phi), math.cos(chi) * np.exp(1j * phi)], dtype=complex
    )


def anti_dark_vector(chi: float, phi: float) -> np.ndarray:
    """``|-D> = cos(chi) e^{-i phi} |1> - sin(chi) e^{i phi} |2>``."""
    return np.array(
        [math.cos(chi) * np.exp(-1j * phi), -math.sin(chi) * np.exp(1j * phi)], dtype=complex
    )


def rotation_axis(chi: float, phi: float) -> np.ndarray:
    return np.array(
        [
            -math.sin(2 * chi) * math.cos(2 * phi),
            -math.sin(2 * chi) * math.sin(2 * phi),
            math.cos(2 * chi),
        ]
    )


def ideal_gate(chi: float, phi: float, gamma: float) -> np.ndarray:
    """``e^{i gamma/2} [cos(gamma/2) I + i sin(gamma/2) n.sigma]``.

    Eigenvalue 1 on ``|D>`` and ``e^{i gamma}`` on ``|-D>``.
    """
    n = rotation_axis(chi, phi)
    n_sigma = n[0] * SIGMA_X + n[1] * SIGMA_Y + n[2] * SIGMA_Z
    rotation = math.cos(gamma / 2) * np.eye(2) + 1j * math.sin(gamma / 2) * n_sigma
    return np.exp(0.5j * gamma) * rotation


def realized_axis_angles(chi: float, phi: float) -> tuple[float, float]:
    """Axis angles of the gate actually produced by a ``(chi, phi)`` pump/Stokes split.

    With ``Omega_p ~ cos(chi) e^{i phi}`` and ``Omega_s ~ sin(chi) e^{-i phi}``
    the first dark state is ``e^{-i psi} |D(chi, -phi)>``, so the azimuth
    enters with the opposite sign.
    """
    return chi, -phi
