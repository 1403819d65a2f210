"""
Dense 2x2 / 4x4 unitary helpers.

Basis order is |00>, |01>, |10>, |11> with qubit 1 as the left tensor factor.
Every exponential used by the compiler has a closed form here, so nothing
in the runtime path needs a general matrix exponential.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.core.config import TOLERANCES
from src.core.errors import NegativeDuration, NotSpecialUnitary, NotUnitary

log = logging.getLogger("warpdrive.su4")

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)

# Permutation gates used by the warp catalog and matrix sources
CNOT12 = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
CNOT21 = np.array([[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=complex)
SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)

# Coupling signs (-1)^(b1 xor b2) in basis order
_ZZ_SIGNS = np.array([1.0, -1.0, -1.0, 1.0])


def as_matrix(u, size: Optional[int] = None) -> np.ndarray:
    m = np.asarray(u, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if size is not None and m.shape[0] != size:
        raise ValueError(f"expected a {size}x{size} matrix, got {m.shape[0]}x{m.shape[1]}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def unitarity_residual(u) -> float:
    """Frobenius norm of U^dagger U - I."""
    m = np.asarray(u, dtype=complex)
    return float(np.linalg.norm(m.conj().T @ m - np.eye(m.shape[0])))


def is_unitary(u, tol: float = TOLERANCES["unitary"]) -> bool:
    return unitarity_residual(u) <= tol


def check_unitary(u, tol: float = TOLERANCES["unitary"]) -> np.ndarray:
    m = as_matrix(u)
    residual = unitarity_residual(m)
    if residual > tol:
        raise NotUnitary(residual)
    return m


def kron(a, b) -> np.ndarray:
    """Tensor product a (qubit 1) x b (qubit 2)."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def pauli_rotation(phase_angle: float, flip_angle: float) -> np.ndarray:
    """exp(-i flip/2 (cos phase X + sin phase Y)), the hard rf pulse."""
    c = np.cos(flip_angle / 2)
    s = np.sin(flip_angle / 2)
    return np.array(
        [
            [c, -1j * s * np.exp(-1j * phase_angle)],
            [-1j * s * np.exp(1j * phase_angle), c],
        ],
        dtype=complex,
    )


def axis_rotation(axis: str, angle: float) -> np.ndarray:
    """exp(-i angle/2 sigma_axis) for axis in x, y, z."""
    return np.cos(angle / 2) * I2 - 1j * np.sin(angle / 2) * PAULIS[axis]


def coupling_evolution(tau: float, j_hz: float) -> np.ndarray:
    """Free evolution exp(-i 2 pi J tau ZZ / 4) for tau seconds."""
    if tau < 0:
        raise NegativeDuration(f"idle time must be non-negative, got {tau}")
    if not j_hz > 0:
        raise ValueError(f"J must be positive, got {j_hz}")
    angle = np.pi * j_hz * tau / 2
    return np.diag(np.exp(-1j * angle * _ZZ_SIGNS))


@dataclass(frozen=True, eq=False)
class SpecialUnitary4:
    matrix: np.ndarray
    extracted_phase: float = 0.0

    def __post_init__(self):
        m = as_matrix(self.matrix, 4)
        residual = abs(np.linalg.det(m) - 1)
        if residual > TOLERANCES["unitary"]:
            raise NotSpecialUnitary(f"det differs from 1 by {residual:.3e}")
        object.__setattr__(self, "matrix", m)

    def original(self) -> np.ndarray:
        return np.exp(1j * self.extracted_phase) * self.matrix


def project_su4(u, tol: float = TOLERANCES["unitary"]) -> SpecialUnitary4:
    """Strip the principal fourth-root phase of det(u)."""
    m = check_unitary(as_matrix(u, 4), tol)
    phase = float(np.angle(np.linalg.det(m))) / 4
    return SpecialUnitary4(np.exp(-1j * phase) * m, phase)


def phase_distance(u, v) -> float:
    """min over phi of ||u - e^{i phi} v||_F for unitaries of equal size."""
    a = np.asarray(u, dtype=complex)
    b = np.asarray(v, dtype=complex)
    overlap = np.trace(b.conj().T @ a)
    # the minimizing phase is arg tr(v^dagger u); any phase works when the overlap vanishes
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.linalg.norm(a - phase * b))


def su2_normalize(u) -> np.ndarray:
    m = np.asarray(u, dtype=complex)
    return m / np.sqrt(np.linalg.det(m))
