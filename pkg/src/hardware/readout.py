"""
Stick-spectrum readout of the observed nucleus.

A pi/2 read pulse about y tips the observed qubit; each partner-qubit
basis state contributes one line whose signed amplitude is the x
magnetization of the observed qubit in that partner subspace. |0> on the
observed qubit reads positive.
"""

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from src.core.config import READOUT
from src.core.su4 import I2, SIGMA_X, axis_rotation, kron
from src.hardware.hard_pulse_sim import StateVector4

_PROJECTORS = {0: np.diag([1, 0]).astype(complex), 1: np.diag([0, 1]).astype(complex)}
_MIN_AMPLITUDE = 1e-12


@dataclass(frozen=True)
class ReadoutConfig:
    observed_qubit: int = READOUT["observed_qubit"]
    line_positions: Dict[int, float] = field(
        default_factory=lambda: dict(READOUT["line_positions"])
    )

    def __post_init__(self):
        if self.observed_qubit not in (1, 2):
            raise ValueError(f"observed qubit must be 1 or 2, got {self.observed_qubit}")
        if set(self.line_positions) != {0, 1}:
            raise ValueError("line positions are needed for partner states 0 and 1")
        if self.line_positions[0] == self.line_positions[1]:
            raise ValueError("the two line positions must differ")


@dataclass(frozen=True)
class SpectralLine:
    position: float
    amplitude: float


@dataclass(frozen=True)
class StickSpectrum:
    lines: Tuple[SpectralLine, ...]

    def line_at(self, position: float, tol: float = 1e-9):
        return next((line for line in self.lines if abs(line.position - position) <= tol), None)


def _observable(observed: int, partner_state: int) -> np.ndarray:
    if observed == 2:
        return kron(_PROJECTORS[partner_state], SIGMA_X)
    return kron(SIGMA_X, _PROJECTORS[partner_state])


def _read_pulse(observed: int) -> np.ndarray:
    r = axis_rotation("y", np.pi / 2)
    return kron(I2, r) if observed == 2 else kron(r, I2)


def predict_spectrum(psi: StateVector4, c: Optional[ReadoutConfig] = None) -> StickSpectrum:
    c = c or ReadoutConfig()
    tipped = _read_pulse(c.observed_qubit) @ psi.amplitudes
    lines = []
    for partner_state in (0, 1):
        obs = _observable(c.observed_qubit, partner_state)
        amplitude = float(np.real(np.vdot(tipped, obs @ tipped)))
        if abs(amplitude) < _MIN_AMPLITUDE:
            continue
        lines.append(SpectralLine(c.line_positions[partner_state], amplitude))
    lines.sort(key=lambda line: line.position)
    return StickSpectrum(tuple(lines))
