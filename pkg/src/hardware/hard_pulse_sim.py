"""
Hard-pulse simulator.

Pulses act instantaneously (rf amplitude far above J); idles evolve under
the ZZ coupling alone. The first step of a program is the rightmost factor
of the simulated unitary.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from src.core.config import TOLERANCES
from src.core.kak import canonical_coordinates
from src.core.pulses import HamiltonianParams, Idle, PulseSequence
from src.core.su4 import I4, coupling_evolution, phase_distance

log = logging.getLogger("warpdrive.sim")

BASIS_LABELS = ("00", "01", "10", "11")


@dataclass(frozen=True, eq=False)
class StateVector4:
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(4)
        norm = np.linalg.norm(amps)
        if abs(norm - 1) > TOLERANCES["unitary"]:
            raise ValueError(f"state must have unit norm, got {norm:.12g}")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis(cls, label: str) -> "StateVector4":
        if label not in BASIS_LABELS:
            raise ValueError(f"basis label must be one of {BASIS_LABELS}, got {label!r}")
        amps = np.zeros(4, dtype=complex)
        amps[BASIS_LABELS.index(label)] = 1
        return cls(amps)

    def populations(self) -> Dict[str, float]:
        return {label: float(abs(a) ** 2) for label, a in zip(BASIS_LABELS, self.amplitudes)}

    def amplitude(self, label: str) -> complex:
        return complex(self.amplitudes[BASIS_LABELS.index(label)])


@dataclass(frozen=True)
class EquivalenceReport:
    phase_distance: float
    same_local_class: bool
    coord_delta: float


def simulate_sequence(s: PulseSequence, p: Optional[HamiltonianParams] = None) -> np.ndarray:
    p = p or HamiltonianParams(j_coupling=s.j_hz)
    u = I4.copy()
    for step in s.steps:
        if isinstance(step, Idle):
            u = coupling_evolution(step.seconds, p.j_coupling) @ u
        else:
            u = step.unitary() @ u
    return u


def apply(u, psi: StateVector4) -> StateVector4:
    out = np.asarray(u, dtype=complex) @ psi.amplitudes
    return StateVector4(out / np.linalg.norm(out))


def dominant_label(psi: StateVector4) -> str:
    """Basis label with the largest population; ties go to the lowest label."""
    populations = psi.populations()
    return max(BASIS_LABELS, key=lambda label: (populations[label], -BASIS_LABELS.index(label)))


def equivalence_report(u, v, tol: float = TOLERANCES["local_class"]) -> EquivalenceReport:
    distance = phase_distance(u, v)
    delta = canonical_coordinates(u).distance(canonical_coordinates(v))
    report = EquivalenceReport(distance, delta <= tol, delta)
    log.debug(f"equivalence: distance {distance:.3e}, coordinate delta {delta:.3e}")
    return report
