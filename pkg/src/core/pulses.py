"""
Pulse-program data model.

Durations are kept in units of 1/J as well as seconds so that the idle
bookkeeping of compiled programs compares exactly.
"""

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Optional, Tuple, Union

import numpy as np

from src.core.config import DEFAULTS, RF, TOLERANCES
from src.core.errors import InvalidPulse, NegativeDuration
from src.core.su4 import I2, kron, pauli_rotation

_J_GRID = 8


@dataclass(frozen=True)
class Duration:
    value: float
    j_units: float

    @classmethod
    def from_j_units(cls, j_units: float, j_hz: float) -> "Duration":
        if j_units < -TOLERANCES["snap"]:
            raise NegativeDuration(f"duration must be non-negative, got {j_units} / J")
        snapped = round(j_units * _J_GRID) / _J_GRID
        if abs(j_units - snapped) <= TOLERANCES["grid"]:
            j_units = snapped
        j_units = max(j_units, 0.0)
        return cls(j_units / j_hz, j_units)

    @classmethod
    def from_seconds(cls, seconds: float, j_hz: float) -> "Duration":
        return cls.from_j_units(seconds * j_hz, j_hz)

    def same_as(self, other: "Duration", tol: float = 1e-12) -> bool:
        return abs(self.j_units - other.j_units) <= tol


@dataclass(frozen=True)
class HamiltonianParams:
    j_coupling: float = DEFAULTS["j_hz"]
    rf_amplitudes: Tuple[float, float] = (RF["amplitude_rad_s"], RF["amplitude_rad_s"])

    def __post_init__(self):
        if not self.j_coupling > 0:
            raise ValueError(f"j_coupling must be positive, got {self.j_coupling}")


def _wrap_phase(phi: float) -> float:
    wrapped = math.fmod(phi, 2 * math.pi)
    if wrapped < 0:
        wrapped += 2 * math.pi
    if abs(wrapped - 2 * math.pi) <= TOLERANCES["zero_angle"]:
        wrapped = 0.0
    return wrapped + 0.0


@dataclass(frozen=True)
class Rot:
    qubit: int
    phase_angle: float
    flip_angle: float

    def __post_init__(self):
        if self.qubit not in (1, 2):
            raise InvalidPulse(f"qubit must be 1 or 2, got {self.qubit}")
        if not abs(self.flip_angle) < 2 * math.pi:
            raise InvalidPulse(f"flip angle must lie in (-2pi, 2pi), got {self.flip_angle}")

    @classmethod
    def normalized(cls, qubit: int, phase_angle: float, flip_angle: float) -> "Rot":
        """Positive flip angle, phase in [0, 2pi)."""
        if flip_angle < 0:
            phase_angle, flip_angle = phase_angle + math.pi, -flip_angle
        return cls(qubit, _wrap_phase(phase_angle), flip_angle)

    def unitary(self) -> np.ndarray:
        return pauli_rotation(self.phase_angle, self.flip_angle)

    def rf_seconds(self, params: HamiltonianParams) -> float:
        return abs(self.flip_angle) / params.rf_amplitudes[self.qubit - 1]


@dataclass(frozen=True)
class Idle:
    duration: Duration

    def __post_init__(self):
        if not self.duration.value > 0:
            raise InvalidPulse(f"idle time must be positive, got {self.duration.value}")

    @property
    def seconds(self) -> float:
        return self.duration.value


@dataclass(frozen=True)
class RotationStep:
    """Simultaneous rotations, at most one per qubit."""

    rotations: Tuple[Rot, ...]

    def __post_init__(self):
        qubits = [r.qubit for r in self.rotations]
        if not qubits:
            raise InvalidPulse("a rotation step needs at least one rotation")
        if len(set(qubits)) != len(qubits):
            raise InvalidPulse(f"more than one rotation on a qubit in one step: {qubits}")
        object.__setattr__(self, "rotations", tuple(sorted(self.rotations, key=lambda r: r.qubit)))

    def on(self, qubit: int) -> Optional[Rot]:
        return next((r for r in self.rotations if r.qubit == qubit), None)

    def unitary(self) -> np.ndarray:
        factors = [I2, I2]
        for r in self.rotations:
            factors[r.qubit - 1] = r.unitary()
        return kron(factors[0], factors[1])


Step = Union[Idle, RotationStep]


def zip_rotations(first: Iterable[Rot], second: Iterable[Rot]) -> List[RotationStep]:
    """Pair per-qubit rotation lists into simultaneous steps, in order."""
    a, b = list(first), list(second)
    steps = []
    for n in range(max(len(a), len(b))):
        group = tuple(r for r in (a[n] if n < len(a) else None, b[n] if n < len(b) else None) if r)
        steps.append(RotationStep(group))
    return steps


@dataclass(frozen=True)
class PulseSequence:
    steps: Tuple[Step, ...] = ()
    j_hz: float = DEFAULTS["j_hz"]
    target_description: str = ""

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))

    def __iter__(self) -> Iterator[Step]:
        return iter(self.steps)

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def idles(self) -> List[Idle]:
        return [s for s in self.steps if isinstance(s, Idle)]

    @property
    def rotations(self) -> List[Rot]:
        return [r for s in self.steps if isinstance(s, RotationStep) for r in s.rotations]

    @property
    def coupling_time(self) -> Duration:
        return Duration.from_j_units(sum(i.duration.j_units for i in self.idles), self.j_hz)

    @property
    def pulse_count(self) -> int:
        return len(self.rotations)

    def rf_time(self, params: HamiltonianParams) -> float:
        """Hard-pulse time, longest pulse per step; reported apart from the coupling time."""
        return sum(
            max(r.rf_seconds(params) for r in s.rotations)
            for s in self.steps
            if isinstance(s, RotationStep)
        )
