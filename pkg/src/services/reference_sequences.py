"""
Hand-optimized published programs for U10 and W4.U10.

The printed tables do not state their rotation sense, coupling sign or
reading direction. The programs are encoded with X = R(0, pi/2),
Xm = R(pi, pi/2), Y = R(pi/2, pi/2), Ym = R(3pi/2, pi/2), Pi(t) = R(t, pi),
(1/2J) = idle of 1/(2J), columns applied left to right; the sweep below
re-evaluates them under all eight sign/order variants.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.core.config import DEFAULTS
from src.core.grover import TargetFile, grover_gate
from src.core.pulses import Duration, Idle, PulseSequence, Rot, RotationStep, Step
from src.core.su4 import I2, kron, pauli_rotation
from src.hardware.hard_pulse_sim import EquivalenceReport, equivalence_report
from src.services.warp_service import catalog_gate

log = logging.getLogger("warpdrive.reference")

IDLE = "(1/2J)"

# one entry per printed column: IDLE or (qubit 1 pulse, qubit 2 pulse)
_TABLE: Dict[str, List] = {
    "U10": [
        ("X", "X"),
        IDLE,
        ("Xm", "Xm"),
        ("Y", "Ym"),
        IDLE,
        ("X", "Y"),
        ("Ym", "Pi(π/4)"),
    ],
    "W4U10": [
        ("Xm", None),
        ("Pi(-π/4)", None),
        IDLE,
        ("X", "Pi(π)"),
    ],
}

_QUARTER_TURNS = {"X": 0.0, "Xm": math.pi, "Y": math.pi / 2, "Ym": 3 * math.pi / 2}
_PI_ARGUMENTS = {"π/4": math.pi / 4, "-π/4": -math.pi / 4, "π": math.pi}


def named_pulse(name: str, qubit: int) -> Rot:
    if name in _QUARTER_TURNS:
        return Rot(qubit, _QUARTER_TURNS[name], math.pi / 2)
    if name.startswith("Pi(") and name.endswith(")"):
        arg = name[3:-1]
        if arg not in _PI_ARGUMENTS:
            raise ValueError(f"unsupported Pi argument {arg!r}")
        return Rot.normalized(qubit, _PI_ARGUMENTS[arg], math.pi)
    raise ValueError(f"unknown pulse name {name!r}")


def reference_names() -> Tuple[str, ...]:
    return tuple(_TABLE)


def reference_program(name: str, j_hz: float = DEFAULTS["j_hz"]) -> PulseSequence:
    if name not in _TABLE:
        raise KeyError(f"no reference program named {name!r}")
    steps: List[Step] = []
    for column in _TABLE[name]:
        if column == IDLE:
            steps.append(Idle(Duration.from_j_units(0.5, j_hz)))
            continue
        rotations = tuple(
            named_pulse(label, qubit) for qubit, label in zip((1, 2), column) if label is not None
        )
        steps.append(RotationStep(rotations))
    return PulseSequence(tuple(steps), j_hz, f"published {name}")


def reference_target(name: str) -> np.ndarray:
    u10 = grover_gate(TargetFile(1, 0))
    if name == "U10":
        return u10
    if name == "W4U10":
        return catalog_gate("W4").matrix @ u10
    raise KeyError(f"no reference program named {name!r}")


@dataclass(frozen=True)
class Convention:
    rotation_sense: int = 1    # +1: exp(-i t/2 n.s), -1: exp(+i t/2 n.s)
    coupling_sign: int = 1     # +1: idle is exp(-i pi/4 ZZ), -1: exp(+i pi/4 ZZ)
    reverse_order: bool = False

    @property
    def label(self) -> str:
        sense = "R-" if self.rotation_sense > 0 else "R+"
        coupling = "ZZ-" if self.coupling_sign > 0 else "ZZ+"
        order = "reversed" if self.reverse_order else "forward"
        return f"{sense}/{coupling}/{order}"


def all_conventions() -> List[Convention]:
    return [
        Convention(sense, sign, rev)
        for sense, sign, rev in itertools.product((1, -1), (1, -1), (False, True))
    ]


def _step_unitary(step: Step, conv: Convention) -> np.ndarray:
    if isinstance(step, Idle):
        phase = conv.coupling_sign * math.pi * step.duration.j_units / 2
        return np.diag(np.exp(-1j * phase * np.array([1, -1, -1, 1])))
    factors = [I2, I2]
    for r in step.rotations:
        factors[r.qubit - 1] = pauli_rotation(r.phase_angle, conv.rotation_sense * r.flip_angle)
    return kron(factors[0], factors[1])


def convention_unitary(s: PulseSequence, conv: Convention) -> np.ndarray:
    steps: Sequence[Step] = s.steps[::-1] if conv.reverse_order else s.steps
    u = np.eye(4, dtype=complex)
    for step in steps:
        u = _step_unitary(step, conv) @ u
    return u


@dataclass(frozen=True)
class ConventionResult:
    convention: Convention
    report: EquivalenceReport


def convention_sweep(name: str, j_hz: Optional[float] = None) -> List[ConventionResult]:
    """Compare the published program with its target under every convention variant."""
    program = reference_program(name, j_hz or DEFAULTS["j_hz"])
    target = reference_target(name)
    results = []
    for conv in all_conventions():
        report = equivalence_report(convention_unitary(program, conv), target)
        log.debug(
            f"{name} under {conv.label}: distance {report.phase_distance:.3e}, "
            f"same class {report.same_local_class}"
        )
        results.append(ConventionResult(conv, report))
    return results
