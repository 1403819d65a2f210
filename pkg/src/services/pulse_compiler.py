"""
Pulse Compiler
Turns a KAK decomposition into hard x/y pulses and free-evolution idles.

Time runs left to right in every list built here: the first element is
applied first.
"""

import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.core.config import TOLERANCES
from src.core.errors import OutOfRangeAlpha
from src.core.formatting import format_j_units, idle_label, pulse_name
from src.core.kak import KakDecomposition
from src.core.pulses import (
    Duration,
    HamiltonianParams,
    Idle,
    PulseSequence,
    Rot,
    RotationStep,
    Step,
    zip_rotations,
)
from src.core.su4 import HADAMARD, I2, su2_normalize
from src.services.warp_service import coupling_time

log = logging.getLogger("warpdrive.compiler")

# phase angles of the x and y drive axes
PHASE_X = 0.0
PHASE_Y = math.pi / 2

# smallest coupling angle whose idle survives snapping to the 1/J grid
_MIN_ALPHA = 4 * math.pi * TOLERANCES["grid"]


def _wrap(angle: float) -> float:
    """Wrap to (-pi, pi]."""
    wrapped = math.remainder(angle, 2 * math.pi)
    if wrapped <= -math.pi + TOLERANCES["zero_angle"]:
        wrapped += 2 * math.pi
    return wrapped


def _rotations(qubit: int, axis_angles: Sequence[Tuple[float, float]]) -> List[Rot]:
    """(phase, signed flip) pairs to normalized pulses, dropping zero flips."""
    pulses = []
    for phase, flip in axis_angles:
        flip = _wrap(flip)
        if abs(flip) <= TOLERANCES["zero_angle"]:
            continue
        pulses.append(Rot.normalized(qubit, phase, flip))
    return pulses


def _xyx_angles(u: np.ndarray) -> Tuple[float, float, float]:
    """(a, b, c) with u ~ Rx(a) Ry(-b) Rx(c), b in [0, pi]."""
    v = HADAMARD @ su2_normalize(u) @ HADAMARD
    lower, upper = abs(v[1, 0]), abs(v[0, 0])
    b = 2 * math.atan2(lower, upper)
    if lower <= 1e-12:
        return 2 * float(np.angle(v[1, 1])), 0.0, 0.0
    if upper <= 1e-12:
        return 2 * float(np.angle(v[1, 0])), math.pi, 0.0
    phi_sum = float(np.angle(v[1, 1]))
    phi_diff = float(np.angle(v[1, 0]))
    return phi_sum + phi_diff, b, phi_sum - phi_diff


def euler_xyx(u, qubit: int = 1) -> List[Rot]:
    """
    At most three in-plane pulses reproducing u up to phase, in time order.

    Rx(a) Ry(-b) Rx(c) equals Rx(a - pi) Ry(b) Rx(c + pi) up to sign; the
    variant with fewer non-zero angles wins.
    """
    a, b, c = _xyx_angles(np.asarray(u, dtype=complex))
    candidates = [
        _rotations(qubit, [(PHASE_X, c), (PHASE_Y, -b), (PHASE_X, a)]),
        _rotations(qubit, [(PHASE_X, c + math.pi), (PHASE_Y, b), (PHASE_X, a - math.pi)]),
    ]
    return min(candidates, key=len)


def _single_pulse(u: np.ndarray, qubit: int) -> Optional[List[Rot]]:
    """One pulse when u is a rotation about an axis in the xy plane."""
    m = su2_normalize(u)
    if abs(m[0, 0].imag) > 1e-10 or abs(m[1, 1].imag) > 1e-10:
        return None
    flip = 2 * math.atan2(abs(m[1, 0]), m[0, 0].real)
    phase = math.atan2(m[1, 0].real, -m[1, 0].imag)
    return _rotations(qubit, [(phase, flip)])


def _merge_same_axis(pulses: Sequence[Rot]) -> List[Rot]:
    """Fuse neighbours about the same (or opposite) axis and drop what cancels."""
    signed: List[Tuple[float, float]] = []
    for p in pulses:
        phase, flip = p.phase_angle, p.flip_angle
        if signed:
            last_phase, last_flip = signed[-1]
            offset = math.remainder(phase - last_phase, 2 * math.pi)
            if abs(offset) <= TOLERANCES["snap"]:
                signed[-1] = (last_phase, last_flip + flip)
                continue
            if abs(abs(offset) - math.pi) <= TOLERANCES["snap"]:
                signed[-1] = (last_phase, last_flip - flip)
                continue
        signed.append((phase, flip))
    if not pulses:
        return []
    merged = _rotations(pulses[0].qubit, signed)
    if len(merged) < len(signed):
        return _merge_same_axis(merged)
    return merged


def _product(pulses: Sequence[Rot]) -> np.ndarray:
    u = I2.copy()
    for p in pulses:
        u = p.unitary() @ u
    return u


def simplify_run(pulses: Sequence[Rot]) -> List[Rot]:
    """Shortest of: same-axis merge, single in-plane pulse, x-y-x resynthesis."""
    if not pulses:
        return []
    qubit = pulses[0].qubit
    product = _product(pulses)
    candidates = [_merge_same_axis(pulses)]
    single = _single_pulse(product, qubit)
    if single is not None:
        candidates.append(single)
    candidates.append(euler_xyx(product, qubit))
    return min(candidates, key=len)


def peephole(steps: Sequence[Step]) -> List[Step]:
    """Simplify each run of rotations between idles, per qubit; nothing crosses an idle."""
    out: List[Step] = []
    run: List[RotationStep] = []

    def flush():
        if not run:
            return
        per_qubit = {1: [], 2: []}
        for step in run:
            for r in step.rotations:
                per_qubit[r.qubit].append(r)
        out.extend(zip_rotations(simplify_run(per_qubit[1]), simplify_run(per_qubit[2])))
        run.clear()

    for step in steps:
        if isinstance(step, Idle):
            flush()
            out.append(step)
        else:
            run.append(step)
    flush()
    return out


def conjugate_coupling(axis: str, alpha: float, j_hz: float) -> List[Step]:
    """
    Steps realizing exp(i alpha/4 s_axis s_axis) from free ZZ evolution.

    The idle alone gives exp(-i |alpha|/4 ZZ); a positive alpha is refocused
    between pi pulses about +x and -x on qubit 1. x and y terms are rotated
    onto ZZ by pi/2 pulses on both qubits.
    """
    if axis not in ("x", "y", "z"):
        raise ValueError(f"axis must be x, y or z, got {axis!r}")
    if abs(alpha) <= _MIN_ALPHA or abs(alpha) > math.pi + TOLERANCES["snap"]:
        raise OutOfRangeAlpha(f"coupling angle must satisfy 0 < |alpha| <= pi, got {alpha}")

    idle = Idle(Duration.from_j_units(abs(alpha) / (2 * math.pi), j_hz))
    core: List[Step] = [idle]
    if alpha > 0:
        core = [
            RotationStep((Rot(1, PHASE_X, math.pi),)),
            idle,
            RotationStep((Rot(1, math.pi, math.pi),)),
        ]

    if axis == "z":
        return core
    if axis == "x":
        pre_phase, post_phase = 3 * math.pi / 2, math.pi / 2
    else:
        pre_phase, post_phase = PHASE_X, math.pi
    pre = RotationStep((Rot(1, pre_phase, math.pi / 2), Rot(2, pre_phase, math.pi / 2)))
    post = RotationStep((Rot(1, post_phase, math.pi / 2), Rot(2, post_phase, math.pi / 2)))
    return [pre] + core + [post]


def compile_decomposition(
    d: KakDecomposition,
    params: Optional[HamiltonianParams] = None,
    description: str = "",
    optimize: bool = True,
) -> PulseSequence:
    """Pulse program for k2 . h . k1: k1 pulses, coupling fragments (z, y, x), k2 pulses."""
    params = params or HamiltonianParams()
    j_hz = params.j_coupling

    steps: List[Step] = list(zip_rotations(euler_xyx(d.k1.a, 1), euler_xyx(d.k1.b, 2)))
    for axis, alpha in (("z", d.coords.z), ("y", d.coords.y), ("x", d.coords.x)):
        if abs(alpha) > _MIN_ALPHA:
            steps.extend(conjugate_coupling(axis, alpha, j_hz))
    steps.extend(zip_rotations(euler_xyx(d.k2.a, 1), euler_xyx(d.k2.b, 2)))

    if optimize:
        before = sum(len(s.rotations) for s in steps if isinstance(s, RotationStep))
        steps = peephole(steps)
        after = sum(len(s.rotations) for s in steps if isinstance(s, RotationStep))
        log.debug(f"peephole pass: {before} -> {after} pulses")

    sequence = PulseSequence(tuple(steps), j_hz, description)
    expected = coupling_time(d.coords, j_hz)
    if not sequence.coupling_time.same_as(expected, 1e-9):
        log.warning(
            f"idle total {sequence.coupling_time.j_units}/J differs from {expected.j_units}/J"
        )
    log.debug(
        f"compiled {description or 'target'}: {sequence.pulse_count} pulses, "
        f"coupling time {format_j_units(sequence.coupling_time.j_units)}"
    )
    return sequence


def _cell(step: Step, qubit: int) -> str:
    if isinstance(step, Idle):
        return idle_label(step.duration.j_units)
    rot = step.on(qubit)
    if rot is None:
        return ""
    return pulse_name(rot.phase_angle, rot.flip_angle)


def emit_table(s: PulseSequence) -> str:
    """Two qubit rows with one aligned column per step."""
    header_cells = ["Qubit"] + [str(n + 1) for n in range(len(s.steps))] + ["Execution Time"]
    rows = [header_cells]
    for qubit in (1, 2) if s.steps else ():
        time_cell = format_j_units(s.coupling_time.j_units) if qubit == 1 else ""
        rows.append([f"{qubit}:"] + [_cell(step, qubit) for step in s.steps] + [time_cell])

    widths = [max(len(row[c]) for row in rows) for c in range(len(header_cells))]
    lines = []
    if s.target_description:
        lines.append(f"# {s.target_description}")
    for row in rows:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    lines.append(f"pulses: {s.pulse_count}")
    return "\n".join(lines) + "\n"
