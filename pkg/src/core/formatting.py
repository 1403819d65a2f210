"""Human-readable angles, durations and pulse names."""

import math
from fractions import Fraction
from typing import Optional

from src.core.config import TOLERANCES

_MAX_DENOMINATOR = 8


def _as_fraction(value: float) -> Optional[Fraction]:
    frac = Fraction(value).limit_denominator(_MAX_DENOMINATOR)
    if abs(float(frac) - value) <= TOLERANCES["snap"]:
        return frac
    return None


def format_angle(theta: float) -> str:
    """Multiples of pi with small denominators print exactly, e.g. 3π/4."""
    frac = _as_fraction(theta / math.pi)
    if frac is None:
        return f"{theta:.6f}"
    if frac == 0:
        return "0"
    sign = "-" if frac < 0 else ""
    num, den = abs(frac.numerator), frac.denominator
    head = "π" if num == 1 else f"{num}π"
    return f"{sign}{head}" if den == 1 else f"{sign}{head}/{den}"


def format_j_units(j_units: float) -> str:
    """1/J, 1/(2J), 3/(2J) ..."""
    frac = _as_fraction(j_units)
    if frac is None:
        return f"{j_units:.6f}/J"
    if frac == 0:
        return "0"
    if frac.denominator == 1:
        return f"{frac.numerator}/J"
    return f"{frac.numerator}/({frac.denominator}J)"


def idle_label(j_units: float) -> str:
    """Table label of an idle period, e.g. (1/2J)."""
    frac = _as_fraction(j_units)
    if frac is None:
        return f"({j_units:.4f}/J)"
    if frac.denominator == 1:
        return f"({frac.numerator}/J)"
    return f"({frac.numerator}/{frac.denominator}J)"


def _close(a: float, b: float) -> bool:
    return abs(math.remainder(a - b, 2 * math.pi)) <= TOLERANCES["snap"]


_NAMED_QUARTER_TURNS = (
    (0.0, "X"),
    (math.pi, "Xm"),
    (math.pi / 2, "Y"),
    (3 * math.pi / 2, "Ym"),
)


def pulse_name(phase_angle: float, flip_angle: float) -> str:
    """X/Xm/Y/Ym for pi/2 pulses, Pi(phase) for pi pulses, R(phase,flip) otherwise."""
    if abs(flip_angle - math.pi / 2) <= TOLERANCES["snap"]:
        for phase, name in _NAMED_QUARTER_TURNS:
            if _close(phase_angle, phase):
                return name
    if abs(flip_angle - math.pi) <= TOLERANCES["snap"]:
        return f"Pi({format_angle(math.remainder(phase_angle, 2 * math.pi))})"
    return f"R({format_angle(phase_angle)},{format_angle(flip_angle)})"
