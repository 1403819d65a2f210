import math

import pytest

from src.core.formatting import format_angle, format_j_units, idle_label, pulse_name

PI = math.pi


@pytest.mark.parametrize(
    "theta, text",
    [
        (0.0, "0"),
        (PI, "π"),
        (-PI, "-π"),
        (PI / 2, "π/2"),
        (3 * PI / 4, "3π/4"),
        (-PI / 4, "-π/4"),
        (2 * PI, "2π"),
        (PI + 5e-10, "π"),
        (0.3, "0.300000"),
    ],
)
def test_format_angle(theta, text):
    assert format_angle(theta) == text


@pytest.mark.parametrize(
    "j_units, text",
    [(0.0, "0"), (1.0, "1/J"), (0.5, "1/(2J)"), (1.5, "3/(2J)"), (0.123456789, "0.123457/J")],
)
def test_format_j_units(j_units, text):
    assert format_j_units(j_units) == text


def test_idle_label():
    assert idle_label(0.5) == "(1/2J)"
    assert idle_label(1.0) == "(1/J)"
    assert idle_label(0.25) == "(1/4J)"


@pytest.mark.parametrize(
    "phase, flip, name",
    [
        (0.0, PI / 2, "X"),
        (PI, PI / 2, "Xm"),
        (PI / 2, PI / 2, "Y"),
        (3 * PI / 2, PI / 2, "Ym"),
        (-PI / 2, PI / 2, "Ym"),
        (PI, PI, "Pi(π)"),
        (PI / 4, PI, "Pi(π/4)"),
        (7 * PI / 4, PI, "Pi(-π/4)"),
        (0.0, PI / 3, "R(0,π/3)"),
    ],
)
def test_pulse_name(phase, flip, name):
    assert pulse_name(phase, flip) == name
