import math

import numpy as np
import pytest

from src.core.kak import canonical_coordinates
from src.core.pulses import Idle
from src.hardware.hard_pulse_sim import equivalence_report, simulate_sequence
from src.services.pulse_compiler import emit_table
from src.services.reference_sequences import (
    Convention,
    all_conventions,
    convention_sweep,
    convention_unitary,
    named_pulse,
    reference_names,
    reference_program,
    reference_target,
)

PI = math.pi


class TestNamedPulse:
    @pytest.mark.parametrize(
        "name, phase", [("X", 0.0), ("Xm", PI), ("Y", PI / 2), ("Ym", 3 * PI / 2)]
    )
    def test_quarter_turns(self, name, phase):
        r = named_pulse(name, 1)
        assert r.phase_angle == pytest.approx(phase)
        assert r.flip_angle == pytest.approx(PI / 2)

    def test_pi_pulses(self):
        assert named_pulse("Pi(π)", 2).phase_angle == pytest.approx(PI)
        assert named_pulse("Pi(-π/4)", 1).phase_angle == pytest.approx(7 * PI / 4)

    def test_unknown(self):
        with pytest.raises(ValueError):
            named_pulse("Z", 1)
        with pytest.raises(ValueError):
            named_pulse("Pi(π/3)", 1)


class TestReferencePrograms:
    def test_names(self):
        assert reference_names() == ("U10", "W4U10")

    def test_published_counts(self):
        u10 = reference_program("U10")
        w4u10 = reference_program("W4U10")
        assert u10.pulse_count == 10
        assert w4u10.pulse_count == 4
        assert [i.duration.j_units for i in u10.idles] == [0.5, 0.5]
        assert [i.duration.j_units for i in w4u10.idles] == [0.5]

    def test_renders_like_the_table(self):
        lines = emit_table(reference_program("W4U10")).splitlines()
        assert lines[2].split()[:5] == ["1:", "Xm", "Pi(-π/4)", "(1/2J)", "X"]
        assert lines[3].split() == ["2:", "(1/2J)", "Pi(π)"]

    def test_unknown(self):
        with pytest.raises(KeyError):
            reference_program("U11")
        with pytest.raises(KeyError):
            reference_target("U11")

    @pytest.mark.parametrize("name", ["U10", "W4U10"])
    def test_lands_in_target_class(self, name):
        program = reference_program(name)
        u = simulate_sequence(program)
        target = reference_target(name)
        assert canonical_coordinates(u).distance(canonical_coordinates(target)) <= 1e-8

    def test_idles_are_steps(self):
        assert sum(isinstance(s, Idle) for s in reference_program("U10").steps) == 2


class TestConventionSweep:
    def test_eight_variants(self):
        labels = {c.label for c in all_conventions()}
        assert len(labels) == 8

    def test_default_convention_matches_simulator(self):
        program = reference_program("U10")
        np.testing.assert_allclose(
            convention_unitary(program, Convention()), simulate_sequence(program), atol=1e-14
        )

    @pytest.mark.parametrize("name", ["U10", "W4U10"])
    def test_reports_every_variant(self, name):
        results = convention_sweep(name)
        assert len(results) == 8
        default = next(r for r in results if r.convention == Convention())
        assert default.report.same_local_class
        assert all(r.report.phase_distance >= 0 for r in results)

    def test_report_matches_direct_check(self):
        results = convention_sweep("W4U10")
        for r in results:
            direct = equivalence_report(
                convention_unitary(reference_program("W4U10"), r.convention),
                reference_target("W4U10"),
            )
            assert r.report.phase_distance == pytest.approx(direct.phase_distance)
