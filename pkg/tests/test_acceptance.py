"""End-to-end checks on the published gates, random targets and independent oracles."""

import math

import numpy as np
import pytest
from scipy.linalg import expm

from src.core.grover import all_targets, grover_gate
from src.core.kak import canonical_coordinates, decompose, to_magic
from src.core.pulses import HamiltonianParams
from src.core.su4 import CNOT12, I2, SIGMA_X, SIGMA_Y, SIGMA_Z, SWAP, kron, phase_distance
from src.hardware.hard_pulse_sim import (
    StateVector4,
    apply,
    dominant_label,
    equivalence_report,
    simulate_sequence,
)
from src.hardware.readout import predict_spectrum
from src.services.pulse_compiler import compile_decomposition
from src.services.reference_sequences import convention_sweep, reference_program, reference_target
from src.services.warp_service import WarpService, catalog_gate, coupling_time, decode_output
from tests.conftest import haar_special, haar_unitary

PI = math.pi
J = 215.5
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

# standard Bell basis used only by the invariant oracle
_ORACLE_Q = np.array(
    [[1, 0, 0, 1j], [0, 1j, 1, 0], [0, 1j, -1, 0], [1, 0, 0, -1j]], dtype=complex
) / np.sqrt(2)


def local_invariants(u):
    """Local-equivalence invariants (G1, G2) of a two-qubit unitary."""
    ub = _ORACLE_Q.conj().T @ u @ _ORACLE_Q
    m = ub.T @ ub
    det = np.linalg.det(u)
    tr = np.trace(m)
    return tr**2 / (16 * det), (tr**2 - np.trace(m @ m)) / (4 * det)


def interaction(coords):
    return expm(1j * sum(a * kron(p, p) for a, p in zip(coords.as_tuple(), PAULIS)) / 4)


def local_dressing(rng):
    return kron(haar_unitary(rng, 2), haar_unitary(rng, 2))


class TestPublishedGates:
    def test_grover_gate_coordinates(self, u10):
        d = decompose(u10)
        assert d.coords.as_tuple() == pytest.approx((PI, PI, 0), abs=1e-9)
        assert coupling_time(d.coords, J).j_units == 1.0

    def test_warp_driven_coordinates(self, w4u10):
        d = decompose(w4u10)
        assert d.coords.as_tuple() == pytest.approx((PI, 0, 0), abs=1e-9)
        assert coupling_time(d.coords, J).j_units == 0.5

    @pytest.mark.parametrize("target", all_targets(), ids=lambda t: t.label)
    def test_warp_sweep(self, target):
        result = WarpService(J).search(grover_gate(target))
        assert [r.duration.j_units for r in result.records] == [1.0, 1.0, 1.0, 0.5, 0.5, 0.5]
        assert result.minimizers == ("W3", "W4", "W5")


class TestRandomDecompositions:
    def test_reconstruction(self, rng):
        worst = 0.0
        for _ in range(1000):
            u = haar_unitary(rng)
            d = decompose(u)
            assert d.coords.is_canonical()
            worst = max(worst, phase_distance(d.matrix(), u))
        assert worst <= 1e-9

    def test_local_dressing_keeps_coordinates(self, rng):
        for _ in range(1000):
            u = haar_special(rng)
            dressed = local_dressing(rng) @ u @ local_dressing(rng)
            assert canonical_coordinates(dressed).distance(canonical_coordinates(u)) <= 1e-9

    def test_interaction_shares_invariants(self, rng):
        for _ in range(50):
            u = haar_unitary(rng)
            g1, g2 = local_invariants(u)
            h1, h2 = local_invariants(interaction(canonical_coordinates(u)))
            assert abs(g1 - h1) <= 1e-9
            assert abs(g2 - h2) <= 1e-9


class TestRandomCompilation:
    def test_certified(self, rng):
        params = HamiltonianParams(j_coupling=J)
        for _ in range(500):
            u = haar_unitary(rng)
            d = decompose(u)
            program = compile_decomposition(d, params)
            assert phase_distance(simulate_sequence(program), u) <= 1e-9
            assert len(program.idles) <= 3
            assert program.coupling_time.same_as(coupling_time(d.coords, J), 1e-9)

    def test_warp_drive_shortens_the_program(self, u10, w4u10):
        plain = compile_decomposition(decompose(u10))
        warped = compile_decomposition(decompose(w4u10))
        assert len(plain.idles) == 2
        assert len(warped.idles) == 1
        assert warped.pulse_count < plain.pulse_count
        assert warped.coupling_time.j_units < plain.coupling_time.j_units


class TestReferencePrograms:
    @pytest.mark.parametrize("name", ["U10", "W4U10"])
    def test_same_local_class(self, name):
        report = equivalence_report(
            simulate_sequence(reference_program(name)), reference_target(name)
        )
        assert report.same_local_class
        assert report.coord_delta <= 1e-8

    @pytest.mark.parametrize("name", ["U10", "W4U10"])
    def test_sweep_is_reported(self, name):
        results = convention_sweep(name)
        assert any(r.report.same_local_class for r in results)


class TestReadout:
    def test_warp_driven_search_ends_in_both_excited(self, w4u10):
        program = compile_decomposition(decompose(w4u10))
        psi = apply(simulate_sequence(program), StateVector4.basis("00"))
        assert abs(psi.amplitude("11")) >= 1 - 1e-9
        assert dominant_label(psi) == "11"
        assert decode_output(catalog_gate("W4"), "11") == "10"

    @pytest.mark.parametrize(
        "label, position, sign", [("00", 79.20, 1), ("10", 77.49, 1), ("11", 77.49, -1)]
    )
    def test_spectra(self, label, position, sign):
        (line,) = predict_spectrum(StateVector4.basis(label)).lines
        assert line.position == position
        assert line.amplitude == pytest.approx(sign)


class TestIndependentOracle:
    @pytest.mark.parametrize("gate, j_units", [(CNOT12, 0.5), (SWAP, 1.5)])
    def test_coupling_time(self, gate, j_units):
        coords = canonical_coordinates(gate)
        assert coupling_time(coords, J).j_units == pytest.approx(j_units)
        g = local_invariants(gate)
        h = local_invariants(interaction(coords))
        assert g == pytest.approx(h, abs=1e-9)


class TestMagicImages:
    def test_local_generators_become_real_antisymmetric(self):
        generators = [1j * kron(p, I2) for p in PAULIS] + [1j * kron(I2, p) for p in PAULIS]
        for g in generators:
            x = to_magic(g)
            assert np.abs(x.imag).max() <= 1e-12
            assert np.abs(x + x.T).max() <= 1e-12

    def test_coupling_generators_become_imaginary_symmetric(self):
        for p in PAULIS:
            for q in PAULIS:
                x = to_magic(1j * kron(p, q))
                assert np.abs(x.real).max() <= 1e-12
                assert np.abs(x - x.T).max() <= 1e-12
