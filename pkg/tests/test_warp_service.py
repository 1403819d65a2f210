import logging
import math

import numpy as np
import pytest

from src.core.errors import NonCanonicalCoordinates
from src.core.grover import all_targets, grover_gate
from src.core.kak import CartanCoordinates
from src.core.su4 import CNOT12, CNOT21, I4, SWAP, kron
from src.services.warp_service import (
    WarpService,
    catalog_gate,
    coupling_time,
    decode_output,
    warp_catalog,
    warp_search,
)
from tests.conftest import haar_special

J = 215.5
PI = math.pi


def durations(result):
    return {r.gate_id: r.duration.j_units for r in result.records}


def seconds(result):
    return np.array([r.duration.value for r in result.records])


def random_local(rng):
    return kron(haar_special(rng, 2), haar_special(rng, 2))


class TestCatalog:
    def test_six_gates(self):
        assert [g.id for g in warp_catalog()] == ["W0", "W1", "W2", "W3", "W4", "W5"]

    def test_named_gates(self):
        np.testing.assert_array_equal(catalog_gate("W0").matrix, I4)
        np.testing.assert_array_equal(catalog_gate("W1").matrix, CNOT12)
        np.testing.assert_array_equal(catalog_gate("W2").matrix, CNOT21)
        np.testing.assert_array_equal(catalog_gate("W3").matrix, SWAP)
        np.testing.assert_array_equal(catalog_gate("W4").matrix, CNOT12 @ CNOT21)
        np.testing.assert_array_equal(catalog_gate("W5").matrix, CNOT21 @ CNOT12)

    def test_basis_maps(self):
        assert catalog_gate("W0").basis_map == {"00": "00", "01": "01", "10": "10", "11": "11"}
        assert catalog_gate("W4").basis_map["10"] == "11"

    def test_matrix_realizes_basis_map(self):
        for gate in warp_catalog("all24"):
            for src, dst in gate.basis_map.items():
                ket = np.zeros(4)
                ket[int(src, 2)] = 1
                assert np.argmax(np.abs(gate.matrix @ ket)) == int(dst, 2)

    def test_all24_is_every_permutation(self):
        gates = warp_catalog("all24")
        assert [g.id for g in gates] == [f"W{n}" for n in range(24)]
        keys = {tuple(np.argmax(g.matrix, axis=0)) for g in gates}
        assert len(keys) == 24

    def test_w4_cycles_with_period_three(self):
        w4 = catalog_gate("W4").matrix
        np.testing.assert_array_equal(w4 @ w4 @ w4, I4)
        np.testing.assert_array_equal(catalog_gate("W5").matrix, w4 @ w4)

    def test_unknown_scope(self):
        with pytest.raises(ValueError):
            warp_catalog("seven")

    def test_unknown_gate(self):
        with pytest.raises(KeyError):
            catalog_gate("W99")


class TestCouplingTime:
    def test_grover_gate(self):
        d = coupling_time(CartanCoordinates(PI, PI, 0), J)
        assert d.j_units == 1.0
        assert d.value == pytest.approx(1 / J)

    def test_warp_driven(self):
        assert coupling_time(CartanCoordinates(PI, 0, 0), J).j_units == 0.5

    def test_zero(self):
        assert coupling_time(CartanCoordinates(0, 0, 0), J).j_units == 0.0

    def test_non_canonical_rejected(self):
        with pytest.raises(NonCanonicalCoordinates):
            coupling_time(CartanCoordinates(0, PI, 0), J)


class TestWarpSearch:
    def test_grover_gate(self, u10):
        result = warp_search(u10, J)
        assert durations(result) == {
            "W0": 1.0, "W1": 1.0, "W2": 1.0, "W3": 0.5, "W4": 0.5, "W5": 0.5
        }
        assert result.minimizers == ("W3", "W4", "W5")
        assert result.selected == "W3"
        assert result.minimal_duration.j_units == 0.5

    @pytest.mark.parametrize("target", all_targets(), ids=lambda t: t.label)
    def test_pattern_holds_for_every_target(self, target):
        result = warp_search(grover_gate(target), J)
        assert [r.duration.j_units for r in result.records] == [1.0, 1.0, 1.0, 0.5, 0.5, 0.5]

    def test_identity(self):
        result = warp_search(I4, J)
        assert result.record("W0").duration.j_units == 0.0
        assert result.selected == "W0"
        assert all(r.duration.j_units <= 1.5 for r in result.records)

    def test_prefer_minimizer(self, u10):
        assert warp_search(u10, J, prefer="W4").selected == "W4"

    def test_prefer_non_minimizer_warns(self, u10, caplog):
        with caplog.at_level(logging.WARNING, logger="warpdrive.warp"):
            result = warp_search(u10, J, prefer="W0")
        assert result.selected == "W3"
        assert "not among the fastest" in caplog.text

    def test_thread_pool_keeps_catalog_order(self, u10):
        serial = warp_search(u10, J, "all24")
        pooled = warp_search(u10, J, "all24", max_workers=4)
        assert [r.gate_id for r in pooled.records] == [r.gate_id for r in serial.records]
        assert durations(pooled) == durations(serial)

    def test_extended_catalog_adds_no_new_durations(self, u10):
        result = warp_search(u10, J, "all24")
        assert set(durations(result).values()) == {0.5, 1.0}
        assert result.selected == "W3"

    def test_w0_never_beats_minimum(self, random_unitary):
        result = warp_search(random_unitary(), J)
        assert result.record("W0").duration.j_units >= result.minimal_duration.j_units

    def test_durations_ignore_local_gates_applied_first(self, rng, random_unitary):
        for _ in range(20):
            u = random_unitary()
            dressed = u @ random_local(rng)
            np.testing.assert_allclose(
                seconds(warp_search(dressed, J)), seconds(warp_search(u, J)), atol=1e-12
            )

    def test_identity_and_swap_ignore_local_gates_applied_last(self, rng, random_unitary):
        for _ in range(20):
            u = random_unitary()
            plain, dressed = warp_search(u, J), warp_search(random_local(rng) @ u, J)
            for gate_id in ("W0", "W3"):
                assert dressed.record(gate_id).duration.value == pytest.approx(
                    plain.record(gate_id).duration.value, abs=1e-12
                )


class TestDecode:
    def test_warp_driven_grover_output(self):
        assert decode_output(catalog_gate("W4"), "11") == "10"

    def test_identity(self):
        for label in ("00", "01", "10", "11"):
            assert decode_output(catalog_gate("W0"), label) == label

    def test_swap(self):
        assert decode_output(catalog_gate("W3"), "01") == "10"

    def test_inverts_basis_map(self):
        for gate in warp_catalog():
            for label in ("00", "01", "10", "11"):
                assert decode_output(gate, gate.basis_map[label]) == label

    def test_bad_label(self):
        with pytest.raises(ValueError):
            decode_output(catalog_gate("W0"), "2")


class TestWarpService:
    def test_apply_and_decode(self, u10):
        service = WarpService(J)
        out = service.apply("W4", u10) @ np.array([1, 0, 0, 0])
        observed = format(int(np.argmax(np.abs(out))), "02b")
        assert observed == "11"
        assert service.decode("W4", observed) == "10"

    def test_catalog_scope(self):
        with pytest.raises(KeyError):
            WarpService(J, "six").gate("W7")
        assert WarpService(J, "all24").gate("W7").id == "W7"

    def test_search(self, u10):
        assert WarpService(J, max_workers=2).search(u10, prefer="W5").selected == "W5"
