"""
Warp-drive Service
Catalog of basis-permutation gates W, coupling-time cost model and the
search for the W that makes W.U cheapest to run.
"""

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.core.config import DEFAULTS
from src.core.errors import NonCanonicalCoordinates
from src.core.kak import CartanCoordinates, canonical_coordinates
from src.core.pulses import Duration
from src.core.su4 import check_unitary

log = logging.getLogger("warpdrive.warp")

BASIS_LABELS = ("00", "01", "10", "11")

# basis index -> image index, as printed for W0..W5
_SIX_MAPS = (
    (0, 1, 2, 3),  # W0 = I
    (0, 1, 3, 2),  # W1 = CNOT12
    (0, 3, 2, 1),  # W2 = CNOT21
    (0, 2, 1, 3),  # W3 = SWAP
    (0, 2, 3, 1),  # W4 = CNOT12 . CNOT21
    (0, 3, 1, 2),  # W5 = CNOT21 . CNOT12
)


@dataclass(frozen=True, eq=False)
class WarpGate:
    id: str
    matrix: np.ndarray
    basis_map: Dict[str, str]

    @classmethod
    def from_permutation(cls, index: int, images: Tuple[int, ...]) -> "WarpGate":
        matrix = np.zeros((4, 4), dtype=complex)
        for src, dst in enumerate(images):
            matrix[dst, src] = 1
        mapping = {BASIS_LABELS[s]: BASIS_LABELS[d] for s, d in enumerate(images)}
        return cls(f"W{index}", matrix, mapping)

    def inverse_map(self) -> Dict[str, str]:
        return {dst: src for src, dst in self.basis_map.items()}


@dataclass(frozen=True)
class WarpRecord:
    gate_id: str
    coords: CartanCoordinates
    duration: Duration


@dataclass(frozen=True)
class WarpSearchResult:
    records: Tuple[WarpRecord, ...]
    minimizers: Tuple[str, ...]
    selected: str

    def record(self, gate_id: str) -> WarpRecord:
        return next(r for r in self.records if r.gate_id == gate_id)

    @property
    def minimal_duration(self) -> Duration:
        return self.record(self.selected).duration


def coupling_time(c: CartanCoordinates, j_hz: float) -> Duration:
    """T = (|a_x| + |a_y| + |a_z|) / (2 pi J) on canonical coordinates."""
    if not c.is_canonical():
        raise NonCanonicalCoordinates(f"coordinates {c} are not in the canonical chamber")
    if not j_hz > 0:
        raise ValueError(f"J must be positive, got {j_hz}")
    return Duration.from_j_units(c.total / (2 * math.pi), j_hz)


def warp_catalog(scope: str = DEFAULTS["catalog"]) -> List[WarpGate]:
    """The six representative gates; 'all24' appends the other basis permutations."""
    gates = [WarpGate.from_permutation(i, images) for i, images in enumerate(_SIX_MAPS)]
    if scope == "six":
        return gates
    if scope != "all24":
        raise ValueError(f"unknown catalog scope {scope!r}")
    index = len(gates)
    for images in itertools.permutations(range(4)):
        if images in _SIX_MAPS:
            continue
        gates.append(WarpGate.from_permutation(index, images))
        index += 1
    return gates


def catalog_gate(gate_id: str) -> WarpGate:
    for gate in warp_catalog("all24"):
        if gate.id == gate_id:
            return gate
    raise KeyError(f"unknown warp gate {gate_id!r}")


def decode_output(w: WarpGate, observed: str) -> str:
    """Recover the label U would have produced from the label W.U produced."""
    if observed not in BASIS_LABELS:
        raise ValueError(f"observed label must be one of {BASIS_LABELS}, got {observed!r}")
    return w.inverse_map()[observed]


def _evaluate(gate: WarpGate, u: np.ndarray, j_hz: float) -> WarpRecord:
    coords = canonical_coordinates(gate.matrix @ u)
    duration = coupling_time(coords, j_hz)
    log.debug(f"{gate.id}: coords {coords} duration {duration.j_units}/J")
    return WarpRecord(gate.id, coords, duration)


def warp_search(
    u,
    j_hz: float = DEFAULTS["j_hz"],
    catalog: str = DEFAULTS["catalog"],
    prefer: Optional[str] = None,
    max_workers: Optional[int] = None,
) -> WarpSearchResult:
    """Time W.u for every catalog gate and pick the fastest."""
    u = check_unitary(u)
    gates = warp_catalog(catalog)

    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            records = list(pool.map(lambda g: _evaluate(g, u, j_hz), gates))
    else:
        records = [_evaluate(g, u, j_hz) for g in gates]

    best = min(r.duration.j_units for r in records)
    minimizers = tuple(r.gate_id for r in records if abs(r.duration.j_units - best) <= 1e-12)
    selected = minimizers[0]
    if prefer is not None:
        if prefer in minimizers:
            selected = prefer
        else:
            log.warning(f"{prefer} is not among the fastest gates {minimizers}; keeping {selected}")

    log.info(f"warp search selected {selected} at {best}/J (minimizers {', '.join(minimizers)})")
    return WarpSearchResult(tuple(records), minimizers, selected)


class WarpService:
    """Warp search bound to one coupling constant and catalog"""

    def __init__(
        self,
        j_hz: float = DEFAULTS["j_hz"],
        catalog: str = DEFAULTS["catalog"],
        max_workers: Optional[int] = None,
    ):
        self.j_hz = j_hz
        self.catalog = catalog
        self.max_workers = max_workers
        self.gates = warp_catalog(catalog)

    def gate(self, gate_id: str) -> WarpGate:
        """Look up a gate of this catalog"""
        for g in self.gates:
            if g.id == gate_id:
                return g
        raise KeyError(f"{gate_id} is not in the {self.catalog} catalog")

    def search(self, u, prefer: Optional[str] = None) -> WarpSearchResult:
        """Run the search over this catalog"""
        return warp_search(u, self.j_hz, self.catalog, prefer, self.max_workers)

    def apply(self, gate_id: str, u) -> np.ndarray:
        """W.u for the named gate"""
        return self.gate(gate_id).matrix @ np.asarray(u, dtype=complex)

    def decode(self, gate_id: str, observed: str) -> str:
        """Undo the gate's relabelling on a measured basis label"""
        return decode_output(self.gate(gate_id), observed)
