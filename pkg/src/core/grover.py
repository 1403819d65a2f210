"""Single-step two-qubit Grover gates U_ij."""

from dataclasses import dataclass
from typing import List

import numpy as np

from src.core.su4 import I4, kron

_UNIFORM = np.full(4, 0.5, dtype=complex)
# H x H with exact entries +-1/2
_HH = 0.5 * kron([[1, 1], [1, -1]], [[1, 1], [1, -1]])


@dataclass(frozen=True)
class TargetFile:
    i: int
    j: int

    def __post_init__(self):
        if self.i not in (0, 1) or self.j not in (0, 1):
            raise ValueError(f"target bits must be 0 or 1, got ({self.i}, {self.j})")

    @property
    def label(self) -> str:
        return f"{self.i}{self.j}"

    @property
    def index(self) -> int:
        return 2 * self.i + self.j

    @classmethod
    def parse(cls, label: str) -> "TargetFile":
        if len(label) != 2 or any(ch not in "01" for ch in label):
            raise ValueError(f"target must be one of 00, 01, 10, 11, got {label!r}")
        return cls(int(label[0]), int(label[1]))


def all_targets() -> List[TargetFile]:
    return [TargetFile(i, j) for i in (0, 1) for j in (0, 1)]


def grover_gate(t: TargetFile) -> np.ndarray:
    """U_ij = -(2|s><s| - I)(I - 2|ij><ij|)(H x H)."""
    diffusion = 2 * np.outer(_UNIFORM, _UNIFORM.conj()) - I4
    oracle = I4.copy()
    oracle[t.index, t.index] = -1
    return -(diffusion @ oracle @ _HH)
