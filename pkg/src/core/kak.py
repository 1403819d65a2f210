"""
Cartan (KAK) decomposition of two-qubit gates.

A gate U in SU(4) is written U = k2 . h(alpha) . k1 with k1, k2 tensor
products of one-qubit gates and

    h(alpha) = exp(i (a_x XX + a_y YY + a_z ZZ) / 4).

Everything goes through the magic (Bell) basis Q, where local gates are
real orthogonal and h is diagonal.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

import numpy as np

from src.core.config import DIAGONALIZATION, TOLERANCES
from src.core.errors import FactorizationFailure, NotLocal, NotSpecialUnitary
from src.core.su4 import (
    I2,
    I4,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    SpecialUnitary4,
    as_matrix,
    axis_rotation,
    kron,
    project_su4,
)

log = logging.getLogger("warpdrive.kak")

# Q * sqrt(2); its entries are 0, +-1, +-i so products with it are exact
_Q_SCALED = np.array(
    [
        [1, 0, 0, 1j],
        [0, 1j, 1, 0],
        [0, 1j, -1, 0],
        [1, 0, 0, -1j],
    ],
    dtype=complex,
)
MAGIC_BASIS = _Q_SCALED / np.sqrt(2)

AXES = ("x", "y", "z")
_AXIS_PAULI = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}


@dataclass(frozen=True, eq=False)
class MagicBasisTransform:
    """The Bell-basis change of coordinates; columns are the Bell states in order."""

    q: np.ndarray = field(default_factory=lambda: MAGIC_BASIS.copy())

    def bell_state(self, index: int) -> np.ndarray:
        return self.q[:, index].copy()

    def forward(self, u) -> np.ndarray:
        return to_magic(u)

    def inverse(self, x) -> np.ndarray:
        return from_magic(x)


def to_magic(u) -> np.ndarray:
    """Q^dagger u Q."""
    return 0.5 * (_Q_SCALED.conj().T @ np.asarray(u, dtype=complex) @ _Q_SCALED)


def from_magic(x) -> np.ndarray:
    """Q x Q^dagger."""
    return 0.5 * (_Q_SCALED @ np.asarray(x, dtype=complex) @ _Q_SCALED.conj().T)


@dataclass(frozen=True)
class CartanCoordinates:
    x: float
    y: float
    z: float

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.x, self.y, self.z)

    def __getitem__(self, index: int) -> float:
        return self.as_tuple()[index]

    @property
    def total(self) -> float:
        return abs(self.x) + abs(self.y) + abs(self.z)

    def is_canonical(self, tol: float = TOLERANCES["local_class"]) -> bool:
        x, y, z = self.as_tuple()
        return (
            -tol <= y
            and x <= math.pi + tol
            and x >= y - tol
            and y >= abs(z) - tol
            and z > -math.pi + tol
        )

    def distance(self, other: "CartanCoordinates") -> float:
        """Largest componentwise difference."""
        return max(abs(a - b) for a, b in zip(self.as_tuple(), other.as_tuple()))

    def __str__(self) -> str:
        return f"({self.x:.12g}, {self.y:.12g}, {self.z:.12g})"


@dataclass(frozen=True)
class MagicSpectrum:
    thetas: Tuple[float, float, float, float]

    def __getitem__(self, index: int) -> float:
        return self.thetas[index]


@dataclass(frozen=True, eq=False)
class LocalGatePair:
    a: np.ndarray
    b: np.ndarray
    phase: float = 0.0

    def matrix(self) -> np.ndarray:
        return np.exp(1j * self.phase) * kron(self.a, self.b)

    @classmethod
    def identity(cls) -> "LocalGatePair":
        return cls(I2.copy(), I2.copy(), 0.0)


@dataclass(frozen=True, eq=False)
class KakDecomposition:
    k1: LocalGatePair
    coords: CartanCoordinates
    k2: LocalGatePair
    global_phase: float = 0.0

    def matrix(self) -> np.ndarray:
        return (
            np.exp(1j * self.global_phase)
            * self.k2.matrix()
            @ cartan_element(self.coords)
            @ self.k1.matrix()
        )


# --- Cartan subgroup in the magic basis ---

# eigenvalue signs of XX, YY, ZZ on the four Bell states
_BELL_SIGNS = np.array(
    [
        [1, 1, -1, -1],
        [-1, 1, -1, 1],
        [1, -1, -1, 1],
    ],
    dtype=float,
)


def alpha_to_theta(c: CartanCoordinates) -> MagicSpectrum:
    thetas = _BELL_SIGNS.T @ np.array(c.as_tuple()) / 4
    return MagicSpectrum(tuple(float(t) for t in thetas))


def theta_to_alpha(s: MagicSpectrum) -> CartanCoordinates:
    t0, t1, _, t3 = s.thetas
    return CartanCoordinates(2 * (t0 + t1), 2 * (t1 + t3), 2 * (t0 + t3))


def cartan_element(c: CartanCoordinates) -> np.ndarray:
    """h(alpha) = Q diag(e^{i theta}) Q^dagger."""
    thetas = np.array(alpha_to_theta(c).thetas)
    return from_magic(np.diag(np.exp(1j * thetas)))


def _as_special(u: Union[SpecialUnitary4, np.ndarray]) -> np.ndarray:
    if isinstance(u, SpecialUnitary4):
        return u.matrix
    m = as_matrix(u, 4)
    residual = abs(np.linalg.det(m) - 1)
    if residual > TOLERANCES["unitary"]:
        raise NotSpecialUnitary(f"det differs from 1 by {residual:.3e}")
    return m


def _symmetric_square(m: np.ndarray) -> np.ndarray:
    ub = to_magic(m)
    return ub.T @ ub


def magic_spectrum(u: Union[SpecialUnitary4, np.ndarray]) -> MagicSpectrum:
    """Half-phases of the eigenvalues of U_B^T U_B, sorted descending, summing to zero."""
    m = _symmetric_square(_as_special(u))
    thetas = np.angle(np.linalg.eigvals(m)) / 2
    while thetas.sum() > math.pi / 2:
        thetas[np.argmax(thetas)] -= math.pi
    while thetas.sum() < -math.pi / 2:
        thetas[np.argmin(thetas)] += math.pi
    thetas = np.sort(thetas)[::-1]
    thetas[3] = -(thetas[0] + thetas[1] + thetas[2])
    return MagicSpectrum(tuple(float(t) for t in thetas))


# --- Weyl canonicalization ---


def _reduce_angle(value: float, tol: float) -> int:
    """Number of 2 pi turns to subtract so the value lands in (-pi, pi]."""
    n = math.floor((value + math.pi) / (2 * math.pi))
    if value - 2 * math.pi * n <= -math.pi + tol:
        n -= 1
    return n


class _WeylTracker:
    """Keeps h(original) = e^{i phase} L_in h(current) L_out through each move."""

    def __init__(self, c: CartanCoordinates):
        self.alpha = list(c.as_tuple())
        self.l_in = I4.copy()
        self.l_out = I4.copy()
        self.phase = 0.0

    def shift(self, j: int, n: int):
        if n == 0:
            return
        self.alpha[j] -= 2 * math.pi * n
        self.phase += n * math.pi / 2
        if n % 2:
            p = _AXIS_PAULI[AXES[j]]
            self.l_out = kron(p, p) @ self.l_out

    def flip(self, j: int, k: int):
        l = 3 - j - k
        s = kron(_AXIS_PAULI[AXES[l]], I2)
        self.alpha[j] = -self.alpha[j]
        self.alpha[k] = -self.alpha[k]
        self.l_in = self.l_in @ s
        self.l_out = s @ self.l_out

    def swap(self, j: int, k: int):
        l = 3 - j - k
        r = axis_rotation(AXES[l], math.pi / 2)
        v = kron(r, r)
        self.alpha[j], self.alpha[k] = self.alpha[k], self.alpha[j]
        self.l_in = self.l_in @ v.conj().T
        self.l_out = v @ self.l_out


def weyl_canonicalize(
    c: CartanCoordinates, tol: float = TOLERANCES["sign"]
) -> Tuple[CartanCoordinates, LocalGatePair, LocalGatePair, float]:
    """
    Reduce coordinates to the canonical chamber pi >= x >= y >= |z|.

    Returns (canonical, pair_in, pair_out, phase) with
    h(c) = e^{i phase} . pair_in . h(canonical) . pair_out.
    """
    t = _WeylTracker(c)

    for j in range(3):
        t.shift(j, _reduce_angle(t.alpha[j], tol))

    for j, k in ((0, 1), (1, 2), (0, 1)):
        if abs(t.alpha[j]) < abs(t.alpha[k]) - tol:
            t.swap(j, k)

    negatives = [j for j in range(3) if t.alpha[j] < -tol]
    while len(negatives) >= 2:
        t.flip(negatives[0], negatives[1])
        negatives = negatives[2:]
    if negatives and negatives[0] != 2:
        t.flip(negatives[0], 2)
    if t.alpha[2] < -tol and t.alpha[0] >= math.pi - tol:
        t.flip(0, 2)
        t.shift(0, -1)

    alpha = [0.0 if abs(a) <= tol else a + 0.0 for a in t.alpha]
    canonical = CartanCoordinates(*alpha)

    pair_in = kron_factorize(t.l_in)
    pair_out = kron_factorize(t.l_out)
    phase = t.phase + pair_in.phase + pair_out.phase
    return (
        canonical,
        LocalGatePair(pair_in.a, pair_in.b),
        LocalGatePair(pair_out.a, pair_out.b),
        phase,
    )


# --- Local factorization ---


def kron_factorize(k, tol: float = TOLERANCES["local"]) -> LocalGatePair:
    """Split e^{i phi} (a x b) into det-1 factors a, b and the phase phi."""
    k = as_matrix(k, 4)
    blocks = [[k[2 * r : 2 * r + 2, 2 * s : 2 * s + 2] for s in range(2)] for r in range(2)]
    norms = [[np.linalg.norm(blocks[r][s]) for s in range(2)] for r in range(2)]
    r, s = np.unravel_index(np.argmax(norms), (2, 2))
    big = blocks[r][s]

    det_big = np.linalg.det(big)
    if abs(det_big) < 1e-12:
        raise NotLocal(float("inf"))
    b = big / np.sqrt(det_big)

    a_raw = np.array(
        [[np.trace(b.conj().T @ blocks[i][j]) / 2 for j in range(2)] for i in range(2)],
        dtype=complex,
    )
    det_a = np.linalg.det(a_raw)
    if abs(det_a) < 1e-12:
        raise NotLocal(float("inf"))
    a = a_raw / np.sqrt(det_a)

    product = kron(a, b)
    phase = float(np.angle(np.trace(product.conj().T @ k) / 4))
    residual = float(np.linalg.norm(np.exp(1j * phase) * product - k))
    if residual > tol:
        raise NotLocal(residual)
    return LocalGatePair(a, b, phase)


# --- Real orthogonal diagonalization of U_B^T U_B ---


def _offdiag_norm(x: np.ndarray) -> float:
    return float(np.linalg.norm(x - np.diag(np.diag(x))))


def _two_stage(m: np.ndarray, collision: float) -> np.ndarray:
    """Diagonalize Re m, then Im m inside each degenerate block of Re m."""
    vals, vecs = np.linalg.eigh(m.real)
    basis = []
    start = 0
    while start < 4:
        stop = start + 1
        while stop < 4 and abs(vals[stop] - vals[start]) <= collision:
            stop += 1
        block = vecs[:, start:stop]
        _, inner = np.linalg.eigh(block.T @ m.imag @ block)
        basis.append(block @ inner)
        start = stop
    return np.hstack(basis)


def _canonical_basis(p: np.ndarray, m: np.ndarray, collision: float) -> np.ndarray:
    """
    Re-pick eigenvectors inside each degenerate eigenspace from the
    projections of the standard basis, so the result does not depend on
    which basis the eigensolver happened to return.
    """
    d = np.diag(p.T @ m @ p)
    groups: List[List[int]] = []
    for i in range(4):
        for g in groups:
            if abs(d[g[0]] - d[i]) <= collision:
                g.append(i)
                break
        else:
            groups.append([i])

    columns = []
    for g in groups:
        proj = p[:, g] @ p[:, g].T
        chosen: List[np.ndarray] = []
        for _ in g:
            residuals = []
            for k in range(4):
                v = proj[:, k].copy()
                for w in chosen:
                    v -= (w @ v) * w
                residuals.append(v)
            norms = [np.linalg.norm(v) for v in residuals]
            best = max(norms)
            k = next(i for i, n in enumerate(norms) if n >= best - 1e-9)
            v = residuals[k] / norms[k]
            chosen.append(v)
            columns.append((k, float(np.angle(d[g[0]])), v))
    columns.sort(key=lambda entry: (entry[0], entry[1]))
    return np.column_stack([v for _, _, v in columns])


def _diagonalize(m: np.ndarray) -> np.ndarray:
    residual_tol = TOLERANCES["pencil_residual"]
    collision = TOLERANCES["pencil_collision"]

    if _offdiag_norm(m) <= 1e-14:
        p = np.eye(4)
    else:
        rng = np.random.default_rng(DIAGONALIZATION["seed"])
        best: Optional[np.ndarray] = None
        best_residual = float("inf")
        for attempt in range(DIAGONALIZATION["attempts"]):
            c_re, c_im = rng.normal(size=2)
            _, candidate = np.linalg.eigh(c_re * m.real + c_im * m.imag)
            residual = _offdiag_norm(candidate.T @ m @ candidate)
            if residual < best_residual:
                best, best_residual = candidate, residual
            if residual <= residual_tol:
                break
            log.debug(f"pencil attempt {attempt} left residual {residual:.3e}")
        if best_residual > residual_tol:
            candidate = _two_stage(m, collision)
            residual = _offdiag_norm(candidate.T @ m @ candidate)
            if residual < best_residual:
                best, best_residual = candidate, residual
            if best_residual > residual_tol:
                log.warning(
                    f"joint diagonalization left off-diagonal residual {best_residual:.3e}"
                )
        p = best

    p = _canonical_basis(p, m, collision)
    if np.linalg.det(p) < 0:
        p = p.copy()
        p[:, 0] = -p[:, 0]
    return p


def _nearest_orthogonal(x: np.ndarray) -> np.ndarray:
    u, _, vt = np.linalg.svd(x)
    return u @ vt


# --- Decomposition ---


def cartan_decompose(u: Union[SpecialUnitary4, np.ndarray]) -> KakDecomposition:
    """KAK decomposition of an SU(4) matrix with canonical coordinates."""
    target = _as_special(u)
    ub = to_magic(target)
    m = ub.T @ ub

    p = _diagonalize(m)
    d = np.diag(p.T @ m @ p)
    phases = np.angle(d)
    phases[phases <= -math.pi + 1e-12] += 2 * math.pi
    turns = round(float(phases.sum()) / (2 * math.pi))
    phases[3] -= 2 * math.pi * turns
    thetas = phases / 2

    o1 = p.T
    o2 = _nearest_orthogonal((ub @ p @ np.diag(np.exp(-1j * thetas))).real)
    k1 = from_magic(o1)
    k2 = from_magic(o2)

    raw = theta_to_alpha(MagicSpectrum(tuple(float(t) for t in thetas)))
    canonical, pair_in, pair_out, weyl_phase = weyl_canonicalize(raw)

    try:
        left = kron_factorize(k2 @ pair_in.matrix())
        right = kron_factorize(pair_out.matrix() @ k1)
    except NotLocal as exc:
        raise FactorizationFailure(
            f"local factor left the SU(2)xSU(2) subgroup (residual {exc.residual:.3e})"
        ) from exc

    log.debug(f"raw coordinates {raw} -> canonical {canonical}")
    return KakDecomposition(
        k1=LocalGatePair(right.a, right.b),
        coords=canonical,
        k2=LocalGatePair(left.a, left.b),
        global_phase=weyl_phase + left.phase + right.phase,
    )


def decompose(u) -> KakDecomposition:
    """KAK decomposition of any 4x4 unitary; the determinant phase goes into global_phase."""
    special = project_su4(u)
    d = cartan_decompose(special)
    return KakDecomposition(d.k1, d.coords, d.k2, d.global_phase + special.extracted_phase)


def canonical_coordinates(u) -> CartanCoordinates:
    """Canonical coordinates of any 4x4 unitary, skipping the local factors."""
    spectrum = magic_spectrum(project_su4(u))
    canonical, _, _, _ = weyl_canonicalize(theta_to_alpha(spectrum))
    return canonical
