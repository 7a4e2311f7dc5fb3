"""Truncated ladder baths and energy-preserving joint unitaries.

The bath has levels ``n = 0..K`` (energy ``n`` in units of the system
spacing) with degeneracy ``d_n``. A joint unitary commuting with
``H_S + H_R`` is block diagonal over total energy ``k = 0..K+2``. Inside
sector ``k`` the basis is ordered system-major: system level ``j``
ascending (only levels with ``0 <= k - j <= K``), then the ``d_{k-j}``
degenerate bath states of level ``k - j``. The sub-block ``u_ij^k`` maps
the ``j`` slice to the ``i`` slice.

The dense embedding used by :func:`dense_channel_oracle` orders the full
space as (system level, bath level, degeneracy index), all ascending.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import (
    CHANNEL_TOL,
    DIM,
    DomainError,
    ResourceError,
    StructureError,
    check_q,
    initial_state,
)

SECTOR_GUARD = 10_000_000
DENSE_GUARD = 2000


@dataclass(frozen=True)
class BathSpec:
    q: float
    K: int
    degeneracies: tuple[int, ...]
    scheme: str = "custom"
    per_state_weight: np.ndarray = field(init=False, repr=False, compare=False)
    Z: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        d = np.asarray(self.degeneracies, dtype=float)
        z = float(np.sum(d * self.q ** np.arange(self.K + 1)))
        object.__setattr__(self, "Z", z)
        object.__setattr__(self, "per_state_weight", self.q ** np.arange(self.K + 1) / z)

    @property
    def dim(self) -> int:
        return int(sum(self.degeneracies))

    def level_weights(self) -> np.ndarray:
        """Total Gibbs weight ``d_n * gamma_n`` of each bath level."""
        return np.asarray(self.degeneracies) * self.per_state_weight


@dataclass(frozen=True)
class DeltaReport:
    good_levels: tuple[int, ...]
    delta_ratio: float
    delta_tail: float
    positivity_margin: float
    positivity_flag: bool

    @property
    def delta_eff(self) -> float:
        return max(self.delta_ratio, self.delta_tail)

    def as_dict(self) -> dict:
        return {
            "good_levels": list(self.good_levels),
            "delta_ratio": self.delta_ratio,
            "delta_tail": self.delta_tail,
            "positivity_margin": self.positivity_margin,
            "positivity_flag": self.positivity_flag,
        }


def make_bath(q: float, K: int, scheme: float | Sequence[int] = 2.0) -> BathSpec:
    """Build a bath with ``K + 1`` levels.

    ``scheme`` is either a geometric base ``b`` (``d_n = round(b**n)``) or an
    explicit list of degeneracies.
    """
    q = check_q(q)
    if K < 4:
        raise DomainError("bath needs K >= 4 levels above the ground level")
    if np.isscalar(scheme):
        base = float(scheme)
        if base < 1.0:
            raise DomainError("geometric base must be >= 1")
        degs = tuple(max(1, int(round(base**n))) for n in range(K + 1))
        label = f"geometric({base:g})"
    else:
        degs = tuple(int(d) for d in scheme)
        if len(degs) != K + 1:
            raise DomainError(f"expected {K + 1} degeneracies, got {len(degs)}")
        label = "custom"
    if min(degs) < 1:
        raise DomainError("degeneracies must be positive")
    if any(b < a for a, b in zip(degs, degs[1:])):
        raise DomainError("degeneracies must be non-decreasing")
    return BathSpec(q, K, degs, label)


def bath_delta_report(bath: BathSpec) -> DeltaReport:
    q, K, d = bath.q, bath.K, bath.degeneracies
    if K < 4:
        raise DomainError("delta report needs K >= 4")
    good = tuple(range(2, K - 1))
    ratio = max(abs(d[k - m] / (d[k] * q**m) - 1.0) for k in good for m in (1, 2))
    tail = 1.0 - float(sum(bath.level_weights()[k] for k in good))
    margin = min((d[k] - d[k - 1] - d[k - 2]) / d[k] for k in good)
    flag = (1.0 - q - q * q) - (q + q * q) * ratio <= 0.0
    return DeltaReport(good, float(ratio), tail, float(margin), bool(flag))


def sector_levels(bath: BathSpec, k: int) -> list[int]:
    """System levels present in total-energy sector ``k``."""
    return [j for j in range(min(DIM - 1, k) + 1) if k - j <= bath.K]


def sector_slices(bath: BathSpec, k: int) -> dict[int, slice]:
    out, start = {}, 0
    for j in sector_levels(bath, k):
        size = bath.degeneracies[k - j]
        out[j] = slice(start, start + size)
        start += size
    return out


def sector_dim(bath: BathSpec, k: int) -> int:
    return sum(bath.degeneracies[k - j] for j in sector_levels(bath, k))


def n_sectors(bath: BathSpec) -> int:
    return bath.K + DIM


@dataclass(frozen=True)
class BlockUnitary:
    """Energy-sector blocks ``U^(k)``, ``k = 0..K+2``, of a joint unitary."""

    bath: BathSpec
    blocks: tuple

    def sub(self, k: int, i: int, j: int) -> np.ndarray | None:
        """``u_ij^k`` or ``None`` when either level is absent from the sector."""
        if not 0 <= k < len(self.blocks):
            return None
        sl = sector_slices(self.bath, k)
        if i not in sl or j not in sl:
            return None
        return self.blocks[k][sl[i], sl[j]]

    def unitarity_residuals(self) -> list[float]:
        return [float(np.max(np.abs(b.conj().T @ b - np.eye(b.shape[0])))) for b in self.blocks]


def _assemble(bath: BathSpec, blocks) -> BlockUnitary:
    for k, b in enumerate(blocks):
        n = sector_dim(bath, k)
        if b.shape != (n, n):
            raise StructureError(f"sector {k} block has shape {b.shape}, expected {(n, n)}")
    return BlockUnitary(bath, tuple(np.asarray(b, dtype=complex) for b in blocks))


def identity_unitary(bath: BathSpec) -> BlockUnitary:
    return _assemble(bath, [np.eye(sector_dim(bath, k)) for k in range(n_sectors(bath))])


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar unitary from the QR factorisation of a complex Ginibre matrix."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    qmat, r = np.linalg.qr(z)
    d = np.diag(r)
    return qmat * (d / np.abs(d))


def _sector_load(bath: BathSpec) -> int:
    return sum(sector_dim(bath, k) ** 2 for k in range(n_sectors(bath)))


def _suggest_k(bath: BathSpec, fits) -> int:
    """Largest ``K >= 4`` whose truncation of ``bath`` still passes ``fits``."""
    best = 4
    for k in range(4, bath.K):
        if fits(BathSpec(bath.q, k, bath.degeneracies[: k + 1], bath.scheme)):
            best = k
    return best


def _check_sector_guard(bath: BathSpec) -> None:
    load = _sector_load(bath)
    if load > SECTOR_GUARD:
        k = _suggest_k(bath, lambda b: _sector_load(b) <= SECTOR_GUARD)
        raise ResourceError(f"sector blocks need {load} entries (> {SECTOR_GUARD}); try K={k}")


def random_block_unitary(bath: BathSpec, seed=None) -> BlockUnitary:
    _check_sector_guard(bath)
    rng = np.random.default_rng(seed)
    return _assemble(bath, [haar_unitary(sector_dim(bath, k), rng) for k in range(n_sectors(bath))])


def optimal_pointb_unitary(bath: BathSpec) -> BlockUnitary:
    """Permutation unitary realising the point-(b) transition matrix with maximal coherence.

    For ``2 <= k <= K`` the system-0 slice keeps its first ``d_k - d_{k-2}``
    states, swaps its last ``d_{k-2}`` states with the system-2 slice, and
    the system-1 slice is left alone. Every other sector is the identity.
    """
    d = bath.degeneracies
    if any(d[n] < d[n - 2] for n in range(2, bath.K + 1)):
        raise DomainError("point-(b) unitary needs d_k >= d_{k-2}")
    _check_sector_guard(bath)
    blocks = []
    for k in range(n_sectors(bath)):
        n = sector_dim(bath, k)
        block = np.eye(n, dtype=complex)
        sl = sector_slices(bath, k)
        if 2 <= k <= bath.K:
            s0, s2 = sl[0], sl[2]
            keep = d[k] - d[k - 2]
            block[s0, s0] = np.diag(np.r_[np.ones(keep), np.zeros(d[k - 2])])
            block[s2, s2] = 0.0
            block[s0.start + keep : s0.stop, s2] = np.eye(d[k - 2])
            block[s2, s0.start + keep : s0.stop] = np.eye(d[k - 2])
        blocks.append(block)
    return _assemble(bath, blocks)


def random_pointb_completion(bath: BathSpec, seed=None) -> BlockUnitary:
    """Random unitary with the point-(b) zero pattern.

    For ``2 <= k <= K`` the blocks ``u01, u10, u12, u21, u22`` vanish; the
    system-1 slice gets an independent Haar unitary and the ``{0, 2}`` part is
    a random unitary whose ``(2, 2)`` corner is zero. Sectors outside that
    range are block diagonal with a Haar unitary per present system level.
    """
    d = bath.degeneracies
    _check_sector_guard(bath)
    rng = np.random.default_rng(seed)
    blocks = []
    for k in range(n_sectors(bath)):
        n = sector_dim(bath, k)
        sl = sector_slices(bath, k)
        block = np.zeros((n, n), dtype=complex)
        if 2 <= k <= bath.K:
            m, r = d[k], d[k - 2]
            left, right = haar_unitary(m, rng), haar_unitary(m, rng)
            core_u = haar_unitary(m - r, rng)
            block[sl[0], sl[0]] = left[:, : m - r] @ core_u @ right[:, : m - r].conj().T
            block[sl[0], sl[2]] = left[:, m - r :] @ haar_unitary(r, rng)
            block[sl[2], sl[0]] = haar_unitary(r, rng) @ right[:, m - r :].conj().T
            block[sl[1], sl[1]] = haar_unitary(d[k - 1], rng)
        else:
            for j, s in sl.items():
                block[s, s] = haar_unitary(d[k - j], rng)
        blocks.append(block)
    return _assemble(bath, blocks)


@dataclass(frozen=True)
class UVector:
    """Entries ``sqrt(gamma_n) u_ij^{n+j}`` keyed by the input bath level ``n``."""

    indices: tuple[int, int]
    entries: dict

    def inner(self, other: "UVector") -> complex:
        """``(self, other) = sum_n Tr(self_n^dagger other_n)`` over shared bath levels."""
        return complex(sum(np.vdot(a, other.entries[n]) for n, a in self.entries.items() if n in other.entries))

    def norm2(self) -> float:
        return self.inner(self).real

    def __sub__(self, other: "UVector") -> "UVector":
        keys = set(self.entries) | set(other.entries)
        entries = {}
        for n in keys:
            a, b = self.entries.get(n), other.entries.get(n)
            entries[n] = a - b if a is not None and b is not None else (a if b is None else -b)
        return UVector(self.indices, entries)

    def scaled(self, c) -> "UVector":
        return UVector(self.indices, {n: c * a for n, a in self.entries.items()})


def uvector(U: BlockUnitary, bath: BathSpec, i: int, j: int) -> UVector:
    entries = {}
    for n in range(bath.K + 1):
        block = U.sub(n + j, i, j)
        if block is not None:
            entries[n] = np.sqrt(bath.per_state_weight[n]) * block
    return UVector((i, j), entries)


def uvector_inner(U: BlockUnitary, bath: BathSpec, ij, ij_prime) -> complex:
    """``<i| E(|j><j'|) |i'>`` of the induced channel, as ``(U_{i'j'}, U_{ij})``."""
    (i, j), (ip, jp) = ij, ij_prime
    if i - ip != j - jp:
        raise ValueError(f"mode mismatch: {i}-{ip} != {j}-{jp}")
    return uvector(U, bath, ip, jp).inner(uvector(U, bath, i, j))


def transition_from_unitary(U: BlockUnitary, bath: BathSpec) -> np.ndarray:
    G = np.empty((DIM, DIM))
    for i in range(DIM):
        for j in range(DIM):
            G[i, j] = uvector(U, bath, i, j).norm2()
    return G


def coherence_from_unitary(U: BlockUnitary, bath: BathSpec, rho0=None) -> float:
    """``|rho'[1,0]|`` produced from ``|psi0><psi0|``, i.e. ``|(U_00, U_11)| / 2``."""
    if rho0 is not None:
        rho0 = np.asarray(rho0)
        if np.max(np.abs(rho0 - initial_state())) > CHANNEL_TOL:
            raise DomainError("coherence_from_unitary is defined for |psi0><psi0| only")
    return 0.5 * abs(uvector_inner(U, bath, (1, 1), (0, 0)))


def channel_from_unitary(U: BlockUnitary, bath: BathSpec, rho) -> np.ndarray:
    """Output state assembled entry by entry from the inner products."""
    rho = np.asarray(rho, dtype=complex)
    out = np.zeros((DIM, DIM), dtype=complex)
    vecs = {(i, j): uvector(U, bath, i, j) for i in range(DIM) for j in range(DIM)}
    for i in range(DIM):
        for ip in range(DIM):
            for j in range(DIM):
                jp = j - (i - ip)
                if 0 <= jp < DIM and rho[j, jp] != 0:
                    out[i, ip] += rho[j, jp] * vecs[(ip, jp)].inner(vecs[(i, j)])
    return out


def svd_normal_form(U: BlockUnitary, bath: BathSpec) -> BlockUnitary:
    """``A^dagger U B`` with main blocks replaced by their ordered singular values."""
    blocks = []
    for k, block in enumerate(U.blocks):
        n = block.shape[0]
        A = np.zeros((n, n), dtype=complex)
        B = np.zeros((n, n), dtype=complex)
        for j, s in sector_slices(bath, k).items():
            a, _, vh = np.linalg.svd(block[s, s])
            A[s, s] = a
            B[s, s] = vh.conj().T
        new = A.conj().T @ block @ B
        # main blocks are diagonal by construction; drop roundoff off the diagonal
        for j, s in sector_slices(bath, k).items():
            new[s, s] = np.diag(np.diag(new[s, s]).real)
        blocks.append(new)
    return BlockUnitary(bath, tuple(blocks))


def is_normal_form(U: BlockUnitary, tol: float = CHANNEL_TOL) -> bool:
    for k, block in enumerate(U.blocks):
        for j, s in sector_slices(U.bath, k).items():
            m = block[s, s]
            diag = np.diag(m)
            if np.max(np.abs(m - np.diag(diag)), initial=0.0) > tol:
                return False
            if np.max(np.abs(diag.imag), initial=0.0) > tol or np.min(diag.real, initial=0.0) < -tol:
                return False
            if np.any(np.diff(diag.real) > tol):
                return False
    return True


def _pointb_pattern_violation(U: BlockUnitary, bath: BathSpec) -> float:
    worst = 0.0
    for k in range(2, bath.K + 1):
        for i, j in ((0, 1), (1, 0), (1, 2), (2, 1), (2, 2)):
            worst = max(worst, float(np.max(np.abs(U.sub(k, i, j)), initial=0.0)))
    return worst


def verify_sigma_pattern(U: BlockUnitary, bath: BathSpec, pattern_tol: float = CHANNEL_TOL, tol: float = 1e-8) -> bool:
    """Check that ``u_00^k`` has ``d_k - d_{k-2}`` unit and ``d_{k-2}`` zero singular values.

    Applies to sectors ``2 <= k <= K`` (the ones containing system level 0 and
    2). Raises :class:`StructureError` if ``U`` lacks the point-(b) zero
    pattern there.
    """
    if _pointb_pattern_violation(U, bath) > pattern_tol:
        raise StructureError("unitary lacks the point-(b) zero pattern")
    d = bath.degeneracies
    for k in range(2, bath.K + 1):
        sv = np.linalg.svd(U.sub(k, 0, 0), compute_uv=False)
        expected = np.r_[np.ones(d[k] - d[k - 2]), np.zeros(d[k - 2])]
        if np.max(np.abs(sv - expected)) > tol:
            return False
    return True


def pointb_counting(bath: BathSpec) -> dict[str, float]:
    """Transition entries and coherence of :func:`optimal_pointb_unitary` from degeneracies alone.

    Every block of that unitary is a 0/1 partial permutation, so each trace
    reduces to a count of retained states.
    """
    d = np.asarray(bath.degeneracies, dtype=float)
    g = bath.per_state_weight
    K = bath.K
    kept = d.copy()
    kept[2:] -= d[:-2]
    g00 = float(np.sum(g * kept))
    # system 2 at bath n (n <= K-2) is swapped down to system 0; the top two levels stay put
    g02 = float(np.sum(g[: K - 1] * d[: K - 1]))
    return {
        "g00": g00,
        "g20": 1.0 - g00,
        "g11": float(np.sum(g * d)),
        "g02": g02,
        "g22": 1.0 - g02,
        "coherence": 0.5 * g00,
    }


def _dense_index(bath: BathSpec):
    offsets = np.concatenate([[0], np.cumsum(bath.degeneracies)])
    N = bath.dim

    def index(i, n):
        return i * N + offsets[n] + np.arange(bath.degeneracies[n])

    return index, N


def dense_joint_unitary(U: BlockUnitary, bath: BathSpec) -> np.ndarray:
    index, N = _dense_index(bath)
    total = DIM * N
    if total > DENSE_GUARD:
        k = _suggest_k(bath, lambda b: DIM * b.dim <= DENSE_GUARD)
        raise ResourceError(f"dense joint space has dimension {total} (> {DENSE_GUARD}); try K={k}")
    full = np.zeros((total, total), dtype=complex)
    for k, block in enumerate(U.blocks):
        idx = np.concatenate([index(j, k - j) for j in sector_levels(bath, k)])
        full[np.ix_(idx, idx)] = block
    return full


def dense_channel_oracle(U: BlockUnitary, bath: BathSpec, rho) -> np.ndarray:
    """``Tr_R[U (rho x gamma_R) U^dagger]`` evaluated with explicit matrices."""
    full = dense_joint_unitary(U, bath)
    N = bath.dim
    gamma_r = np.diag(np.repeat(bath.per_state_weight, bath.degeneracies))
    joint = np.kron(np.asarray(rho, dtype=complex), gamma_r)
    out = full @ joint @ full.conj().T
    return np.einsum("injn->ij", out.reshape(DIM, N, DIM, N))
