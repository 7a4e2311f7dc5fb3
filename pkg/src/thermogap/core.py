"""Qutrit primitives: Gibbs states, transition matrices, coherence modes.

Units are fixed so that the level spacing is one (``H_S = diag(0, 1, 2)``);
temperature enters only through ``q = exp(-beta * spacing)``.

States and transition matrices are plain ``numpy`` arrays. The ``check_*``
helpers validate them against the tolerances used throughout the package.
"""
from __future__ import annotations

import numpy as np

DIM = 3
ALGEBRAIC_TOL = 1e-12
CHANNEL_TOL = 1e-10
GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0

H_SYSTEM = np.diag([0.0, 1.0, 2.0])


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class StructureError(ValueError):
    """A matrix lacks the block/zero structure an operation requires."""


class ResourceError(RuntimeError):
    """A dense computation would exceed its size guard."""


class ConsistencyError(RuntimeError):
    """An internally reconstructed quantity violates its own invariants."""


def check_q(q: float) -> float:
    q = float(q)
    if not 0.0 < q < 1.0:
        raise DomainError(f"q must lie in the open interval (0, 1), got {q!r}")
    return q


def gibbs_weights(q: float) -> np.ndarray:
    """Unnormalised Gibbs weights ``(1, q, q**2)``."""
    q = check_q(q)
    return np.array([1.0, q, q * q])


def gibbs_populations(q: float) -> np.ndarray:
    w = gibbs_weights(q)
    return w / w.sum()


def make_gibbs_state(q: float) -> np.ndarray:
    return np.diag(gibbs_populations(q)).astype(complex)


def ket_psi0() -> np.ndarray:
    return np.array([1.0, 1.0, 0.0], dtype=complex) / np.sqrt(2.0)


def initial_state() -> np.ndarray:
    """The input state ``|psi0><psi0|`` with ``psi0 = (|0> + |1>)/sqrt(2)``."""
    psi = ket_psi0()
    return np.outer(psi, psi.conj())


def check_density_matrix(rho, tol: float = ALGEBRAIC_TOL) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (DIM, DIM):
        raise DomainError(f"expected a 3x3 matrix, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise DomainError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > tol:
        raise DomainError(f"density matrix trace is {np.trace(rho).real!r}, not 1")
    if np.min(np.linalg.eigvalsh(rho)) < -tol:
        raise DomainError("density matrix has a negative eigenvalue")
    return rho


def check_transition_matrix(G, q: float | None = None, tol: float = ALGEBRAIC_TOL) -> np.ndarray:
    """Validate a column-stochastic matrix; with ``q`` also require ``G @ gamma == gamma``."""
    G = np.asarray(G, dtype=float)
    if G.shape != (DIM, DIM):
        raise DomainError(f"expected a 3x3 matrix, got shape {G.shape}")
    if np.min(G) < -tol or np.max(G) > 1.0 + tol:
        raise DomainError("transition matrix has entries outside [0, 1]")
    if np.max(np.abs(G.sum(axis=0) - 1.0)) > tol:
        raise DomainError("transition matrix columns do not sum to one")
    if q is not None and gibbs_residual(G, q) > tol:
        raise DomainError("transition matrix does not fix the Gibbs vector")
    return G


def gibbs_residual(G, q: float) -> float:
    """``max |G @ gamma - gamma|`` for the unnormalised Gibbs vector."""
    w = gibbs_weights(q)
    return float(np.max(np.abs(np.asarray(G, dtype=float) @ w - w)))


def mode_decompose(rho) -> dict[int, np.ndarray]:
    """Split ``rho`` into its coherence modes.

    Mode ``m`` keeps the entries ``rho[i, j]`` with ``i - j == m`` (energy gap
    ``m`` in units of the level spacing) and zeros everywhere else.
    """
    rho = np.asarray(rho, dtype=complex)
    i, j = np.indices(rho.shape)
    return {m: np.where(i - j == m, rho, 0.0) for m in range(-(DIM - 1), DIM)}


def time_translate(rho, t: float) -> np.ndarray:
    """Free evolution ``exp(-i H t) rho exp(i H t)`` with ``H = diag(0, 1, 2)``."""
    rho = np.asarray(rho, dtype=complex)
    phase = np.exp(-1j * np.diag(H_SYSTEM) * t)
    return phase[:, None] * rho * phase.conj()[None, :]


def phase_normal_form(rho, tol: float = CHANNEL_TOL):
    """Rotate a reachable-form state so ``rho[1,0]`` and ``rho[2,1]`` are real and >= 0.

    Uses the covariant unitary ``diag(exp(-i phi1), 1, exp(i phi2))``.
    Returns ``(rotated_state, (phi1, phi2))``.
    """
    rho = np.asarray(rho, dtype=complex)
    if abs(rho[2, 0]) > tol:
        raise StructureError(f"rho[2,0] = {rho[2, 0]!r} is nonzero; state is not in the reachable form")
    phi1 = -np.angle(rho[1, 0]) if abs(rho[1, 0]) > 0 else 0.0
    phi2 = -np.angle(rho[2, 1]) if abs(rho[2, 1]) > 0 else 0.0
    u = np.diag([np.exp(-1j * phi1), 1.0, np.exp(1j * phi2)])
    out = u @ rho @ u.conj().T
    # the rotation is exact up to roundoff; pin the two rotated entries
    out[1, 0] = abs(rho[1, 0])
    out[0, 1] = abs(rho[1, 0])
    out[2, 1] = abs(rho[2, 1])
    out[1, 2] = abs(rho[2, 1])
    return out, (float(phi1), float(phi2))


def coherence_bound(rho0, G, i: int, j: int) -> float:
    """Upper bound on ``|rho'[i, j]|`` for any covariant Gibbs-preserving channel with populations ``G``.

    Sums ``|rho0[c, d]| * sqrt(G[i, c] * G[j, d])`` over pairs with ``c - d == i - j``.
    """
    if i == j:
        raise ValueError("coherence bound needs i != j")
    rho0 = np.asarray(rho0, dtype=complex)
    G = np.clip(np.asarray(G, dtype=float), 0.0, None)
    total = 0.0
    for c in range(DIM):
        d = c - (i - j)
        if 0 <= d < DIM:
            total += abs(rho0[c, d]) * np.sqrt(G[i, c] * G[j, d])
    return float(total)
