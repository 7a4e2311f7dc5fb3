"""Enhanced-thermal-operation cone of ``|psi0><psi0|``.

For an output population ``(p0, p1, 1 - p0 - p1)`` the largest reachable
``|rho[1,0]|`` is ``max 1/2 sqrt(G00 G11)`` over Gibbs-stochastic ``G`` with
``G @ (1/2, 1/2, 0) = p``. Once ``G00`` and ``G11`` are fixed the other seven
entries follow linearly, so the feasible region is a box in ``(G00, G11)``
cut by a strip on ``G00 - G11``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    ALGEBRAIC_TOL,
    CHANNEL_TOL,
    DIM,
    ConsistencyError,
    DomainError,
    check_q,
    check_transition_matrix,
    gibbs_weights,
    make_gibbs_state,
)

P_IN = np.array([0.5, 0.5, 0.0])
CASES = ("case1", "case2", "case3", "infeasible")

# slack used when deciding feasibility of the (G00, G11) region
FEAS_TOL = 1e-12


@dataclass(frozen=True)
class EntryBounds:
    g00_lo: float
    g00_hi: float
    g11_lo: float
    g11_hi: float
    diff_lo: float
    diff_hi: float
    feasible: bool

    @property
    def margin(self) -> float:
        """Width of the thinnest direction of the feasible region (negative when empty)."""
        overlap = min(self.g00_hi - self.g11_lo, self.diff_hi) - max(self.g00_lo - self.g11_hi, self.diff_lo)
        return min(self.g00_hi - self.g00_lo, self.g11_hi - self.g11_lo, overlap)


@dataclass(frozen=True)
class ConeRecord:
    """Maximum ``|rho[1,0]|`` at one output population.

    Infeasible records carry ``nan`` in ``rho10_max`` and the optimiser fields.
    """

    q: float
    p0: float
    p1: float
    rho10_max: float
    case_id: str
    g00_star: float
    g11_star: float

    @property
    def feasible(self) -> bool:
        return self.case_id != "infeasible"


@dataclass(frozen=True)
class EntoChannel:
    kraus: tuple  # five 3x3 matrices, mode n = -2..2 in order
    source: np.ndarray

    def kraus_for_mode(self, n: int) -> np.ndarray:
        return self.kraus[n + DIM - 1]


def _check_populations(p0: float, p1: float) -> None:
    if p0 < -ALGEBRAIC_TOL or p1 < -ALGEBRAIC_TOL or p0 + p1 > 1.0 + ALGEBRAIC_TOL:
        raise DomainError(f"(p0, p1) = ({p0!r}, {p1!r}) is not a population")


def entry_bounds(q: float, p0: float, p1: float) -> EntryBounds:
    q = check_q(q)
    _check_populations(p0, p1)
    r = 1.0 - q
    g00_hi = min(2 * p0, 1.0, (1 - 2 * q * p0) / r)
    g00_lo = max(0.0, 2 * p0 - 1, (1 - 2 * q * p0 - q * q) / r)
    g11_hi = min(2 * p1, 1.0, (q * q + 2 * p1 - q) / r)
    g11_lo = max(0.0, 2 * p1 - 1, (2 * p1 - q) / r)
    s = 2 * (q * p0 + p1)
    diff_lo = max(-2 * p1, 2 * p0 - 1, (1 - s) / r + q)
    diff_hi = min(1 - 2 * p1, 2 * p0, (1 + q - s) / r)
    feasible = (
        g00_lo <= g00_hi + FEAS_TOL
        and g11_lo <= g11_hi + FEAS_TOL
        and max(g00_lo - g11_hi, diff_lo) <= min(g00_hi - g11_lo, diff_hi) + FEAS_TOL
    )
    return EntryBounds(g00_lo, g00_hi, g11_lo, g11_hi, diff_lo, diff_hi, bool(feasible))


def population_feasible(q: float, p0: float, p1: float) -> bool:
    try:
        return entry_bounds(q, p0, p1).feasible
    except DomainError:
        return False


def _lorenz_curve(p: np.ndarray, gamma: np.ndarray):
    order = np.argsort(-(p / gamma), kind="stable")
    x = np.concatenate([[0.0], np.cumsum(gamma[order])])
    y = np.concatenate([[0.0], np.cumsum(p[order])])
    return x, y


def thermo_majorization_margin(q: float, p_in, p_out) -> float:
    """``min_x (L_in(x) - L_out(x))`` over the nodes of both Gibbs-rescaled Lorenz curves."""
    gamma = gibbs_weights(q)
    gamma = gamma / gamma.sum()
    x_in, y_in = _lorenz_curve(np.asarray(p_in, dtype=float), gamma)
    x_out, y_out = _lorenz_curve(np.asarray(p_out, dtype=float), gamma)
    nodes = np.union1d(x_in, x_out)
    return float(np.min(np.interp(nodes, x_in, y_in) - np.interp(nodes, x_out, y_out)))


def thermo_majorization_reachable(q: float, p_in, p_out, tol: float = ALGEBRAIC_TOL) -> bool:
    """True iff ``p_out``'s Lorenz curve nowhere exceeds ``p_in``'s."""
    return thermo_majorization_margin(q, p_in, p_out) >= -tol


def max_coherence_ento(q: float, p0: float, p1: float) -> ConeRecord:
    b = entry_bounds(q, p0, p1)
    if not b.feasible:
        return ConeRecord(q, p0, p1, float("nan"), "infeasible", float("nan"), float("nan"))
    corner = b.g00_hi - b.g11_hi
    if b.diff_lo <= corner <= b.diff_hi:
        case, g00, g11 = "case1", b.g00_hi, b.g11_hi
    elif b.diff_lo > corner:
        case, g00, g11 = "case2", b.g00_hi, b.g00_hi - b.diff_lo
    else:
        case, g00, g11 = "case3", b.g11_hi + b.diff_hi, b.g11_hi
    return ConeRecord(q, p0, p1, 0.5 * np.sqrt(max(g00 * g11, 0.0)), case, g00, g11)


def transition_from_diagonal(q: float, p0: float, p1: float, g00: float, g11: float) -> np.ndarray:
    """Fill in the Gibbs-stochastic ``G`` determined by ``(G00, G11)`` and the output population."""
    q = check_q(q)
    r = 1.0 - q
    G = np.empty((DIM, DIM))
    G[0, 0] = g00
    G[0, 1] = 2 * p0 - g00
    G[0, 2] = (1 - 2 * q * p0 - r * g00) / (q * q)
    G[1, 0] = 2 * p1 - g11
    G[1, 1] = g11
    G[1, 2] = (q - 2 * p1 + r * g11) / (q * q)
    G[2] = 1.0 - G[0] - G[1]
    return G


def optimal_transition(q: float, p0: float, p1: float) -> np.ndarray:
    rec = max_coherence_ento(q, p0, p1)
    if not rec.feasible:
        raise DomainError(f"population ({p0}, {p1}) is not reachable at q={q}")
    G = transition_from_diagonal(q, p0, p1, rec.g00_star, rec.g11_star)
    if np.min(G) < -CHANNEL_TOL or np.max(G) > 1 + CHANNEL_TOL:
        raise ConsistencyError(f"reconstructed G leaves [0, 1]: {G}")
    return G


def kraus_from_transition(G, tol: float = CHANNEL_TOL) -> EntoChannel:
    """Covariant Kraus operators ``K_n = sum_{i-j=n} sqrt(G_ij) |i><j|``."""
    G = np.asarray(G, dtype=float)
    if np.min(G) < -tol:
        raise DomainError("transition matrix has negative entries")
    root = np.sqrt(np.clip(G, 0.0, None))
    i, j = np.indices(G.shape)
    kraus = tuple(np.where(i - j == n, root, 0.0).astype(complex) for n in range(-(DIM - 1), DIM))
    return EntoChannel(kraus, G.copy())


def apply_channel(channel: EntoChannel, rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    return sum(k @ rho @ k.conj().T for k in channel.kraus)


def lp_oracle_max(q: float, p0: float, p1: float, grid_n: int = 500, tol: float = 1e-12) -> float:
    """Brute-force ``max 1/2 sqrt(G00 G11)`` over a lattice in the ``(G00, G11)`` box.

    Each lattice point is completed to a full ``G`` by solving the linear
    constraints numerically, then kept only if every entry is in ``[0, 1]``.
    Returns ``-1`` when no lattice point survives.
    """
    if grid_n < 100:
        raise ValueError("grid_n must be at least 100")
    q = check_q(q)
    b = entry_bounds(q, p0, p1)
    gamma = gibbs_weights(q)
    p = np.array([p0, p1, 1 - p0 - p1])

    # unknowns: the 9 entries of G in row-major order; G00 and G11 are pinned
    rows, rhs = [], []
    for r in range(2):
        rows.append(np.kron(np.eye(DIM)[r], gamma))
        rhs.append(gamma[r])
        rows.append(np.kron(np.eye(DIM)[r], P_IN))
        rhs.append(p[r])
    for c in range(DIM):
        rows.append(np.kron(np.ones(DIM), np.eye(DIM)[c]))
        rhs.append(1.0)
    A = np.array(rows)
    free = [k for k in range(DIM * DIM) if k not in (0, 4)]
    sub = A[:, free]
    const = np.linalg.solve(sub, np.array(rhs))
    slope_x = np.linalg.solve(sub, -A[:, 0])
    slope_y = np.linalg.solve(sub, -A[:, 4])

    xs = np.linspace(b.g00_lo, max(b.g00_lo, b.g00_hi), grid_n)
    ys = np.linspace(b.g11_lo, max(b.g11_lo, b.g11_hi), grid_n)
    ok = np.ones((grid_n, grid_n), dtype=bool)
    for c, a, s in zip(const, slope_x, slope_y):
        if abs(s) < 1e-15:
            v = c + a * xs
            ok &= ((v >= -tol) & (v <= 1 + tol))[:, None]
        elif abs(a) < 1e-15:
            v = c + s * ys
            ok &= ((v >= -tol) & (v <= 1 + tol))[None, :]
        else:
            v = np.add.outer(c + a * xs, s * ys)
            ok &= (v >= -tol) & (v <= 1 + tol)
    # x, y themselves must be probabilities too
    ok &= ((xs >= -tol) & (xs <= 1 + tol))[:, None] & ((ys >= -tol) & (ys <= 1 + tol))[None, :]
    if not ok.any():
        return -1.0
    prod = np.where(ok, np.outer(np.clip(xs, 0, None), np.clip(ys, 0, None)), -1.0)
    return float(0.5 * np.sqrt(prod.max()))


def population_lattice(grid: int) -> np.ndarray:
    return np.linspace(0.0, 1.0, grid)


def sweep_cone(q: float, grid: int) -> list[ConeRecord]:
    """Evaluate the cone on a ``grid x grid`` lattice of ``[0, 1]^2``, ``p0``-major order."""
    if grid < 2:
        raise ValueError("grid must be at least 2")
    check_q(q)
    axis = population_lattice(grid)
    out = []
    for p0 in axis:
        for p1 in axis:
            if p0 + p1 > 1.0 + ALGEBRAIC_TOL:
                out.append(ConeRecord(q, float(p0), float(p1), float("nan"), "infeasible", float("nan"), float("nan")))
            else:
                out.append(max_coherence_ento(q, float(p0), float(p1)))
    return out


def check_channel(channel: EntoChannel, q: float, tol: float = ALGEBRAIC_TOL) -> dict[str, float]:
    """Residuals for trace preservation, covariance by support, and Gibbs preservation."""
    tp = sum(k.conj().T @ k for k in channel.kraus)
    i, j = np.indices((DIM, DIM))
    support = max(
        float(np.max(np.abs(np.where(i - j == n, 0.0, channel.kraus_for_mode(n))))) for n in range(-(DIM - 1), DIM)
    )
    gibbs = make_gibbs_state(q)
    check_transition_matrix(channel.source, q=q, tol=max(tol, CHANNEL_TOL))
    return {
        "trace_preservation": float(np.max(np.abs(tp - np.eye(DIM)))),
        "mode_support": support,
        "gibbs_preservation": float(np.max(np.abs(apply_channel(channel, gibbs) - gibbs))),
    }
