"""Coherence gap between covariant Gibbs-preserving channels and thermal operations at point (b).

Point (b) is the output population ``((1 - q^2)/2, 1/2)``. Covariant
Gibbs-preserving channels reach ``|rho10| = sqrt(1 - q^2)/2`` there while
thermal operations stop at ``(1 - q^2)/2``. The lower bounds below quantify
how much of that gap survives an ``epsilon`` perturbation of the transition
matrix, for baths whose degeneracies match Gibbs scaling up to ``delta``.
"""
from __future__ import annotations

import itertools
import warnings
from dataclasses import asdict, dataclass

import numpy as np

from .bath import (
    BathSpec,
    BlockUnitary,
    bath_delta_report,
    coherence_from_unitary,
    random_block_unitary,
    random_pointb_completion,
    svd_normal_form,
    transition_from_unitary,
    uvector,
)
from .core import GOLDEN, check_q

# 1 - q - q^2 below this marks a record as close to vacuous
NEAR_VACUOUS = 0.05


class VacuousBoundWarning(UserWarning):
    """The perturbation bound is evaluated where ``1 - q - q^2 <= 0``."""


@dataclass(frozen=True)
class GapRecord:
    q: float
    epsilon: float
    delta: float
    ento_max: float
    to_max: float
    delta10: float
    bound_main: float
    bound_refined: float
    f_q: float

    @property
    def certified(self) -> bool:
        return self.bound_main > 0.0

    @property
    def near_vacuous(self) -> bool:
        return 1.0 - self.q - self.q**2 < NEAR_VACUOUS

    def as_dict(self) -> dict:
        return {**asdict(self), "certified": self.certified, "near_vacuous": self.near_vacuous}


def pointb_values(q: float) -> tuple[float, float, float]:
    """``(ento_max, to_max, delta10)`` at point (b)."""
    q = check_q(q)
    s = 1.0 - q * q
    ento = 0.5 * np.sqrt(s)
    to = 0.5 * s
    return float(ento), float(to), float(ento - to)


def _check_bound_args(q: float, epsilon: float, delta: float) -> float:
    q = check_q(q)
    if epsilon < 0 or delta < 0:
        raise ValueError("epsilon and delta must be non-negative")
    if q >= GOLDEN:
        warnings.warn(
            f"q={q} >= (sqrt(5)-1)/2: 1 - q - q^2 <= 0 and the bound is vacuous",
            VacuousBoundWarning,
            stacklevel=3,
        )
    return q


def gap_bound_main(q: float, epsilon: float = 0.0, delta: float = 0.0) -> float:
    """``(1 - sqrt(1-q^2))^2 (1-q-q^2)(1-delta)/4 - 2 epsilon``; positive means a certified gap."""
    q = _check_bound_args(q, epsilon, delta)
    root = np.sqrt(1.0 - q * q)
    return float(0.25 * (1.0 - root) ** 2 * (1.0 - q - q * q) * (1.0 - delta) - 2.0 * epsilon)


def f_coefficient(q: float) -> float:
    s = 1.0 - q * q
    return float(2.0 + (1.0 - s * s) * (1.0 - q - q * q) / (2.0 * s**1.5) + 1.0 / np.sqrt(s))


def gap_bound_refined(q: float, epsilon: float = 0.0, delta: float = 0.0) -> tuple[float, float]:
    """First-order-in-epsilon bound and its epsilon coefficient ``f(q)``.

    The ``O(epsilon^2)`` remainder is dropped, so the value is only
    meaningful for small ``epsilon``.
    """
    q = _check_bound_args(q, epsilon, delta)
    root = np.sqrt(1.0 - q * q)
    f = f_coefficient(q)
    value = (1.0 - root) ** 2 * (1.0 - q - q * q) * (1.0 - delta) / (4.0 * root) - 0.25 * f * epsilon
    return float(value), f


def alpha_epsilon(q: float, epsilon: float) -> float:
    q = check_q(q)
    if epsilon >= 1:
        raise ValueError("epsilon must be < 1")
    return float(np.sqrt((1.0 - q * q + epsilon) / (1.0 - epsilon)))


@dataclass(frozen=True)
class MuCheck:
    """Both sides of ``sqrt(p00 p11)/2 - (U00, U11)/2 > (mu, mu)/4``.

    ``applicable`` is false when ``p00 >= p11``; the inequality is then not
    claimed and only ``pythagoras_residual`` is meaningful.
    """

    mu_norm: float
    lhs: float
    rhs: float
    applicable: bool
    pythagoras_residual: float
    p00: float
    p11: float
    overlap: float

    def holds(self, slack: float = 1e-12) -> bool:
        return (not self.applicable) or self.lhs >= self.rhs - slack


def mu_gap_check(U: BlockUnitary, bath: BathSpec) -> MuCheck:
    """Evaluate the projection identity and gap inequality on a normal-form unitary."""
    u00 = uvector(U, bath, 0, 0)
    u11 = uvector(U, bath, 1, 1)
    p00, p11 = u00.norm2(), u11.norm2()
    overlap = u00.inner(u11)
    alpha = u11.inner(u00) / p11
    mu = u00 - u11.scaled(alpha)
    mu_norm = mu.norm2()
    c = overlap.real
    residual = abs(p00 * p11 - abs(overlap) ** 2 - p11 * mu_norm)
    return MuCheck(
        mu_norm=mu_norm,
        lhs=0.5 * np.sqrt(p00 * p11) - 0.5 * c,
        rhs=0.25 * mu_norm,
        applicable=p00 < p11,
        pythagoras_residual=float(residual),
        p00=p00,
        p11=p11,
        overlap=c,
    )


@dataclass
class EmpiricalGapSummary:
    q: float
    pattern: str
    n_samples: int
    n_in_window: int
    observed_max: float | None
    target: float
    distance_to_target: float | None
    epsilon_eff: float | None
    delta_eff: float
    bound_main: float | None
    bound_respected: bool | None
    eq7_respected: bool
    samples: list

    def metadata(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__ if k != "samples"}


def _sampler(pattern: str):
    if pattern == "random":
        return random_block_unitary
    if pattern == "point-b":
        return random_pointb_completion
    raise ValueError(f"unknown sampling pattern {pattern!r}")


def empirical_gap(
    bath: BathSpec,
    n_samples: int,
    epsilon_window: float,
    seed: int = 0,
    pattern: str = "random",
    normal_form: bool = False,
) -> EmpiricalGapSummary:
    """Sample thermal operations on ``bath`` and compare their coherence with the point-(b) bound.

    Each sample gets its own seed spawned from ``seed``. Samples whose
    ``(G00, G11)`` lie within ``epsilon_window`` of ``(1 - q^2, 1)`` form the
    window; the largest ``|rho10|`` there is checked against
    ``sqrt(1-q^2)/2 - gap_bound_main(q, eps_eff, delta_eff)``. With
    ``normal_form`` every sample is first mapped to its SVD normal form, which
    keeps ``G`` and can only raise ``|rho10|``.
    """
    q = bath.q
    sample = _sampler(pattern)
    report = bath_delta_report(bath)
    delta_eff = report.delta_eff
    target = 0.5 * np.sqrt(1.0 - q * q)
    children = np.random.SeedSequence(seed).spawn(n_samples)
    rows = []
    eq7_ok = True
    for idx, child in enumerate(children):
        U = sample(bath, np.random.default_rng(child))
        if normal_form:
            U = svd_normal_form(U, bath)
        G = transition_from_unitary(U, bath)
        rho10 = coherence_from_unitary(U, bath)
        eq7 = 0.5 * np.sqrt(max(G[0, 0] * G[1, 1], 0.0))
        eq7_ok &= rho10 <= eq7 + 1e-10
        dev = max(abs(G[0, 0] - (1.0 - q * q)), 1.0 - G[1, 1])
        rows.append({"sample": idx, "unitary": U, "G": G, "rho10": rho10, "bound_eq7": eq7,
                     "deviation": dev, "in_window": dev <= epsilon_window})
    window = [r for r in rows if r["in_window"]]
    if not window:
        return EmpiricalGapSummary(q, pattern, n_samples, 0, None, target, None, None, delta_eff, None, None,
                                   bool(eq7_ok), rows)
    observed = max(r["rho10"] for r in window)
    eps_eff = max(r["deviation"] for r in window)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", VacuousBoundWarning)
        bound = gap_bound_main(q, eps_eff, delta_eff)
    return EmpiricalGapSummary(
        q=q,
        pattern=pattern,
        n_samples=n_samples,
        n_in_window=len(window),
        observed_max=observed,
        target=float(target),
        distance_to_target=float(target - observed),
        epsilon_eff=eps_eff,
        delta_eff=delta_eff,
        bound_main=bound,
        bound_respected=bool(observed <= target - bound + 1e-9),
        eq7_respected=bool(eq7_ok),
        samples=rows,
    )


def sweep_gap(q_grid, epsilon_grid, delta_grid) -> list[GapRecord]:
    """Cartesian product of the three grids, ``q``-major order."""
    out = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", VacuousBoundWarning)
        for q, eps, delta in itertools.product(q_grid, epsilon_grid, delta_grid):
            ento, to, d10 = pointb_values(q)
            main = gap_bound_main(q, eps, delta)
            refined, f = gap_bound_refined(q, eps, delta)
            out.append(GapRecord(float(q), float(eps), float(delta), ento, to, d10, main, refined, f))
    return out


def normal_form_sample(bath: BathSpec, seed) -> tuple[BlockUnitary, BlockUnitary]:
    """A Haar sample and its SVD normal form."""
    U = random_block_unitary(bath, seed)
    return U, svd_normal_form(U, bath)
