import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from thermogap import gap
from thermogap.bath import make_bath, pointb_counting
from thermogap.core import GOLDEN

certified_q = st.floats(min_value=1e-3, max_value=GOLDEN - 1e-3)
small = st.floats(min_value=0.0, max_value=0.05)


def main_oracle(q, eps, delta):
    r = math.sqrt(1 - q * q)
    return (1 - r) ** 2 * (1 - q - q * q) * (1 - delta) / 4 - 2 * eps


def test_pointb_frozen():
    assert gap.pointb_values(0.5) == pytest.approx((math.sqrt(3) / 4, 0.375, math.sqrt(3) / 4 - 0.375), abs=1e-15)
    ento, to, d10 = gap.pointb_values(0.3)
    assert (ento, to) == pytest.approx((math.sqrt(0.91) / 2, 0.455), abs=1e-15)
    assert d10 == pytest.approx(0.0219696, abs=1e-7)


def test_main_bound_frozen():
    # (1 - sqrt(3)/2)^2 * (1/4) / 4 = (7 - 4 sqrt(3)) / 64
    assert gap.gap_bound_main(0.5) == pytest.approx((7 - 4 * math.sqrt(3)) / 64, abs=1e-15)
    assert gap.gap_bound_main(0.5) == pytest.approx(0.001121824, abs=1e-9)
    assert gap.gap_bound_main(0.5, 1e-4, 0.01) == pytest.approx(main_oracle(0.5, 1e-4, 0.01), abs=1e-15)


def test_refined_bound_frozen():
    value, f = gap.gap_bound_refined(0.5)
    assert value == pytest.approx((7 - 4 * math.sqrt(3)) / (32 * math.sqrt(3)), abs=1e-15)
    assert value == pytest.approx(0.001295372, abs=1e-9)
    # f(1/2) = 2 + (7/16)(1/4) / (2 (3/4)^1.5) + 2/sqrt(3)
    f_oracle = 2 + (7 / 16) * 0.25 / (2 * 0.75**1.5) + 2 / math.sqrt(3)
    assert f == pytest.approx(f_oracle, abs=1e-14)
    assert f == pytest.approx(3.2388974526, abs=1e-9)
    eps_value, _ = gap.gap_bound_refined(0.5, 1e-4)
    assert eps_value == pytest.approx(value - f * 1e-4 / 4, abs=1e-15)


def test_alpha_epsilon():
    assert gap.alpha_epsilon(0.5, 0.0) == pytest.approx(math.sqrt(3) / 2, abs=1e-15)
    assert gap.alpha_epsilon(0.5, 0.01) == pytest.approx(math.sqrt(0.76 / 0.99), abs=1e-15)
    with pytest.raises(ValueError):
        gap.alpha_epsilon(0.5, 1.0)


def test_bad_arguments():
    with pytest.raises(ValueError):
        gap.gap_bound_main(0.5, -1e-3)
    with pytest.raises(ValueError):
        gap.gap_bound_refined(0.5, 0.0, -0.1)


def test_vacuous_warning():
    with pytest.warns(gap.VacuousBoundWarning):
        value = gap.gap_bound_main(0.7)
    assert value < 0
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        gap.gap_bound_main(0.5)


@given(st.floats(min_value=1e-6, max_value=1 - 1e-6))
def test_delta10_positive(q):
    assert gap.pointb_values(q)[2] > 0


def test_delta10_limits():
    assert gap.pointb_values(1e-8)[2] < 1e-10
    assert gap.pointb_values(1 - 1e-10)[2] < 1e-4


def test_main_below_exact_gap_on_grid():
    for q in np.linspace(0, GOLDEN, 102)[1:-1]:
        assert gap.gap_bound_main(q) <= gap.pointb_values(q)[2] + 1e-12


@given(certified_q)
def test_refined_is_main_over_root(q):
    assert gap.gap_bound_refined(q)[0] == pytest.approx(gap.gap_bound_main(q) / math.sqrt(1 - q * q), rel=1e-12)


@given(certified_q, small, small, small, small)
def test_bounds_monotone(q, e1, e2, d1, d2):
    (e1, e2), (d1, d2) = sorted((e1, e2)), sorted((d1, d2))
    assert gap.gap_bound_main(q, e2, d1) <= gap.gap_bound_main(q, e1, d1)
    assert gap.gap_bound_main(q, e1, d2) <= gap.gap_bound_main(q, e1, d1)
    assert gap.gap_bound_refined(q, e2, d1)[0] <= gap.gap_bound_refined(q, e1, d1)[0]
    assert gap.gap_bound_refined(q, e1, d2)[0] <= gap.gap_bound_refined(q, e1, d1)[0]


def test_sweep_gap():
    recs = gap.sweep_gap([0.3, 0.5], [0.0, 1e-4], [0.0, 0.01])
    assert len(recs) == 8
    assert all(np.isfinite(list(r.as_dict().values())[:9]).all() for r in recs)
    assert [r.q for r in recs[:4]] == [0.3] * 4
    assert all(r.certified for r in recs)
    near = gap.sweep_gap([0.61], [0.0], [0.0])[0]
    assert near.near_vacuous and 1 - 0.61 - 0.61**2 == pytest.approx(0.0179)
    assert gap.sweep_gap([0.5], [], [0.0]) == []
    assert not gap.sweep_gap([0.7], [0.0], [0.0])[0].certified


def test_empirical_pointb_normal_form_reaches_counting_value():
    b = make_bath(0.5, 4, 2.0)
    s = gap.empirical_gap(b, 30, 0.25, seed=1, pattern="point-b", normal_form=True)
    assert s.n_in_window == 30
    assert s.observed_max == pytest.approx(pointb_counting(b)["coherence"], abs=1e-10)
    assert s.eq7_respected
    assert all(r["rho10"] < r["bound_eq7"] for r in s.samples)
    assert s.bound_respected


def test_empirical_random_below_half():
    b = make_bath(0.5, 4, 2.0)
    s = gap.empirical_gap(b, 40, 1e9, seed=2)
    assert s.n_in_window == 40
    assert s.observed_max <= 0.5
    assert s.eq7_respected


def test_empirical_seed_determinism():
    b = make_bath(0.5, 4, 2.0)
    a = gap.empirical_gap(b, 10, 1e9, seed=9).metadata()
    c = gap.empirical_gap(b, 10, 1e9, seed=9).metadata()
    assert a == c
    assert gap.empirical_gap(b, 10, 1e9, seed=10).metadata() != a


def test_empirical_empty_window():
    b = make_bath(0.5, 4, 2.0)
    s = gap.empirical_gap(b, 5, 0.0, seed=0)
    assert s.n_in_window == 0 and s.observed_max is None


def test_unknown_pattern():
    with pytest.raises(ValueError):
        gap.empirical_gap(make_bath(0.5, 4, 2.0), 1, 0.1, pattern="nope")
