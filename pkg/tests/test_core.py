import numpy as np
import pytest
from hypothesis import given, strategies as st

from thermogap.core import (
    DomainError,
    StructureError,
    check_density_matrix,
    check_q,
    check_transition_matrix,
    coherence_bound,
    gibbs_populations,
    gibbs_residual,
    gibbs_weights,
    initial_state,
    make_gibbs_state,
    mode_decompose,
    phase_normal_form,
    time_translate,
)

qs = st.floats(min_value=1e-3, max_value=0.999)


def random_state(rng, dim=3):
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = z @ z.conj().T
    return rho / np.trace(rho).real


@pytest.mark.parametrize("q", [0.0, 1.0, -0.2, 1.5, float("nan")])
def test_check_q_rejects(q):
    with pytest.raises(DomainError):
        check_q(q)


def test_gibbs_at_half():
    np.testing.assert_allclose(gibbs_weights(0.5), [1, 0.5, 0.25])
    np.testing.assert_allclose(gibbs_populations(0.5), [4 / 7, 2 / 7, 1 / 7])
    np.testing.assert_allclose(make_gibbs_state(0.5), np.diag([4 / 7, 2 / 7, 1 / 7]))


def test_initial_state():
    rho = initial_state()
    np.testing.assert_allclose(rho[:2, :2], 0.5 * np.ones((2, 2)))
    assert rho[2, 2] == 0
    check_density_matrix(rho)


def test_density_matrix_checks():
    with pytest.raises(DomainError):
        check_density_matrix(np.diag([0.5, 0.6, -0.1]))
    with pytest.raises(DomainError):
        check_density_matrix(np.eye(3))


def test_transition_matrix_checks():
    check_transition_matrix(np.eye(3), q=0.3)
    with pytest.raises(DomainError):
        check_transition_matrix(np.ones((3, 3)) / 2)
    # column stochastic but not Gibbs preserving
    swap = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1.0]])
    assert gibbs_residual(swap, 0.5) == pytest.approx(0.5)
    with pytest.raises(DomainError):
        check_transition_matrix(swap, q=0.5)


def test_mode_decomposition_sums_back(rng):
    rho = random_state(rng)
    modes = mode_decompose(rho)
    assert set(modes) == {-2, -1, 0, 1, 2}
    np.testing.assert_allclose(sum(modes.values()), rho)
    np.testing.assert_allclose(modes[1], np.diag(np.diag(rho, -1), -1))


@given(st.floats(min_value=-10, max_value=10))
def test_time_translate_phases(t):
    rho = random_state(np.random.default_rng(0))
    out = time_translate(rho, t)
    i, j = np.indices((3, 3))
    np.testing.assert_allclose(out, rho * np.exp(-1j * (i - j) * t), atol=1e-12)
    np.testing.assert_allclose(time_translate(out, -t), rho, atol=1e-12)


def test_phase_normal_form():
    rho = initial_state() * 0.9 + 0.1 * np.diag([0, 0, 1])
    rho = rho.astype(complex)
    rho[1, 0] *= np.exp(0.7j)
    rho[0, 1] = np.conj(rho[1, 0])
    out, (phi1, phi2) = phase_normal_form(rho)
    assert out[1, 0].imag == 0 and out[1, 0].real > 0
    assert phi1 == pytest.approx(-0.7)
    bad = initial_state().astype(complex)
    bad[2, 0] = bad[0, 2] = 0.1
    with pytest.raises(StructureError):
        phase_normal_form(bad)


def test_coherence_bound():
    G = np.eye(3)
    assert coherence_bound(initial_state(), G, 1, 0) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        coherence_bound(initial_state(), G, 1, 1)


@given(qs)
def test_gibbs_state_is_fixed_by_identity(q):
    g = make_gibbs_state(q)
    assert np.trace(g) == pytest.approx(1.0)
    assert gibbs_residual(np.eye(3), q) == 0.0
