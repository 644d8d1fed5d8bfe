import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from reidlab.errors import ConfigError, NegativeRadicand, SingularQ, Unsupported
from reidlab.invariant import el_invariant_ef
from reidlab.linear import FrequencyModel, SuperpositionCoefficients, analytic_basis, solve_basis
from reidlab.mechanics import (
    CANONICAL_INVARIANT_FACTOR,
    CanonicalState,
    KeplerParams,
    energy_terms,
    euler_lagrange_residual,
    hamilton_equations_Y,
    hamiltonian_tau,
    hamiltonian_Y,
    invariant_canonical,
    lagrangian_tau,
    momentum_tau,
    nonlinear_sign,
    normal_form_residual,
    poisson_conservation_check,
    radial_invariant,
    radial_residual,
    radial_solution,
    radial_velocity,
    reid_hamiltonian,
)
from reidlab.numerics import SampledPath
from reidlab.reid import ReidParams, closed_form_trajectory, pinney_general, simulate_reid

states = st.tuples(
    st.integers(2, 6),
    st.floats(0.1, 2.0),
    st.sampled_from([-1.0, 1.0]),
    st.sampled_from([-1.0, 1.0, 1.5]),
    st.floats(0.3, 3.0),
    st.floats(0.3, 3.0),
    st.floats(-2.0, 2.0),
)


@given(states)
def test_legendre_and_chart(s):
    m, mag, sign, W, tau, r, rd = s
    p = ReidParams(m, sign * mag)
    mom = momentum_tau(tau, rd)
    H = hamiltonian_tau(tau, mom, r, p, W)
    assert abs(H - (mom * rd - lagrangian_tau(tau, r, rd, p, W))) < 1e-12 * max(1.0, abs(H))
    assert abs(H - hamiltonian_Y(1.0 / tau, mom, r, p, W)) < 1e-12 * max(1.0, abs(H))


@given(states)
def test_canonical_invariant_is_twice_ef(s):
    m, mag, sign, W, tau, r, rd = s
    p = ReidParams(m, sign * mag)
    ef = el_invariant_ef(r, -momentum_tau(tau, rd), 1.0 / tau, p, W)
    canon = invariant_canonical(tau, r, rd, p, W)
    assert abs(canon - CANONICAL_INVARIANT_FACTOR * ef) < 1e-10 * max(1.0, abs(canon))


def test_canonical_state_chart():
    s = CanonicalState(1.5, 0.3, 2.0, "tau")
    y = s.to_chart("Y")
    assert y.independent_var == pytest.approx(0.5)
    back = y.to_chart("tau")
    assert back == s
    with pytest.raises(Unsupported):
        s.to_chart("physical")


def test_hamilton_equations_reproduce_ef():
    # along r = sqrt(2 + Y^2 + 2Y) (m = 2): dr/dY = r_Y and dp/dY = -r_YY
    p = ReidParams(2, 1.0)
    sol = pinney_general((2.0, 1.0, 1.0), p)
    Y = np.linspace(0.3, 3.0, 10)
    r, rY = sol(Y), sol.derivative(Y)
    dr, dp = hamilton_equations_Y(Y, -rY, r, p, 1.0)
    np.testing.assert_allclose(dr, rY, atol=1e-8)
    np.testing.assert_allclose(dp, -p.alpha * r**-3, atol=1e-8)


def _ray_path(m, alpha):
    # r(tau) for the Reid-formula solution on a zero-frequency basis, Y = 1/tau
    p = ReidParams(m, alpha)
    tau = np.linspace(0.5, 2.0, 1501)
    Y = 1.0 / tau
    r = (1.0 + alpha / (m - 1) * Y**m) ** (1.0 / m)
    return p, SampledPath(tau, r)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_normal_form_and_euler_lagrange(m):
    p, path = _ray_path(m, 0.7)
    assert np.max(normal_form_residual(path, p, 1.0)) < 1e-4
    assert np.max(euler_lagrange_residual(path, p, 1.0)) < 1e-3


def test_reid_hamiltonian_generates_reid_equation():
    freq = FrequencyModel.constant(-0.25)
    b = analytic_basis(freq, 0.0, np.linspace(0.5, 2.0, 4))
    p = ReidParams(3, 0.6)
    t, qt = 1.2, 1.3
    q1, _, q2, _ = b.at(t)
    Y = q2 / (b.wronskian * q1)
    h = 1e-6
    dH = (reid_hamiltonian(t, qt + h, 0.0, b, Y, p, freq) - reid_hamiltonian(t, qt - h, 0.0, b, Y, p, freq)) / (2 * h)
    force = -freq(t) * qt + p.alpha * (q1 * q2) ** (p.m - 2) * qt ** (1 - 2 * p.m)
    assert -dH == pytest.approx(force, rel=1e-7)


@pytest.mark.parametrize(
    "m, alpha, freq, t1",
    [(3, 1.0, FrequencyModel.zero(), 3.0), (2, 1.0, FrequencyModel.constant(1.0), 1.4), (4, 0.7, FrequencyModel.constant(-0.25), 5.0)],
)
def test_poisson_conservation(tight, m, alpha, freq, t1):
    p = ReidParams(m, alpha)
    b = solve_basis(freq, 0.0, t1, tight)
    traj = simulate_reid(freq, p, b, SuperpositionCoefficients(), (1.0, 0.2), 0.0, t1, tight,
                         t_eval=np.linspace(0.0, t1, 201))
    assert poisson_conservation_check(traj) < 1e-5


def test_poisson_rejects_vanishing_q1():
    freq = FrequencyModel.constant(1.0)
    b = analytic_basis(freq, 0.0, np.linspace(0.0, 3.0, 31))
    with pytest.raises(SingularQ):
        poisson_conservation_check(closed_form_trajectory(b, ReidParams(2, 1.0), freq))


def test_kepler_m2():
    kp = KeplerParams(M=1.0, l=1.0, m=2)
    assert kp.K == -1.0 / 8.0
    assert radial_solution(0.0, kp) == pytest.approx(np.sqrt(2.0), abs=1e-15)
    t = np.linspace(-3.0, 3.0, 61)
    R, Rd = radial_solution(t, kp), radial_velocity(t, kp)
    assert np.max(np.abs(radial_invariant(R, Rd, kp))) < 1e-12
    kin, nonlin, pot = energy_terms(R, Rd, kp)
    np.testing.assert_allclose(kin + nonlin + pot, kp.M * radial_invariant(R, Rd, kp), atol=1e-13)
    assert nonlinear_sign(kp) == 1


@pytest.mark.parametrize("m, M, l", [(2, 2.0, 0.5), (4, 1.0, 1.0), (3, 1.0, 1.0), (5, 0.5, 0.3)])
def test_kepler_radial_residual(m, M, l):
    kp = KeplerParams(M=M, l=l, m=m)
    t = np.linspace(0.0, 2.0, 2001)
    path = SampledPath(t, radial_solution(t, kp))
    assert np.max(radial_residual(path, kp)) < 1e-4


def test_kepler_odd_m_domain():
    kp = KeplerParams(M=1.0, l=1.0, m=3)
    assert nonlinear_sign(kp) == -1
    edge = -np.log(2.0) / 3.0
    with pytest.raises(NegativeRadicand):
        radial_solution(np.array([edge - 1e-3, 0.0]), kp)
    assert np.all(radial_solution(np.linspace(edge + 1e-3, 1.0, 10), kp) > 0)


def test_kepler_params_validation():
    with pytest.raises(Unsupported):
        KeplerParams(M=1.0, l=1.0, m=2, epsilon=3.0)
    with pytest.raises(Unsupported):
        KeplerParams(M=1.0, l=1.0, m=2, K=0.5)
    with pytest.raises(ConfigError):
        KeplerParams(M=-1.0, l=1.0, m=2)
    assert nonlinear_sign(KeplerParams(M=1.0, l=0.0, m=3)) == 0
