import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from reidlab.emden_fowler import EFState, ef_to_hyperbolic
from reidlab.errors import NonpositiveY, NoRealBranch, PathTooShort, SingularQ, SingularQtilde, ZeroA
from reidlab.invariant import (
    Formulation,
    InvariantReport,
    classical_form,
    drift_report,
    el_invariant_constant_m2,
    el_invariant_ef,
    el_invariant_higher_physical,
    el_invariant_hyperbolic,
    el_invariant_m2,
    polyanin_invariant,
    positivity_condition,
    sample_invariant,
)
from reidlab.linear import FrequencyModel, SuperpositionCoefficients, analytic_basis, solve_basis
from reidlab.reid import ReidParams, closed_form_trajectory, pinney_general, polyanin_particular, simulate_reid


def test_m2_invariant_at_fixed_point():
    t = np.linspace(0, 10, 11)
    I = el_invariant_m2(np.cos(t), -np.sin(t), np.ones_like(t), np.zeros_like(t), 1.0)
    np.testing.assert_allclose(I, 0.5, atol=1e-15)
    assert classical_form(0.5) == 1.0


def test_m2_invariant_rejects_zero_qtilde():
    with pytest.raises(SingularQtilde):
        el_invariant_m2(1.0, 0.0, 0.0, 1.0, 1.0)


@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(-3, 3), st.sampled_from([1.0, -1.0, 2.0]))
def test_positivity_matches_constant(a, b, alpha, W):
    assume(a != 0 and alpha != 0)
    c = SuperpositionCoefficients(a, b)
    assert positivity_condition(c, alpha, W) == (el_invariant_constant_m2(c, alpha, W) > 0)


def test_positivity_undefined_for_a_zero():
    with pytest.raises(ZeroA):
        positivity_condition(SuperpositionCoefficients(0.0, 1.0), 1.0, 1.0)


def test_constant_m2_values():
    assert el_invariant_constant_m2(SuperpositionCoefficients(1.0, 0.0), 1.0, 1.0) == 0.5
    assert el_invariant_constant_m2(SuperpositionCoefficients(2.0, 3.0), -1.0, 2.0) == pytest.approx(16.0)
    alpha, W = -0.36, 2.0
    c = SuperpositionCoefficients(1.0, np.sqrt(-alpha) / W)
    assert abs(el_invariant_constant_m2(c, alpha, W)) < 1e-15


def test_m3_value():
    assert polyanin_invariant(ReidParams(3, 2.0), 1.0) == 0.375
    assert polyanin_invariant(ReidParams(3, 1.0), 2.0) == 0.375


@given(st.floats(0.05, 20.0), st.sampled_from([1.0, 2.0, 0.5]))
def test_m3_closed_form(alpha, W):
    expected = 3.0 / 8.0 * (alpha * W / 2.0) ** (1.0 / 3.0)
    assert polyanin_invariant(ReidParams(3, alpha), W) == pytest.approx(expected, rel=1e-13)


def test_polyanin_invariant_even_m_positive_coupling():
    with pytest.raises(NoRealBranch):
        polyanin_invariant(ReidParams(4, 1.0), 1.0)


@pytest.mark.parametrize("m", [3, 4, 5, 6])
def test_polyanin_invariant_constant_along_ray(m):
    p = ReidParams(m, -0.7)
    sol = polyanin_particular(p, 1.0)
    Y = np.linspace(0.1, 5.0, 40)
    I = el_invariant_ef(sol(Y), sol.derivative(Y), Y, p, 1.0)
    np.testing.assert_allclose(I, polyanin_invariant(p, 1.0), atol=1e-12)


def test_pinney_general_invariant():
    # sqrt(a1 + a2 Y^2 + 2 a3 Y) carries I = -a3/2
    p = ReidParams(2, 1.0)
    sol = pinney_general((2.0, 1.0, 1.0), p)
    Y = np.linspace(0.0, 3.0, 13)
    np.testing.assert_allclose(el_invariant_ef(sol(Y), sol.derivative(Y), Y, p, 1.0), -0.5, atol=1e-14)


def test_ef_accepts_zero_Y_rejects_negative():
    p = ReidParams(3, 1.0)
    assert el_invariant_ef(1.0, 0.0, 0.0, p, 1.0) == 0.0
    with pytest.raises(NonpositiveY):
        el_invariant_ef(1.0, 0.0, -0.1, p, 1.0)


@given(
    st.integers(3, 6),
    st.floats(0.1, 2.0),
    st.sampled_from([-1.0, 1.0]),
    st.sampled_from([-1.0, 1.0, 2.0]),
    st.floats(0.3, 2.0),
    st.floats(-1.5, 1.5),
    st.floats(-1.5, 1.5),
    st.floats(0.05, 3.0),
    st.floats(0.5, 2.0),
)
def test_formulations_agree(m, mag, sign, W, q, q_t, qtt, Y, ratio):
    p = ReidParams(m, sign * mag)
    qtilde = q * ratio
    i_phys = el_invariant_higher_physical(q, q_t, qtilde, qtt, Y, p, W)
    ef = EFState(Y, qtilde / q, q * qtt - qtilde * q_t)
    i_ef = el_invariant_ef(ef.rtilde, ef.rtilde_Y, Y, p, W)
    h = ef_to_hyperbolic(ef)
    i_hyp = el_invariant_hyperbolic(h.Qtilde, h.Qtilde_eta, p, W)
    scale = max(1.0, abs(i_ef))
    assert abs(i_phys - i_ef) < 1e-10 * scale
    assert abs(i_hyp - i_ef) < 1e-10 * scale


@pytest.mark.parametrize("m", [3, 4, 5])
def test_reid_formula_has_zero_invariant(m):
    freq = FrequencyModel.constant(-0.25)
    b = analytic_basis(freq, 0.0, np.linspace(0.0, 5.0, 51))
    traj = closed_form_trajectory(b, ReidParams(m, 0.8), freq)
    for form in ("higher_physical", "higher_ef"):
        assert np.max(np.abs(sample_invariant(traj, form))) < 1e-12
    # the hyperbolic chart needs Y > 0, so drop t0
    sub = closed_form_trajectory(
        analytic_basis(freq, 0.0, np.linspace(0.1, 5.0, 50)), ReidParams(m, 0.8), freq
    )
    assert np.max(np.abs(sample_invariant(sub, "higher_hyperbolic"))) < 1e-12


def test_drift_report(tight):
    freq = FrequencyModel.constant(1.0)
    b = solve_basis(freq, 0.0, 10.0, tight)
    c = SuperpositionCoefficients(1.0, 0.5)
    p = ReidParams(2, 0.8)
    traj = simulate_reid(freq, p, b, c, (1.2, 0.1), 0.0, 10.0, tight)
    rep = drift_report(traj)
    assert rep.formulation is Formulation.M2_PHYSICAL
    assert rep.rel_drift < 1e-8
    d = rep.to_dict()
    assert d["n_samples"] == len(traj) and d["formulation"] == "m2_physical"


def test_drift_report_higher_form_past_zero(tight):
    freq = FrequencyModel.constant(1.0)
    b = solve_basis(freq, 0.0, 3.0, tight)
    traj = simulate_reid(freq, ReidParams(2, 1.0), b, SuperpositionCoefficients(), (1.0, 0.0), 0.0, 3.0, tight)
    with pytest.raises(SingularQ) as info:
        drift_report(traj, "higher_physical")
    assert info.value.where == pytest.approx(np.pi / 2, abs=1e-8)


def test_report_from_samples():
    rep = InvariantReport.from_samples([0, 1, 2], [1.0, 1.5, 0.0], None, "m2_physical")
    assert rep.reference == 1.0 and rep.max_abs_drift == 1.0 and rep.rel_drift == 1.0
    rep = InvariantReport.from_samples([0, 1], [1e-3, 2e-3], 0.0, "higher_ef")
    assert rep.rel_drift == pytest.approx(2e-3)


def test_drift_report_needs_two_samples():
    b = analytic_basis(FrequencyModel.constant(1.0), 0.0, np.array([0.0]))
    traj = closed_form_trajectory(b, ReidParams(2, 1.0), FrequencyModel.constant(1.0))
    with pytest.raises(PathTooShort):
        drift_report(traj)


@pytest.mark.parametrize("W", [1.0, 2.0, -0.5])
def test_alpha_zero_gives_half_wronskian_squared(W):
    # with alpha = 0 and qtilde = q2 the invariant is the Wronskian squared (halved)
    b = analytic_basis(FrequencyModel.constant(1.0), 0.0, np.linspace(0.1, 1.4, 14), wronskian=W)
    q1, q1t, q2, q2t = (c for p in (b.q1, b.q2) for c in (p.component(0), p.component(1)))
    np.testing.assert_allclose(el_invariant_m2(q1, q1t, q2, q2t, 0.0), 0.5 * W**2, rtol=1e-14)
