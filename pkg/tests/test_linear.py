import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from reidlab.errors import ConfigError, DomainMismatch, SingularQ
from reidlab.linear import (
    FrequencyModel,
    LinearBasis,
    SuperpositionCoefficients,
    analytic_basis,
    find_zero_crossing,
    phase_integral,
    reduction_of_order,
    solve_basis,
    wronskian_drift,
)
from reidlab.numerics import SampledPath


def test_frequency_kinds():
    assert FrequencyModel.constant(2.5)(3.0) == 2.5
    assert FrequencyModel.zero()(1.0) == 0.0
    assert FrequencyModel.polynomial([1.0, 0.0, 2.0])(2.0) == pytest.approx(9.0)
    tab = FrequencyModel.tabulated([0.0, 1.0, 2.0], [1.0, 2.0, 1.0])
    assert tab(1.0) == pytest.approx(2.0)
    with pytest.raises(DomainMismatch):
        tab(2.5)


@pytest.mark.parametrize(
    "freq",
    [
        FrequencyModel.constant(-0.25),
        FrequencyModel.zero(),
        FrequencyModel.polynomial([1.0, 0.5]),
        FrequencyModel.tabulated([0.0, 1.0, 3.0], [0.2, 0.4, 0.1]),
    ],
)
def test_frequency_dict_round_trip(freq):
    back = FrequencyModel.from_dict(freq.to_dict())
    t = np.linspace(0.0, 3.0, 7)
    np.testing.assert_array_equal(back(t), freq(t))


def test_unknown_kind():
    with pytest.raises(ConfigError):
        FrequencyModel("sawtooth", (1.0,))


@pytest.mark.parametrize("W", [1.0, -2.0])
def test_solve_basis_matches_trig(tight, W):
    b = solve_basis(FrequencyModel.constant(4.0), 0.0, 10.0, tight, wronskian=W)
    t = b.grid
    assert np.max(np.abs(b.q1.component(0) - np.cos(2 * t))) < 1e-9
    assert np.max(np.abs(b.q2.component(0) - W * np.sin(2 * t) / 2)) < 1e-9
    assert wronskian_drift(b) < 1e-9 * abs(W)


def test_wronskian_conserved_time_dependent(tight):
    b = solve_basis(FrequencyModel.polynomial([1.0, 0.3, -0.02]), 0.0, 8.0, tight)
    assert wronskian_drift(b) < 1e-9


@pytest.mark.parametrize("w2", [1.0, 0.0, -0.25])
def test_analytic_basis_wronskian(w2):
    b = analytic_basis(FrequencyModel.constant(w2), 0.5, np.linspace(0.5, 3.0, 50), wronskian=1.5)
    assert wronskian_drift(b) < 1e-13
    q1, q1t, q2, q2t = b.at(0.5)
    assert (q1, q1t, q2) == pytest.approx((1.0, 0.0, 0.0))


def test_combine(tight):
    b = analytic_basis(FrequencyModel.constant(1.0), 0.0, np.linspace(0, 3, 31))
    q = b.combine(SuperpositionCoefficients(2.0, -1.0))
    np.testing.assert_allclose(q.component(0), 2 * np.cos(b.grid) - np.sin(b.grid), atol=1e-14)


def test_zero_crossing(tight):
    b = solve_basis(FrequencyModel.constant(1.0), 0.0, 3.0, tight)
    assert find_zero_crossing(b.q1) == pytest.approx(np.pi / 2, abs=1e-10)
    assert find_zero_crossing(SampledPath([0.0, 1.0, 2.0], [1.0, 2.0, 3.0])) is None


def test_phase_integral_cosh(tight):
    # int_0^t sech^2(s/2) ds = 2 tanh(t/2)
    b = solve_basis(FrequencyModel.constant(-0.25), 0.0, 6.0, tight)
    Y = phase_integral(b.q1, 0.0, tight)
    np.testing.assert_allclose(Y.component(0), 2 * np.tanh(Y.grid / 2), atol=1e-10)


def test_phase_integral_without_dense(tight):
    grid = np.linspace(-1.0, 2.0, 301)
    q = SampledPath(grid, np.cosh(grid / 2))
    Y = phase_integral(q, 0.0, tight)
    np.testing.assert_allclose(Y.component(0), 2 * np.tanh(grid / 2), atol=1e-8)
    with pytest.raises(DomainMismatch):
        phase_integral(q, 0.005, tight)


def test_phase_integral_rejects_zero(tight):
    b = solve_basis(FrequencyModel.constant(1.0), 0.0, 3.0, tight)
    with pytest.raises(SingularQ) as info:
        phase_integral(b.q1, 0.0, tight)
    assert info.value.where == pytest.approx(np.pi / 2, abs=1e-9)


@given(st.floats(0.2, 3.0), st.sampled_from([1.0, -1.0, 2.5]))
def test_reduction_of_order_cosh(g, W):
    # q1 = cosh(g t) -> q2 = W sinh(g t) / g
    b = analytic_basis(FrequencyModel.constant(-g * g), 0.0, np.linspace(-1.0, 1.0, 41))
    q2 = reduction_of_order(b.q1, W, 0.0)
    t = q2.grid
    np.testing.assert_allclose(q2.component(0), W * np.sinh(g * t) / g, atol=1e-9)
    wr = b.q1.component(0) * q2.component(1) - q2.component(0) * b.q1.component(1)
    np.testing.assert_allclose(wr, W, atol=1e-9)


def test_basis_requires_shared_grid():
    a = SampledPath([0.0, 1.0], [[1.0, 0.0], [1.0, 0.0]])
    c = SampledPath([0.0, 2.0], [[0.0, 1.0], [2.0, 1.0]])
    with pytest.raises(ConfigError):
        LinearBasis(a, c, 1.0, 0.0)
