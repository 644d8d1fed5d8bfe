import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from reidlab.errors import (
    ConfigError,
    NonFiniteIntegrand,
    NonFiniteState,
    PathTooShort,
    SingularityError,
    StepLimitExceeded,
)
from reidlab.numerics import (
    SampledPath,
    ToleranceConfig,
    cumulative_quadrature,
    fd_derivatives,
    fd_residual,
    integrate_fixed,
    integrate_ivp,
    quadrature,
)


def oscillator(t, y):
    return np.array([y[1], -y[0]])


@pytest.mark.parametrize("kwargs", [{"rel_tol": 0.0}, {"abs_tol": 1.5}, {"max_steps": 0}])
def test_tolerance_config_rejects_bad_values(kwargs):
    with pytest.raises(ConfigError):
        ToleranceConfig(**kwargs)


def test_sampled_path_validation():
    with pytest.raises(ConfigError):
        SampledPath([0.0, 1.0, 1.0], [0.0, 1.0, 2.0])
    with pytest.raises(NonFiniteState):
        SampledPath([0.0, 1.0, 2.0], [0.0, np.nan, 2.0])
    p = SampledPath([0.0, 1.0, 2.0], [0.0, 1.0, 4.0])
    with pytest.raises(ValueError):
        p.values[0] = 3.0
    assert p.at(0.5) == pytest.approx(0.5)


def test_integrate_ivp_oscillator(tight):
    path = integrate_ivp(oscillator, [1.0, 0.0], 0.0, 20.0, tight)
    assert np.max(np.abs(path.component(0) - np.cos(path.grid))) < 1e-9
    # dense output between steps
    t = np.linspace(0, 20, 777)
    assert np.max(np.abs(np.asarray(path.at(t))[:, 0] - np.cos(t))) < 1e-9


def test_integrate_ivp_t_eval(tight):
    t_eval = np.linspace(0.0, 1.0, 11)
    path = integrate_ivp(lambda t, y: y, [1.0], 0.0, 1.0, tight, t_eval=t_eval)
    np.testing.assert_array_equal(path.grid, t_eval)
    np.testing.assert_allclose(path.component(0), np.exp(t_eval), rtol=1e-9)


def test_step_limit():
    with pytest.raises(StepLimitExceeded) as info:
        integrate_ivp(oscillator, [1.0, 0.0], 0.0, 100.0, ToleranceConfig(1e-12, 1e-14, max_steps=5))
    assert info.value.where is not None


def test_blow_up_is_a_singularity(tight):
    # y' = y^2, y(0) = 1 blows up at t = 1
    with pytest.raises(SingularityError) as info:
        integrate_ivp(lambda t, y: y**2, [1.0], 0.0, 2.0, tight)
    assert 0.9 < info.value.where <= 1.0 + 1e-6


def test_bad_interval(tight):
    with pytest.raises(ConfigError):
        integrate_ivp(oscillator, [1.0, 0.0], 1.0, 0.0, tight)


def test_rk4_fourth_order():
    errs = []
    for n in (51, 101):
        grid = np.linspace(0.0, 2.0, n)
        path = integrate_fixed(oscillator, [1.0, 0.0], grid)
        errs.append(abs(path.component(0)[-1] - np.cos(2.0)))
    assert 14 < errs[0] / errs[1] < 18


def test_quadrature(tight):
    assert quadrature(np.sin, 0.0, np.pi, tight) == pytest.approx(2.0, abs=1e-12)
    with pytest.raises(NonFiniteIntegrand):
        quadrature(lambda x: np.log(x) if x > 0 else np.nan, -1.0, 1.0, tight)


def test_cumulative_quadrature(tight):
    grid = np.linspace(0.0, 3.0, 31)
    np.testing.assert_allclose(cumulative_quadrature(np.cos, grid, tight), np.sin(grid), atol=1e-12)


def test_fd_needs_five_points():
    with pytest.raises(PathTooShort):
        fd_derivatives(SampledPath(np.arange(4.0), np.arange(4.0)))


def test_fd_second_order_on_nonuniform_grid():
    errs = []
    for n in (200, 400):
        u = np.linspace(0.0, 1.0, n)
        grid = 2.0 * u + 0.3 * np.sin(np.pi * u)
        x, y, dy, d2y = fd_derivatives(SampledPath(grid, np.sin(grid)))
        errs.append(max(np.max(np.abs(dy - np.cos(x))), np.max(np.abs(d2y + np.sin(x)))))
    assert errs[0] / errs[1] > 3.0


@given(
    st.lists(st.floats(0.01, 1.0), min_size=5, max_size=30),
    st.floats(-3, 3),
    st.floats(-3, 3),
    st.floats(-3, 3),
)
def test_fd_exact_for_quadratics(steps, a, b, c):
    grid = np.cumsum(steps)
    path = SampledPath(grid, a + b * grid + c * grid**2)
    resid = fd_residual(path, lambda x, y, dy, d2y: d2y - 2 * c)
    # exact up to roundoff amplified by 1/h^2
    scale = np.max(np.abs(path.component(0))) + 1.0
    assert np.max(resid) < 1e-12 * scale / min(steps) ** 2
