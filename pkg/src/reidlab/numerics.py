"""Integration, quadrature and finite-difference residual primitives.

The adaptive integrator steps scipy's ``DOP853`` (an embedded 8(5,3)
Runge-Kutta pair with 7th-order dense output) one step at a time so the
step budget and finiteness of every state can be policed here. A plain
fixed-step classical RK4 is provided for reproducible grids.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate as _spi

from .errors import (
    ConfigError,
    IntegrationFailed,
    NonFiniteIntegrand,
    NonFiniteState,
    PathTooShort,
    StepLimitExceeded,
)

__all__ = [
    "ToleranceConfig",
    "SampledPath",
    "integrate_ivp",
    "integrate_fixed",
    "quadrature",
    "cumulative_quadrature",
    "fd_derivatives",
    "fd_residual",
]


@dataclass(frozen=True)
class ToleranceConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_steps: int = 200_000

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ConfigError(f"{name} must lie in (0, 1), got {value!r}")
        if int(self.max_steps) != self.max_steps or self.max_steps < 1:
            raise ConfigError(f"max_steps must be a positive integer, got {self.max_steps!r}")


DEFAULT_TOL = ToleranceConfig()


class SampledPath:
    """Values sampled on a strictly increasing grid.

    ``values`` is either 1-D (scalar path) or 2-D with one row per grid
    point. ``dense`` optionally evaluates the path between samples; it must
    accept a scalar or array ``t`` and return values shaped like a row of
    ``values`` (scalar ``t``) or stacked rows (array ``t``).
    """

    __slots__ = ("grid", "values", "dense")

    def __init__(self, grid, values, dense: Optional[Callable] = None):
        grid = np.array(grid, dtype=float)
        values = np.array(values, dtype=float)
        if grid.ndim != 1:
            raise ConfigError("grid must be one-dimensional")
        if values.shape[:1] != grid.shape:
            raise ConfigError(
                f"grid and values length differ: {grid.shape[0]} vs {values.shape[0]}"
            )
        if grid.size > 1 and not np.all(np.diff(grid) > 0):
            raise ConfigError("grid must be strictly increasing")
        if not (np.all(np.isfinite(grid)) and np.all(np.isfinite(values))):
            bad = np.nonzero(~np.isfinite(values.reshape(grid.size, -1)).all(axis=1))[0]
            where = float(grid[bad[0]]) if bad.size else None
            raise NonFiniteState("non-finite sample in path", where)
        grid.setflags(write=False)
        values.setflags(write=False)
        self.grid = grid
        self.values = values
        self.dense = dense

    def __len__(self):
        return self.grid.size

    def __repr__(self):
        return (
            f"SampledPath(n={len(self)}, span=[{self.grid[0]:.6g}, {self.grid[-1]:.6g}], "
            f"shape={self.values.shape})"
        )

    @property
    def ncomp(self) -> int:
        return 1 if self.values.ndim == 1 else self.values.shape[1]

    def component(self, i: int) -> np.ndarray:
        if self.values.ndim == 1:
            if i != 0:
                raise IndexError(i)
            return self.values
        return self.values[:, i]

    def at(self, t):
        """Evaluate the path at ``t`` (dense output, else linear interpolation)."""
        if self.dense is not None:
            return self.dense(t)
        t_arr = np.asarray(t, dtype=float)
        if self.values.ndim == 1:
            return np.interp(t_arr, self.grid, self.values)
        out = np.stack(
            [np.interp(t_arr, self.grid, self.values[:, k]) for k in range(self.ncomp)],
            axis=-1,
        )
        return out

    def with_values(self, values, dense: Optional[Callable] = None) -> "SampledPath":
        return SampledPath(self.grid, values, dense)


def _checked_rhs(rhs: Callable):
    def f(t, y):
        dy = np.asarray(rhs(t, y), dtype=float)
        if not np.all(np.isfinite(dy)):
            raise NonFiniteState("right-hand side became non-finite", float(t))
        return dy

    return f


def _dense_from_solution(sol: _spi.OdeSolution, scalar: bool):
    def dense(t):
        out = np.asarray(sol(t))
        if scalar:
            return out[0] if out.ndim == 1 else out[0, :]
        return out if out.ndim == 1 else out.T

    return dense


def integrate_ivp(
    rhs: Callable,
    y0,
    t0: float,
    t1: float,
    tol: ToleranceConfig = DEFAULT_TOL,
    t_eval: Optional[Sequence[float]] = None,
    max_step: float = np.inf,
) -> SampledPath:
    """Integrate ``y' = rhs(t, y)`` from ``t0`` to ``t1`` adaptively.

    Parameters
    ----------
    rhs : callable
        Vector field ``rhs(t, y) -> array``. May raise a
        :class:`~reidlab.errors.SingularityError` itself to flag a singular
        state; it propagates unchanged.
    y0 : array_like
        Initial state.
    t0, t1 : float
        Integration interval, ``t1 > t0``.
    tol : ToleranceConfig
        Local error per step is kept below ``rel_tol*|y| + abs_tol``.
    t_eval : sequence of float, optional
        If given, the returned path is sampled there via dense output;
        otherwise on the accepted step points.
    max_step : float
        Upper bound on the step size.

    Returns
    -------
    SampledPath
        2-D values (one column per state component) with dense output
        attached.

    Raises
    ------
    StepLimitExceeded
        ``tol.max_steps`` accepted steps did not reach ``t1``.
    NonFiniteState
        The state or the vector field became NaN/Inf.
    IntegrationFailed
        The step size collapsed (typically a blow-up).
    """
    if not t1 > t0:
        raise ConfigError(f"need t1 > t0, got t0={t0!r}, t1={t1!r}")
    y0 = np.atleast_1d(np.asarray(y0, dtype=float))
    if not np.all(np.isfinite(y0)):
        raise NonFiniteState("initial state is non-finite", float(t0))
    fun = _checked_rhs(rhs)
    solver = _spi.DOP853(
        fun, float(t0), y0, float(t1), rtol=tol.rel_tol, atol=tol.abs_tol, max_step=max_step
    )
    ts = [float(t0)]
    ys = [y0.copy()]
    interpolants = []
    nsteps = 0
    while solver.status == "running":
        if nsteps >= tol.max_steps:
            raise StepLimitExceeded(f"reached max_steps={tol.max_steps}", float(solver.t))
        message = solver.step()
        if solver.status == "failed":
            raise IntegrationFailed(f"integrator failed: {message}", float(solver.t))
        if not np.all(np.isfinite(solver.y)):
            raise NonFiniteState("state became non-finite", float(solver.t))
        nsteps += 1
        ts.append(float(solver.t))
        ys.append(solver.y.copy())
        interpolants.append(solver.dense_output())

    sol = _spi.OdeSolution(ts, interpolants)
    dense = _dense_from_solution(sol, scalar=False)
    if t_eval is None:
        return SampledPath(ts, np.array(ys), dense)
    t_eval = np.asarray(t_eval, dtype=float)
    if t_eval.size and (t_eval[0] < t0 or t_eval[-1] > t1):
        raise ConfigError("t_eval must lie within [t0, t1]")
    return SampledPath(t_eval, dense(t_eval), dense)


def integrate_fixed(rhs: Callable, y0, grid: Sequence[float]) -> SampledPath:
    """Classical fourth-order Runge-Kutta on a prescribed grid."""
    grid = np.asarray(grid, dtype=float)
    if grid.size < 2:
        raise PathTooShort("fixed-step grid needs at least two points")
    fun = _checked_rhs(rhs)
    y = np.atleast_1d(np.asarray(y0, dtype=float)).copy()
    out = np.empty((grid.size, y.size))
    out[0] = y
    for i in range(grid.size - 1):
        t, h = grid[i], grid[i + 1] - grid[i]
        k1 = fun(t, y)
        k2 = fun(t + h / 2, y + h / 2 * k1)
        k3 = fun(t + h / 2, y + h / 2 * k2)
        k4 = fun(t + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(y)):
            raise NonFiniteState("state became non-finite", float(grid[i + 1]))
        out[i + 1] = y
    return SampledPath(grid, out)


def _checked_integrand(f: Callable):
    def g(x):
        v = float(f(x))
        if not np.isfinite(v):
            raise NonFiniteIntegrand("integrand is non-finite", float(x))
        return v

    return g


def quadrature(f: Callable, a: float, b: float, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Adaptive Gauss-Kronrod quadrature of ``f`` over ``[a, b]``.

    ``tol.max_steps`` bounds the number of subintervals. A non-finite
    integrand value raises :class:`NonFiniteIntegrand` with its abscissa so
    the caller can segment around the singularity.
    """
    if a == b:
        return 0.0
    g = _checked_integrand(f)
    value, _ = _spi.quad(
        g, a, b, epsabs=tol.abs_tol, epsrel=max(tol.rel_tol, 5e-14), limit=int(tol.max_steps)
    )
    return float(value)


def cumulative_quadrature(
    f: Callable, grid: Sequence[float], tol: ToleranceConfig = DEFAULT_TOL
) -> np.ndarray:
    """Running integral ``F[i] = int_{grid[0]}^{grid[i]} f``, panel by panel."""
    grid = np.asarray(grid, dtype=float)
    panels = np.array([quadrature(f, grid[i], grid[i + 1], tol) for i in range(grid.size - 1)])
    return np.concatenate([[0.0], np.cumsum(panels)])


def fd_derivatives(path: SampledPath, component: int = 0):
    """Three-point central estimates of y' and y'' at the interior points.

    Works on non-uniform grids; on smoothly graded grids the error stays
    second order.

    Returns
    -------
    x, y, dy, d2y : ndarray
        Interior abscissae and the corresponding estimates.
    """
    if len(path) < 5:
        raise PathTooShort(f"need at least 5 samples, got {len(path)}")
    x = path.grid
    y = path.component(component)
    h1 = x[1:-1] - x[:-2]
    h2 = x[2:] - x[1:-1]
    ym, y0, yp = y[:-2], y[1:-1], y[2:]
    dy = (-h2 / (h1 * (h1 + h2))) * ym + ((h2 - h1) / (h1 * h2)) * y0 + (h1 / (h2 * (h1 + h2))) * yp
    d2y = 2.0 * (ym / (h1 * (h1 + h2)) - y0 / (h1 * h2) + yp / (h2 * (h1 + h2)))
    return x[1:-1], y0, dy, d2y


def fd_residual(path: SampledPath, residual_functional: Callable, component: int = 0) -> np.ndarray:
    """Absolute residual of a second-order ODE at interior grid points.

    ``residual_functional(x, y, dy, d2y)`` is called once with arrays and
    must return the residual array.
    """
    x, y, dy, d2y = fd_derivatives(path, component)
    res = np.asarray(residual_functional(x, y, dy, d2y), dtype=float)
    return np.abs(np.broadcast_to(res, x.shape))
