"""Reid oscillator of order m and its closed-form solutions.

The nonlinear equation is::

    qtilde_tt + omega2(t) qtilde = alpha (q1 q2)^(m-2) qtilde^(1-2m)

with ``q1, q2`` a basis of the linear equation. ``m = 2`` is the Ermakov
(Pinney) case.

Real roots follow one convention throughout: ``x**(1/n)`` for ``x < 0`` is
``-|x|**(1/n)`` when ``n`` is odd and an error when ``n`` is even.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    ConfigError,
    ConstraintViolated,
    DomainMismatch,
    NegativeRadicand,
    NoRealBranch,
    SingularQtilde,
)
from .linear import FrequencyModel, LinearBasis, SuperpositionCoefficients
from .numerics import DEFAULT_TOL, SampledPath, ToleranceConfig, integrate_ivp

__all__ = [
    "ReidParams",
    "ReidTrajectory",
    "Solution1D",
    "real_root",
    "reid_rhs",
    "reid_superposition",
    "induced_ics",
    "simulate_reid",
    "closed_form_trajectory",
    "pinney_general",
    "polyanin_particular",
    "polyanin_amplitude",
    "ef_to_physical",
]


@dataclass(frozen=True)
class ReidParams:
    m: int
    alpha: float

    def __post_init__(self):
        if isinstance(self.m, bool) or int(self.m) != self.m:
            raise ConfigError(f"m must be an integer, got {self.m!r}")
        object.__setattr__(self, "m", int(self.m))
        if self.m < 2:
            raise ConfigError(f"m must be >= 2, got {self.m}")
        if not np.isfinite(self.alpha):
            raise ConfigError("alpha must be finite")
        if self.alpha == 0:
            raise ConfigError("alpha must be nonzero")
        object.__setattr__(self, "alpha", float(self.alpha))

    def coupling(self, W: float) -> float:
        """``alpha * W**(m-2)``, the Emden-Fowler coefficient."""
        return self.alpha * float(W) ** (self.m - 2)


def real_root(x, n: int, error=NegativeRadicand, where=None):
    """Real ``n``-th root under the odd-root convention."""
    x = np.asarray(x, dtype=float)
    neg = x < 0
    if np.any(neg):
        if n % 2 == 0:
            loc = None
            if where is not None:
                loc = float(np.asarray(where, dtype=float).reshape(-1)[np.argmax(neg.reshape(-1))])
            raise error(f"negative radicand under an even root (n={n})", loc)
        out = np.sign(x) * np.abs(x) ** (1.0 / n)
    else:
        out = x ** (1.0 / n)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class Solution1D:
    """A closed-form scalar solution together with its first derivative."""

    value: Callable
    derivative: Callable

    def __call__(self, x):
        return self.value(x)


def reid_rhs(t, qtilde, basis: LinearBasis, params: ReidParams, freq: FrequencyModel):
    """Acceleration ``qtilde_tt`` of the Reid equation."""
    qtilde = np.asarray(qtilde, dtype=float)
    if np.any(qtilde == 0):
        raise SingularQtilde("qtilde = 0 in the Reid nonlinearity", float(np.min(t)))
    q1, _, q2, _ = basis.at(t)
    m = params.m
    out = params.alpha * (q1 * q2) ** (m - 2) * qtilde ** (1 - 2 * m) - freq(t) * qtilde
    return float(out) if np.ndim(out) == 0 else out


def _superposition(q1, q1t, q2, q2t, m: int, c: float, t):
    X = q1**m + c * q2**m
    if np.any(X <= 0):
        bad = np.asarray(X <= 0).reshape(-1)
        where = float(np.asarray(t, dtype=float).reshape(-1)[np.argmax(bad)])
        raise NegativeRadicand("Reid superposition radicand is not positive", where)
    q = X ** (1.0 / m)
    qt = X ** (1.0 / m - 1.0) * (q1 ** (m - 1) * q1t + c * q2 ** (m - 1) * q2t)
    return q, qt


def reid_superposition(basis: LinearBasis, params: ReidParams) -> SampledPath:
    """``qtilde = (q1^m + alpha q2^m / ((m-1) W^2))^(1/m)`` with derivative.

    For ``m = 2`` this is Pinney's formula. The returned path carries
    ``(qtilde, qtilde_t)`` on the basis grid and a dense evaluator built on
    ``basis.at``.
    """
    m = params.m
    c = params.alpha / ((m - 1) * basis.wronskian**2)

    def evaluate(t):
        q1, q1t, q2, q2t = basis.at(t)
        q, qt = _superposition(q1, q1t, q2, q2t, m, c, t)
        return np.stack([q, qt], axis=-1)

    q1, q1t = basis.q1.component(0), basis.q1.component(1)
    q2, q2t = basis.q2.component(0), basis.q2.component(1)
    q, qt = _superposition(q1, q1t, q2, q2t, m, c, basis.grid)
    return SampledPath(basis.grid, np.column_stack([q, qt]), evaluate)


def induced_ics(basis: LinearBasis, params: ReidParams, t0: float) -> Tuple[float, float]:
    """Initial data ``(qtilde, qtilde_t)`` that the Reid superposition takes at ``t0``."""
    m = params.m
    c = params.alpha / ((m - 1) * basis.wronskian**2)
    q1, q1t, q2, q2t = (float(v) for v in basis.at(t0))
    q, qt = _superposition(q1, q1t, q2, q2t, m, c, t0)
    return float(q), float(qt)


@dataclass(frozen=True)
class ReidTrajectory:
    """Linear and nonlinear solutions on one shared grid.

    ``base`` is ``(q, q_t)`` for ``q = a q1 + b q2``; ``aux`` is
    ``(qtilde, qtilde_t)``. ``basis`` is the linear basis sampled on the same
    grid; higher-order invariants use its ``q1`` and ``Y = q2 / (W q1)``.
    """

    base: SampledPath
    aux: SampledPath
    params: ReidParams
    basis: LinearBasis
    freq: FrequencyModel
    coeffs: SuperpositionCoefficients

    def __post_init__(self):
        g = self.base.grid
        if not (np.array_equal(g, self.aux.grid) and np.array_equal(g, self.basis.grid)):
            raise DomainMismatch("trajectory components must share one grid")
        qt = self.aux.component(0)
        if np.any(qt <= 0):
            i = int(np.argmax(qt <= 0))
            raise SingularQtilde("qtilde left the positive half-line", float(g[i]))

    @property
    def grid(self) -> np.ndarray:
        return self.base.grid

    def __len__(self):
        return len(self.base)


def _reid_system(freq: FrequencyModel, params: ReidParams):
    m, alpha = params.m, params.alpha

    def rhs(t, y):
        q1, q1t, q2, q2t, qt, qtt = y
        if qt <= 0:
            raise SingularQtilde("qtilde reached zero", float(t))
        w2 = freq(t)
        acc = alpha * (q1 * q2) ** (m - 2) * qt ** (1 - 2 * m) - w2 * qt
        return np.array([q1t, -w2 * q1, q2t, -w2 * q2, qtt, acc])

    return rhs


def simulate_reid(
    freq: FrequencyModel,
    params: ReidParams,
    basis: LinearBasis,
    q_ics: SuperpositionCoefficients,
    qtilde_ics: Tuple[float, float],
    t0: float,
    t1: float,
    tol: ToleranceConfig = DEFAULT_TOL,
    t_eval: Optional[Sequence[float]] = None,
) -> ReidTrajectory:
    """Integrate the Reid system on ``[t0, t1]``.

    The basis pair and ``qtilde`` are advanced together as one six-component
    system, seeded with the basis values at ``t0``, so the nonlinearity sees
    ``q1 q2`` with the same error control as ``qtilde``. ``q`` is then
    ``a q1 + b q2``.
    """
    qt0, qtt0 = (float(v) for v in qtilde_ics)
    if not qt0 > 0:
        raise ConfigError("initial qtilde must be positive")
    q1, q1t, q2, q2t = (float(v) for v in basis.at(t0))
    y0 = [q1, q1t, q2, q2t, qt0, qtt0]
    path = integrate_ivp(_reid_system(freq, params), y0, t0, t1, tol, t_eval)
    joint = path.dense
    grid = path.grid
    vals = path.values

    def cols(lo, hi):
        return lambda t: np.asarray(joint(t))[..., lo:hi]

    traj_basis = LinearBasis(
        SampledPath(grid, vals[:, 0:2], cols(0, 2)),
        SampledPath(grid, vals[:, 2:4], cols(2, 4)),
        basis.wronskian,
        basis.t0,
    )
    base = traj_basis.combine(q_ics)
    aux = SampledPath(grid, vals[:, 4:6], cols(4, 6))
    return ReidTrajectory(base, aux, params, traj_basis, freq, q_ics)


def closed_form_trajectory(
    basis: LinearBasis,
    params: ReidParams,
    freq: FrequencyModel,
    coeffs: SuperpositionCoefficients = SuperpositionCoefficients(),
) -> ReidTrajectory:
    """Trajectory whose nonlinear part is the Reid superposition on the basis grid."""
    return ReidTrajectory(
        basis.combine(coeffs), reid_superposition(basis, params), params, basis, freq, coeffs
    )


def pinney_general(
    alphas: Tuple[float, float, float], params: ReidParams, W: float = 1.0
) -> Solution1D:
    """General solution ``sqrt(a1 + a2 Y^2 + 2 a3 Y)`` of ``r_YY = alpha r^-3``.

    The constants must satisfy ``a1 a2 - a3^2 = alpha / W^2`` to 1e-12.
    """
    if params.m != 2:
        raise ConfigError("the general Pinney solution is for m = 2")
    a1, a2, a3 = (float(a) for a in alphas)
    gap = a1 * a2 - a3**2 - params.alpha / W**2
    if abs(gap) > 1e-12 * max(1.0, abs(params.alpha / W**2)):
        raise ConstraintViolated(f"a1*a2 - a3^2 differs from alpha/W^2 by {gap:.3e}")

    def radicand(Y):
        Y = np.asarray(Y, dtype=float)
        R = a1 + a2 * Y**2 + 2 * a3 * Y
        if np.any(R <= 0):
            bad = np.asarray(R <= 0).reshape(-1)
            raise NegativeRadicand("Pinney radicand not positive", float(Y.reshape(-1)[np.argmax(bad)]))
        return R

    def value(Y):
        return np.sqrt(radicand(Y))

    def derivative(Y):
        Y = np.asarray(Y, dtype=float)
        return (a2 * Y + a3) / np.sqrt(radicand(Y))

    return Solution1D(value, derivative)


def polyanin_amplitude(params: ReidParams, W: float = 1.0) -> float:
    """Prefactor ``(-4 alpha W^(m-2))^(1/(2m))`` of the square-root ray."""
    rad = -4.0 * params.coupling(W)
    if rad <= 0:
        raise NoRealBranch(
            f"-4 alpha W^(m-2) = {rad:g} <= 0 has no real root of even order {2 * params.m}"
        )
    return rad ** (1.0 / (2 * params.m))


def polyanin_particular(params: ReidParams, W: float = 1.0) -> Solution1D:
    """Particular solution ``r = k sqrt(Y)`` of the Emden-Fowler equation.

    ``k`` is :func:`polyanin_amplitude`. The root order ``2m`` is always
    even, so a real branch exists only for ``alpha W^(m-2) < 0``.
    """
    k = polyanin_amplitude(params, W)
    return Solution1D(
        lambda Y: k * np.sqrt(np.asarray(Y, dtype=float)),
        lambda Y: 0.5 * k / np.sqrt(np.asarray(Y, dtype=float)),
    )


def ef_to_physical(rtilde, q1: SampledPath, Y_of_t: SampledPath) -> SampledPath:
    """Map an Emden-Fowler solution back to time: ``qtilde(t) = q1(t) r(Y(t))``.

    ``rtilde`` is either a :class:`Solution1D` (or any callable of ``Y``) or a
    :class:`SampledPath` over ``Y``, which is then interpolated with a cubic
    spline. When the derivative is available and ``q1`` carries ``q1_t`` the
    result also carries ``qtilde_t = q1_t r + r_Y / q1``.
    """
    if not np.array_equal(q1.grid, Y_of_t.grid):
        raise DomainMismatch("q1 and Y(t) must share a grid")
    Y = Y_of_t.component(0)
    deriv = None
    if isinstance(rtilde, SampledPath):
        lo, hi = rtilde.grid[0], rtilde.grid[-1]
        if Y.min() < lo - 1e-12 or Y.max() > hi + 1e-12:
            raise DomainMismatch(f"Y(t) leaves the sampled range [{lo}, {hi}]")
        from scipy.interpolate import CubicSpline

        spline = CubicSpline(rtilde.grid, rtilde.component(0))
        r = spline(Y)
        deriv = spline.derivative()(Y)
    else:
        r = np.asarray(rtilde(Y), dtype=float)
        if isinstance(rtilde, Solution1D):
            deriv = np.asarray(rtilde.derivative(Y), dtype=float)
    y = q1.component(0)
    q = y * r
    if deriv is not None and q1.ncomp > 1:
        qt = q1.component(1) * r + deriv / y
        return SampledPath(q1.grid, np.column_stack([q, qt]))
    return SampledPath(q1.grid, q)
