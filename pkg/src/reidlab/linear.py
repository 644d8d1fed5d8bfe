"""The linear oscillator ``q_tt + omega2(t) q = 0``.

Bases are normalised canonically at an anchor time ``t0``::

    q1(t0) = 1,  q1_t(t0) = 0,   q2(t0) = 0,  q2_t(t0) = W

so the Wronskian ``q1 q2_t - q2 q1_t`` equals ``W`` (1 by default). ``W``
is carried as data everywhere downstream because the nonlinear terms scale
with powers of it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from .errors import ConfigError, DomainMismatch, SingularQ
from .numerics import (
    DEFAULT_TOL,
    SampledPath,
    ToleranceConfig,
    cumulative_quadrature,
    integrate_ivp,
    quadrature,
)

__all__ = [
    "FrequencyModel",
    "LinearBasis",
    "SuperpositionCoefficients",
    "solve_basis",
    "analytic_basis",
    "wronskian_drift",
    "reduction_of_order",
    "phase_integral",
    "find_zero_crossing",
]

FREQUENCY_KINDS = ("constant", "zero", "polynomial", "tabulated")


@dataclass(frozen=True)
class FrequencyModel:
    """Squared frequency ``omega2(t)``.

    Use the constructors :meth:`constant`, :meth:`zero`, :meth:`polynomial`
    and :meth:`tabulated`. Polynomial coefficients are in ascending order.
    Tabulated data are interpolated with a monotone cubic (PCHIP) and only
    defined inside the sample range.
    """

    kind: str
    parameters: tuple = ()
    samples: Optional[tuple] = None
    _fn: Callable = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in FREQUENCY_KINDS:
            raise ConfigError(f"unknown frequency kind {self.kind!r}")
        params = tuple(float(p) for p in self.parameters)
        object.__setattr__(self, "parameters", params)
        if self.kind == "zero":
            fn = lambda t: np.zeros_like(np.asarray(t, dtype=float))
        elif self.kind == "constant":
            if len(params) != 1:
                raise ConfigError("constant frequency takes exactly one parameter (omega^2)")
            c = params[0]
            fn = lambda t: np.full_like(np.asarray(t, dtype=float), c)
        elif self.kind == "polynomial":
            if not params:
                raise ConfigError("polynomial frequency needs coefficients")
            poly = np.polynomial.Polynomial(params)
            fn = lambda t: poly(np.asarray(t, dtype=float))
        else:
            if self.samples is None or len(self.samples) != 2:
                raise ConfigError("tabulated frequency needs samples=(times, values)")
            ts = np.asarray(self.samples[0], dtype=float)
            vs = np.asarray(self.samples[1], dtype=float)
            if ts.size < 2 or ts.shape != vs.shape or not np.all(np.diff(ts) > 0):
                raise ConfigError("tabulated samples must be increasing and equally sized")
            if not np.all(np.isfinite(vs)):
                raise ConfigError("tabulated omega^2 values must be finite")
            interp = PchipInterpolator(ts, vs, extrapolate=False)
            lo, hi = ts[0], ts[-1]

            def fn(t):
                t = np.asarray(t, dtype=float)
                if np.any(t < lo) or np.any(t > hi):
                    raise DomainMismatch(f"t outside tabulated range [{lo}, {hi}]")
                return interp(t)

            object.__setattr__(self, "samples", (tuple(ts), tuple(vs)))
        object.__setattr__(self, "_fn", fn)

    @classmethod
    def constant(cls, omega2: float) -> "FrequencyModel":
        return cls("constant", (omega2,))

    @classmethod
    def zero(cls) -> "FrequencyModel":
        return cls("zero")

    @classmethod
    def polynomial(cls, coeffs: Sequence[float]) -> "FrequencyModel":
        return cls("polynomial", tuple(coeffs))

    @classmethod
    def tabulated(cls, times: Sequence[float], values: Sequence[float]) -> "FrequencyModel":
        return cls("tabulated", (), (tuple(times), tuple(values)))

    def __call__(self, t):
        out = self._fn(t)
        return float(out) if np.ndim(out) == 0 else out

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "parameters": list(self.parameters)}
        if self.samples is not None:
            d["samples"] = [list(self.samples[0]), list(self.samples[1])]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "FrequencyModel":
        samples = d.get("samples")
        if samples is not None:
            samples = (tuple(samples[0]), tuple(samples[1]))
        return cls(d["kind"], tuple(d.get("parameters", ())), samples)


@dataclass(frozen=True)
class SuperpositionCoefficients:
    """``q = a*q1 + b*q2``."""

    a: float = 1.0
    b: float = 0.0

    def __post_init__(self):
        if self.a == 0 and self.b == 0:
            raise ConfigError("superposition coefficients must not both vanish")


@dataclass(frozen=True)
class LinearBasis:
    """Two independent solutions sampled as ``(q, q_t)`` pairs on one grid."""

    q1: SampledPath
    q2: SampledPath
    wronskian: float
    t0: float

    def __post_init__(self):
        if self.wronskian == 0:
            raise ConfigError("basis Wronskian must be nonzero")
        if self.q1.grid.shape != self.q2.grid.shape or np.any(self.q1.grid != self.q2.grid):
            raise DomainMismatch("q1 and q2 must share a grid")

    @property
    def grid(self) -> np.ndarray:
        return self.q1.grid

    def at(self, t):
        """``(q1, q1_t, q2, q2_t)`` at ``t``; arrays in, arrays out."""
        a = np.asarray(self.q1.at(t))
        b = np.asarray(self.q2.at(t))
        return a[..., 0], a[..., 1], b[..., 0], b[..., 1]

    def wronskian_samples(self) -> np.ndarray:
        q1, q1t = self.q1.component(0), self.q1.component(1)
        q2, q2t = self.q2.component(0), self.q2.component(1)
        return q1 * q2t - q2 * q1t

    def combine(self, coeffs: SuperpositionCoefficients) -> SampledPath:
        """Sampled ``(q, q_t)`` for ``q = a q1 + b q2``."""
        a, b = coeffs.a, coeffs.b
        q1, q2 = self.q1, self.q2

        def dense(t):
            return a * np.asarray(q1.at(t)) + b * np.asarray(q2.at(t))

        return SampledPath(self.grid, a * q1.values + b * q2.values, dense)

    @classmethod
    def from_functions(
        cls,
        q1: Callable,
        q1_t: Callable,
        q2: Callable,
        q2_t: Callable,
        grid: Sequence[float],
        t0: float,
    ) -> "LinearBasis":
        """Basis from closed-form callables (each vectorised in ``t``)."""
        grid = np.asarray(grid, dtype=float)

        def pair(f, df):
            def dense(t):
                return np.stack([np.asarray(f(t), dtype=float), np.asarray(df(t), dtype=float)], axis=-1)

            return SampledPath(grid, dense(grid), dense)

        w = float(q1(t0) * q2_t(t0) - q2(t0) * q1_t(t0))
        return cls(pair(q1, q1_t), pair(q2, q2_t), w, float(t0))


def analytic_basis(
    freq: FrequencyModel, t0: float, grid: Sequence[float], wronskian: float = 1.0
) -> LinearBasis:
    """Closed-form canonical basis for the ``zero`` and ``constant`` kinds."""
    W = float(wronskian)
    if freq.kind == "zero" or (freq.kind == "constant" and freq.parameters[0] == 0):
        return LinearBasis.from_functions(
            lambda t: np.ones_like(np.asarray(t, dtype=float)),
            lambda t: np.zeros_like(np.asarray(t, dtype=float)),
            lambda t: W * (np.asarray(t, dtype=float) - t0),
            lambda t: np.full_like(np.asarray(t, dtype=float), W),
            grid,
            t0,
        )
    if freq.kind != "constant":
        raise ConfigError(f"no closed-form basis for kind {freq.kind!r}")
    k = freq.parameters[0]
    if k > 0:
        w = np.sqrt(k)
        return LinearBasis.from_functions(
            lambda t: np.cos(w * (np.asarray(t) - t0)),
            lambda t: -w * np.sin(w * (np.asarray(t) - t0)),
            lambda t: W * np.sin(w * (np.asarray(t) - t0)) / w,
            lambda t: W * np.cos(w * (np.asarray(t) - t0)),
            grid,
            t0,
        )
    g = np.sqrt(-k)
    return LinearBasis.from_functions(
        lambda t: np.cosh(g * (np.asarray(t) - t0)),
        lambda t: g * np.sinh(g * (np.asarray(t) - t0)),
        lambda t: W * np.sinh(g * (np.asarray(t) - t0)) / g,
        lambda t: W * np.cosh(g * (np.asarray(t) - t0)),
        grid,
        t0,
    )


def linear_rhs(freq: FrequencyModel):
    """Vector field of the pair ``(q1, q1_t, q2, q2_t)``."""

    def rhs(t, y):
        w2 = freq(t)
        return np.array([y[1], -w2 * y[0], y[3], -w2 * y[2]])

    return rhs


def solve_basis(
    freq: FrequencyModel,
    t0: float,
    t1: float,
    tol: ToleranceConfig = DEFAULT_TOL,
    wronskian: float = 1.0,
    t_eval: Optional[Sequence[float]] = None,
) -> LinearBasis:
    """Integrate the canonical basis on ``[t0, t1]``.

    Both solutions are integrated as one four-component system so they share
    a grid and error control. Dense output is attached to both paths.
    """
    if wronskian == 0:
        raise ConfigError("wronskian must be nonzero")
    path = integrate_ivp(linear_rhs(freq), [1.0, 0.0, 0.0, float(wronskian)], t0, t1, tol, t_eval)
    joint = path.dense
    q1 = SampledPath(path.grid, path.values[:, 0:2], lambda t: np.asarray(joint(t))[..., 0:2])
    q2 = SampledPath(path.grid, path.values[:, 2:4], lambda t: np.asarray(joint(t))[..., 2:4])
    return LinearBasis(q1, q2, float(wronskian), float(t0))


def wronskian_drift(basis: LinearBasis) -> float:
    """``max_t |W(t) - W|`` over the basis grid."""
    return float(np.max(np.abs(basis.wronskian_samples() - basis.wronskian)))


def find_zero_crossing(q: SampledPath, component: int = 0) -> Optional[float]:
    """First ``t`` where the sampled function vanishes or changes sign.

    Refined with Brent's method on the dense output when available, linear
    interpolation otherwise. Returns ``None`` when there is no crossing.
    """
    y = q.component(component)
    zeros = np.nonzero(y == 0.0)[0]
    flips = np.nonzero(np.sign(y[:-1]) * np.sign(y[1:]) < 0)[0]
    first_zero = zeros[0] if zeros.size else None
    first_flip = flips[0] if flips.size else None
    if first_flip is None and first_zero is None:
        return None
    if first_flip is None or (first_zero is not None and first_zero <= first_flip):
        return float(q.grid[first_zero])
    i = first_flip
    a, b = q.grid[i], q.grid[i + 1]
    if q.dense is not None:
        f = lambda t: float(np.asarray(q.at(t)).reshape(-1)[component])
        try:
            return float(brentq(f, a, b, xtol=1e-14))
        except ValueError:
            pass
    ya, yb = y[i], y[i + 1]
    return float(a - ya * (b - a) / (yb - ya))


def _require_nonvanishing(q: SampledPath):
    t = find_zero_crossing(q)
    if t is not None:
        raise SingularQ("q vanishes; 1/q^2 diverges", t)


def _inverse_square_integral(q: SampledPath, t0: float, tol: ToleranceConfig) -> np.ndarray:
    """``int_{t0}^{t} dt'/q^2`` at every grid point."""
    grid = q.grid
    if q.dense is not None:
        f = lambda t: 1.0 / float(np.asarray(q.at(t)).reshape(-1)[0]) ** 2
        running = cumulative_quadrature(f, grid, tol)
        offset = quadrature(f, grid[0], t0, tol) if t0 != grid[0] else 0.0
        return running - offset
    from scipy.integrate import cumulative_simpson

    idx = np.nonzero(np.isclose(grid, t0, rtol=0, atol=1e-14 * max(1.0, abs(t0))))[0]
    if idx.size == 0:
        raise DomainMismatch("t0 must be a grid point when q has no dense output")
    running = cumulative_simpson(1.0 / q.component(0) ** 2, x=grid, initial=0.0)
    return running - running[idx[0]]


def phase_integral(
    q: SampledPath, t0: float, tol: ToleranceConfig = DEFAULT_TOL
) -> SampledPath:
    """``Y(t) = int_{t0}^{t} dt'/q(t')^2`` on the grid of ``q``.

    Raises
    ------
    SingularQ
        If ``q`` crosses zero on the grid.
    """
    _require_nonvanishing(q)
    lo, hi = q.grid[0], q.grid[-1]
    if not lo <= t0 <= hi:
        raise DomainMismatch(f"t0={t0} outside the path span [{lo}, {hi}]")
    return SampledPath(q.grid, _inverse_square_integral(q, t0, tol))


def reduction_of_order(
    q1: SampledPath, W: float, t0: float, tol: ToleranceConfig = DEFAULT_TOL
) -> SampledPath:
    """Companion solution ``q2 = W q1 int_{t0}^{t} dt'/q1^2``.

    ``q1`` carries ``(q1, q1_t)`` columns (a bare ``q1`` column gets its
    derivative from ``numpy.gradient``). The result carries ``(q2, q2_t)``
    with ``q2_t = W (q1_t Y + 1/q1)``; its Wronskian with ``q1`` is ``W``.
    """
    Y = phase_integral(q1, t0, tol).values
    y = q1.component(0)
    yt = q1.component(1) if q1.ncomp > 1 else np.gradient(y, q1.grid, edge_order=2)
    q2 = W * y * Y
    q2t = W * (yt * Y + 1.0 / y)
    return SampledPath(q1.grid, np.column_stack([q2, q2t]))
