"""Variational and Hamiltonian structure, and the radial-oscillator example.

Charts
------
``tau`` chart: ``tau = 1/Y`` is the time, ``r(tau)`` the coordinate and
``p = tau^2 dr/dtau`` the momentum. Then ``r_Y = -tau^2 dr/dtau = -p``.

``Y`` chart: the same Lagrangian and Hamiltonian rewritten with ``Y``;
Hamilton's equations keep ``tau`` as the time, so in ``Y`` they pick up
``dtau/dY = -1/Y^2``.

The canonical-variable invariant carries no factor 1/2: it equals twice
the half-normalised :func:`~reidlab.invariant.el_invariant_ef`.

Partial derivatives for the Poisson-bracket check are central differences
with a relative step (``1e-6`` by default).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    ConfigError,
    NegativeRadicand,
    NonpositiveTau,
    NonpositiveY,
    SingularQ,
    SingularQtilde,
    SingularR,
    SingularRtilde,
    Unsupported,
)
from .invariant import _higher_physical_raw
from .linear import FrequencyModel, LinearBasis, find_zero_crossing
from .numerics import SampledPath, fd_derivatives, fd_residual
from .reid import ReidParams, ReidTrajectory

__all__ = [
    "CanonicalState",
    "KeplerParams",
    "lagrangian_tau",
    "hamiltonian_tau",
    "momentum_tau",
    "lagrangian_Y",
    "hamiltonian_Y",
    "hamilton_equations_Y",
    "invariant_canonical",
    "normal_form_residual",
    "euler_lagrange_residual",
    "reid_hamiltonian",
    "poisson_conservation_check",
    "radial_solution",
    "radial_velocity",
    "radial_invariant",
    "energy_terms",
    "radial_residual",
    "nonlinear_sign",
]

CANONICAL_INVARIANT_FACTOR = 2.0


@dataclass(frozen=True)
class CanonicalState:
    coordinate: float
    momentum: float
    independent_var: float
    chart: str

    def __post_init__(self):
        if self.chart not in ("tau", "Y", "physical"):
            raise ConfigError(f"unknown chart {self.chart!r}")

    def to_chart(self, chart: str) -> "CanonicalState":
        """Switch between the ``tau`` and ``Y`` charts (momentum is shared)."""
        if chart == self.chart:
            return self
        if {chart, self.chart} != {"tau", "Y"}:
            raise Unsupported("only tau <-> Y chart changes are defined")
        if self.independent_var <= 0:
            raise NonpositiveTau("chart change needs a positive independent variable", self.independent_var)
        return CanonicalState(self.coordinate, self.momentum, 1.0 / self.independent_var, chart)


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def _check_tau_r(tau, r):
    if np.any(np.asarray(tau) <= 0):
        raise NonpositiveTau("tau must be positive")
    if np.any(np.asarray(r) <= 0):
        raise SingularRtilde("rtilde must be positive")


def _c(params: ReidParams, W: float) -> float:
    return params.coupling(W) / (params.m - 1)


def lagrangian_tau(tau, rtilde, rtilde_dot, params: ReidParams, W: float):
    tau, r, rd = (np.asarray(v, dtype=float) for v in (tau, rtilde, rtilde_dot))
    _check_tau_r(tau, r)
    m = params.m
    return _scalar(0.5 * tau**-2 * (tau**4 * rd**2 - _c(params, W) * tau ** (-(m - 2)) * r ** (2 - 2 * m)))


def momentum_tau(tau, rtilde_dot):
    """``p = dL/d(rdot) = tau^2 rdot``."""
    return _scalar(np.asarray(tau, dtype=float) ** 2 * np.asarray(rtilde_dot, dtype=float))


def hamiltonian_tau(tau, p, rtilde, params: ReidParams, W: float):
    tau, p, r = (np.asarray(v, dtype=float) for v in (tau, p, rtilde))
    _check_tau_r(tau, r)
    m = params.m
    return _scalar(0.5 * tau**-2 * (p**2 + _c(params, W) * tau ** (-(m - 2)) * r ** (2 - 2 * m)))


def _check_Y_r(Y, r):
    if np.any(np.asarray(Y) <= 0):
        raise NonpositiveY("Y must be positive")
    if np.any(np.asarray(r) <= 0):
        raise SingularRtilde("rtilde must be positive")


def lagrangian_Y(Y, rtilde_Y, rtilde, params: ReidParams, W: float):
    Y, rY, r = (np.asarray(v, dtype=float) for v in (Y, rtilde_Y, rtilde))
    _check_Y_r(Y, r)
    m = params.m
    return _scalar(0.5 * Y**2 * (rY**2 - _c(params, W) * Y ** (m - 2) * r ** (2 - 2 * m)))


def hamiltonian_Y(Y, p, rtilde, params: ReidParams, W: float):
    Y, p, r = (np.asarray(v, dtype=float) for v in (Y, p, rtilde))
    _check_Y_r(Y, r)
    m = params.m
    return _scalar(0.5 * Y**2 * (p**2 + _c(params, W) * Y ** (m - 2) * r ** (2 - 2 * m)))


def _central(f, x, rel_step):
    x = np.asarray(x, dtype=float)
    h = rel_step * np.maximum(1.0, np.abs(x))
    return (f(x + h) - f(x - h)) / (2 * h)


def hamilton_equations_Y(Y, p, rtilde, params: ReidParams, W: float, rel_step: float = 1e-6):
    """``(dr/dY, dp/dY)`` generated by :func:`hamiltonian_Y`.

    Partials are central differences; the factor ``dtau/dY = -1/Y^2``
    converts Hamilton's equations in ``tau`` to ``Y``.
    """
    H = lambda pp, rr: np.asarray(hamiltonian_Y(Y, pp, rr, params, W))
    dH_dp = _central(lambda x: H(x, rtilde), p, rel_step)
    dH_dr = _central(lambda x: H(p, x), rtilde, rel_step)
    Y = np.asarray(Y, dtype=float)
    return _scalar(-dH_dp / Y**2), _scalar(dH_dr / Y**2)


def invariant_canonical(tau, rtilde, rtilde_dot, params: ReidParams, W: float):
    """``tau^3 rdot^2 + tau^2 rdot r + c tau^(1-m) r^(2-2m)`` (no factor 1/2)."""
    tau, r, rd = (np.asarray(v, dtype=float) for v in (tau, rtilde, rtilde_dot))
    _check_tau_r(tau, r)
    m = params.m
    return _scalar(tau**3 * rd**2 + tau**2 * rd * r + _c(params, W) * tau ** (1 - m) * r ** (2 - 2 * m))


def normal_form_residual(path: SampledPath, params: ReidParams, W: float) -> np.ndarray:
    """Residual of ``tau r'' + 2 r' - A tau^(-m-1) r^(1-2m)`` on a sampled ``r(tau)``."""
    A = params.coupling(W)
    m = params.m
    return fd_residual(
        path, lambda t, r, rd, rdd: t * rdd + 2 * rd - A * t ** (-m - 1) * r ** (1 - 2 * m)
    )


def euler_lagrange_residual(
    path: SampledPath, params: ReidParams, W: float, rel_step: float = 1e-6
) -> np.ndarray:
    """``d/dtau (dL/drdot) - dL/dr`` along a sampled ``r(tau)``.

    Velocities come from central differences of the path, the partials of
    :func:`lagrangian_tau` from central differences of the function, and the
    outer ``d/dtau`` from a second central difference over the grid.
    """
    tau, r, rd, _ = fd_derivatives(path)
    dL_drd = _central(lambda x: np.asarray(lagrangian_tau(tau, r, x, params, W)), rd, rel_step)
    dL_dr = _central(lambda x: np.asarray(lagrangian_tau(tau, x, rd, params, W)), r, rel_step)
    inner = SampledPath(tau, dL_drd)
    _, _, ddt, _ = fd_derivatives(inner)
    return np.abs(ddt - dL_dr[1:-1])


def reid_hamiltonian(
    t,
    qtilde,
    p,
    basis: LinearBasis,
    Y,
    params: ReidParams,
    freq: FrequencyModel,
    q=None,
):
    """``H_R = 1/2 [p^2 + omega2 qtilde^2 + alpha (q^2 W Y)^(m-2) qtilde^(2-2m)/(m-1)]``.

    ``q`` defaults to ``q1(t)``; with ``Y = q2/(W q1)`` the product
    ``q1^2 W Y`` is ``q1 q2`` and Hamilton's equations give the Reid equation.
    """
    qtilde = np.asarray(qtilde, dtype=float)
    if np.any(qtilde <= 0):
        raise SingularQtilde("qtilde must be positive")
    if q is None:
        q = basis.at(t)[0]
    W = basis.wronskian
    m = params.m
    out = 0.5 * (
        np.asarray(p) ** 2
        + freq(t) * qtilde**2
        + params.alpha * (np.asarray(q) ** 2 * W * np.asarray(Y)) ** (m - 2) * qtilde ** (2 - 2 * m) / (m - 1)
    )
    return _scalar(out)


def poisson_conservation_check(
    trajectory: ReidTrajectory, params: Optional[ReidParams] = None, rel_step: float = 1e-6
) -> float:
    """``max |dI/dt|`` over the grid with ``dI/dt = dI/dt|_explicit + {I, H_R}``.

    ``I`` is the higher-order physical invariant built on ``q1`` and
    ``Y = q2/(W q1)`` taken from the trajectory's dense basis; every partial
    is a central difference.
    """
    params = trajectory.params if params is None else params
    basis = trajectory.basis
    crossing = find_zero_crossing(basis.q1)
    if crossing is not None:
        raise SingularQ("q1 vanishes; the invariant is singular", crossing)
    W = basis.wronskian
    freq = trajectory.freq
    t = trajectory.grid
    qt = trajectory.aux.component(0)
    pt = trajectory.aux.component(1)

    def I(tt, x, y):
        q1, q1t, q2, _ = basis.at(tt)
        return _higher_physical_raw(q1, q1t, x, y, q2 / (W * q1), params, W)

    def H(tt, x, y):
        q1, _, q2, _ = basis.at(tt)
        return reid_hamiltonian(tt, x, y, basis, q2 / (W * q1), params, freq, q=q1)

    dI_dt = _central(lambda s: I(s, qt, pt), t, rel_step)
    dI_dq = _central(lambda s: I(t, s, pt), qt, rel_step)
    dI_dp = _central(lambda s: I(t, qt, s), pt, rel_step)
    dH_dq = _central(lambda s: H(t, s, pt), qt, rel_step)
    dH_dp = _central(lambda s: H(t, qt, s), pt, rel_step)
    total = dI_dt + dI_dq * dH_dp - dI_dp * dH_dq
    return float(np.max(np.abs(total)))


@dataclass(frozen=True)
class KeplerParams:
    """Radial oscillator with potential ``V = K R^epsilon``.

    Only the integrable case ``epsilon = 2``, ``K = -M/8`` is supported;
    ``K`` defaults to ``-M/8``.
    """

    M: float
    l: float
    m: int
    K: Optional[float] = None
    epsilon: float = 2.0

    def __post_init__(self):
        if not self.M > 0:
            raise ConfigError("M must be positive")
        if int(self.m) != self.m or self.m < 2:
            raise ConfigError("m must be an integer >= 2")
        object.__setattr__(self, "m", int(self.m))
        if self.epsilon != 2:
            raise Unsupported(f"only epsilon = 2 is integrable here, got {self.epsilon}")
        if self.K is None:
            object.__setattr__(self, "K", -self.M / 8.0)
        elif not np.isclose(self.K, -self.M / 8.0, rtol=1e-14, atol=0):
            raise Unsupported("only K = -M/8 is supported")

    @property
    def sign(self) -> int:
        return 1 if (self.m - 2) % 2 == 0 else -1

    @property
    def coupling(self) -> float:
        """Right-hand-side coefficient ``(-1)^(m-2) l^2 / M^2``."""
        return self.sign * self.l**2 / self.M**2

    @property
    def c(self) -> float:
        return self.coupling / (self.m - 1)


def _radial_radicand(t, kp: KeplerParams):
    t = np.asarray(t, dtype=float)
    X = np.exp(0.5 * kp.m * t) + kp.c * np.exp(-0.5 * kp.m * t)
    if np.any(X <= 0):
        bad = np.asarray(X <= 0).reshape(-1)
        raise NegativeRadicand("radial radicand not positive", float(t.reshape(-1)[np.argmax(bad)]))
    return X


def radial_solution(t, kepler: KeplerParams):
    """``R(t) = (e^(mt/2) + c e^(-mt/2))^(1/m)``, ``c = (-1)^(m-2) l^2 / (M^2 (m-1))``."""
    X = _radial_radicand(t, kepler)
    return _scalar(X ** (1.0 / kepler.m))


def radial_velocity(t, kepler: KeplerParams):
    m = kepler.m
    t = np.asarray(t, dtype=float)
    X = _radial_radicand(t, kepler)
    return _scalar(0.5 * X ** (1.0 / m - 1) * (np.exp(0.5 * m * t) - kepler.c * np.exp(-0.5 * m * t)))


def radial_invariant(R, R_dot, kepler: KeplerParams):
    """``1/2 [Rdot^2 + c R^(2-2m) - R^2/4]``, the energy per unit mass."""
    R = np.asarray(R, dtype=float)
    if np.any(R <= 0):
        raise SingularR("R must be positive")
    m = kepler.m
    return _scalar(0.5 * (np.asarray(R_dot) ** 2 + kepler.c * R ** (2 - 2 * m) - 0.25 * R**2))


def energy_terms(R, R_dot, kepler: KeplerParams):
    """``(kinetic, nonlinear, potential)`` energies; their sum is ``M * I``."""
    R = np.asarray(R, dtype=float)
    if np.any(R <= 0):
        raise SingularR("R must be positive")
    M, m = kepler.M, kepler.m
    kinetic = 0.5 * M * np.asarray(R_dot) ** 2
    nonlinear = kepler.sign * kepler.l**2 / (2 * (m - 1) * M) * R ** (2 - 2 * m)
    potential = kepler.K * R**kepler.epsilon
    return _scalar(kinetic), _scalar(nonlinear), _scalar(potential)


def radial_residual(path: SampledPath, kepler: KeplerParams) -> np.ndarray:
    """Residual of ``Rddot + V'(R)/M - (-1)^(m-2) l^2 R^(1-2m) / M^2``."""
    M, K, m = kepler.M, kepler.K, kepler.m
    g = kepler.coupling
    return fd_residual(path, lambda t, R, Rd, Rdd: Rdd + 2 * K * R / M - g * R ** (1 - 2 * m))


def nonlinear_sign(kepler: KeplerParams) -> int:
    """+1 (repulsive) for even m, -1 (attractive) for odd m; 0 when l = 0."""
    return 0 if kepler.l == 0 else kepler.sign
