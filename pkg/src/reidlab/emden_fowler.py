"""Emden-Fowler form of the Reid system and its solution machinery.

With ``A = alpha W^(m-2)`` the Reid system is equivalent to::

    r_YY = A Y^(m-2) r^(1-2m),      r = qtilde/q1,  Y = int dt/q1^2

Coordinate chain
----------------
``t -> (Y, r, r_Y)``: ``r = qtilde/q`` and ``r_Y = q qtilde_t - qtilde q_t``
(the Wronskian of ``q`` and ``qtilde`` equals ``q^2 dr/dt``).

``(Y, r, r_Y) -> (eta, Q, Q_eta)``: ``tau = 1/Y = e^eta`` and
``Q = r sqrt(tau) = r / sqrt(Y)``. Since ``dY/deta = -Y``::

    Q_eta = -Y dQ/dY = Q/2 - sqrt(Y) r_Y
    r_Y   = (Q/2 - Q_eta) / sqrt(Y)

In these variables the equation becomes the constant-coefficient
hyperbolic Reid equation ``Q_etaeta - Q/4 = A Q^(1-2m)`` with first
integral ``Q_eta^2 = P(Q) = Q^2/4 - A Q^(2-2m)/(m-1) + 2I``.

Abel chain
----------
``z = (Y/r^2)^m``, ``u = Y r_Y / r``, ``v = 1/(u - 1/2)``, ``phi = v^-2``
linearises the equation; its solution is
``phi = A z/(1-m) + J z^(1/m) + 1/4`` where the integration constant ``J``
is twice the half-normalised invariant.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import (
    ConfigError,
    DegenerateU,
    NegativeRadicand,
    NonFiniteIntegrand,
    NonpositiveP,
    NonpositiveY,
    SingularQ,
    SingularRtilde,
)
from .linear import LinearBasis
from .numerics import (
    DEFAULT_TOL,
    SampledPath,
    ToleranceConfig,
    cumulative_quadrature,
    fd_residual,
)
from .reid import ReidParams

__all__ = [
    "EFState",
    "HyperbolicState",
    "ParametricSolution",
    "ReidRecovery",
    "AbelChain",
    "AbelChainState",
    "to_ef",
    "ef_residual",
    "ef_to_hyperbolic",
    "hyperbolic_to_ef",
    "hyperbolic_solution",
    "hyperbolic_solution_derivative",
    "hyperbolic_residual",
    "p_polynomial",
    "parametric_solution",
    "reid_recovery",
    "abel_chain",
    "abel_relation_residual",
]


def _first(mask, values):
    mask = np.asarray(mask).reshape(-1)
    return float(np.asarray(values, dtype=float).reshape(-1)[np.argmax(mask)])


@dataclass(frozen=True)
class EFState:
    """Emden-Fowler coordinates; fields may be scalars or equal-shape arrays."""

    Y: np.ndarray
    rtilde: np.ndarray
    rtilde_Y: np.ndarray


@dataclass(frozen=True)
class HyperbolicState:
    eta: np.ndarray
    Qtilde: np.ndarray
    Qtilde_eta: np.ndarray


def to_ef(q, q_t, qtilde, qtilde_t, Y) -> EFState:
    q, q_t, qtilde, qtilde_t, Y = (np.asarray(v, dtype=float) for v in (q, q_t, qtilde, qtilde_t, Y))
    if np.any(q == 0):
        raise SingularQ("q = 0 in r = qtilde/q")
    return EFState(Y, qtilde / q, q * qtilde_t - qtilde * q_t)


def ef_residual(path: SampledPath, params: ReidParams, W: float) -> np.ndarray:
    """Finite-difference residual of ``r_YY - A Y^(m-2) r^(1-2m)`` on a sampled ``r(Y)``."""
    if np.any(path.component(0) <= 0):
        raise SingularRtilde("rtilde must be positive", _first(path.component(0) <= 0, path.grid))
    A = params.coupling(W)
    m = params.m
    return fd_residual(path, lambda Y, r, rY, rYY: rYY - A * Y ** (m - 2) * r ** (1 - 2 * m))


def ef_to_hyperbolic(state: EFState) -> HyperbolicState:
    Y = np.asarray(state.Y, dtype=float)
    if np.any(Y <= 0):
        raise NonpositiveY("the hyperbolic chart needs Y > 0", _first(Y <= 0, Y))
    sY = np.sqrt(Y)
    r = np.asarray(state.rtilde, dtype=float)
    rY = np.asarray(state.rtilde_Y, dtype=float)
    Q = r / sY
    return HyperbolicState(-np.log(Y), Q, 0.5 * Q - sY * rY)


def hyperbolic_to_ef(state: HyperbolicState) -> EFState:
    eta = np.asarray(state.eta, dtype=float)
    Y = np.exp(-eta)
    sY = np.sqrt(Y)
    Q = np.asarray(state.Qtilde, dtype=float)
    Qe = np.asarray(state.Qtilde_eta, dtype=float)
    return EFState(Y, Q * sY, (0.5 * Q - Qe) / sY)


def _hyperbolic_radicand(eta, params: ReidParams, W: float):
    eta = np.asarray(eta, dtype=float)
    m = params.m
    c = params.coupling(W) / (m - 1)
    X = np.exp(0.5 * m * eta) + c * np.exp(-0.5 * m * eta)
    if np.any(X <= 0):
        raise NegativeRadicand("hyperbolic Reid radicand not positive", _first(X <= 0, eta))
    return X, c


def hyperbolic_solution(eta, params: ReidParams, W: float):
    """``Q(eta) = (e^(m eta/2) + A e^(-m eta/2)/(m-1))^(1/m)``."""
    X, _ = _hyperbolic_radicand(eta, params, W)
    out = X ** (1.0 / params.m)
    return float(out) if np.ndim(out) == 0 else out


def hyperbolic_solution_derivative(eta, params: ReidParams, W: float):
    X, c = _hyperbolic_radicand(eta, params, W)
    m = params.m
    eta = np.asarray(eta, dtype=float)
    out = 0.5 * X ** (1.0 / m - 1.0) * (np.exp(0.5 * m * eta) - c * np.exp(-0.5 * m * eta))
    return float(out) if np.ndim(out) == 0 else out


def hyperbolic_residual(path: SampledPath, params: ReidParams, W: float) -> np.ndarray:
    """Residual of ``Q_etaeta - Q/4 - A Q^(1-2m)`` on a sampled ``Q(eta)``."""
    A = params.coupling(W)
    m = params.m
    return fd_residual(path, lambda e, Q, Qe, Qee: Qee - 0.25 * Q - A * Q ** (1 - 2 * m))


def p_polynomial(Qtilde, params: ReidParams, W: float, I: float):
    """``P(Q) = Q^2/4 - A Q^(2-2m)/(m-1) + 2I``; may be negative."""
    Q = np.asarray(Qtilde, dtype=float)
    m = params.m
    out = 0.25 * Q**2 - params.coupling(W) / (m - 1) * Q ** (2 - 2 * m) + 2.0 * I
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class ParametricSolution:
    """Emden-Fowler solution parametrised by ``Qtilde``.

    ``Y`` and ``rtilde`` are the exponential parametric forms with the
    quadrature of ``P^(-1/2)`` started at the left end of the range.
    """

    Qtilde_grid: np.ndarray
    Y_of_Q: np.ndarray
    rtilde_of_Q: np.ndarray
    branch: int
    tau0: float
    invariant_I: float
    theta_integral: np.ndarray

    def identity_gap(self) -> float:
        """``max |r - Q sqrt(Y)|`` over the grid."""
        return float(np.max(np.abs(self.rtilde_of_Q - self.Qtilde_grid * np.sqrt(self.Y_of_Q))))

    def as_path(self) -> SampledPath:
        """``r(Y)`` as a path over increasing ``Y``."""
        order = np.argsort(self.Y_of_Q)
        return SampledPath(self.Y_of_Q[order], self.rtilde_of_Q[order])


def _parse_branch(branch) -> int:
    if branch in (1, "+", "plus"):
        return 1
    if branch in (-1, "-", "minus"):
        return -1
    raise ConfigError(f"branch must be '+' or '-', got {branch!r}")


def parametric_solution(
    params: ReidParams,
    W: float,
    I: float,
    Q_range: Tuple[float, float],
    branch="+",
    tau0: float = 1.0,
    n: int = 1001,
    tol: ToleranceConfig = DEFAULT_TOL,
    p_min: float = 1e-10,
) -> ParametricSolution:
    """Tabulate ``Y(Q)`` and ``r(Q)`` from the parametric quadrature.

    ``Y = exp(-s J(Q)) / tau0`` and ``r = Q exp(-s J(Q)/2) / sqrt(tau0)``
    with ``J(Q) = int_{lo}^{Q} P^(-1/2)``. ``s = +1`` (branch ``'+'``)
    follows the solution with ``Q_eta = +sqrt(P)``.

    Raises
    ------
    NonpositiveP
        ``P`` drops below ``p_min`` somewhere in the range (turning point).
    """
    lo, hi = (float(v) for v in Q_range)
    if not 0 < lo < hi:
        raise ConfigError(f"Q_range must satisfy 0 < lo < hi, got {Q_range!r}")
    if not tau0 > 0:
        raise ConfigError("tau0 must be positive")
    if n < 2:
        raise ConfigError("n must be at least 2")
    s = _parse_branch(branch)
    Q = np.linspace(lo, hi, int(n))
    probe = np.linspace(lo, hi, 8 * int(n) + 1)
    P_probe = p_polynomial(probe, params, W, I)
    if np.any(P_probe < p_min):
        raise NonpositiveP("P(Qtilde) is not positive: turning point in range", _first(P_probe < p_min, probe))

    def theta(x):
        return p_polynomial(x, params, W, I) ** -0.5

    try:
        J = cumulative_quadrature(theta, Q, tol)
    except NonFiniteIntegrand as exc:
        raise NonpositiveP("P(Qtilde) is not positive inside a panel", exc.where) from exc
    Y = np.exp(-s * J) / tau0
    r = Q / np.sqrt(tau0) * np.exp(-0.5 * s * J)
    return ParametricSolution(Q, Y, r, s, float(tau0), float(I), J)


@dataclass(frozen=True)
class ReidRecovery:
    Y: np.ndarray
    Qtilde: np.ndarray
    rtilde: np.ndarray
    t: Optional[np.ndarray] = None
    qtilde: Optional[np.ndarray] = None


def reid_recovery(
    params: ReidParams,
    W: float,
    Y_grid: Optional[Sequence[float]] = None,
    basis: Optional[LinearBasis] = None,
) -> ReidRecovery:
    """Reid's superposition rebuilt from the hyperbolic solution.

    ``Q(Y) = (Y^(-m/2) + A Y^(m/2)/(m-1))^(1/m)`` and ``r = Q sqrt(Y)``. With
    a ``basis``, ``Y = q2/(W q1)`` is taken on the basis grid and
    ``qtilde = Q |q1| sqrt(Y)`` is returned as well (only points with
    ``Y > 0`` are kept).
    """
    t = qtilde = None
    if basis is not None:
        if basis.wronskian != W:
            raise ConfigError("W disagrees with the basis Wronskian")
        q1, q2 = basis.q1.component(0), basis.q2.component(0)
        if np.any(q1 == 0):
            raise SingularQ("q1 = 0", _first(q1 == 0, basis.grid))
        Yb = q2 / (W * q1)
        keep = Yb > 0
        t, Y, q1 = basis.grid[keep], Yb[keep], q1[keep]
    elif Y_grid is None:
        raise ConfigError("give Y_grid or basis")
    else:
        Y = np.asarray(Y_grid, dtype=float)
    if np.any(Y <= 0):
        raise NonpositiveY("Y must be positive", _first(Y <= 0, Y))
    m = params.m
    c = params.coupling(W) / (m - 1)
    X = Y ** (-0.5 * m) + c * Y ** (0.5 * m)
    if np.any(X <= 0):
        raise NegativeRadicand("recovery radicand not positive", _first(X <= 0, Y))
    Q = X ** (1.0 / m)
    sY = np.sqrt(Y)
    if basis is not None:
        qtilde = Q * np.abs(q1) * sY
    return ReidRecovery(Y, Q, Q * sY, t, qtilde)


@dataclass(frozen=True)
class AbelChain:
    """Abel-chain variables along a path and the fitted invariant.

    ``v`` is NaN where ``u = 1/2`` (see ``defined``); ``phi`` uses its
    continuous extension ``(u - 1/2)^2`` there.
    """

    z: np.ndarray
    u: np.ndarray
    v: np.ndarray
    phi: np.ndarray
    defined: np.ndarray
    integration_constant: float
    invariant: float
    fit_residual: float


# the chain variables (z, u, v, phi) sampled along a path
AbelChainState = AbelChain


def abel_chain(states: EFState, params: ReidParams, W: float, u_tol: float = 1e-12) -> AbelChain:
    """Compute ``(z, u, v, phi)`` and least-squares fit the invariant.

    The fit solves ``phi - A z/(1-m) - 1/4 = J z^(1/m)`` for the single
    unknown ``J``; the returned ``invariant`` is ``J/2`` to match the
    half-normalised forms elsewhere.

    Raises
    ------
    DegenerateU
        Every sample has ``|u - 1/2| < u_tol``. This is exactly the
        square-root ray ``r = k sqrt(Y)`` where ``v`` is undefined.
    """
    Y = np.atleast_1d(np.asarray(states.Y, dtype=float))
    r = np.atleast_1d(np.asarray(states.rtilde, dtype=float))
    rY = np.atleast_1d(np.asarray(states.rtilde_Y, dtype=float))
    if np.any(r <= 0):
        raise SingularRtilde("rtilde must be positive", _first(r <= 0, Y))
    if np.any(Y <= 0):
        raise NonpositiveY("the Abel chain needs Y > 0", _first(Y <= 0, Y))
    m = params.m
    A = params.coupling(W)
    w = Y / r**2
    z = w**m
    u = Y * rY / r
    d = u - 0.5
    defined = np.abs(d) >= u_tol
    if not np.any(defined):
        raise DegenerateU("u = 1/2 along the whole path (square-root ray)", float(Y[0]))
    v = np.full_like(d, np.nan)
    v[defined] = 1.0 / d[defined]
    phi = d**2
    rhs = phi - A / (1 - m) * z - 0.25
    J = float(np.dot(rhs, w) / np.dot(w, w))
    resid = float(np.max(np.abs(rhs - J * w)))
    return AbelChain(z, u, v, phi, defined, J, 0.5 * J, resid)


def abel_relation_residual(states: EFState, params: ReidParams, W: float, I) -> np.ndarray:
    """``phi - A z/(1-m) - 2I z^(1/m) - 1/4`` pointwise, ``I`` half-normalised."""
    Y = np.asarray(states.Y, dtype=float)
    r = np.asarray(states.rtilde, dtype=float)
    rY = np.asarray(states.rtilde_Y, dtype=float)
    m = params.m
    A = params.coupling(W)
    w = Y / r**2
    phi = (Y * rY / r - 0.5) ** 2
    return phi - A / (1 - m) * w**m - 2.0 * np.asarray(I) * w - 0.25
