"""Ermakov-Lewis invariants in all their coordinate forms.

Normalisation: every function here returns the *half-normalised* invariant,
e.g. for ``m = 2``::

    I = 1/2 [ (q qtilde_t - qtilde q_t)^2 + alpha (q/qtilde)^2 ]

The classical textbook form without the 1/2 is ``2 I``; use
:func:`classical_form` to convert.

Higher-order forms take ``q = q1`` (the basis element whose reduction-of-order
partner is ``q2``) and ``Y = q2 / (W q1)``. With ``A = alpha W^(m-2)`` and
``c = A / (m-1)``:

* physical:    ``1/2 [w^2 Y - (qtilde/q) w + c (q^2 Y / qtilde^2)^(m-1)]``
  with ``w = q qtilde_t - qtilde q_t``
* Emden-Fowler: ``1/2 [Y r_Y^2 - r_Y r + c (Y / r^2)^(m-1)]``
* hyperbolic:  ``1/2 [Q_eta^2 + c Q^(2-2m) - Q^2/4]``
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from .errors import (
    NoRealBranch,
    NonpositiveY,
    PathTooShort,
    SingularQ,
    SingularQtilde,
    SingularRtilde,
    ZeroA,
)
from .linear import SuperpositionCoefficients, find_zero_crossing
from .numerics import SampledPath
from .reid import ReidParams, ReidTrajectory, real_root

__all__ = [
    "Formulation",
    "InvariantValue",
    "InvariantReport",
    "classical_form",
    "el_invariant_m2",
    "el_invariant_constant_m2",
    "positivity_condition",
    "el_invariant_hyperbolic",
    "el_invariant_ef",
    "el_invariant_higher_physical",
    "polyanin_invariant",
    "sample_invariant",
    "drift_report",
]


class Formulation(str, Enum):
    M2_PHYSICAL = "m2_physical"
    M2_CONSTANT = "m2_constant"
    HIGHER_PHYSICAL = "higher_physical"
    HIGHER_EF = "higher_ef"
    HIGHER_HYPERBOLIC = "higher_hyperbolic"
    POLYANIN_CONSTANT = "polyanin_constant"


@dataclass(frozen=True)
class InvariantValue:
    value: float
    formulation: Formulation

    def __post_init__(self):
        if not np.isfinite(self.value):
            raise ValueError("invariant value must be finite")


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def _check_nonzero(x, error, label, where=None):
    x = np.asarray(x)
    if np.any(x == 0):
        loc = None
        if where is not None:
            loc = float(np.asarray(where, dtype=float).reshape(-1)[np.argmax((x == 0).reshape(-1))])
        raise error(f"{label} = 0", loc)


def _check_positive(x, error, label, where=None):
    x = np.asarray(x)
    if np.any(x <= 0):
        loc = None
        if where is not None:
            loc = float(np.asarray(where, dtype=float).reshape(-1)[np.argmax((x <= 0).reshape(-1))])
        raise error(f"{label} must be positive", loc)


def classical_form(I):
    """Convert a half-normalised invariant to the form without the 1/2."""
    return 2 * I


def el_invariant_m2(q, q_t, qtilde, qtilde_t, alpha):
    """Ermakov invariant for ``m = 2``; finite at zeros of ``q``."""
    q, q_t, qtilde, qtilde_t = (np.asarray(v, dtype=float) for v in (q, q_t, qtilde, qtilde_t))
    _check_nonzero(qtilde, SingularQtilde, "qtilde")
    w = q * qtilde_t - qtilde * q_t
    return _scalar(0.5 * (w**2 + alpha * (q / qtilde) ** 2))


def el_invariant_constant_m2(coeffs: SuperpositionCoefficients, alpha: float, W: float) -> float:
    """Value ``(a^2 alpha + b^2 W^2) / 2`` of the ``m = 2`` invariant on ``q = a q1 + b q2``."""
    a, b = coeffs.a, coeffs.b
    return 0.5 * (a * a * alpha + b * b * W * W)


def positivity_condition(coeffs: SuperpositionCoefficients, alpha: float, W: float) -> bool:
    """Whether ``alpha > -(b W / a)^2``, i.e. whether the ``m = 2`` invariant is positive.

    Evaluated in the multiplied-out form ``a^2 alpha + b^2 W^2 > 0`` so the
    verdict agrees bit-for-bit with :func:`el_invariant_constant_m2`.
    """
    a, b = coeffs.a, coeffs.b
    if a == 0:
        raise ZeroA("condition alpha > -(bW/a)^2 is undefined for a = 0")
    return bool(a * a * alpha + b * b * W * W > 0)


def el_invariant_hyperbolic(Qtilde, Qtilde_eta, params: ReidParams, W: float):
    Q = np.asarray(Qtilde, dtype=float)
    Qe = np.asarray(Qtilde_eta, dtype=float)
    _check_positive(Q, SingularQtilde, "Qtilde")
    m = params.m
    c = params.coupling(W) / (m - 1)
    return _scalar(0.5 * (Qe**2 + c * Q ** (2 - 2 * m) - 0.25 * Q**2))


def el_invariant_ef(rtilde, rtilde_Y, Y, params: ReidParams, W: float):
    """Invariant in Emden-Fowler variables.

    ``Y = 0`` is accepted (the expression is polynomial in ``Y``); negative
    ``Y`` raises :class:`NonpositiveY`.
    """
    r = np.asarray(rtilde, dtype=float)
    rY = np.asarray(rtilde_Y, dtype=float)
    Y = np.asarray(Y, dtype=float)
    _check_positive(r, SingularRtilde, "rtilde")
    if np.any(Y < 0):
        raise NonpositiveY("Y must be non-negative", float(Y.reshape(-1)[np.argmax((Y < 0).reshape(-1))]))
    m = params.m
    c = params.coupling(W) / (m - 1)
    return _scalar(0.5 * (Y * rY**2 - rY * r + c * (Y / r**2) ** (m - 1)))


def el_invariant_higher_physical(q, q_t, qtilde, qtilde_t, Y, params: ReidParams, W: float):
    """Higher-order invariant in the original time variable.

    Algebraically identical to :func:`el_invariant_ef` under
    ``r = qtilde/q`` and ``r_Y = q qtilde_t - qtilde q_t``.
    """
    q, q_t, qtilde, qtilde_t, Y = (np.asarray(v, dtype=float) for v in (q, q_t, qtilde, qtilde_t, Y))
    _check_nonzero(q, SingularQ, "q")
    _check_positive(qtilde, SingularQtilde, "qtilde")
    if np.any(Y < 0):
        raise NonpositiveY("Y must be non-negative", float(Y.reshape(-1)[np.argmax((Y < 0).reshape(-1))]))
    return _scalar(_higher_physical_raw(q, q_t, qtilde, qtilde_t, Y, params, W))


def _higher_physical_raw(q, q_t, qtilde, qtilde_t, Y, params: ReidParams, W: float):
    m = params.m
    c = params.coupling(W) / (m - 1)
    w = q * qtilde_t - qtilde * q_t
    return 0.5 * (w**2 * Y - (qtilde / q) * w + c * ((q / qtilde) ** 2 * Y) ** (m - 1))


def polyanin_invariant(params: ReidParams, W: float) -> float:
    """Constant ``-(-4 alpha W^(m-2))^(1/m) m / (8 (m-1))``.

    Uses the odd-root convention, so for odd ``m`` it is defined for either
    sign of the coupling; even ``m`` with positive coupling raises
    :class:`NoRealBranch`.
    """
    m = params.m
    root = real_root(-4.0 * params.coupling(W), m, error=NoRealBranch)
    return -root / 8.0 * m / (m - 1)


@dataclass(frozen=True)
class InvariantReport:
    samples: np.ndarray  # shape (n, 2): columns t, I
    reference: float
    max_abs_drift: float
    rel_drift: float
    formulation: Formulation

    @classmethod
    def from_samples(cls, t, I, reference: Optional[float], formulation) -> "InvariantReport":
        t = np.asarray(t, dtype=float)
        I = np.asarray(I, dtype=float)
        ref = float(I[0]) if reference is None else float(reference)
        drift = float(np.max(np.abs(I - ref)))
        return cls(np.column_stack([t, I]), ref, drift, drift / max(1.0, abs(ref)), Formulation(formulation))

    def to_dict(self) -> dict:
        return {
            "formulation": self.formulation.value,
            "reference": self.reference,
            "max_abs_drift": self.max_abs_drift,
            "rel_drift": self.rel_drift,
            "n_samples": int(self.samples.shape[0]),
        }


def _basis_columns(traj: ReidTrajectory):
    b = traj.basis
    return b.q1.component(0), b.q1.component(1), b.q2.component(0), b.q2.component(1)


def trajectory_Y(traj: ReidTrajectory) -> np.ndarray:
    """``Y = q2 / (W q1)`` along the trajectory; :class:`SingularQ` if ``q1`` vanishes."""
    t = find_zero_crossing(traj.basis.q1)
    if t is not None:
        raise SingularQ("q1 vanishes; Y = int dt/q1^2 diverges", t)
    q1, _, q2, _ = _basis_columns(traj)
    return q2 / (traj.basis.wronskian * q1)


def sample_invariant(traj: ReidTrajectory, formulation="m2_physical") -> np.ndarray:
    """Invariant evaluated at every grid point of ``traj``."""
    form = Formulation(formulation)
    p = traj.params
    W = traj.basis.wronskian
    qt, qtt = traj.aux.component(0), traj.aux.component(1)
    if form is Formulation.M2_PHYSICAL:
        q, q_t = traj.base.component(0), traj.base.component(1)
        return np.asarray(el_invariant_m2(q, q_t, qt, qtt, p.alpha))
    if form is Formulation.M2_CONSTANT:
        return np.full(len(traj), el_invariant_constant_m2(traj.coeffs, p.alpha, W))
    if form is Formulation.POLYANIN_CONSTANT:
        return np.full(len(traj), polyanin_invariant(p, W))
    Y = trajectory_Y(traj)
    q1, q1t, _, _ = _basis_columns(traj)
    if form is Formulation.HIGHER_PHYSICAL:
        return np.asarray(el_invariant_higher_physical(q1, q1t, qt, qtt, Y, p, W))
    from .emden_fowler import ef_to_hyperbolic, to_ef

    ef = to_ef(q1, q1t, qt, qtt, Y)
    if form is Formulation.HIGHER_EF:
        return np.asarray(el_invariant_ef(ef.rtilde, ef.rtilde_Y, ef.Y, p, W))
    hyp = ef_to_hyperbolic(ef)
    return np.asarray(el_invariant_hyperbolic(hyp.Qtilde, hyp.Qtilde_eta, p, W))


def drift_report(
    trajectory: ReidTrajectory, formulation="m2_physical", reference: Optional[float] = None
) -> InvariantReport:
    """Sample the invariant along ``trajectory`` and summarise its drift.

    ``reference`` defaults to the value at the first grid point.
    """
    if len(trajectory) < 2:
        raise PathTooShort("drift report needs at least two samples")
    I = sample_invariant(trajectory, formulation)
    return InvariantReport.from_samples(trajectory.grid, I, reference, formulation)
