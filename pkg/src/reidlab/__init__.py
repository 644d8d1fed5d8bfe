"""Ermakov and Reid oscillators, their Ermakov-Lewis invariants and the
associated Emden-Fowler equations."""

from .errors import ConfigError, ReidlabError, SingularityError
from .linear import (
    FrequencyModel,
    LinearBasis,
    SuperpositionCoefficients,
    analytic_basis,
    phase_integral,
    reduction_of_order,
    solve_basis,
    wronskian_drift,
)
from .numerics import SampledPath, ToleranceConfig, fd_residual, integrate_ivp, quadrature
from .reid import (
    ReidParams,
    ReidTrajectory,
    closed_form_trajectory,
    pinney_general,
    polyanin_particular,
    reid_superposition,
    simulate_reid,
)
from .invariant import (
    drift_report,
    el_invariant_constant_m2,
    el_invariant_ef,
    el_invariant_higher_physical,
    el_invariant_hyperbolic,
    el_invariant_m2,
    polyanin_invariant,
)

__version__ = "0.1.0"
