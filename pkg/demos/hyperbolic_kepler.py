"""
A radial oscillator with an Ermakov-Lewis energy
================================================

The hyperbolic oscillator Q'' - Q/4 = A Q^(1-2m) reads as radial motion
of a mass M in the potential K R^2 with K = -M/8 plus a centrifugal
style term l^2 R^(2-2m). The invariant, multiplied by M, is the total
energy. The Reid-formula solution R = (e^(mt/2) + c e^(-mt/2))^(1/m) has
zero energy. For odd m the extra term is attractive and the radicand
turns negative at early times.
"""

import numpy as np

from reidlab.errors import NegativeRadicand
from reidlab.linear import FrequencyModel, SuperpositionCoefficients, solve_basis
from reidlab.mechanics import (
    KeplerParams,
    energy_terms,
    nonlinear_sign,
    poisson_conservation_check,
    radial_invariant,
    radial_solution,
    radial_velocity,
)
from reidlab.numerics import ToleranceConfig
from reidlab.reid import ReidParams, simulate_reid

kp = KeplerParams(M=1.0, l=1.0, m=2)
t = np.linspace(-2.0, 2.0, 5)
R, Rd = radial_solution(t, kp), radial_velocity(t, kp)
kin, nonlin, pot = energy_terms(R, Rd, kp)
print("   t        R       kinetic   nonlinear  potential   total")
for row in zip(t, R, kin, nonlin, pot, kin + nonlin + pot):
    print("  ".join(f"{v:+.5f}" for v in row))
print("R(0) =", radial_solution(0.0, kp), " sqrt(2) =", np.sqrt(2.0))
print("max |I| on [-2, 2]:", np.max(np.abs(radial_invariant(R, Rd, kp))))

kp3 = KeplerParams(M=1.0, l=1.0, m=3)
print("m=3 sign of nonlinear term:", nonlinear_sign(kp3))
try:
    radial_solution(np.linspace(-1.0, 1.0, 21), kp3)
except NegativeRadicand as exc:
    print("m=3 domain:", exc, f"(edge at t = -ln2/3 = {-np.log(2) / 3:.6f})")

# The invariant also Poisson-commutes with the Reid Hamiltonian along a
# simulated trajectory.
tol = ToleranceConfig(1e-10, 1e-12)
freq = FrequencyModel.constant(-0.25)
basis = solve_basis(freq, 0.0, 5.0, tol)
traj = simulate_reid(freq, ReidParams(4, 0.7), basis, SuperpositionCoefficients(), (1.0, 0.2), 0.0, 5.0, tol,
                     t_eval=np.linspace(0.0, 5.0, 301))
print("max |dI/dt| from the Poisson bracket:", poisson_conservation_check(traj))
