"""
Parametric solutions of the Emden-Fowler equation
=================================================

Changing variables to Y = int dt/q1^2 and r = qt/q1 removes the
frequency and leaves r_YY = A Y^(m-2) r^(1-2m), A = alpha W^(m-2).
With tau = 1/Y = e^eta and Q = r/sqrt(Y) the equation becomes
autonomous and integrates once with the invariant I:

    Q_eta^2 = P(Q) = Q^2/4 - A Q^(2-2m)/(m-1) + 2I.

A quadrature in Q then gives Y(Q) and r(Q) = Q sqrt(Y(Q)).
"""

import numpy as np

from reidlab.emden_fowler import ef_residual, p_polynomial, parametric_solution
from reidlab.errors import NonpositiveP
from reidlab.invariant import polyanin_invariant
from reidlab.reid import ReidParams

params = ReidParams(3, 1.0)
I = polyanin_invariant(params, 1.0)
print(f"m=3, alpha=W=1: I = (3/8)(alpha W/2)^(1/3) = {I:.12f}")

Q = np.linspace(0.5, 2.0, 7)
print("P(Q):", np.round(p_polynomial(Q, params, 1.0, I), 4))

for branch in ("+", "-"):
    sol = parametric_solution(params, 1.0, I, (1.0, 3.0), branch, tau0=1.0)
    res = np.max(ef_residual(sol.as_path(), params, 1.0))
    print(f"branch {branch}: Y in [{sol.Y_of_Q.min():.4f}, {sol.Y_of_Q.max():.4f}],"
          f" |r - Q sqrt(Y)| = {sol.identity_gap():.1e}, EF residual = {res:.1e}")

# The quadrature stops at a turning point, where P vanishes.
try:
    parametric_solution(params, 1.0, I, (0.5, 2.0), "+")
except NonpositiveP as exc:
    print("turning point:", exc)
