"""
Reading the invariant off an Abel chain
=======================================

With w = Y/r^2, z = w^m and u = Y r_Y / r, the quantity
phi = (u - 1/2)^2 is linear in (z, w):

    phi = A z / (1 - m) + J w + 1/4,

so a least-squares fit along any sampled solution returns J, which is
twice the invariant. On the square-root ray r = k sqrt(Y) the chain
degenerates (u = 1/2 everywhere).
"""

import numpy as np

from reidlab.emden_fowler import (
    EFState,
    HyperbolicState,
    abel_chain,
    hyperbolic_solution,
    hyperbolic_solution_derivative,
    hyperbolic_to_ef,
)
from reidlab.errors import DegenerateU
from reidlab.invariant import el_invariant_ef
from reidlab.reid import ReidParams, pinney_general, polyanin_particular

Y = np.linspace(0.1, 5.0, 200)
p2 = ReidParams(2, 1.0)
for alphas in ((1.0, 1.0, 0.0), (2.0, 1.0, 1.0), (0.5, 2.5, 0.5)):
    sol = pinney_general(alphas, p2)
    st = EFState(Y, sol(Y), sol.derivative(Y))
    chain = abel_chain(st, p2, 1.0)
    direct = el_invariant_ef(st.rtilde, st.rtilde_Y, Y, p2, 1.0)
    print(f"Pinney {alphas}: Abel fit I = {chain.invariant:+.12f}, direct I = {direct[0]:+.12f}")

eta = np.linspace(-1.5, 1.5, 200)
for m in (3, 4):
    p = ReidParams(m, 0.6)
    h = HyperbolicState(eta, hyperbolic_solution(eta, p, 1.0), hyperbolic_solution_derivative(eta, p, 1.0))
    chain = abel_chain(hyperbolic_to_ef(h), p, 1.0)
    print(f"hyperbolic m={m}: Abel fit I = {chain.invariant:+.3e} (fit residual {chain.fit_residual:.1e})")

p = ReidParams(3, -0.5)
ray = polyanin_particular(p)
try:
    abel_chain(EFState(Y, ray(Y), ray.derivative(Y)), p, 1.0)
except DegenerateU as exc:
    print("square-root ray:", exc)
