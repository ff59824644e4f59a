"""
Dicke states and entanglement witnesses
=======================================

Build symmetric Dicke states, inspect their collective-spin moments, and
evaluate the witnesses from the built-in catalog: expectation values on
noisy states, white-noise tolerances, and fidelity lower bounds.
"""

from __future__ import annotations

import numpy as np

from symwit import (
    DenseOperator,
    NoiseModel,
    catalog,
    collective_j,
    dicke,
    expectation,
    fidelity_bound,
    noise_tolerance,
    op_power,
)

# ---------------------------------------------------------------------------
# Dicke states: equal-weight superpositions of all m-excitation basis states
# ---------------------------------------------------------------------------
state = dicke(6, 3)
print("|D_6^(3)> amplitudes are uniform over the C(6,3) = 20 basis states:")
nonzero = np.flatnonzero(np.abs(state.vec) > 1e-12)
print(f"  {len(nonzero)} nonzero amplitudes, each {state.vec[nonzero[0]].real:.6f}")

# collective spin moments: <J_z> = 0 and <J_x^2 + J_y^2> is maximal
jz = collective_j(6, "z")
jsq_xy = op_power(collective_j(6, "x"), 2) + op_power(collective_j(6, "y"), 2)
print(f"  <J_z>  = {jz.expectation(state.density()):+.6f}")
print(f"  <J_x^2 + J_y^2> = {jsq_xy.expectation(state.density()):.6f}  (j(j+1) = 12)")

# ---------------------------------------------------------------------------
# catalog witnesses: negative expectation certifies genuine entanglement
# ---------------------------------------------------------------------------
print("\nwitness values on the pure target (all detect it):")
for name in ("WP_D63", "WP2_D63", "WP3_D63", "WI2_D63"):
    w = catalog(name)
    print(f"  {name:8s} <W> = {expectation(w, state.density()):+.6f}")

# mix in white noise and find where detection is lost
w = catalog("WP3_D63")
noise = NoiseModel.white(6)
p_star = noise_tolerance(w, noise)
print(f"\nWP3_D63 tolerates white noise up to p* = {p_star:.6f}")
for p in (0.0, 0.5 * p_star, p_star, min(1.0, 1.5 * p_star)):
    rho = DenseOperator(
        (1 - p) * state.density().mat + p * noise.rho_noise.mat
    )
    value = expectation(w, rho)
    verdict = "detected" if value < 0 else "not detected"
    print(f"  p = {p:.4f}  <W> = {value:+.6f}  ({verdict})")

# ---------------------------------------------------------------------------
# fidelity bounds: a witness value also lower-bounds the target fidelity
# ---------------------------------------------------------------------------
p = 0.1
rho = DenseOperator((1 - p) * state.density().mat + p * noise.rho_noise.mat)
value = expectation(w, rho)
true_fid = state.density().expectation(rho)
print(f"\nat p = {p}: true fidelity {true_fid:.6f}, "
      f"witness bound {fidelity_bound(w, value):.6f}")
