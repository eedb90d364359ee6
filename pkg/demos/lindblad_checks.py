"""Dissipators against their analytic solutions.

Three channels act during analog segments: cavity decay at rate kappa,
qubit spontaneous emission at gamma_s (both in the 1/2-normalized form),
and dephasing gamma_d sum_i (sz rho sz - rho), whose literal normalization
makes <sx> of a |+> state decay as exp(-2 gamma_d t).  The fixed-step RK4
integration reproduces each closed-form solution to well under 1e-6 and
preserves the trace to rounding error.

Run:  python3 demos/lindblad_checks.py
"""

import math

import numpy as np

from dickesim import (
    DensityMatrix,
    IntegratorConfig,
    NoiseParams,
    basis_state,
    boson_op,
    build_space,
    integrate_segment,
    photon_number,
    qubit_op,
    zero,
)

cfg = IntegratorConfig(dt=1e-3)

# Damped cavity: one photon, H = 0, <n>(t) = exp(-kappa t).
space = build_space(1, 3)
kappa = 0.7
rho0 = DensityMatrix.from_pure(space, basis_state(space, (1,), 1))
print(f"{'kappa*t':>8}  {'<n> integrated':>15}  {'exp(-kappa t)':>14}  {'deviation':>10}")
for kt in (0.25, 0.5, 1.0, 2.0):
    rho = integrate_segment(zero(space), rho0, kt / kappa, NoiseParams(kappa=kappa), cfg)
    n_mean = photon_number(rho)
    print(f"{kt:>8.2f}  {n_mean:>15.9f}  {math.exp(-kt):>14.9f}  {abs(n_mean - math.exp(-kt)):>10.1e}")

# Dephasing: |+> coherence, <sx>(t) = exp(-2 gamma_d t).
space_q = build_space(1, 0)
gamma_d = 0.3
plus = (basis_state(space_q, (0,), 0) + basis_state(space_q, (1,), 0)) / math.sqrt(2)
rho0_q = DensityMatrix.from_pure(space_q, plus)
print(f"\n{'t':>6}  {'<sx> integrated':>16}  {'exp(-2 gd t)':>13}")
for t in (0.5, 1.0, 2.0):
    rho = integrate_segment(zero(space_q), rho0_q, t, NoiseParams(gamma_d=gamma_d), cfg)
    sx = rho.expectation(qubit_op(space_q, 0, "x"))
    print(f"{t:>6.2f}  {sx:>16.9f}  {math.exp(-2 * gamma_d * t):>13.9f}")

# Spontaneous emission: excited population exp(-gamma_s t).
gamma_s = 0.4
rho0_e = DensityMatrix.from_pure(space_q, basis_state(space_q, (0,), 0))
rho = integrate_segment(zero(space_q), rho0_e, 2.0, NoiseParams(gamma_s=gamma_s), cfg)
p_e = (1.0 + rho.expectation(qubit_op(space_q, 0, "z"))) / 2.0
print(f"\nexcited population after t = 2: {p_e:.9f} "
      f"(analytic {math.exp(-gamma_s * 2.0):.9f})")
print(f"trace error: {rho.trace_error():.1e}, Hermiticity error: {rho.hermiticity_error():.1e}")
