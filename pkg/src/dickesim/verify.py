"""Built-in invariant suite behind the ``verify`` subcommand.

Each check measures one module invariant and compares it to its threshold;
the CLI prints one line per check and exits nonzero on any failure.  Checks
are deliberately small and deterministic (fixed seeds, fixed parameters) so
a failure points at a real regression.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import error_bounds, hamiltonians
from .hamiltonians import (
    excitation_number,
    fermi_bose_oracle,
    frame_map,
    tavis_cummings,
)
from .hilbert import (
    DensityMatrix,
    basis_state,
    boson_op,
    build_space,
    collective_qubit_op,
    commutator,
    evolve_unitary,
    ground_state,
    qubit_op,
    spectral_norm,
    zero,
)
from .lindblad import IntegratorConfig, NoiseParams, convergence_check, integrate_segment, run_schedule
from .observables import fidelity, photon_number, survival_probability
from .trotter import dicke_schedule, execute_unitary, operator_norm_error


@dataclass(frozen=True)
class CheckResult:
    module: str
    name: str
    measured: float
    threshold: float

    @property
    def passed(self) -> bool:
        return self.measured <= self.threshold


_CHECKS: list[tuple[str, str, Callable[[], tuple[float, float]]]] = []


def _check(module: str, name: str):
    def register(fn):
        _CHECKS.append((module, name, fn))
        return fn

    return register


# ---------------------------------------------------------------------------
# hilbert
# ---------------------------------------------------------------------------


@_check("hilbert", "index_round_trip")
def _index_round_trip():
    bad = 0
    for n, m in ((1, 0), (2, 3), (3, 4)):
        space = build_space(n, m)
        for k in range(space.dim):
            bits, fock = space.split_index(k)
            bad += space.index_of(bits, fock) != k
    return float(bad), 0.0


@_check("hilbert", "subsystem_commutation")
def _subsystem_commutation():
    space = build_space(2, 3)
    worst = 0.0
    for kind_q in ("x", "y", "z", "plus", "minus"):
        for kind_b in ("a", "adag", "n"):
            c = commutator(qubit_op(space, 0, kind_q), boson_op(space, kind_b))
            worst = max(worst, float(np.abs(c.matrix).max()))
    return worst, 1e-12


@_check("hilbert", "propagator_composition")
def _propagator_composition():
    rng = np.random.default_rng(21)
    space = build_space(2, 2)
    m = rng.normal(size=(space.dim, space.dim)) + 1j * rng.normal(size=(space.dim, space.dim))
    from .hilbert import Operator

    h = Operator(space, (m + m.conj().T) / 2)
    dev = spectral_norm(
        evolve_unitary(h, 0.31) @ evolve_unitary(h, 0.17) - evolve_unitary(h, 0.48)
    )
    return dev, 1e-10


@_check("hilbert", "truncated_ladder_artifact")
def _truncated_ladder():
    space = build_space(1, 5)
    c = commutator(boson_op(space, "a"), boson_op(space, "adag")).matrix
    expected = np.eye(space.dim, dtype=complex)
    for q in range(2):
        k = q * space.boson_dim + space.fock_cutoff
        expected[k, k] -= space.fock_cutoff + 1
    return float(np.abs(c - expected).max()), 1e-12


# ---------------------------------------------------------------------------
# hamiltonians
# ---------------------------------------------------------------------------


@_check("hamiltonians", "pair_reconstructs_target")
def _pair_reconstruction():
    space = build_space(2, 4)
    w0, w, lam = 0.1, 1.0, 0.7
    g = lam / math.sqrt(2)
    total = tavis_cummings(space, w0 / 2, w / 2, g) + hamiltonians.anti_tavis_cummings(
        space, -w0 / 2, w / 2, g
    )
    params = hamiltonians.ModelParams(n_qubits=2, qubit_freq=w0, mode_freq=w, coupling=lam)
    target = hamiltonians.dicke(space, params)
    return float(np.abs(total.matrix - target.matrix).max()), 1e-12


@_check("hamiltonians", "collective_flip_conjugation")
def _conjugation_identity():
    rng = np.random.default_rng(5)
    worst = 0.0
    for n in (1, 2, 3):
        for m in (2, 4):
            space = build_space(n, m)
            dets = rng.uniform(-0.5, 0.5, size=n)
            dm = rng.uniform(-0.5, 0.5)
            g = rng.uniform(0.1, 1.0)
            r = hamiltonians.collective_rotation(space, "x", -math.pi)
            conj = r @ tavis_cummings(space, dets, dm, g) @ r.dag()
            anti = hamiltonians.anti_tavis_cummings(space, dets, dm, g)
            worst = max(worst, float(np.abs(conj.matrix - anti.matrix).max()))
    return worst, 1e-10


@_check("hamiltonians", "excitation_conservation")
def _excitation_conservation():
    space = build_space(3, 4)
    h = tavis_cummings(space, (0.2, -0.1, 0.4), 0.7, 0.33)
    return float(np.abs(commutator(h, excitation_number(space)).matrix).max()), 1e-12


@_check("hamiltonians", "fermi_bose_equivalence")
def _fermi_bose_equivalence():
    worst = 0.0
    for n_levels, eps in ((1, (0.5,)), (2, (0.4, 0.6))):
        oracle = fermi_bose_oracle(n_levels, eps, 1.0, 0.12, 3)
        restricted = oracle.isometry.conj().T @ oracle.h_fermionic.matrix @ oracle.isometry
        worst = max(
            worst,
            float(
                np.abs(
                    np.linalg.eigvalsh(restricted)
                    - np.linalg.eigvalsh(oracle.h_mapped.matrix)
                ).max()
            ),
        )
    return worst, 1e-10


# ---------------------------------------------------------------------------
# trotter
# ---------------------------------------------------------------------------


@_check("trotter", "first_order_scaling_exponent")
def _scaling_exponent():
    space = build_space(2, 8)
    params = frame_map(0.05, 1.0, 1.5 * math.sqrt(2), 2)
    ns = np.array([4, 8, 16, 32])
    errs = np.array(
        [operator_norm_error(dicke_schedule(space, params, 0.3, int(n))) for n in ns]
    )
    p = -np.polyfit(np.log(ns), np.log(errs), 1)[0]
    return abs(p - 1.0), 0.2


@_check("trotter", "gate_count_independent_of_qubits")
def _gate_count():
    counts = set()
    for n in (1, 2, 3):
        space = build_space(n, 2)
        counts.add(dicke_schedule(space, frame_map(0.05, 1.0, 0.5, n), 0.2, 2).gates_per_step)
    return float(len(counts) - 1), 0.0


@_check("trotter", "schedule_determinism")
def _schedule_determinism():
    space = build_space(2, 3)
    params = frame_map(0.05, 1.0, 1.5 * math.sqrt(2), 2)
    a = dicke_schedule(space, params, 0.4, 5).dump()
    b = dicke_schedule(space, params, 0.4, 5).dump()
    return float(a != b), 0.0


# ---------------------------------------------------------------------------
# lindblad
# ---------------------------------------------------------------------------


@_check("lindblad", "damped_cavity_decay")
def _damped_cavity():
    space = build_space(1, 3)
    kappa = 0.7
    rho0 = DensityMatrix.from_pure(space, basis_state(space, (1,), 1))
    rho = integrate_segment(
        zero(space), rho0, 1.0 / kappa, NoiseParams(kappa=kappa), IntegratorConfig(dt=1e-3)
    )
    return abs(photon_number(rho) - math.exp(-1.0)), 1e-6


@_check("lindblad", "dephasing_decay")
def _dephasing():
    space = build_space(1, 0)
    gamma_d = 0.3
    plus = (basis_state(space, (0,), 0) + basis_state(space, (1,), 0)) / math.sqrt(2)
    rho = integrate_segment(
        zero(space),
        DensityMatrix.from_pure(space, plus),
        1.3,
        NoiseParams(gamma_d=gamma_d),
        IntegratorConfig(dt=1e-3),
    )
    sx = rho.expectation(qubit_op(space, 0, "x"))
    return abs(sx - math.exp(-2.0 * gamma_d * 1.3)), 1e-6


def _benchmark_run(dt=2e-3):
    space = build_space(2, 15)
    params = frame_map(0.05, 1.0, 1.5 * math.sqrt(2), 2)
    sched = dicke_schedule(space, params, 1.0 / 1.5, 11)
    rho0 = DensityMatrix.from_pure(space, ground_state(space))
    noise = NoiseParams(kappa=1e-2, gamma_s=0.5e-2, gamma_d=0.5e-2)
    return sched, rho0, noise, IntegratorConfig(dt=dt)


@_check("lindblad", "trace_preservation")
def _trace_preservation():
    sched, rho0, noise, cfg = _benchmark_run()
    result = run_schedule(sched, rho0, noise, cfg)
    return max(result.trace_error), 1e-8


@_check("lindblad", "positivity_spot_checks")
def _positivity():
    sched, rho0, noise, cfg = _benchmark_run()
    # run_schedule raises on violations; measured is a pass marker.
    run_schedule(sched, rho0, noise, cfg)
    return 0.0, 1.0


@_check("lindblad", "step_halving_convergence")
def _step_halving():
    sched, rho0, noise, cfg = _benchmark_run()
    return convergence_check(sched, rho0, noise, cfg), 1e-6


@_check("lindblad", "noiseless_limit_matches_unitary")
def _noiseless_limit():
    space = build_space(2, 6)
    params = frame_map(0.05, 1.0, 1.5 * math.sqrt(2), 2)
    sched = dicke_schedule(space, params, 0.3, 5)
    psi0 = ground_state(space)
    cfg = IntegratorConfig(dt=5e-4)
    final = execute_unitary(sched, psi0).final
    projector = np.outer(final, final.conj())
    rho = np.array(DensityMatrix.from_pure(space, psi0).matrix)
    for step in sched.steps():
        for seg in step:
            if seg.kind == "gate":
                u = seg.unitary.matrix
                rho = u @ rho @ u.conj().T
            else:
                dm = integrate_segment(
                    seg.hamiltonian,
                    DensityMatrix(space, rho, check=False),
                    seg.duration,
                    NoiseParams(),
                    cfg,
                )
                rho = np.array(dm.matrix)
    return float(np.abs(rho - projector).max()), 1e-7


# ---------------------------------------------------------------------------
# error_bounds
# ---------------------------------------------------------------------------


@_check("error_bounds", "closed_form_agreement")
def _closed_form_agreement():
    worst = 0.0
    for n_qubits in (2, 3):
        space = build_space(n_qubits, 4)
        w01 = [0.05 + 0.01 * i for i in range(n_qubits)]
        w02 = [0.03 - 0.02 * i for i in range(n_qubits)]
        h1, h2 = error_bounds.error_pair(space, w01, w02, 0.5, 0.9)
        brute = error_bounds.leading_error_operator(h1, h2, 0.8, 5)
        closed = error_bounds.closed_form_error(space, w01, w02, 0.5, 0.9, 0.8, 5)
        worst = max(worst, error_bounds.masked_norm(brute - closed))
    return worst, 1e-10


@_check("error_bounds", "bound_dominance")
def _bound_dominance():
    space = build_space(2, 12)
    params = frame_map(0.05, 1.0, 1.5 * math.sqrt(2), 2)
    sched = dicke_schedule(space, params, 1.0 / 1.5, 11)
    traj = execute_unitary(sched, ground_state(space))
    level = error_bounds.max_populated_level(traj.states, space=space)
    report = error_bounds.dicke_error_report(space, params, 1.0 / 1.5, 11, level)
    return max(0.0, report.leading_term_norm - report.cauchy_schwarz_bound), 0.0


@_check("error_bounds", "scaling_linearity")
def _scaling_linearity():
    space = build_space(2, 4)
    h1, h2 = error_bounds.error_pair(space, 0.1, 0.1, 0.5, 0.4)
    base = spectral_norm(error_bounds.leading_error_operator(h1, h2, 0.7, 4))
    dev = 0.0
    for k in (2, 3, 4):
        dev = max(
            dev,
            abs(
                spectral_norm(error_bounds.leading_error_operator(h1, h2, 0.7, 4 * k))
                - base / k
            ),
            abs(
                spectral_norm(error_bounds.leading_error_operator(h1, h2, 0.7 * k, 4))
                - base * k * k
            ),
        )
    return dev, 1e-10


# ---------------------------------------------------------------------------
# observables
# ---------------------------------------------------------------------------


@_check("observables", "fidelity_symmetry")
def _fidelity_symmetry():
    rng = np.random.default_rng(13)
    space = build_space(1, 3)
    m = rng.normal(size=(space.dim, space.dim)) + 1j * rng.normal(size=(space.dim, space.dim))
    m = m @ m.conj().T
    rho_a = DensityMatrix(space, m / np.trace(m).real, check=False)
    rho_b = DensityMatrix.from_pure(space, basis_state(space, (1,), 2))
    return abs(fidelity(rho_a, rho_b) - fidelity(rho_b, rho_a)), 1e-12


@_check("observables", "photon_number_range")
def _photon_range():
    rng = np.random.default_rng(17)
    space = build_space(1, 5)
    m = rng.normal(size=(space.dim, space.dim)) + 1j * rng.normal(size=(space.dim, space.dim))
    m = m @ m.conj().T
    rho = DensityMatrix(space, m / np.trace(m).real, check=False)
    n = photon_number(rho)
    return max(0.0, -n, n - space.fock_cutoff), 0.0


@_check("observables", "survival_equals_purity")
def _survival_purity():
    space = build_space(1, 1)
    mixed = DensityMatrix(space, np.diag([0.5, 0.3, 0.2, 0.0]).astype(complex))
    return abs(survival_probability(mixed, mixed) - mixed.purity()), 1e-12


def run_checks(module_filter: str | None = None) -> list[CheckResult]:
    """Execute all (or one module's) registered checks."""
    results = []
    for module, name, fn in _CHECKS:
        if module_filter is not None and module != module_filter:
            continue
        measured, threshold = fn()
        results.append(
            CheckResult(module=module, name=name, measured=float(measured), threshold=threshold)
        )
    return results
