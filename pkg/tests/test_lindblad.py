"""Master-equation integrator against analytic decay laws and unitary limits."""

import math

import numpy as np
import pytest

from dickesim.hamiltonians import ModelParams, frame_map
from dickesim.hilbert import (
    DensityMatrix,
    Operator,
    basis_state,
    boson_op,
    build_space,
    ground_state,
    qubit_op,
    zero,
)
from dickesim.lindblad import (
    IntegrationError,
    IntegratorConfig,
    LindbladGenerator,
    NoiseParams,
    convergence_check,
    integrate_segment,
    rhs,
    run_schedule,
)
from dickesim.trotter import dicke_schedule, execute_unitary, fermi_bose_analog_schedule


def _one_photon_state(space):
    return DensityMatrix.from_pure(space, basis_state(space, (1,) * space.n_qubits, 1))


# ---------------------------------------------------------------------------
# rhs
# ---------------------------------------------------------------------------


def test_rhs_vanishes_for_eigenstate_without_noise():
    space = build_space(1, 3)
    h = boson_op(space, "n")
    rho = _one_photon_state(space)
    out = rhs(h, rho, NoiseParams())
    assert np.abs(out).max() < 1e-14


def test_rhs_photon_loss_rate():
    # One photon, qubits in the ground state, H = 0: d<n>/dt = -kappa.
    space = build_space(1, 3)
    kappa = 0.37
    out = rhs(zero(space), _one_photon_state(space), NoiseParams(kappa=kappa))
    n_op = boson_op(space, "n").matrix
    assert np.trace(n_op @ out).real == pytest.approx(-kappa, abs=1e-12)


def test_rhs_is_traceless_for_random_hermitian_input():
    rng = np.random.default_rng(3)
    space = build_space(2, 2)
    m = rng.normal(size=(space.dim, space.dim)) + 1j * rng.normal(size=(space.dim, space.dim))
    m = m + m.conj().T
    m = m / np.trace(m).real
    rho = DensityMatrix(space, m, check=False)
    h = Operator(space, np.diag(rng.normal(size=space.dim)).astype(complex))
    noise = NoiseParams(kappa=0.3, gamma_s=0.2, gamma_d=0.1)
    out = rhs(h, rho, noise)
    assert abs(np.trace(out)) < 1e-12


def test_rhs_rejects_non_hermitian_hamiltonian():
    space = build_space(1, 2)
    with pytest.raises(ValueError, match="Hermitian"):
        rhs(boson_op(space, "a"), _one_photon_state(space), NoiseParams())


def test_noise_params_reject_negative_rates():
    with pytest.raises(ValueError):
        NoiseParams(kappa=-0.1)


# ---------------------------------------------------------------------------
# integrate_segment
# ---------------------------------------------------------------------------


def test_zero_duration_returns_input():
    space = build_space(1, 2)
    rho0 = _one_photon_state(space)
    out = integrate_segment(
        zero(space), rho0, 0.0, NoiseParams(kappa=1.0), IntegratorConfig(dt=1e-2)
    )
    assert np.abs(out.matrix - rho0.matrix).max() == 0.0


def test_damped_cavity_photon_decay():
    # kappa-only, H = 0, one photon: <n>(t) = exp(-kappa t); checked at
    # kappa * t = 1 to 1e-6.
    space = build_space(1, 3)
    kappa = 0.7
    t = 1.0 / kappa
    rho = integrate_segment(
        zero(space),
        _one_photon_state(space),
        t,
        NoiseParams(kappa=kappa),
        IntegratorConfig(dt=1e-3),
    )
    n_mean = rho.expectation(boson_op(space, "n"))
    assert abs(n_mean - math.exp(-1.0)) < 1e-6


def test_dephasing_coherence_decay():
    # gamma_d (sz rho sz - rho) on |+>: d<sx>/dt = -2 gamma_d <sx>, so
    # <sx>(t) = exp(-2 gamma_d t).
    space = build_space(1, 0)
    gamma_d = 0.3
    plus = (basis_state(space, (0,), 0) + basis_state(space, (1,), 0)) / math.sqrt(2.0)
    rho0 = DensityMatrix.from_pure(space, plus)
    t = 1.3
    rho = integrate_segment(
        zero(space), rho0, t, NoiseParams(gamma_d=gamma_d), IntegratorConfig(dt=1e-3)
    )
    sx_mean = rho.expectation(qubit_op(space, 0, "x"))
    assert abs(sx_mean - math.exp(-2.0 * gamma_d * t)) < 1e-6


def test_spontaneous_emission_population_decay():
    # gamma_s-only on an excited qubit: excited population decays as
    # exp(-gamma_s t) for the 1/2-normalized dissipator.
    space = build_space(1, 0)
    gamma_s = 0.4
    rho0 = DensityMatrix.from_pure(space, basis_state(space, (0,), 0))
    t = 2.0
    rho = integrate_segment(
        zero(space), rho0, t, NoiseParams(gamma_s=gamma_s), IntegratorConfig(dt=1e-3)
    )
    p_excited = (1.0 + rho.expectation(qubit_op(space, 0, "z"))) / 2.0
    assert abs(p_excited - math.exp(-gamma_s * t)) < 1e-6


def test_unstable_step_raises_integration_error():
    space = build_space(1, 3)
    with pytest.raises(IntegrationError):
        integrate_segment(
            zero(space),
            _one_photon_state(space),
            2.0,
            NoiseParams(kappa=500.0),
            IntegratorConfig(dt=0.05),
        )


def test_stability_guard_clamps_step():
    space = build_space(1, 5)
    gen = LindbladGenerator(space, NoiseParams())
    h = 10.0 * boson_op(space, "n")  # norm 50
    # requested dt 0.1 must be clamped to 0.05/50 = 1e-3 -> 1000 steps
    assert gen.step_count(1.0, 0.1, h) == 1000


# ---------------------------------------------------------------------------
# run_schedule
# ---------------------------------------------------------------------------


def _dsc_schedule(space, t=0.3, n=5, coupling_over=1.5):
    params = frame_map(0.05, 1.0, coupling_over * math.sqrt(space.n_qubits), space.n_qubits)
    return dicke_schedule(space, params, t, n)


def test_noiseless_run_matches_unitary_execution():
    space = build_space(2, 6)
    sched = _dsc_schedule(space)
    psi0 = ground_state(space)
    rho0 = DensityMatrix.from_pure(space, psi0)
    result = run_schedule(sched, rho0, NoiseParams(), IntegratorConfig(dt=5e-4))
    traj = execute_unitary(sched, psi0)
    rho_final = np.outer(traj.final, traj.final.conj())
    # Reconstruct the integrator's final state from the survival of fidelity
    # record: compare via fidelity against the pure projector.
    result_final = run_schedule(sched, rho0, NoiseParams(), IntegratorConfig(dt=5e-4))
    assert result_final.time_grid == result.time_grid
    # Direct matrix comparison through a fresh run:
    from dickesim.lindblad import LindbladGenerator  # noqa: F401 (clarity)

    # run again capturing the final state via a one-segment-at-a-time pass
    rho = rho0
    for step in sched.steps():
        for seg in step:
            if seg.kind == "gate":
                u = seg.unitary.matrix
                rho = DensityMatrix(space, u @ rho.matrix @ u.conj().T, check=False)
            else:
                rho = integrate_segment(
                    seg.hamiltonian, rho, seg.duration, NoiseParams(), IntegratorConfig(dt=5e-4)
                )
    assert np.abs(rho.matrix - rho_final).max() < 1e-7


def test_self_comparison_fidelity_stays_one():
    # Schedule whose segments are exactly the target Hamiltonian: with zero
    # noise the digital and ideal states coincide, F(t) = 1 to 1e-8.
    space = build_space(2, 4)
    params = ModelParams(n_qubits=2, qubit_freq=(0.9, 1.1), mode_freq=1.0, coupling=0.2)
    sched = fermi_bose_analog_schedule(space, params, 1.0, 4)
    rho0 = DensityMatrix.from_pure(space, ground_state(space))
    result = run_schedule(sched, rho0, NoiseParams(), IntegratorConfig(dt=2e-3))
    for f in result.fidelity:
        assert abs(f - 1.0) < 1e-8


def test_run_invariants_trace_hermiticity_positivity():
    space = build_space(2, 8)
    sched = _dsc_schedule(space, t=0.4, n=6)
    rho0 = DensityMatrix.from_pure(space, ground_state(space))
    noise = NoiseParams(kappa=1e-2, gamma_s=0.5e-2, gamma_d=0.5e-2)
    result = run_schedule(sched, rho0, noise, IntegratorConfig(dt=2e-3))
    assert result.fidelity[0] == pytest.approx(1.0, abs=1e-12)
    assert all(err <= 1e-8 for err in result.trace_error)
    assert len(result.time_grid) == 7
    ts = [t for t, _ in result.time_grid]
    assert ts == sorted(ts)
    # fidelity decays once noise is on
    assert result.final_fidelity < 1.0


def test_run_schedule_step_halved_convergence():
    space = build_space(2, 6)
    sched = _dsc_schedule(space, t=0.3, n=4)
    rho0 = DensityMatrix.from_pure(space, ground_state(space))
    noise = NoiseParams(kappa=1e-2, gamma_s=0.5e-2, gamma_d=0.5e-2)
    delta = convergence_check(sched, rho0, noise, IntegratorConfig(dt=2e-3))
    assert delta < 1e-6


def test_run_schedule_reports_segment_index_on_failure():
    space = build_space(1, 3)
    params = frame_map(0.05, 1.0, 0.5, 1)
    sched = dicke_schedule(space, params, 5.0, 1)
    rho0 = DensityMatrix.from_pure(space, ground_state(space))
    with pytest.raises(IntegrationError, match=r"segment \d+ \(TC"):
        run_schedule(sched, rho0, NoiseParams(kappa=800.0), IntegratorConfig(dt=0.08))


def test_noiseless_high_step_count_converges():
    # Deep-strong parameters at g*t = 1 with a large digital step count:
    # the Trotterized state tracks the ideal one closely.
    space = build_space(2, 15)
    params = frame_map(0.05, 1.0, 1.5 * math.sqrt(2), 2)
    sched = dicke_schedule(space, params, 1.0 / 1.5, 64)
    rho0 = DensityMatrix.from_pure(space, ground_state(space))
    result = run_schedule(sched, rho0, NoiseParams(), IntegratorConfig(dt=2e-3))
    assert result.final_fidelity >= 0.99


def test_segment_level_recording_refines_grid():
    space = build_space(2, 6)
    sched = _dsc_schedule(space, t=0.3, n=4)
    rho0 = DensityMatrix.from_pure(space, ground_state(space))
    coarse = run_schedule(sched, rho0, NoiseParams(), IntegratorConfig(dt=1e-3))
    fine = run_schedule(
        sched, rho0, NoiseParams(), IntegratorConfig(dt=1e-3), record_segments=True
    )
    # One extra record per step (after the first interaction block).
    assert len(fine.time_grid) == len(coarse.time_grid) + sched.n_steps
    # Step-boundary entries agree with the per-step run.
    coarse_ts = [t for t, _ in coarse.time_grid]
    fine_by_t = dict(zip([t for t, _ in fine.time_grid], fine.survival))
    for t, s in zip(coarse_ts, coarse.survival):
        assert s == pytest.approx(fine_by_t[t], abs=1e-12)
    ts = [t for t, _ in fine.time_grid]
    assert ts == sorted(ts)
    # Mid-step survival points sit at half-step times.
    assert ts[1] == pytest.approx(0.5 * sched.step_duration)


def test_ideal_noise_flag_gives_noisy_reference():
    space = build_space(1, 4)
    params = frame_map(0.05, 1.0, 0.5, 1)
    sched = dicke_schedule(space, params, 0.5, 4)
    rho0 = DensityMatrix.from_pure(space, ground_state(space))
    noise = NoiseParams(kappa=0.05)
    strict = run_schedule(sched, rho0, noise, IntegratorConfig(dt=1e-3))
    lenient = run_schedule(sched, rho0, noise, IntegratorConfig(dt=1e-3), ideal_noise=True)
    # Against a noisy reference the photon records of the reference change.
    assert strict.photon_ideal[-1] != pytest.approx(lenient.photon_ideal[-1], abs=1e-9)
