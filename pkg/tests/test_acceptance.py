"""Acceptance suite: one test per criterion, one printed pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines inline.
The benchmark presets are executed once per session (at fock_cutoff 15,
qubit numbers 2 and 3) and shared across criteria.
"""

import math
import subprocess
import sys

import numpy as np
import pytest

from dickesim.cli import execute_run, resolve_config
from dickesim.error_bounds import (
    closed_form_error,
    dicke_error_report,
    error_pair,
    fock_projector,
    leading_error_operator,
    max_populated_level,
    measured_error,
)
from dickesim.hamiltonians import (
    ModelParams,
    PulseParams,
    anti_tavis_cummings,
    collective_rotation,
    dicke,
    fermi_bose_oracle,
    frame_map,
    tavis_cummings,
)
from dickesim.hilbert import (
    DensityMatrix,
    basis_state,
    boson_op,
    build_space,
    ground_state,
    qubit_op,
    zero,
)
from dickesim.lindblad import IntegratorConfig, NoiseParams, integrate_segment
from dickesim.trotter import dicke_schedule, execute_unitary, pulsed_schedule


def _report(number: int, name: str, ok: bool, detail: str = ""):
    status = "PASS" if ok else "FAIL"
    suffix = f"  [{detail}]" if detail else ""
    print(f"acceptance criterion {number} ({name}): {status}{suffix}")
    assert ok, f"criterion {number} ({name}) failed: {detail}"


@pytest.fixture(scope="module")
def preset_runs():
    """All benchmark preset runs used by criteria 5 and 6 (fock_cutoff 15)."""
    runs = {}
    for n_qubits in (2, 3):
        for n in (7, 9, 11):
            cfg = resolve_config(
                {"n_qubits": str(n_qubits), "n_trotter": str(n)},
                preset="dicke-dsc-fidelity",
            )
            runs[("dsc", n_qubits, n)] = execute_run(cfg)[0]
        cfg = resolve_config({"n_qubits": str(n_qubits)}, preset="dicke-usc-photons")
        runs[("usc", n_qubits, 7)] = execute_run(cfg)[0]
        cfg = resolve_config({"n_qubits": str(n_qubits)}, preset="pulsed-dsc-fidelity")
        runs[("pulsed", n_qubits, 13)] = execute_run(cfg)[0]
    return runs


def test_criterion_1_protocol_identity():
    worst_sum = 0.0
    worst_conj = 0.0
    rng = np.random.default_rng(2)
    for n_qubits in (1, 2, 3):
        for n_max in (2, 4):
            space = build_space(n_qubits, n_max)
            w0, w = 0.1, 1.0
            lam = 0.7 * math.sqrt(n_qubits)
            g = lam / math.sqrt(n_qubits)
            total = tavis_cummings(space, w0 / 2, w / 2, g) + anti_tavis_cummings(
                space, -w0 / 2, w / 2, g
            )
            target = dicke(
                space,
                ModelParams(n_qubits=n_qubits, qubit_freq=w0, mode_freq=w, coupling=lam),
            )
            worst_sum = max(worst_sum, float(np.abs(total.matrix - target.matrix).max()))

            dets = rng.uniform(-0.5, 0.5, size=n_qubits)
            r = collective_rotation(space, "x", -math.pi)
            conj = r @ tavis_cummings(space, dets, 0.3, 0.4) @ r.dag()
            anti = anti_tavis_cummings(space, dets, 0.3, 0.4)
            worst_conj = max(worst_conj, float(np.abs(conj.matrix - anti.matrix).max()))
    ok = worst_sum <= 1e-12 and worst_conj <= 1e-10
    _report(1, "protocol identity", ok, f"sum_dev={worst_sum:.1e}, conj_dev={worst_conj:.1e}")


def test_criterion_2_trotter_scaling():
    space = build_space(2, 8)
    params = frame_map(0.05, 1.0, 1.5 * math.sqrt(2), 2)
    ns = np.array([4, 8, 16, 32])
    errs = np.array(
        [
            measured_error(dicke_schedule(space, params, 0.3, int(n)), metric="operator_norm")
            for n in ns
        ]
    )
    p = float(-np.polyfit(np.log(ns), np.log(errs), 1)[0])
    ok = 0.8 <= p <= 1.2
    _report(2, "first-order error scaling", ok, f"fit exponent p={p:.3f}")


def test_criterion_3_bound_dominance():
    details = []
    ok = True
    for preset in ("dicke-dsc-fidelity", "dicke-usc-photons"):
        cfg = resolve_config(None, preset=preset)
        g = cfg["coupling"]
        lam = g * math.sqrt(cfg["n_qubits"])
        space = build_space(cfg["n_qubits"], cfg["fock_cutoff"])
        params = frame_map(cfg["qubit_freq"], 1.0, lam, cfg["n_qubits"])
        t = cfg["gt_max"] / g
        sched = dicke_schedule(space, params, t, cfg["n_trotter"])
        traj = execute_unitary(sched, ground_state(space))
        level = max_populated_level(traj.states, threshold=1e-6, space=space)
        report = dicke_error_report(space, params, t, cfg["n_trotter"], level)
        dominated = report.cauchy_schwarz_bound >= report.leading_term_norm
        ok = ok and dominated
        details.append(
            f"{preset}: norm={report.leading_term_norm:.3f} <= bound={report.cauchy_schwarz_bound:.3f}"
        )
    _report(3, "error-bound dominance", ok, "; ".join(details))


def test_criterion_4_closed_form_commutator():
    worst = 0.0
    for n_qubits in (2, 3):
        space = build_space(n_qubits, 5)
        w01 = [0.05 + 0.02 * i for i in range(n_qubits)]
        w02 = [0.04 - 0.03 * i for i in range(n_qubits)]
        wt, g, t, n = 0.5, 1.2, 0.7, 6
        h1, h2 = error_pair(space, w01, w02, wt, g)
        brute = leading_error_operator(h1, h2, t, n)
        closed = closed_form_error(space, w01, w02, wt, g, t, n)
        p = fock_projector(space, space.fock_cutoff - 2)
        worst = max(worst, float(np.abs((p @ (brute - closed) @ p).matrix).max()))
    ok = worst <= 1e-10
    _report(4, "closed-form commutator", ok, f"masked deviation={worst:.1e}")


def test_criterion_5_lindblad_physics(preset_runs):
    space = build_space(1, 3)
    kappa = 0.7
    rho = integrate_segment(
        zero(space),
        DensityMatrix.from_pure(space, basis_state(space, (1,), 1)),
        1.0 / kappa,
        NoiseParams(kappa=kappa),
        IntegratorConfig(dt=1e-3),
    )
    cavity_dev = abs(rho.expectation(boson_op(space, "n")) - math.exp(-1.0))

    space_q = build_space(1, 0)
    gamma_d, t = 0.3, 1.3
    plus = (basis_state(space_q, (0,), 0) + basis_state(space_q, (1,), 0)) / math.sqrt(2)
    rho_q = integrate_segment(
        zero(space_q),
        DensityMatrix.from_pure(space_q, plus),
        t,
        NoiseParams(gamma_d=gamma_d),
        IntegratorConfig(dt=1e-3),
    )
    dephase_dev = abs(
        rho_q.expectation(qubit_op(space_q, 0, "x")) - math.exp(-2.0 * gamma_d * t)
    )

    worst_drift = max(max(res.trace_error) for res in preset_runs.values())
    ok = cavity_dev <= 1e-6 and dephase_dev <= 1e-6 and worst_drift <= 1e-8
    _report(
        5,
        "dissipative physics",
        ok,
        f"cavity_dev={cavity_dev:.1e}, dephasing_dev={dephase_dev:.1e}, "
        f"max_trace_drift={worst_drift:.1e}",
    )


def test_criterion_6a_dsc_fidelity_behavior(preset_runs):
    checks = []
    for n_qubits in (2, 3):
        for n in (7, 9, 11):
            res = preset_runs[("dsc", n_qubits, n)]
            checks.append(abs(res.fidelity[0] - 1.0) <= 1e-9)
            checks.append(all(d <= 1e-3 for d in np.diff(res.fidelity)))  # decreasing
            checks.append(res.final_fidelity < 0.999)  # actually decayed
    for n in (7, 9, 11):
        f2 = preset_runs[("dsc", 2, n)].fidelity
        f3 = preset_runs[("dsc", 3, n)].fidelity
        checks.append(all(b <= a + 0.01 for a, b in zip(f2, f3)))  # N=3 below N=2
    for n_qubits in (2, 3):
        finals = [preset_runs[("dsc", n_qubits, n)].final_fidelity for n in (7, 9, 11)]
        checks.append(finals[0] <= finals[1] + 1e-3 <= finals[2] + 2e-3)
    ok = all(checks)
    f_summary = ", ".join(
        f"N={nq},n={n}:F={preset_runs[('dsc', nq, n)].final_fidelity:.4f}"
        for nq in (2, 3)
        for n in (7, 9, 11)
    )
    _report(6, "deep-strong fidelity preset (6a)", ok, f_summary)


def test_criterion_6b_usc_photon_behavior(preset_runs):
    n2 = preset_runs[("usc", 2, 7)].photon_trotter
    n3 = preset_runs[("usc", 3, 7)].photon_trotter
    above = [b > a for a, b in zip(n2[1:], n3[1:])]
    fraction = sum(above) / len(above)
    ok = fraction >= 0.75
    _report(6, "ultrastrong photon preset (6b)", ok, f"N=3 above N=2 on {fraction:.0%} of grid")


def test_criterion_6c_pulsed_preset_behavior(preset_runs):
    checks = []
    for n_qubits in (2, 3):
        res = preset_runs[("pulsed", n_qubits, 13)]
        checks.append(abs(res.fidelity[0] - 1.0) <= 1e-9)
        checks.append(all(d <= 1e-3 for d in np.diff(res.fidelity)))
        checks.append(res.final_fidelity < 0.999)
    f2 = preset_runs[("pulsed", 2, 13)].fidelity
    f3 = preset_runs[("pulsed", 3, 13)].fidelity
    checks.append(all(b <= a + 0.01 for a, b in zip(f2, f3)))
    ok = all(checks)
    _report(
        6,
        "pulsed fidelity preset (6c)",
        ok,
        f"final F: N=2 {f2[-1]:.4f}, N=3 {f3[-1]:.4f}",
    )


def test_criterion_7_pulsed_error_factor():
    # The pulsed schedule at n steps shares the gate structure (count and
    # segment durations) of the plain schedule at 2n steps; at a kicked
    # coupling of twice the base, its digital error lands around twice the
    # matched plain-schedule error.
    space = build_space(2, 15)
    t, n, g0 = 0.3, 13, 1.5
    lam0 = g0 * math.sqrt(2)
    width = t / n / 2.0
    pulse = PulseParams(
        lambda0=lam0,
        lambda1=lam0 * width,
        period_scale=t / n / (2.0 * math.pi),
        height=1.0 / width,
        width=width,
    )
    err_pulsed = measured_error(
        pulsed_schedule(space, frame_map(0.05, 1.0, lam0, 2, pulse=pulse), t, n),
        metric="operator_norm",
    )
    err_plain = measured_error(
        dicke_schedule(space, frame_map(0.05, 1.0, lam0, 2), t, 2 * n),
        metric="operator_norm",
    )
    ratio = err_pulsed / err_plain
    ok = 1.5 <= ratio <= 2.5
    _report(7, "pulsed error factor", ok, f"ratio={ratio:.3f}")


def test_criterion_8_fermi_bose_oracle():
    worst = 0.0
    worst_block = 0.0
    for n_levels, eps in ((1, (0.5,)), (2, (0.4, 0.6))):
        oracle = fermi_bose_oracle(n_levels, eps, 1.0, 0.1, 3)
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
        p = oracle.projector.matrix
        off = p @ oracle.h_fermionic.matrix @ (np.eye(p.shape[0]) - p)
        worst_block = max(worst_block, float(np.abs(off).max()))
    ok = worst <= 1e-10 and worst_block <= 1e-12
    _report(8, "fermionic oracle", ok, f"spectrum_dev={worst:.1e}, off_block={worst_block:.1e}")


def test_criterion_9_reproducible_csv(tmp_path):
    outputs = []
    for name in ("a.csv", "b.csv"):
        out = tmp_path / name
        proc = subprocess.run(
            [
                sys.executable,
                "-m",
                "dickesim.cli",
                "run",
                "--preset",
                "dicke-dsc-fidelity",
                "--output",
                str(out),
                "--reproducible",
            ],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, proc.stderr
        outputs.append(out.read_bytes())
    ok = outputs[0] == outputs[1]
    _report(9, "byte-identical reproducible output", ok, f"{len(outputs[0])} bytes")
