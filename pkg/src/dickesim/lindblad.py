"""Fixed-step master-equation integration along a digital-analog schedule.

The dissipative evolution is

    drho/dt = -i[H, rho]
              + kappa/2  * (2 a rho adag - {adag a, rho})
              + gamma_s/2 * sum_i (2 sm_i rho sp_i - {sp_i sm_i, rho})
              + gamma_d   * sum_i (sz_i rho sz_i - rho)

Note the dephasing term carries no 1/2: its rate normalization differs from
the other two dissipators and is implemented literally (a |+> state loses
<sx> as exp(-2 gamma_d t)).

Analog segments are integrated with a fixed-step classic Runge-Kutta (RK4)
scheme; instantaneous gates act as unitary conjugations.  Fixed stepping
keeps runs deterministic and byte-reproducible; a stability guard clamps the
step so that dt * ||H|| <= 0.05.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .hilbert import DensityMatrix, HilbertSpace, Operator, evolve_unitary, qubit_op, boson_op
from .observables import SimulationResult, fidelity, leakage, photon_number, survival_probability
from .trotter import TrotterSchedule

STABILITY_NORM_PRODUCT = 0.05  # cap on dt * spectral_norm(H)
TRACE_DRIFT_LIMIT = 1e-8


class IntegrationError(RuntimeError):
    """Numerical failure inside a segment (trace drift, NaN or overflow)."""


@dataclass(frozen=True)
class NoiseParams:
    """Decay rates in angular-frequency units: cavity decay kappa, qubit
    spontaneous emission gamma_s, qubit dephasing gamma_d."""

    kappa: float = 0.0
    gamma_s: float = 0.0
    gamma_d: float = 0.0

    def __post_init__(self):
        for name in ("kappa", "gamma_s", "gamma_d"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {v}")

    @property
    def is_zero(self) -> bool:
        return self.kappa == 0.0 and self.gamma_s == 0.0 and self.gamma_d == 0.0


@dataclass(frozen=True)
class IntegratorConfig:
    """Fixed-step integrator settings.

    ``dt`` is the requested step; segments clamp it further so that
    dt * ||H|| <= 0.05.  ``convergence_factor`` is the step refinement used
    by :func:`convergence_check`.
    """

    dt: float = 2e-3
    method: str = "rk4"
    convergence_factor: float = 2.0

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be > 0")
        if self.method != "rk4":
            raise ValueError(f"unsupported method {self.method!r}")
        if self.convergence_factor <= 1:
            raise ValueError("convergence_factor must be > 1")


class LindbladGenerator:
    """Precomputed sparse pieces of the dissipator for one space and noise set.

    The right-hand side exploits Hermiticity of rho: for Hermitian rho,
    A rho + rho A^dag = A rho + (A rho)^dag and L rho L^dag = (L (L rho)^dag)^dag,
    so every term needs only sparse-times-dense products.
    """

    def __init__(self, space: HilbertSpace, noise: NoiseParams):
        self.space = space
        self.noise = noise
        self._drift_cache: dict[int, sp.csr_matrix] = {}
        self._norm_cache: dict[int, float] = {}

        dim = space.dim
        self._jumps: list[tuple[float, sp.csr_matrix]] = []
        # Anticommutator halves fold into a single effective non-Hermitian
        # drift K; the dephasing "- rho" part is the constant gamma_d * N.
        k_diag = sp.csr_matrix((dim, dim), dtype=complex)
        if noise.kappa > 0:
            a = sp.csr_matrix(boson_op(space, "a").matrix)
            self._jumps.append((noise.kappa, a))
            k_diag = k_diag + (noise.kappa / 2.0) * sp.csr_matrix(
                boson_op(space, "n").matrix
            )
        if noise.gamma_s > 0:
            for i in range(space.n_qubits):
                sm = sp.csr_matrix(qubit_op(space, i, "minus").matrix)
                self._jumps.append((noise.gamma_s, sm))
                k_diag = k_diag + (noise.gamma_s / 2.0) * (sm.conj().T @ sm)
        if noise.gamma_d > 0:
            for i in range(space.n_qubits):
                sz = sp.csr_matrix(qubit_op(space, i, "z").matrix)
                self._jumps.append((noise.gamma_d, sz))
            k_diag = k_diag + (noise.gamma_d * space.n_qubits / 2.0) * sp.identity(
                dim, dtype=complex, format="csr"
            )
        self._k = k_diag

    def drift(self, h: Operator) -> sp.csr_matrix:
        """A = -iH - K, cached per Hamiltonian object."""
        drift = self._drift_cache.get(id(h))
        if drift is None:
            drift = (-1j) * sp.csr_matrix(h.matrix) - self._k
            self._drift_cache[id(h)] = drift
        return drift

    def hamiltonian_norm(self, h: Operator) -> float:
        norm = self._norm_cache.get(id(h))
        if norm is None:
            norm = float(np.abs(np.linalg.eigvalsh(h.matrix)).max())
            self._norm_cache[id(h)] = norm
        return norm

    def rhs_matrix(self, drift: sp.csr_matrix, rho: np.ndarray) -> np.ndarray:
        out = drift @ rho
        out = out + out.conj().T
        for rate, jump in self._jumps:
            j_rho = jump @ rho
            out = out + rate * (jump @ j_rho.conj().T).conj().T
        return out

    def step_count(self, duration: float, dt: float, h: Operator) -> int:
        norm = self.hamiltonian_norm(h)
        if norm > 0:
            dt = min(dt, STABILITY_NORM_PRODUCT / norm)
        return max(1, math.ceil(duration / dt))

    def integrate(self, h: Operator, rho: np.ndarray, duration: float, dt: float):
        """RK4 over one analog segment; returns (matrix, raw trace drift).

        The output is re-Hermitized and trace-renormalized; a drift beyond
        1e-8 (or any non-finite value) raises instead of being hidden.
        """
        if duration == 0.0:
            return rho, 0.0
        drift = self.drift(h)
        steps = self.step_count(duration, dt, h)
        step = duration / steps
        half = step / 2.0
        sixth = step / 6.0
        with np.errstate(over="ignore", invalid="ignore"):  # isfinite checked below
            for _ in range(steps):
                k1 = self.rhs_matrix(drift, rho)
                k2 = self.rhs_matrix(drift, rho + half * k1)
                k3 = self.rhs_matrix(drift, rho + half * k2)
                k4 = self.rhs_matrix(drift, rho + step * k3)
                rho = rho + sixth * (k1 + 2.0 * (k2 + k3) + k4)
        trace = np.trace(rho)
        if not np.isfinite(rho).all():
            raise IntegrationError("state overflowed or became NaN; reduce dt")
        drift_err = abs(trace - 1.0)
        if drift_err > TRACE_DRIFT_LIMIT:
            raise IntegrationError(
                f"trace drift {drift_err:.3e} exceeds {TRACE_DRIFT_LIMIT}; step size too large"
            )
        rho = (rho + rho.conj().T) / (2.0 * trace.real)
        return rho, float(drift_err)


def rhs(h: Operator, rho: DensityMatrix, noise: NoiseParams) -> np.ndarray:
    """Right-hand side of the master equation as a raw matrix derivative."""
    if not h.is_hermitian():
        raise ValueError("rhs requires a Hermitian Hamiltonian")
    if h.space is not rho.space:
        raise ValueError("Hamiltonian and state live on different spaces")
    gen = LindbladGenerator(h.space, noise)
    return gen.rhs_matrix(gen.drift(h), np.asarray(rho.matrix))


def integrate_segment(
    h: Operator,
    rho0: DensityMatrix,
    duration: float,
    noise: NoiseParams,
    config: IntegratorConfig,
) -> DensityMatrix:
    """Evolve rho0 under one constant Hamiltonian with dissipation."""
    if not h.is_hermitian():
        raise ValueError("integrate_segment requires a Hermitian Hamiltonian")
    if h.space is not rho0.space:
        raise ValueError("Hamiltonian and state live on different spaces")
    if duration < 0:
        raise ValueError("duration must be >= 0")
    gen = LindbladGenerator(h.space, noise)
    rho, _ = gen.integrate(h, np.asarray(rho0.matrix), duration, config.dt)
    return DensityMatrix(h.space, rho, check=False)


def _record_plan(schedule: TrotterSchedule, record_segments: bool) -> list[tuple[int, float]]:
    """Record points within one step: (segments consumed, step fraction).

    By default only the step end is recorded.  With segment recording on,
    every analog segment boundary except the last adds a record, its time
    attributed pro rata by analog duration.
    """
    m = schedule.segments_per_step
    if not record_segments or schedule.n_steps == 0:
        return [(m, 1.0)]
    step0 = schedule.step_segments(0)

    def counts(seg):
        return seg.kind == "analog" and seg.advances_clock

    analog_total = sum(s.duration for s in step0 if counts(s))
    analog_idx = [i for i, s in enumerate(step0) if counts(s)]
    if analog_total <= 0 or not analog_idx:
        return [(m, 1.0)]
    plan = []
    cum = 0.0
    for i, seg in enumerate(step0):
        if counts(seg):
            cum += seg.duration
            if i != analog_idx[-1]:
                plan.append((i + 1, cum / analog_total))
    plan.append((m, 1.0))
    return plan


def _ideal_slices(
    schedule: TrotterSchedule, fractions: list[float]
) -> list[list[tuple[Operator, float]]]:
    """(Hamiltonian, duration) slices advancing the ideal state between records."""
    step_total = sum(d for _, d in schedule.ideal_steps)
    slices = []
    prev = 0.0
    for frac in fractions:
        target = frac * step_total
        parts = []
        t0 = 0.0
        for h, d in schedule.ideal_steps:
            t1 = t0 + d
            lo, hi = max(prev, t0), min(target, t1)
            if hi - lo > 1e-15 * max(step_total, 1.0):
                parts.append((h, hi - lo))
            t0 = t1
        slices.append(parts)
        prev = target
    return slices


def run_schedule(
    schedule: TrotterSchedule,
    rho0: DensityMatrix,
    noise: NoiseParams,
    config: IntegratorConfig,
    ideal_noise: bool = False,
    positivity_checks: int = 5,
    record_segments: bool = False,
) -> SimulationResult:
    """Integrate a schedule segment-by-segment, tracking the ideal reference.

    The digital state rho_T sees every analog segment with the configured
    noise and every gate as an instantaneous unitary conjugation.  The
    reference rho_I evolves under the exact target dynamics, noiselessly by
    default (the stricter benchmark); ``ideal_noise=True`` applies the same
    dissipators to the reference as well.

    Observables are recorded after every Trotter step; ``record_segments``
    additionally records at analog segment boundaries inside each step
    (finer sampling for the survival curve; the digital state there is
    mid-protocol, so its fidelity column is diagnostic only).  Positivity of
    rho_T is spot-checked at ``positivity_checks`` evenly spaced steps.
    """
    if schedule.space is not rho0.space:
        raise ValueError("schedule and state live on different spaces")
    gen = LindbladGenerator(schedule.space, noise)
    ideal_gen = LindbladGenerator(schedule.space, noise) if ideal_noise else None

    plan = _record_plan(schedule, record_segments)
    slices = _ideal_slices(schedule, [frac for _, frac in plan])
    ideal_units = None
    if not ideal_noise:
        ideal_units = [
            [evolve_unitary(h, d).matrix for h, d in parts] for parts in slices
        ]

    rho_t = np.array(rho0.matrix)
    rho_i = np.array(rho0.matrix)
    n = schedule.n_steps
    check_at = set(np.linspace(0, n, min(positivity_checks, n + 1), dtype=int).tolist())

    result = SimulationResult(
        metadata={
            "variant": schedule.variant,
            "n_steps": n,
            "simulated_time": schedule.simulated_time,
            "coupling_scale": schedule.coupling_scale,
            "noise": {"kappa": noise.kappa, "gamma_s": noise.gamma_s, "gamma_d": noise.gamma_d},
            "dt": config.dt,
            "ideal_noise": ideal_noise,
            "record_segments": record_segments,
        }
    )

    def record(steps_done: float, drift_err: float, positivity_key: int | None):
        dm_t = DensityMatrix(schedule.space, rho_t, check=False)
        dm_i = DensityMatrix(schedule.space, rho_i, check=False)
        t_sim = steps_done * schedule.step_duration
        result.time_grid.append((t_sim, schedule.coupling_scale * t_sim))
        result.fidelity.append(fidelity(dm_t, dm_i))
        result.photon_trotter.append(photon_number(dm_t))
        result.photon_ideal.append(photon_number(dm_i))
        result.survival.append(survival_probability(dm_i, rho0))
        result.leakage.append(leakage(dm_t))
        result.trace_error.append(drift_err)
        if positivity_key is not None and positivity_key in check_at:
            min_eig = float(np.linalg.eigvalsh(rho_t)[0])
            if min_eig < -1e-8:
                raise IntegrationError(
                    f"state lost positivity at step {positivity_key}: "
                    f"min eigenvalue {min_eig:.3e}"
                )

    record(0.0, 0.0, 0)
    seg_index = 0
    for k, step in enumerate(schedule.steps()):
        consumed = 0
        for plan_idx, (upto, frac) in enumerate(plan):
            max_drift = 0.0
            for seg in step[consumed:upto]:
                try:
                    if seg.kind == "gate":
                        u = seg.unitary.matrix
                        rho_t = u @ rho_t @ u.conj().T
                    else:
                        rho_t, drift_err = gen.integrate(
                            seg.hamiltonian, rho_t, seg.duration, config.dt
                        )
                        max_drift = max(max_drift, drift_err)
                except IntegrationError as err:
                    raise IntegrationError(
                        f"segment {seg_index} ({seg.label}): {err}"
                    ) from err
                seg_index += 1
            consumed = upto
            if ideal_noise:
                for h, d in slices[plan_idx]:
                    rho_i, _ = ideal_gen.integrate(h, rho_i, d, config.dt)
            else:
                for u in ideal_units[plan_idx]:
                    rho_i = u @ rho_i @ u.conj().T
            record(
                k + frac,
                max_drift,
                k + 1 if frac == 1.0 else None,
            )

    result.validate()
    return result


def convergence_check(
    schedule: TrotterSchedule,
    rho0: DensityMatrix,
    noise: NoiseParams,
    config: IntegratorConfig,
) -> float:
    """|final fidelity at dt - final fidelity at refined dt|."""
    coarse = run_schedule(schedule, rho0, noise, config)
    fine = run_schedule(
        schedule,
        rho0,
        noise,
        IntegratorConfig(
            dt=config.dt / config.convergence_factor,
            method=config.method,
            convergence_factor=config.convergence_factor,
        ),
    )
    return abs(coarse.final_fidelity - fine.final_fidelity)
