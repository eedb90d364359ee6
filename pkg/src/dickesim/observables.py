"""Figures of merit computed from states and recorded trajectories."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .hilbert import DensityMatrix, boson_op


def fidelity(rho_t: DensityMatrix, rho_i: DensityMatrix) -> float:
    """Overlap fidelity F = Re Tr(rho_t rho_i).

    This is the plain state overlap, *not* the Uhlmann fidelity: for two
    mixed states it can stay below 1 even when they are equal.  It equals
    |<psi_t|psi_i>|^2 when both states are pure, and is symmetric in its
    arguments.
    """
    if rho_t.space is not rho_i.space:
        raise ValueError("states live on different spaces")
    return float(np.trace(rho_t.matrix @ rho_i.matrix).real)


def photon_number(rho: DensityMatrix) -> float:
    """Mean photon number Tr(adag a rho)."""
    value = np.trace(boson_op(rho.space, "n").matrix @ rho.matrix)
    return float(value.real)


def survival_probability(rho_t: DensityMatrix, rho_0: DensityMatrix) -> float:
    """Tr(rho_t rho_0); for a pure rho_0 this is <psi_0| rho_t |psi_0>."""
    return fidelity(rho_t, rho_0)


def leakage(rho: DensityMatrix) -> float:
    """Total population in the top two Fock levels (truncation guard).

    With fock_cutoff = 0 there is a single level and its whole population
    counts as leakage.
    """
    space = rho.space
    diag = np.real(np.diag(rho.matrix)).reshape(2 ** space.n_qubits, space.boson_dim)
    start = max(0, space.boson_dim - 2)
    return float(diag[:, start:].sum())


@dataclass
class SimulationResult:
    """Stroboscopic record of one master-equation run.

    All lists share the time grid (one entry per Trotter step, including
    t = 0).  ``survival`` tracks the initial state under the ideal
    (reference) evolution; ``trace_error`` is the largest raw trace drift
    the integrator saw between the previous record point and this one,
    measured before renormalization.
    """

    time_grid: list[tuple[float, float]] = field(default_factory=list)  # (t_sim, g*t)
    fidelity: list[float] = field(default_factory=list)
    photon_trotter: list[float] = field(default_factory=list)
    photon_ideal: list[float] = field(default_factory=list)
    survival: list[float] = field(default_factory=list)
    leakage: list[float] = field(default_factory=list)
    trace_error: list[float] = field(default_factory=list)
    metadata: dict[str, Any] = field(default_factory=dict)

    COLUMNS = (
        "t_sim",
        "g_t",
        "fidelity",
        "n_photon_trotter",
        "n_photon_ideal",
        "survival",
        "leakage",
        "trace_error",
    )

    def validate(self) -> None:
        n = len(self.time_grid)
        for name in (
            "fidelity",
            "photon_trotter",
            "photon_ideal",
            "survival",
            "leakage",
            "trace_error",
        ):
            if len(getattr(self, name)) != n:
                raise ValueError(f"column {name} has wrong length")
        for f in self.fidelity:
            if not -1e-8 <= f <= 1.0 + 1e-8:
                raise ValueError(f"fidelity {f} outside [0, 1]")
        for p in (*self.photon_trotter, *self.photon_ideal):
            if p < -1e-8:
                raise ValueError(f"negative photon number {p}")

    def rows(self):
        """Iterate rows in the documented CSV column order."""
        for i, (t_sim, gt) in enumerate(self.time_grid):
            yield (
                t_sim,
                gt,
                self.fidelity[i],
                self.photon_trotter[i],
                self.photon_ideal[i],
                self.survival[i],
                self.leakage[i],
                self.trace_error[i],
            )

    @property
    def final_fidelity(self) -> float:
        return self.fidelity[-1]

    @property
    def max_leakage(self) -> float:
        return max(self.leakage)
