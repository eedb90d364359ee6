"""Leading-order digital error: explicit operator, scalar bound, measurement.

For a first-order product formula over Hamiltonian terms H_i the leading
error contribution is sum_{i<j} [H_i, H_j] t^2 / (2n).  For the alternating
interaction pair

    H1 = sum_i (w01_i/2) sz_i + wt adag a + g sum_i (s+_i a + s-_i adag)
    H2 = sum_i (w02_i/2) sz_i + wt adag a + g sum_i (s-_i a + s+_i adag)

the commutator expands in closed form through three identities,

    [V+, V-]      = sum_i sz_i (a^2 - adag^2) + sum_ij (s+_i s+_j - s-_j s-_i)
    [V+, sum sz]  = 2 sum_i (s-_i adag - s+_i a)
    [V+, adag a]  = sum_i (s+_i a - s-_i adag)

giving a five-term expression built explicitly by :func:`closed_form_error`
as an independent cross-check on the brute-force commutator.  The identities
involving [a, adag] acquire truncation artifacts in the top Fock levels, so
comparisons mask the top two levels (see :func:`fock_projector`).

The scalar bound (triangle plus Cauchy-Schwarz, under the normalization
max{g, w01_i, wt} * t ~= 1, with ladder norms taken on the populated,
domain-restricted levels) is

    ||eps|| <~ [4N(||a|| + ||adag||) + N ||a^2 - adag^2|| + N^2] / (2n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .hamiltonians import ModelParams, anti_tavis_cummings, tavis_cummings
from .hilbert import (
    DensityMatrix,
    HilbertSpace,
    Operator,
    boson_op,
    collective_qubit_op,
    commutator,
    qubit_op,
    spectral_norm,
    zero,
)
from .lindblad import NoiseParams
from .trotter import TrotterSchedule, execute_unitary, operator_norm_error, target_unitary

MEASURED_METRICS = ("state_infidelity", "operator_norm")


@dataclass(frozen=True)
class ErrorReport:
    """One digital-error evaluation, serializable as a CSV row."""

    variant: str
    n_qubits: int
    fock_cutoff: int
    n_steps: int
    t: float
    leading_term_norm: float
    cauchy_schwarz_bound: float
    measured_error: float
    measured_metric: str
    restriction_level: int

    COLUMNS = (
        "variant",
        "n_qubits",
        "fock_cutoff",
        "n_steps",
        "t",
        "leading_term_norm",
        "cauchy_schwarz_bound",
        "measured_error",
        "measured_metric",
        "restriction_level",
    )

    def __post_init__(self):
        if self.leading_term_norm < 0 or self.cauchy_schwarz_bound < 0:
            raise ValueError("norms and bounds must be >= 0")

    def to_csv_row(self) -> str:
        return ",".join(
            [
                self.variant,
                str(self.n_qubits),
                str(self.fock_cutoff),
                str(self.n_steps),
                repr(self.t),
                repr(self.leading_term_norm),
                repr(self.cauchy_schwarz_bound),
                repr(self.measured_error),
                self.measured_metric,
                str(self.restriction_level),
            ]
        )


def leading_error_operator(h1: Operator, h2: Operator, t: float, n: int) -> Operator:
    """[H1, H2] * t^2 / (2n) for a two-term splitting."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return (t * t / (2.0 * n)) * commutator(h1, h2)


def trotter_error_sum(terms: Sequence[Operator], t: float, n: int) -> Operator:
    """sum_{i<j} [H_i, H_j] * t^2 / (2n) for a multi-term splitting."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not terms:
        raise ValueError("need at least one term")
    total = zero(terms[0].space)
    for i in range(len(terms)):
        for j in range(i + 1, len(terms)):
            total = total + commutator(terms[i], terms[j])
    return (t * t / (2.0 * n)) * total


def error_pair(
    space: HilbertSpace,
    omega01: float | Sequence[float],
    omega02: float | Sequence[float],
    omega_tilde: float,
    g: float,
) -> tuple[Operator, Operator]:
    """The two alternating interaction Hamiltonians in effective coordinates.

    Both carry their sigma_z coefficients with a positive sign (w0k_i/2), so
    ``omega02`` here is minus the frame detuning of the physically rotated
    block.
    """
    h1 = tavis_cummings(space, omega01, omega_tilde, g)
    if np.isscalar(omega02):
        neg02 = -float(omega02)
    else:
        neg02 = [-float(v) for v in omega02]
    h2 = anti_tavis_cummings(space, neg02, omega_tilde, g)
    return h1, h2


def effective_frequencies(params: ModelParams) -> tuple[tuple[float, ...], tuple[float, ...], float, float]:
    """(omega01_i, omega02_i, omega_tilde, g) realized by the symmetric frame."""
    if params.frame is None:
        raise ValueError("params carry no frame record")
    f = params.frame
    n = params.n_qubits
    omega01 = tuple(float(v) for v in np.broadcast_to(np.asarray(f.qubit_detuning), (n,)))
    omega02 = tuple(-float(v) for v in np.broadcast_to(np.asarray(f.alt_detuning), (n,)))
    return omega01, omega02, f.mode_detuning, f.coupling


def closed_form_error(
    space: HilbertSpace,
    omega01: float | Sequence[float],
    omega02: float | Sequence[float],
    omega_tilde: float,
    g: float,
    t: float,
    n: int,
) -> Operator:
    """Five-term explicit form of the leading error operator.

    Independent of :func:`leading_error_operator`: built term by term from
    the commutator identities rather than by multiplying the Hamiltonians.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    nq = space.n_qubits
    w01 = np.broadcast_to(np.asarray(omega01, dtype=float), (nq,))
    w02 = np.broadcast_to(np.asarray(omega02, dtype=float), (nq,))
    a = boson_op(space, "a").matrix
    adag = boson_op(space, "adag").matrix

    total = np.zeros((space.dim, space.dim), dtype=complex)
    for i in range(nq):
        sp = qubit_op(space, i, "plus").matrix
        sm = qubit_op(space, i, "minus").matrix
        up = sp @ adag - sm @ a
        total += g * w01[i] * up  # [V+, qubit free part of H1]
        total += g * omega_tilde * up  # [mode part of H1, V-]
        total += g * w02[i] * (sm @ adag - sp @ a)  # [V+, qubit free part of H2]
        total += g * omega_tilde * (sp @ a - sm @ adag)  # [V+, mode part of H2]
    sz_sum_amp = np.zeros_like(total)
    for i in range(nq):
        sz_sum_amp += qubit_op(space, i, "z").matrix
    sp_tot = collective_qubit_op(space, "plus").matrix
    sm_tot = collective_qubit_op(space, "minus").matrix
    total += g * g * (sz_sum_amp @ (a @ a - adag @ adag) + sp_tot @ sp_tot - sm_tot @ sm_tot)
    return Operator(space, (t * t / (2.0 * n)) * total)


def biased_error_operator(
    space: HilbertSpace,
    omega01: float | Sequence[float],
    omega02: float | Sequence[float],
    omega_tilde: float,
    g: float,
    bias: float,
    t: float,
    n: int,
) -> Operator:
    """Leading error of the three-term biased splitting.

    Adds -i * bias * (w01_i + w02_i) * t^2/(2n) * sy_i to the two-term
    error: the boson-coupled commutators of the bias term with H1 and H2
    cancel pairwise, leaving only the qubit-frequency piece.  With opposite
    effective frequencies (w01_i = -w02_i) the extra term vanishes
    identically.
    """
    eps = closed_form_error(space, omega01, omega02, omega_tilde, g, t, n)
    if bias == 0.0:
        return eps
    nq = space.n_qubits
    w01 = np.broadcast_to(np.asarray(omega01, dtype=float), (nq,))
    w02 = np.broadcast_to(np.asarray(omega02, dtype=float), (nq,))
    extra = np.zeros((space.dim, space.dim), dtype=complex)
    for i in range(nq):
        extra += (w01[i] + w02[i]) * qubit_op(space, i, "y").matrix
    return eps + Operator(space, (-1j * bias * t * t / (2.0 * n)) * extra)


def cauchy_schwarz_bound(
    n_qubits: int,
    n_steps: int,
    norm_a: float,
    norm_a2_diff: float,
    norm_adag: float | None = None,
) -> float:
    """[4N(||a|| + ||adag||) + N ||a^2 - adag^2|| + N^2] / (2n).

    Norms must be evaluated on the domain-restricted space actually
    populated by the dynamics; the bound is dimensionless under the
    normalization max{g, w0k_i, wt} * t ~= 1.
    """
    if norm_a < 0 or norm_a2_diff < 0 or (norm_adag is not None and norm_adag < 0):
        raise ValueError("operator norms must be >= 0")
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    if norm_adag is None:
        norm_adag = norm_a
    return (
        4.0 * n_qubits * (norm_a + norm_adag)
        + n_qubits * norm_a2_diff
        + n_qubits * n_qubits
    ) / (2.0 * n_steps)


def biased_bound(base_bound: float, n_qubits: int, n_steps: int) -> float:
    """Companion scalar bound for the biased splitting: adds N/n."""
    return base_bound + n_qubits / n_steps


def fock_projector(space: HilbertSpace, max_level: int) -> Operator:
    """Projector onto Fock levels 0..max_level (qubits untouched)."""
    if not 0 <= max_level <= space.fock_cutoff:
        raise ValueError(f"max_level {max_level} outside [0, {space.fock_cutoff}]")
    diag = np.zeros(space.dim)
    for k in range(space.dim):
        _, fock = space.split_index(k)
        if fock <= max_level:
            diag[k] = 1.0
    return Operator(space, np.diag(diag).astype(complex))


def masked_norm(op: Operator, drop_top_levels: int = 2) -> float:
    """Spectral norm of P op P with the top Fock levels projected out.

    The commutator identities are exact only on the untruncated space;
    truncation artifacts live in the top levels, so identity checks compare
    masked operators.
    """
    keep = op.space.fock_cutoff - drop_top_levels
    if keep < 0:
        raise ValueError("not enough Fock levels to mask")
    p = fock_projector(op.space, keep)
    return spectral_norm(p @ op @ p)


def restricted_ladder_norms(space: HilbertSpace, max_level: int) -> tuple[float, float, float]:
    """(||a||, ||adag||, ||a^2 - adag^2||) restricted to Fock levels <= max_level."""
    p = fock_projector(space, max_level)
    a = boson_op(space, "a")
    adag = boson_op(space, "adag")
    diff = a @ a - adag @ adag
    return (
        spectral_norm(p @ a @ p),
        spectral_norm(p @ adag @ p),
        spectral_norm(p @ diff @ p),
    )


def max_populated_level(
    states: Sequence, threshold: float = 1e-6, space: HilbertSpace | None = None
) -> int:
    """Highest Fock level with population >= threshold in any given state.

    Accepts DensityMatrix objects or pure-state vectors (the latter need the
    ``space`` argument).  Operationalizes the domain restriction: the
    populated levels define the space on which the ladder norms of the
    bound are evaluated.
    """
    if not len(states):
        raise ValueError("need at least one state")
    level = 0
    for state in states:
        if isinstance(state, DensityMatrix):
            pops = np.real(np.diag(state.matrix))
            nb = state.space.boson_dim
        else:
            if space is None:
                raise ValueError("pure-state vectors need an explicit space")
            pops = np.abs(np.asarray(state)) ** 2
            nb = space.boson_dim
        per_fock = pops.reshape(-1, nb).sum(axis=0)
        occupied = np.nonzero(per_fock >= threshold)[0]
        if occupied.size:
            level = max(level, int(occupied[-1]))
    return level


def measured_error(
    schedule: TrotterSchedule,
    initial_state: np.ndarray | None = None,
    noise: NoiseParams | None = None,
    metric: str = "state_infidelity",
) -> float:
    """Digital error of a schedule against its exact target evolution.

    ``state_infidelity`` returns 1 - |<psi_exact|psi_schedule>|^2 from the
    final states (quadratic in the leading error term, so it shrinks like
    1/n^2); ``operator_norm`` returns ||U_schedule - U_exact|| (linear in
    the leading term, shrinking like 1/n).  Refuses to run with nonzero
    noise: this measurement isolates the digital error.
    """
    if noise is not None and not noise.is_zero:
        raise ValueError("digital-error measurement requires zero noise")
    if metric == "operator_norm":
        return operator_norm_error(schedule)
    if metric != "state_infidelity":
        raise ValueError(f"unknown metric {metric!r}; choose from {MEASURED_METRICS}")
    if initial_state is None:
        raise ValueError("state_infidelity metric needs an initial state")
    psi = np.asarray(initial_state, dtype=complex).reshape(-1)
    final = execute_unitary(schedule, psi).final
    exact = target_unitary(schedule).matrix @ (psi / np.linalg.norm(psi))
    return float(1.0 - abs(np.vdot(exact, final)) ** 2)


def dicke_error_report(
    space: HilbertSpace,
    params: ModelParams,
    t: float,
    n: int,
    restriction_level: int,
    measured: float = float("nan"),
    measured_metric: str = "operator_norm",
    variant: str = "dicke",
) -> ErrorReport:
    """Assemble the restricted leading-term norm and the rescaled bound.

    The leading-term norm is evaluated at the run time t and restricted to
    the populated levels; the scalar bound, natively normalized to
    max{g, w0k_i, wt} * t ~= 1, is rescaled by (max{.} * t)^2 so the two
    columns stay comparable at any t.
    """
    omega01, omega02, omega_tilde, g = effective_frequencies(params)
    h1, h2 = error_pair(space, omega01, omega02, omega_tilde, g)
    p = fock_projector(space, restriction_level)
    eps = leading_error_operator(h1, h2, t, n)
    leading_norm = spectral_norm(p @ eps @ p)
    norm_a, norm_adag, norm_diff = restricted_ladder_norms(space, restriction_level)
    freq_scale = max(g, abs(omega_tilde), max(abs(v) for v in (*omega01, *omega02)))
    base = cauchy_schwarz_bound(space.n_qubits, n, norm_a, norm_diff, norm_adag)
    bound = base * (freq_scale * t) ** 2
    return ErrorReport(
        variant=variant,
        n_qubits=space.n_qubits,
        fock_cutoff=space.fock_cutoff,
        n_steps=n,
        t=t,
        leading_term_norm=leading_norm,
        cauchy_schwarz_bound=bound,
        measured_error=measured,
        measured_metric=measured_metric,
        restriction_level=restriction_level,
    )
