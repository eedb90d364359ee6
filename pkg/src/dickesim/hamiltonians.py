"""Model parameters and Hamiltonian builders for the collective spin-boson models.

Covers the homogeneous Dicke model, its rotating-wave (Tavis-Cummings) and
counter-rotating (anti-Tavis-Cummings) halves, inhomogeneous and biased
variants, the pulsed coupling profile, and a small Jordan-Wigner fermionic
oracle certifying the pairing-model-to-qubit mapping on one or two levels.

All builders are pure functions over immutable inputs.  Frequencies are
angular and dimensionless; the natural unit system sets the simulated mode
frequency to 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .hilbert import (
    HilbertSpace,
    Operator,
    _assert_hermitian_build,
    boson_op,
    collective_qubit_op,
    commutator,
    evolve_unitary,
    identity,
    qubit_op,
)

PULSE_AREA_ATOL = 1e-12
FRAME_RTOL = 1e-9


@dataclass(frozen=True)
class PulseParams:
    """Periodically kicked coupling: lambda(t) = lambda0 + lambda1 * (delta comb).

    Kicks repeat with period ``2*pi*period_scale`` and are approximated by
    square pulses of height ``height`` and width ``width`` with
    height * width = 1, so the kick weight per period is exactly lambda1.
    """

    lambda0: float
    lambda1: float
    period_scale: float  # T; kick instants are t_k = 2*pi*k*T
    height: float  # alpha
    width: float  # tau

    def __post_init__(self):
        for name in ("lambda0", "lambda1", "period_scale", "height", "width"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"pulse field {name} must be finite")
        if self.period_scale <= 0 or self.height <= 0 or self.width <= 0:
            raise ValueError("pulse period, height and width must be positive")
        if abs(self.height * self.width - 1.0) > PULSE_AREA_ATOL:
            raise ValueError(
                f"pulse area height*width = {self.height * self.width!r} must equal 1"
            )
        if self.width > self.period:
            raise ValueError("pulse width exceeds the kick period")

    @property
    def period(self) -> float:
        return 2.0 * math.pi * self.period_scale

    @property
    def kicked_coupling(self) -> float:
        """Coupling inside a pulse window, lambda0 + lambda1 * height."""
        return self.lambda0 + self.lambda1 * self.height


@dataclass(frozen=True)
class FrameParams:
    """Interaction-frame quantities realizing a target model.

    ``qubit_detuning`` and ``alt_detuning`` are the two alternating qubit
    detunings (omega_0 - delta and its partner), ``mode_detuning`` the mode
    detuning (omega - delta), and ``coupling`` the physical coupling g.
    Detunings may be per-qubit tuples.
    """

    qubit_detuning: tuple[float, ...]
    alt_detuning: tuple[float, ...]
    mode_detuning: float
    coupling: float


def _as_tuple(value, n: int, name: str) -> tuple[float, ...]:
    if np.isscalar(value):
        return (float(value),) * n
    vals = tuple(float(v) for v in value)
    if len(vals) != n:
        raise ValueError(f"{name} has length {len(vals)}, expected {n}")
    return vals


@dataclass(frozen=True)
class ModelParams:
    """Validated record of every model parameter.

    ``qubit_freq`` may be a scalar or a per-qubit sequence (broadband
    variants).  When ``frame`` is present the record additionally enforces
    the frame-consistency relations
    ``mode_freq = 2 * mode_detuning``,
    ``qubit_freq = qubit_detuning - alt_detuning`` (per qubit), and
    ``coupling = sqrt(N) * g``.
    """

    n_qubits: int
    qubit_freq: float | tuple[float, ...]
    mode_freq: float
    coupling: float
    bias: float = 0.0
    pulse: PulseParams | None = None
    frame: FrameParams | None = None
    fermi_levels: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be >= 1")
        freqs = _as_tuple(self.qubit_freq, self.n_qubits, "qubit_freq")
        object.__setattr__(self, "qubit_freq", freqs if len(set(freqs)) > 1 else freqs[0])
        for v in (*freqs, self.mode_freq, self.coupling, self.bias):
            if not math.isfinite(v):
                raise ValueError("all frequencies must be finite")
        if self.coupling < 0:
            raise ValueError("coupling must be >= 0")
        if self.frame is not None:
            self._check_frame()

    def _check_frame(self):
        f = self.frame
        scale = max(abs(self.mode_freq), abs(self.coupling), 1.0)
        if abs(2.0 * f.mode_detuning - self.mode_freq) > FRAME_RTOL * scale:
            raise ValueError("frame inconsistency: mode_freq != 2 * mode_detuning")
        dets = _as_tuple(f.qubit_detuning, self.n_qubits, "qubit_detuning")
        alts = _as_tuple(f.alt_detuning, self.n_qubits, "alt_detuning")
        for i, (d, dalt) in enumerate(zip(dets, alts)):
            if abs((d - dalt) - self.qubit_freqs[i]) > FRAME_RTOL * scale:
                raise ValueError(
                    f"frame inconsistency on qubit {i}: "
                    "qubit_freq != qubit_detuning - alt_detuning"
                )
        if abs(math.sqrt(self.n_qubits) * f.coupling - self.coupling) > FRAME_RTOL * scale:
            raise ValueError("frame inconsistency: coupling != sqrt(N) * g")

    @property
    def qubit_freqs(self) -> tuple[float, ...]:
        return _as_tuple(self.qubit_freq, self.n_qubits, "qubit_freq")

    @property
    def g(self) -> float:
        """Physical per-qubit coupling lambda / sqrt(N)."""
        if self.frame is not None:
            return self.frame.coupling
        return self.coupling / math.sqrt(self.n_qubits)


def frame_map(
    qubit_freq: float | Sequence[float],
    mode_freq: float,
    coupling: float,
    n_qubits: int,
    bias: float = 0.0,
    pulse: PulseParams | None = None,
) -> ModelParams:
    """Fill the interaction-frame fields from target-model parameters.

    Uses the symmetric convention: the two alternating qubit detunings are
    +-qubit_freq/2, the mode detuning is mode_freq/2, and g = coupling/sqrt(N).
    Any other convention satisfying the frame invariants realizes the same
    model; the symmetric one makes the two detuning sets mirror images.
    """
    if n_qubits < 1:
        raise ValueError("n_qubits must be >= 1")
    if coupling < 0:
        raise ValueError("coupling must be >= 0")
    freqs = _as_tuple(qubit_freq, n_qubits, "qubit_freq")
    frame = FrameParams(
        qubit_detuning=tuple(f / 2.0 for f in freqs),
        alt_detuning=tuple(-f / 2.0 for f in freqs),
        mode_detuning=mode_freq / 2.0,
        coupling=coupling / math.sqrt(n_qubits),
    )
    return ModelParams(
        n_qubits=n_qubits,
        qubit_freq=freqs if len(set(freqs)) > 1 else freqs[0],
        mode_freq=mode_freq,
        coupling=coupling,
        bias=bias,
        pulse=pulse,
        frame=frame,
    )


def _check_space(space: HilbertSpace, params: ModelParams) -> None:
    if space.n_qubits != params.n_qubits:
        raise ValueError(
            f"space has {space.n_qubits} qubits but params describe {params.n_qubits}"
        )


def dicke(space: HilbertSpace, params: ModelParams) -> Operator:
    """sum_i (w0_i/2) sz_i + w adag a + (lambda/sqrt(N)) sum_i sx_i (a + adag).

    Per-qubit ``qubit_freq`` gives the broadband (inhomogeneous) variant.
    """
    _check_space(space, params)
    return inhomogeneous_dicke(
        space, params.qubit_freqs, params.mode_freq, params.coupling, rotating=False
    )


def inhomogeneous_dicke(
    space: HilbertSpace,
    qubit_freqs: Sequence[float],
    mode_freq: float,
    coupling: float,
    rotating: bool,
) -> Operator:
    """Collective spin-boson model with per-qubit frequencies.

    ``rotating=True`` keeps only the excitation-conserving coupling
    (sigma+ a + sigma- adag); ``rotating=False`` uses the full
    sigma_x (a + adag) coupling.
    """
    freqs = _as_tuple(qubit_freqs, space.n_qubits, "qubit_freqs")
    a = boson_op(space, "a").matrix
    adag = boson_op(space, "adag").matrix
    h = mode_freq * boson_op(space, "n").matrix
    g = coupling / math.sqrt(space.n_qubits)
    for i, f in enumerate(freqs):
        h = h + (f / 2.0) * qubit_op(space, i, "z").matrix
        if rotating:
            sp = qubit_op(space, i, "plus").matrix
            sm = qubit_op(space, i, "minus").matrix
            h = h + g * (sp @ a + sm @ adag)
        else:
            h = h + g * qubit_op(space, i, "x").matrix @ (a + adag)
    _assert_hermitian_build(h, "inhomogeneous_dicke")
    return Operator(space, h)


def tavis_cummings(
    space: HilbertSpace,
    qubit_detunings: float | Sequence[float],
    mode_detuning: float,
    g: float,
) -> Operator:
    """sum_i (dq_i/2) sz_i + dm adag a + g sum_i (s+_i a + s-_i adag).

    Conserves the total excitation number sum_i s+_i s-_i + adag a.
    """
    dets = _as_tuple(qubit_detunings, space.n_qubits, "qubit_detunings")
    a = boson_op(space, "a").matrix
    adag = boson_op(space, "adag").matrix
    h = mode_detuning * boson_op(space, "n").matrix
    for i, d in enumerate(dets):
        sp = qubit_op(space, i, "plus").matrix
        sm = qubit_op(space, i, "minus").matrix
        h = h + (d / 2.0) * qubit_op(space, i, "z").matrix + g * (sp @ a + sm @ adag)
    _assert_hermitian_build(h, "tavis_cummings")
    return Operator(space, h)


def anti_tavis_cummings(
    space: HilbertSpace,
    qubit_detunings: float | Sequence[float],
    mode_detuning: float,
    g: float,
) -> Operator:
    """-sum_i (dq_i/2) sz_i + dm adag a + g sum_i (s-_i a + s+_i adag).

    Equals the conjugation of :func:`tavis_cummings` (same arguments) by the
    collective rotation exp(i pi/2 sum_i sx_i).
    """
    dets = _as_tuple(qubit_detunings, space.n_qubits, "qubit_detunings")
    a = boson_op(space, "a").matrix
    adag = boson_op(space, "adag").matrix
    h = mode_detuning * boson_op(space, "n").matrix
    for i, d in enumerate(dets):
        sp = qubit_op(space, i, "plus").matrix
        sm = qubit_op(space, i, "minus").matrix
        h = h - (d / 2.0) * qubit_op(space, i, "z").matrix + g * (sm @ a + sp @ adag)
    _assert_hermitian_build(h, "anti_tavis_cummings")
    return Operator(space, h)


def collective_rotation(space: HilbertSpace, axis: str, angle: float) -> Operator:
    """exp(-i angle/2 * sum_i sigma_axis_i), axis in {'x', 'y'}."""
    if axis not in ("x", "y"):
        raise ValueError(f"rotation axis must be 'x' or 'y', got {axis!r}")
    return evolve_unitary(collective_qubit_op(space, axis), angle / 2.0)


def biased_dicke(space: HilbertSpace, params: ModelParams) -> Operator:
    """Dicke model plus the bias term bias * sum_i sx_i."""
    h = dicke(space, params)
    if params.bias == 0.0:
        return h
    return h + params.bias * collective_qubit_op(space, "x")


def excitation_number(space: HilbertSpace) -> Operator:
    """Total excitation operator sum_i s+_i s-_i + adag a."""
    total = boson_op(space, "n").matrix.copy()
    for i in range(space.n_qubits):
        total += (qubit_op(space, i, "plus") @ qubit_op(space, i, "minus")).matrix
    return Operator(space, total)


def pulsed_coupling(t: float, params: ModelParams) -> float:
    """Square-pulse coupling profile lambda(t).

    Returns lambda0 + lambda1*height inside a window of width ``width``
    centred on each kick instant t_k = 2*pi*k*period_scale, else lambda0.
    Window centring on the kick instants minimizes the first-order asymmetry
    of the square-pulse approximation to the delta comb.
    """
    if params.pulse is None:
        raise ValueError("params carry no pulse record")
    p = params.pulse
    phase = math.fmod(t, p.period)
    if phase < 0:
        phase += p.period
    dist = min(phase, p.period - phase)  # distance to nearest kick instant
    if dist <= p.width / 2.0:
        return p.kicked_coupling
    return p.lambda0


# ---------------------------------------------------------------------------
# Fermionic oracle (Jordan-Wigner, intentionally tiny)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FermionicSpace:
    """Occupation basis for n_levels spinful levels tensored with the boson.

    Mode ordering is (0 up, 0 down, 1 up, 1 down); mode 0 is the slowest
    index, the boson the fastest.  Per mode, basis is {|empty>, |occupied>}.
    """

    n_levels: int
    fock_cutoff: int

    def __post_init__(self):
        if self.n_levels not in (1, 2):
            raise ValueError("the fermionic oracle supports n_levels in {1, 2} only")
        if self.fock_cutoff < 0:
            raise ValueError("fock_cutoff must be >= 0")

    @property
    def n_modes(self) -> int:
        return 2 * self.n_levels

    @property
    def dim(self) -> int:
        return (4 ** self.n_levels) * (self.fock_cutoff + 1)


def _jw_lowering(n_modes: int, m: int) -> np.ndarray:
    """Jordan-Wigner annihilation operator for mode m on the fermion factor."""
    z = np.diag([1.0, -1.0]).astype(complex)
    lower = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)  # |empty><occupied|
    op = np.eye(1, dtype=complex)
    for k in range(n_modes):
        if k < m:
            op = np.kron(op, z)
        elif k == m:
            op = np.kron(op, lower)
        else:
            op = np.kron(op, np.eye(2, dtype=complex))
    return op


def _verify_car(c_ops: list[np.ndarray]) -> None:
    dim = c_ops[0].shape[0]
    for i, ci in enumerate(c_ops):
        for j, cj in enumerate(c_ops):
            anti = ci @ cj + cj @ ci
            if np.abs(anti).max() > 1e-12:
                raise AssertionError(f"{{c_{i}, c_{j}}} != 0")
            anti_dag = ci @ cj.conj().T + cj.conj().T @ ci
            expected = np.eye(dim) if i == j else 0.0
            if np.abs(anti_dag - expected).max() > 1e-12:
                raise AssertionError(f"{{c_{i}, cdag_{j}}} != delta")


@dataclass(frozen=True)
class FermiBoseOracle:
    """Fermionic pairing model, its pair-subspace projector, and the mapped qubit model.

    ``h_fermionic`` and ``projector`` live on ``fermionic_space``;
    ``h_mapped`` lives on ``qubit_space``.  ``isometry`` maps qubit-space
    basis vectors onto the pair subspace (empty level -> |g>, doubly occupied
    level -> |e>), so ``isometry.T.conj() @ h_fermionic @ isometry`` equals
    ``h_mapped`` exactly up to truncation-free algebra.
    """

    fermionic_space: FermionicSpace
    qubit_space: HilbertSpace
    h_fermionic: Operator
    projector: Operator
    h_mapped: Operator
    isometry: np.ndarray


def fermi_bose_oracle(
    n_levels: int,
    level_energies: Sequence[float],
    mode_freq: float,
    g: float,
    fock_cutoff: int,
) -> FermiBoseOracle:
    """Build the spinful pairing model and certify its qubit-model mapping.

    The fermionic Hamiltonian is

        H = sum_{i,s} eps_i cdag_{i,s} c_{i,s} + w adag a
            + g sum_i (adag c_{i,down} c_{i,up} + a cdag_{i,up} cdag_{i,down})

    On the subspace where every level is empty or doubly occupied it equals
    (via the pair operators sz_i = sum_s cdag c - 1, s-_i = c_down c_up)
    the rotating-wave inhomogeneous model with qubit frequencies 2*eps_i
    plus the constant sum_i eps_i, and the single-occupation subspace is
    exactly decoupled.  Both statements are verified as matrix identities at
    construction time.
    """
    fspace = FermionicSpace(n_levels, fock_cutoff)
    eps = _as_tuple(level_energies, n_levels, "level_energies")
    nb = fock_cutoff + 1
    nf = 4 ** n_levels

    c_ops = [_jw_lowering(fspace.n_modes, m) for m in range(fspace.n_modes)]
    _verify_car(c_ops)

    a_b = np.diag(np.sqrt(np.arange(1, nb, dtype=float)), k=1).astype(complex)
    eye_f = np.eye(nf, dtype=complex)
    eye_b = np.eye(nb, dtype=complex)

    h = np.kron(eye_f, mode_freq * np.diag(np.arange(nb, dtype=float)).astype(complex))
    for i in range(n_levels):
        c_up, c_dn = c_ops[2 * i], c_ops[2 * i + 1]
        number = c_up.conj().T @ c_up + c_dn.conj().T @ c_dn
        h += eps[i] * np.kron(number, eye_b)
        pair_lower = c_dn @ c_up  # acts as sigma- on the pair subspace
        h += g * (
            np.kron(pair_lower, a_b.conj().T) + np.kron(pair_lower.conj().T, a_b)
        )
    _assert_hermitian_build(h, "fermi_bose_oracle")
    h_fermionic = Operator(fspace, h)

    # Projector onto "every level empty or doubly occupied".
    proj_f = np.eye(1, dtype=complex)
    pair_block = np.zeros((4, 4), dtype=complex)
    pair_block[0, 0] = 1.0  # |empty, empty>
    pair_block[3, 3] = 1.0  # |occupied, occupied>
    for _ in range(n_levels):
        proj_f = np.kron(proj_f, pair_block)
    projector = Operator(fspace, np.kron(proj_f, eye_b))

    off_block = projector.matrix @ h @ (np.eye(fspace.dim) - projector.matrix)
    if np.abs(off_block).max() > 1e-12:
        raise AssertionError("pair subspace is not decoupled from the rest")

    qspace = HilbertSpace(n_levels, fock_cutoff)
    h_mapped = inhomogeneous_dicke(
        qspace,
        tuple(2.0 * e for e in eps),
        mode_freq,
        g * math.sqrt(n_levels),
        rotating=True,
    ) + sum(eps) * identity(qspace)

    # Isometry: qubit |e> -> doubly occupied level, |g> -> empty level.
    v = np.zeros((fspace.dim, qspace.dim), dtype=complex)
    for col in range(qspace.dim):
        bits, fock = qspace.split_index(col)
        occ = 0
        for b in bits:
            mode_pair = 0b11 if b == 0 else 0b00
            occ = (occ << 2) | mode_pair
        v[occ * nb + fock, col] = 1.0

    mapped_back = v.conj().T @ h @ v
    if np.abs(mapped_back - h_mapped.matrix).max() > 1e-10:
        raise AssertionError("restricted fermionic model does not match the qubit model")

    return FermiBoseOracle(
        fermionic_space=fspace,
        qubit_space=qspace,
        h_fermionic=h_fermionic,
        projector=projector,
        h_mapped=h_mapped,
        isometry=v,
    )
