"""Truncated qubit-boson Hilbert spaces and the dense operator algebra on them.

The composite space is N two-level systems tensored with one bosonic mode
truncated at Fock level ``fock_cutoff``.  Subsystem ordering is fixed: qubit 0
is the slowest index, the boson mode the fastest, so the basis index ``k``
decomposes as ``k = q * (fock_cutoff + 1) + m`` where ``q`` encodes the qubit
bitstring (qubit 0 = most significant bit) and ``m`` is the Fock level.  Each
qubit basis is ordered {|e>, |g>}, so sigma_z = diag(+1, -1).

Operators are dense complex matrices tagged with their space.  Mixing
operators that live on different spaces is a hard error.  Matrices are frozen
after construction, so spaces and operators are safe to share read-only
across threads; all module functions are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

DEFAULT_DIM_CAP = 4096

# Hermitian builders must satisfy max|M - M^dag| <= HERMITICITY_RTOL * max|M|.
HERMITICITY_RTOL = 1e-12
UNITARITY_ATOL = 1e-10

_SINGLE_QUBIT = {
    "x": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
    "plus": np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex),
    "minus": np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex),
}


@dataclass(frozen=True)
class HilbertSpace:
    """N qubits tensored with a Fock-truncated boson mode.

    Parameters
    ----------
    n_qubits : int
        Number of two-level systems, >= 1.
    fock_cutoff : int
        Highest retained Fock level ``n_max`` (the boson factor has
        ``n_max + 1`` states), >= 0.
    """

    n_qubits: int
    fock_cutoff: int

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be >= 1, got {self.n_qubits}")
        if self.fock_cutoff < 0:
            raise ValueError(f"fock_cutoff must be >= 0, got {self.fock_cutoff}")

    @property
    def dim(self) -> int:
        """Total dimension 2**n_qubits * (fock_cutoff + 1)."""
        return (2 ** self.n_qubits) * (self.fock_cutoff + 1)

    @property
    def boson_dim(self) -> int:
        return self.fock_cutoff + 1

    def index_of(self, bits: Sequence[int], fock: int) -> int:
        """Compose a basis index from a qubit bitstring and a Fock level.

        ``bits[i]`` is 0 for qubit ``i`` in |e> and 1 for |g>; qubit 0 is the
        most significant bit.
        """
        if len(bits) != self.n_qubits:
            raise ValueError(f"expected {self.n_qubits} bits, got {len(bits)}")
        if not 0 <= fock <= self.fock_cutoff:
            raise ValueError(f"Fock level {fock} outside [0, {self.fock_cutoff}]")
        q = 0
        for b in bits:
            if b not in (0, 1):
                raise ValueError(f"bits must be 0 or 1, got {b}")
            q = (q << 1) | b
        return q * self.boson_dim + fock

    def split_index(self, k: int) -> tuple[tuple[int, ...], int]:
        """Decompose a basis index into (qubit bitstring, Fock level)."""
        if not 0 <= k < self.dim:
            raise ValueError(f"index {k} outside [0, {self.dim})")
        q, m = divmod(k, self.boson_dim)
        bits = tuple((q >> (self.n_qubits - 1 - i)) & 1 for i in range(self.n_qubits))
        return bits, m


def build_space(n_qubits: int, fock_cutoff: int, max_dim: int = DEFAULT_DIM_CAP) -> HilbertSpace:
    """Construct a qubit-boson space, refusing dimensions above ``max_dim``.

    Raises
    ------
    ValueError
        If the dimension exceeds the cap; the message carries an estimate of
        the memory one dense operator on that space would need.
    """
    space = HilbertSpace(n_qubits, fock_cutoff)
    if space.dim > max_dim:
        bytes_per_op = space.dim * space.dim * 16
        raise ValueError(
            f"dimension {space.dim} exceeds cap {max_dim}; one dense complex "
            f"operator would need ~{bytes_per_op / 1e6:.1f} MB"
        )
    return space


class Operator:
    """Dense complex matrix tagged with its HilbertSpace.

    The matrix is copied and frozen at construction.  Arithmetic between
    operators requires identical ``space`` objects.
    """

    __slots__ = ("space", "matrix")

    def __init__(self, space, matrix):
        matrix = np.array(matrix, dtype=complex)
        if matrix.shape != (space.dim, space.dim):
            raise ValueError(
                f"matrix shape {matrix.shape} does not match space dim {space.dim}"
            )
        matrix.setflags(write=False)
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "matrix", matrix)

    def __setattr__(self, name, value):
        raise AttributeError("Operator is immutable")

    def dag(self) -> "Operator":
        return Operator(self.space, self.matrix.conj().T)

    def is_hermitian(self, rtol: float = HERMITICITY_RTOL) -> bool:
        scale = np.abs(self.matrix).max()
        dev = np.abs(self.matrix - self.matrix.conj().T).max()
        return dev <= rtol * scale if scale > 0 else dev == 0

    def __add__(self, other: "Operator") -> "Operator":
        _require_same_space(self, other)
        return Operator(self.space, self.matrix + other.matrix)

    def __sub__(self, other: "Operator") -> "Operator":
        _require_same_space(self, other)
        return Operator(self.space, self.matrix - other.matrix)

    def __neg__(self) -> "Operator":
        return Operator(self.space, -self.matrix)

    def __mul__(self, scalar) -> "Operator":
        return Operator(self.space, self.matrix * complex(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "Operator":
        return Operator(self.space, self.matrix / complex(scalar))

    def __matmul__(self, other: "Operator") -> "Operator":
        _require_same_space(self, other)
        return Operator(self.space, self.matrix @ other.matrix)

    def __repr__(self):
        return f"Operator(dim={self.matrix.shape[0]})"


class DensityMatrix:
    """System state rho: Hermitian, unit trace, positive semidefinite.

    Construction checks Hermiticity and trace at loose tolerance; the strict
    invariants (trace drift <= 1e-8, Hermiticity deviation <= 1e-10) are
    enforced by the integrator after every segment.  Positivity is checked on
    demand via :meth:`min_eigenvalue`.
    """

    __slots__ = ("space", "matrix")

    def __init__(self, space, matrix, check: bool = True):
        matrix = np.array(matrix, dtype=complex)
        if matrix.shape != (space.dim, space.dim):
            raise ValueError(
                f"matrix shape {matrix.shape} does not match space dim {space.dim}"
            )
        if check:
            if np.abs(matrix - matrix.conj().T).max() > 1e-6:
                raise ValueError("density matrix is not Hermitian")
            if abs(np.trace(matrix).real - 1.0) > 1e-6:
                raise ValueError(f"density matrix trace {np.trace(matrix):.6g} != 1")
        matrix.setflags(write=False)
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "matrix", matrix)

    def __setattr__(self, name, value):
        raise AttributeError("DensityMatrix is immutable")

    @classmethod
    def from_pure(cls, space, state: np.ndarray) -> "DensityMatrix":
        state = np.asarray(state, dtype=complex).reshape(-1)
        if state.shape != (space.dim,):
            raise ValueError(f"state length {state.shape[0]} != dim {space.dim}")
        norm = np.linalg.norm(state)
        if norm == 0:
            raise ValueError("cannot build a state from the zero vector")
        state = state / norm
        return cls(space, np.outer(state, state.conj()))

    def trace_error(self) -> float:
        return abs(np.trace(self.matrix).real - 1.0) + abs(np.trace(self.matrix).imag)

    def hermiticity_error(self) -> float:
        return float(np.abs(self.matrix - self.matrix.conj().T).max())

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix)[0])

    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)

    def expectation(self, op: Operator) -> float:
        if op.space is not self.space:
            raise ValueError("operator and state live on different spaces")
        return float(np.trace(op.matrix @ self.matrix).real)

    def __repr__(self):
        return f"DensityMatrix(dim={self.matrix.shape[0]})"


def _require_same_space(a, b) -> None:
    if a.space is not b.space:
        raise ValueError(
            "operands live on different spaces; rebuild them on a shared HilbertSpace"
        )


def _assert_hermitian_build(matrix: np.ndarray, what: str) -> None:
    # Guards builder output; a failure here is a bug, not bad user input.
    scale = np.abs(matrix).max()
    dev = np.abs(matrix - matrix.conj().T).max()
    if dev > HERMITICITY_RTOL * scale:
        raise AssertionError(f"{what} failed the Hermiticity check: dev={dev:.3e}")


def identity(space) -> Operator:
    return Operator(space, np.eye(space.dim, dtype=complex))


def zero(space) -> Operator:
    return Operator(space, np.zeros((space.dim, space.dim), dtype=complex))


def qubit_op(space: HilbertSpace, i: int, kind: str) -> Operator:
    """Single-qubit operator embedded in the full space.

    Parameters
    ----------
    i : int
        Qubit index, 0 <= i < n_qubits.
    kind : {'x', 'y', 'z', 'plus', 'minus'}
        Pauli matrices, or the ladder operators sigma_pm = (x +- i y)/2.
    """
    if not 0 <= i < space.n_qubits:
        raise ValueError(f"qubit index {i} outside [0, {space.n_qubits})")
    try:
        local = _SINGLE_QUBIT[kind]
    except KeyError:
        raise ValueError(f"unknown qubit operator kind {kind!r}") from None
    left = np.eye(2 ** i, dtype=complex)
    right = np.eye(2 ** (space.n_qubits - 1 - i) * space.boson_dim, dtype=complex)
    return Operator(space, np.kron(np.kron(left, local), right))


def collective_qubit_op(space: HilbertSpace, kind: str) -> Operator:
    """Sum of the same single-qubit operator over all qubits."""
    total = np.zeros((space.dim, space.dim), dtype=complex)
    for i in range(space.n_qubits):
        total += qubit_op(space, i, kind).matrix
    return Operator(space, total)


def boson_op(space: HilbertSpace, kind: str) -> Operator:
    """Truncated boson operator embedded in the full space.

    kind 'a' is the annihilation operator with a|k> = sqrt(k)|k-1> and zero
    beyond the cutoff, 'adag' its conjugate, 'n' the number operator
    diag(0..n_max) on the Fock factor.
    """
    nb = space.boson_dim
    if kind == "a":
        local = np.diag(np.sqrt(np.arange(1, nb, dtype=float)), k=1).astype(complex)
    elif kind == "adag":
        local = np.diag(np.sqrt(np.arange(1, nb, dtype=float)), k=-1).astype(complex)
    elif kind == "n":
        local = np.diag(np.arange(nb, dtype=float)).astype(complex)
    else:
        raise ValueError(f"unknown boson operator kind {kind!r}")
    left = np.eye(2 ** space.n_qubits, dtype=complex)
    return Operator(space, np.kron(left, local))


def basis_state(space: HilbertSpace, bits: Sequence[int], fock: int) -> np.ndarray:
    """Computational basis vector |bits> tensor |fock>."""
    state = np.zeros(space.dim, dtype=complex)
    state[space.index_of(bits, fock)] = 1.0
    return state


def ground_state(space: HilbertSpace) -> np.ndarray:
    """All qubits in |g> (sigma_z = -1), boson in vacuum."""
    return basis_state(space, (1,) * space.n_qubits, 0)


def commutator(a: Operator, b: Operator) -> Operator:
    """[A, B] = AB - BA."""
    _require_same_space(a, b)
    return Operator(a.space, a.matrix @ b.matrix - b.matrix @ a.matrix)


def anticommutator(a: Operator, b: Operator) -> Operator:
    """{A, B} = AB + BA."""
    _require_same_space(a, b)
    return Operator(a.space, a.matrix @ b.matrix + b.matrix @ a.matrix)


def evolve_unitary(h: Operator, t: float) -> Operator:
    """exp(-i H t) via Hermitian eigendecomposition.

    Chosen over Pade/scaling-squaring for accuracy at the dimensions this
    package targets.  The result is checked to be unitary to 1e-10.

    Raises
    ------
    ValueError
        If H fails the Hermiticity check.
    """
    if not h.is_hermitian():
        raise ValueError("evolve_unitary requires a Hermitian generator")
    evals, vecs = np.linalg.eigh(h.matrix)
    u = (vecs * np.exp(-1j * evals * t)) @ vecs.conj().T
    dev = np.abs(u.conj().T @ u - np.eye(u.shape[0])).max()
    if dev > UNITARITY_ATOL:
        raise AssertionError(f"propagator unitarity deviation {dev:.3e} exceeds 1e-10")
    return Operator(h.space, u)


def spectral_norm(op: Operator) -> float:
    """Largest singular value of the matrix."""
    return float(np.linalg.norm(op.matrix, 2))
