"""Dense complex-matrix engine for small quantum systems.

Statevectors are capped at 13 qubits and density matrices at 6: enough for a
7-qubit code block plus six syndrome ancillas, while anything larger belongs
in the Pauli-frame sampler rather than a dense simulation.

Conventions used throughout the package:

- Qubit 0 is the leftmost tensor factor, i.e. the most significant bit of
  the computational basis index.
- Measurement outcome 0 corresponds to eigenvalue +1, outcome 1 to -1.

All state types are immutable; operations return new values and never touch
their inputs. Stochastic operations take an explicit :class:`~qdptune.rng.Rng`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .rng import Rng

MAX_STATEVECTOR_QUBITS = 13
MAX_DENSITY_QUBITS = 6

# structural invariants (norms, traces, PSD) are enforced at this tolerance;
# exact algebraic identities are tested at 1e-12
ATOL = 1e-9

_PAIR_RETRY_BOUND = 100


class CapacityError(ValueError):
    """Requested system size exceeds what the dense engine supports."""


class GenerationError(RuntimeError):
    """Random state generation exhausted its retry budget."""


def _frozen_array(values, shape=None) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128)
    if shape is not None:
        arr = arr.reshape(shape)
    arr.setflags(write=False)
    return arr


# ---------------------------------------------------------------------------
# value types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StateVector:
    """Pure state on ``num_qubits`` qubits, unit norm enforced."""

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ValueError("a state needs at least one qubit")
        if self.num_qubits > MAX_STATEVECTOR_QUBITS:
            raise CapacityError(
                f"statevectors support at most {MAX_STATEVECTOR_QUBITS} qubits, "
                f"got {self.num_qubits}"
            )
        amps = _frozen_array(self.amplitudes, shape=(-1,))
        if amps.shape != (2**self.num_qubits,):
            raise ValueError(
                f"expected {2**self.num_qubits} amplitudes, got {amps.shape[0]}"
            )
        norm_sq = float(np.vdot(amps, amps).real)
        if abs(norm_sq - 1.0) > ATOL:
            raise ValueError(f"state norm**2 deviates from 1 by {abs(norm_sq - 1.0):.3e}")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis(cls, num_qubits: int, index: int) -> StateVector:
        """Computational basis state |index> (qubit 0 = most significant bit)."""
        if not 0 <= index < 2**num_qubits:
            raise ValueError("basis index out of range")
        amps = np.zeros(2**num_qubits, dtype=np.complex128)
        amps[index] = 1.0
        return cls(num_qubits, amps)

    def fidelity(self, other: StateVector) -> float:
        """|<self|other>|^2."""
        if self.num_qubits != other.num_qubits:
            raise ValueError("fidelity needs equal qubit counts")
        return float(abs(np.vdot(self.amplitudes, other.amplitudes)) ** 2)

    def to_density(self) -> DensityMatrix:
        return DensityMatrix(self.num_qubits, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True)
class DensityMatrix:
    """Mixed state: Hermitian, unit-trace, PSD within tolerance."""

    num_qubits: int
    matrix: np.ndarray

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ValueError("a state needs at least one qubit")
        if self.num_qubits > MAX_DENSITY_QUBITS:
            raise CapacityError(
                f"density matrices support at most {MAX_DENSITY_QUBITS} qubits, "
                f"got {self.num_qubits}"
            )
        dim = 2**self.num_qubits
        mat = _frozen_array(self.matrix)
        if mat.shape != (dim, dim):
            raise ValueError(f"expected a {dim}x{dim} matrix, got {mat.shape}")
        if not np.allclose(mat, mat.conj().T, atol=ATOL, rtol=0.0):
            raise ValueError("density matrix is not Hermitian")
        trace = float(np.trace(mat).real)
        if abs(trace - 1.0) > ATOL:
            raise ValueError(f"trace deviates from 1 by {abs(trace - 1.0):.3e}")
        smallest = float(np.linalg.eigvalsh(mat)[0])
        if smallest < -ATOL:
            raise ValueError(f"negative eigenvalue {smallest:.3e}")
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def pure(cls, state: StateVector) -> DensityMatrix:
        return state.to_density()

    @classmethod
    def maximally_mixed(cls, num_qubits: int) -> DensityMatrix:
        dim = 2**num_qubits
        return cls(num_qubits, np.eye(dim, dtype=np.complex128) / dim)

    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)


@dataclass(frozen=True)
class UnitaryGate:
    """Unitary on ``num_targets`` qubits, unitarity checked on construction."""

    num_targets: int
    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        if self.num_targets < 1:
            raise ValueError("a gate needs at least one target")
        if self.num_targets > MAX_STATEVECTOR_QUBITS:
            raise CapacityError("gate arity exceeds statevector capacity")
        dim = 2**self.num_targets
        mat = _frozen_array(self.matrix)
        if mat.shape != (dim, dim):
            raise ValueError(f"expected a {dim}x{dim} matrix, got {mat.shape}")
        if not np.allclose(mat.conj().T @ mat, np.eye(dim), atol=ATOL, rtol=0.0):
            raise ValueError(f"matrix is not unitary within {ATOL}")
        object.__setattr__(self, "matrix", mat)


_SQRT_HALF = 1.0 / math.sqrt(2.0)

IDENTITY = UnitaryGate(1, np.eye(2), label="I")
PAULI_X = UnitaryGate(1, [[0, 1], [1, 0]], label="X")
PAULI_Y = UnitaryGate(1, [[0, -1j], [1j, 0]], label="Y")
PAULI_Z = UnitaryGate(1, [[1, 0], [0, -1]], label="Z")
HADAMARD = UnitaryGate(1, np.array([[1, 1], [1, -1]]) * _SQRT_HALF, label="H")
CNOT = UnitaryGate(
    2,
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
    label="CNOT",
)
CZ = UnitaryGate(2, np.diag([1, 1, 1, -1]), label="CZ")

PAULI_GATES = {"I": IDENTITY, "X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z}


@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-qubit Paulis, stored as X/Z bit masks.

    A qubit carries X when only its x bit is set, Z when only its z bit is
    set, Y when both are set. Phases are not tracked at this level; they are
    handled when the string is applied to a concrete state.
    """

    num_qubits: int
    x_bits: np.ndarray
    z_bits: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x_bits, dtype=bool).reshape(-1).copy()
        z = np.asarray(self.z_bits, dtype=bool).reshape(-1).copy()
        if x.shape != (self.num_qubits,) or z.shape != (self.num_qubits,):
            raise ValueError("bit mask length must equal num_qubits")
        x.setflags(write=False)
        z.setflags(write=False)
        object.__setattr__(self, "x_bits", x)
        object.__setattr__(self, "z_bits", z)

    @classmethod
    def identity(cls, num_qubits: int) -> PauliString:
        zeros = np.zeros(num_qubits, dtype=bool)
        return cls(num_qubits, zeros, zeros.copy())

    @classmethod
    def from_letters(cls, letters: str) -> PauliString:
        if not letters or any(c not in "IXYZ" for c in letters):
            raise ValueError("letters must be a nonempty string over I, X, Y, Z")
        x = np.array([c in "XY" for c in letters])
        z = np.array([c in "YZ" for c in letters])
        return cls(len(letters), x, z)

    @classmethod
    def single(cls, num_qubits: int, qubit: int, letter: str) -> PauliString:
        if not 0 <= qubit < num_qubits:
            raise ValueError("qubit index out of range")
        if letter not in "XYZ":
            raise ValueError("letter must be X, Y or Z")
        x = np.zeros(num_qubits, dtype=bool)
        z = np.zeros(num_qubits, dtype=bool)
        x[qubit] = letter in "XY"
        z[qubit] = letter in "YZ"
        return cls(num_qubits, x, z)

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.x_bits | self.z_bits))

    @property
    def is_identity(self) -> bool:
        return self.weight == 0

    def letter(self, qubit: int) -> str:
        x, z = bool(self.x_bits[qubit]), bool(self.z_bits[qubit])
        return {(False, False): "I", (True, False): "X", (True, True): "Y", (False, True): "Z"}[(x, z)]

    def letters(self) -> str:
        return "".join(self.letter(q) for q in range(self.num_qubits))

    def apply_to(self, state: StateVector) -> StateVector:
        if state.num_qubits != self.num_qubits:
            raise ValueError("qubit count mismatch")
        out = state
        for q in range(self.num_qubits):
            letter = self.letter(q)
            if letter != "I":
                out = apply_unitary(out, PAULI_GATES[letter], [q])
        return out


@dataclass(frozen=True)
class Povm:
    """Positive operator-valued measure: PSD elements summing to identity."""

    elements: tuple

    def __post_init__(self):
        elements = tuple(_frozen_array(m) for m in self.elements)
        if not elements:
            raise ValueError("a POVM needs at least one element")
        dim = elements[0].shape[0]
        total = np.zeros((dim, dim), dtype=np.complex128)
        for mat in elements:
            if mat.shape != (dim, dim):
                raise ValueError("POVM elements must share one square dimension")
            if not np.allclose(mat, mat.conj().T, atol=ATOL, rtol=0.0):
                raise ValueError("POVM element is not Hermitian")
            if float(np.linalg.eigvalsh(mat)[0]) < -ATOL:
                raise ValueError("POVM element is not positive semidefinite")
            total = total + mat
        if not np.allclose(total, np.eye(dim), atol=ATOL, rtol=0.0):
            raise ValueError("POVM elements do not sum to the identity")
        object.__setattr__(self, "elements", elements)

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    @classmethod
    def computational(cls, num_qubits: int) -> Povm:
        dim = 2**num_qubits
        eye = np.eye(dim)
        return cls(tuple(np.outer(eye[k], eye[k]) for k in range(dim)))


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def tensor(a, b):
    """Tensor product of two values of the same kind (states, matrices, gates)."""
    if isinstance(a, StateVector) and isinstance(b, StateVector):
        n = a.num_qubits + b.num_qubits
        if n > MAX_STATEVECTOR_QUBITS:
            raise CapacityError("tensor product exceeds statevector capacity")
        return StateVector(n, np.kron(a.amplitudes, b.amplitudes))
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        n = a.num_qubits + b.num_qubits
        if n > MAX_DENSITY_QUBITS:
            raise CapacityError("tensor product exceeds density-matrix capacity")
        return DensityMatrix(n, np.kron(a.matrix, b.matrix))
    if isinstance(a, UnitaryGate) and isinstance(b, UnitaryGate):
        n = a.num_targets + b.num_targets
        label = f"{a.label}*{b.label}" if a.label and b.label else ""
        return UnitaryGate(n, np.kron(a.matrix, b.matrix), label=label)
    raise TypeError("tensor expects two values of the same kind")


def _matrix_on_axes(grid: np.ndarray, matrix: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    """Contract ``matrix`` (2^k x 2^k) onto the given axes of a (2,)*m grid."""
    k = len(axes)
    moved = np.moveaxis(grid, axes, range(k))
    shape = moved.shape
    flat = moved.reshape(2**k, -1)
    flat = matrix @ flat
    return np.moveaxis(flat.reshape(shape), range(k), axes)


def _check_targets(num_qubits: int, targets: Sequence[int], arity: int):
    if len(targets) != arity:
        raise ValueError(f"gate acts on {arity} qubits, got {len(targets)} targets")
    if len(set(targets)) != len(targets):
        raise ValueError("targets must be distinct")
    for t in targets:
        if not 0 <= t < num_qubits:
            raise ValueError(f"target {t} out of range for {num_qubits} qubits")


def apply_unitary(state, gate: UnitaryGate, targets: Iterable[int]):
    """Apply ``gate`` to the listed target qubits of a pure or mixed state."""
    targets = list(targets)
    if isinstance(state, StateVector):
        _check_targets(state.num_qubits, targets, gate.num_targets)
        grid = state.amplitudes.reshape((2,) * state.num_qubits)
        grid = _matrix_on_axes(grid, gate.matrix, targets)
        return StateVector(state.num_qubits, grid.reshape(-1))
    if isinstance(state, DensityMatrix):
        n = state.num_qubits
        _check_targets(n, targets, gate.num_targets)
        grid = state.matrix.reshape((2,) * (2 * n))
        grid = _matrix_on_axes(grid, gate.matrix, targets)
        grid = _matrix_on_axes(grid, gate.matrix.conj(), [n + t for t in targets])
        return DensityMatrix(n, grid.reshape(2**n, 2**n))
    raise TypeError("apply_unitary expects a StateVector or DensityMatrix")


def _partial_trace(matrix: np.ndarray, num_qubits: int, traced: Sequence[int]) -> np.ndarray:
    grid = matrix.reshape((2,) * (2 * num_qubits))
    remaining = num_qubits
    for q in sorted(traced, reverse=True):
        grid = np.trace(grid, axis1=q, axis2=remaining + q)
        remaining -= 1
    return grid.reshape(2**remaining, 2**remaining)


def _reorder_qubits(matrix: np.ndarray, current_order: Sequence[int]) -> np.ndarray:
    n = len(current_order)
    position = {q: i for i, q in enumerate(current_order)}
    perm = [position[q] for q in range(n)]
    grid = matrix.reshape((2,) * (2 * n))
    grid = np.transpose(grid, axes=perm + [n + i for i in perm])
    return grid.reshape(2**n, 2**n)


def partial_trace(state: DensityMatrix, traced: Iterable[int]) -> DensityMatrix:
    """Trace out the listed qubits."""
    traced = sorted(set(traced))
    for q in traced:
        if not 0 <= q < state.num_qubits:
            raise ValueError(f"qubit {q} out of range")
    if len(traced) >= state.num_qubits:
        raise ValueError("cannot trace out every qubit")
    reduced = _partial_trace(state.matrix, state.num_qubits, traced)
    return DensityMatrix(state.num_qubits - len(traced), reduced)


def depolarize(state: DensityMatrix, p: float, subsystem: Iterable[int] | None = None) -> DensityMatrix:
    """Uniform-mixture depolarizing channel: p * I/dim + (1-p) * state.

    With ``subsystem`` given, only those qubits are replaced by the maximally
    mixed state (with probability p); the rest are untouched.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("mixing probability must lie in [0, 1]")
    n = state.num_qubits
    if subsystem is None:
        mixed = np.eye(2**n, dtype=np.complex128) / 2**n
        return DensityMatrix(n, p * mixed + (1.0 - p) * state.matrix)
    sub = sorted(set(subsystem))
    if not sub:
        raise ValueError("subsystem must name at least one qubit")
    for q in sub:
        if not 0 <= q < n:
            raise ValueError(f"qubit {q} out of range")
    if len(sub) == n:
        return depolarize(state, p)
    kept = [q for q in range(n) if q not in sub]
    reduced = _partial_trace(state.matrix, n, sub)
    dim_sub = 2 ** len(sub)
    mixed = np.kron(np.eye(dim_sub, dtype=np.complex128) / dim_sub, reduced)
    mixed = _reorder_qubits(mixed, sub + kept)
    return DensityMatrix(n, p * mixed + (1.0 - p) * state.matrix)


def depolarize_kraus_form(state: DensityMatrix, q: float, target: int) -> DensityMatrix:
    """Pauli-form single-qubit depolarizing channel.

    (1-q) * rho + q/3 * (X rho X + Y rho Y + Z rho Z) on the target qubit.
    Equivalent to :func:`depolarize` on that qubit with p = 4q/3.
    """
    if not 0.0 <= q <= 1.0:
        raise ValueError("error probability must lie in [0, 1]")
    if not 0 <= target < state.num_qubits:
        raise ValueError("target qubit out of range")
    total = (1.0 - q) * state.matrix
    for letter in "XYZ":
        rotated = apply_unitary(state, PAULI_GATES[letter], [target])
        total = total + (q / 3.0) * rotated.matrix
    return DensityMatrix(state.num_qubits, total)


def povm_probabilities(state: DensityMatrix, povm: Povm) -> np.ndarray:
    """Outcome probabilities tr(M_k rho), in element order."""
    if povm.dim != 2**state.num_qubits:
        raise ValueError("POVM dimension does not match the state")
    return np.array([float(np.trace(m @ state.matrix).real) for m in povm.elements])


def measure_projective(state: StateVector, qubit: int, rng: Rng):
    """Measure one qubit in the computational basis.

    Returns (outcome, collapsed state, eigenvalue) with outcome 0 mapping to
    eigenvalue +1 and outcome 1 to -1.
    """
    n = state.num_qubits
    if not 0 <= qubit < n:
        raise ValueError("measured qubit out of range")
    grid = np.moveaxis(state.amplitudes.reshape((2,) * n), qubit, 0)
    p0 = float(np.sum(np.abs(grid[0]) ** 2))
    outcome = 0 if rng.generator.random() < p0 else 1
    branch = p0 if outcome == 0 else 1.0 - p0
    if branch < 1e-12:
        raise ValueError("measurement selected a zero-probability branch")
    collapsed = np.zeros_like(grid)
    collapsed[outcome] = grid[outcome] / math.sqrt(branch)
    collapsed = np.moveaxis(collapsed, 0, qubit).reshape(-1)
    return outcome, StateVector(n, collapsed), 1 if outcome == 0 else -1


def trace_distance(a: DensityMatrix, b: DensityMatrix) -> float:
    """Half the trace norm of (a - b); 0 for equal states, 1 for orthogonal."""
    if a.num_qubits != b.num_qubits:
        raise ValueError("trace distance needs equal qubit counts")
    eigenvalues = np.linalg.eigvalsh(a.matrix - b.matrix)
    return float(np.abs(eigenvalues).sum() / 2.0)


def random_pure_state(num_qubits: int, rng: Rng) -> StateVector:
    """Haar-random pure state."""
    if num_qubits > MAX_STATEVECTOR_QUBITS:
        raise CapacityError("requested size exceeds statevector capacity")
    dim = 2**num_qubits
    vec = rng.generator.standard_normal(dim) + 1j * rng.generator.standard_normal(dim)
    return StateVector(num_qubits, vec / np.linalg.norm(vec))


def random_density_matrix(num_qubits: int, rng: Rng) -> DensityMatrix:
    """Full-rank random mixed state (Ginibre construction, trace normalized)."""
    if num_qubits > MAX_DENSITY_QUBITS:
        raise CapacityError("requested size exceeds density-matrix capacity")
    dim = 2**num_qubits
    g = rng.generator.standard_normal((dim, dim)) + 1j * rng.generator.standard_normal((dim, dim))
    mat = g @ g.conj().T
    mat = (mat + mat.conj().T) / 2.0
    return DensityMatrix(num_qubits, mat / np.trace(mat).real)


def state_pair_at_distance(num_qubits: int, d: float, rng: Rng):
    """Random pair of density matrices at trace distance exactly d.

    Draws a Ginibre pair and rescales the second state toward the first so
    the distance lands exactly on d. When the initial pair is too close, the
    second draw is retried as a pure state far from the first (random within
    the orthocomplement of its dominant eigenvector); no pure state can be
    farther from rho than 1 - lambda_min(rho), so when rho itself blocks the
    target it is redrawn too. Retries are bounded and exhaustion raises
    GenerationError, which in practice needs d extremely close to 1. d = 1.0
    is served directly by an orthogonal pure pair, since mixed draws never
    reach distance 1.
    """
    if not 0.0 < d <= 1.0:
        raise ValueError("target distance must lie in (0, 1]")
    if num_qubits > MAX_DENSITY_QUBITS:
        raise CapacityError("requested size exceeds density-matrix capacity")
    dim = 2**num_qubits

    def _pure_orthogonal_to(direction: np.ndarray) -> np.ndarray | None:
        raw = rng.generator.standard_normal(dim) + 1j * rng.generator.standard_normal(dim)
        raw = raw - np.vdot(direction, raw) * direction
        norm = np.linalg.norm(raw)
        if norm < 1e-6:
            return None
        return raw / norm

    if d == 1.0:
        first = random_pure_state(num_qubits, rng)
        for _ in range(_PAIR_RETRY_BOUND):
            partner = _pure_orthogonal_to(first.amplitudes)
            if partner is not None:
                return first.to_density(), StateVector(num_qubits, partner).to_density()
        raise GenerationError("could not draw an orthogonal partner state")

    rho = random_density_matrix(num_qubits, rng)
    sigma = random_density_matrix(num_qubits, rng)
    tau = trace_distance(rho, sigma)
    retries = 0
    while tau < d:
        if retries >= _PAIR_RETRY_BOUND:
            raise GenerationError(
                f"could not reach trace distance {d} in {_PAIR_RETRY_BOUND} retries"
            )
        eigenvalues, eigenvectors = np.linalg.eigh(rho.matrix)
        if 1.0 - eigenvalues[0] < d:
            # no pure state can be farther from rho than 1 - lambda_min
            rho = random_density_matrix(num_qubits, rng)
            eigenvalues, eigenvectors = np.linalg.eigh(rho.matrix)
        if retries < 10:
            candidate = _pure_orthogonal_to(eigenvectors[:, -1])
        else:
            # exact farthest pure state from rho
            candidate = eigenvectors[:, 0]
        if candidate is not None:
            sigma = StateVector(num_qubits, candidate).to_density()
            tau = trace_distance(rho, sigma)
        retries += 1
    t = d / tau
    blended = (1.0 - t) * rho.matrix + t * sigma.matrix
    return rho, DensityMatrix(num_qubits, blended)
