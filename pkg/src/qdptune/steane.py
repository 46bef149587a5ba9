"""Steane [[7,1,3]] code: encoding, syndrome extraction, lookup decoding.

Conventions:

- Data qubits are indexed 0..6. The stabilizer generators come in two
  families over the same three supports: the Z-type family flags bit flips
  (the ``n`` half of a syndrome) and the X-type family flags phase flips
  (the ``m`` half). The supports are S0 = {0,4,5,6}, S1 = {1,3,5,6},
  S2 = {2,3,4,6}; every qubit has a distinct nonzero membership signature,
  so a nontrivial 3-bit syndrome half pins down exactly one qubit.
- Syndrome eigenvalue +1 means the generator is satisfied, -1 means flagged.
- The logical operators are the transversal X and Z on all seven qubits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .rng import Rng
from .states import (
    CNOT,
    CZ,
    HADAMARD,
    PAULI_GATES,
    PauliString,
    StateVector,
    apply_unitary,
    measure_projective,
    tensor,
)

STABILIZER_SUPPORTS = (
    frozenset({0, 4, 5, 6}),
    frozenset({1, 3, 5, 6}),
    frozenset({2, 3, 4, 6}),
)

# rows = generators, columns = qubits; shared by both stabilizer families
MEMBERSHIP = np.array(
    [[1 if q in support else 0 for q in range(7)] for support in STABILIZER_SUPPORTS],
    dtype=np.uint8,
)

# 3-bit membership signature (S0, S1, S2) -> flagged qubit
_SIGNATURE_TO_QUBIT = {
    (1, 0, 0): 0,
    (0, 1, 0): 1,
    (0, 0, 1): 2,
    (0, 1, 1): 3,
    (1, 0, 1): 4,
    (1, 1, 0): 5,
    (1, 1, 1): 6,
}


class DecodeError(ValueError):
    """State lies outside the code space."""


@dataclass(frozen=True)
class StabilizerSet:
    """Generator supports for a CSS code whose two families share supports."""

    z_supports: tuple
    x_supports: tuple

    def __post_init__(self):
        for z_sup in self.z_supports:
            for x_sup in self.x_supports:
                if len(z_sup & x_sup) % 2 != 0:
                    raise ValueError("stabilizer families do not commute")
        signatures = set()
        for q in range(7):
            sig = tuple(1 if q in sup else 0 for sup in self.z_supports)
            if sig == (0, 0, 0):
                raise ValueError(f"qubit {q} is missing from every generator")
            signatures.add(sig)
        if len(signatures) != 7:
            raise ValueError("qubit membership signatures are not distinct")


STEANE_STABILIZERS = StabilizerSet(STABILIZER_SUPPORTS, STABILIZER_SUPPORTS)


@dataclass(frozen=True)
class Syndrome:
    """Six generator eigenvalues: bit-flip checks ``n``, phase-flip checks ``m``."""

    n_eigenvalues: tuple
    m_eigenvalues: tuple

    def __post_init__(self):
        for half in (self.n_eigenvalues, self.m_eigenvalues):
            if len(half) != 3 or any(v not in (-1, 1) for v in half):
                raise ValueError("each syndrome half is three eigenvalues in {+1, -1}")

    @property
    def is_trivial(self) -> bool:
        return all(v == 1 for v in self.n_eigenvalues + self.m_eigenvalues)


@dataclass(frozen=True)
class Correction:
    """Recovery operation: X at ``x_qubit`` and Z at ``z_qubit`` (None = skip).

    Equal indices mean a Y correction on that qubit. Distinct indices are the
    best-effort response to a double error and have no single-qubit reading.
    """

    x_qubit: int | None = None
    z_qubit: int | None = None

    def __post_init__(self):
        for q in (self.x_qubit, self.z_qubit):
            if q is not None and not 0 <= q <= 6:
                raise ValueError("correction qubit out of range")

    @property
    def is_identity(self) -> bool:
        return self.x_qubit is None and self.z_qubit is None

    def _single(self):
        if self.x_qubit is None and self.z_qubit is None:
            return None, None
        if self.x_qubit == self.z_qubit:
            return self.x_qubit, "Y"
        if self.z_qubit is None:
            return self.x_qubit, "X"
        if self.x_qubit is None:
            return self.z_qubit, "Z"
        raise ValueError("two-qubit correction has no single-qubit view")

    @property
    def qubit(self) -> int | None:
        return self._single()[0]

    @property
    def pauli(self) -> str | None:
        return self._single()[1]

    def to_pauli_string(self) -> PauliString:
        x = np.zeros(7, dtype=bool)
        z = np.zeros(7, dtype=bool)
        if self.x_qubit is not None:
            x[self.x_qubit] = True
        if self.z_qubit is not None:
            z[self.z_qubit] = True
        return PauliString(7, x, z)


@dataclass(frozen=True)
class CodewordState:
    """Seven-qubit state produced by the encoder (possibly with errors applied)."""

    state: StateVector

    def __post_init__(self):
        if self.state.num_qubits != 7:
            raise ValueError("a codeword lives on exactly 7 qubits")


def _codeword_basis():
    # |0_L> is the uniform superposition over the X-stabilizer group orbit of
    # |0000000>; |1_L> is its image under transversal X.
    masks = [sum(1 << (6 - q) for q in support) for support in STABILIZER_SUPPORTS]
    orbit = {0}
    for mask in masks:
        orbit |= {word ^ mask for word in orbit}
    zero = np.zeros(128, dtype=np.complex128)
    one = np.zeros(128, dtype=np.complex128)
    amp = 1.0 / math.sqrt(8.0)
    for word in orbit:
        zero[word] = amp
        one[word ^ 0b1111111] = amp
    zero.setflags(write=False)
    one.setflags(write=False)
    return zero, one


LOGICAL_ZERO, LOGICAL_ONE = _codeword_basis()


def encode(logical: StateVector) -> CodewordState:
    """Encode a single-qubit state into the 7-qubit code space."""
    if logical.num_qubits != 1:
        raise ValueError("encode takes a single-qubit state")
    amps = logical.amplitudes[0] * LOGICAL_ZERO + logical.amplitudes[1] * LOGICAL_ONE
    return CodewordState(StateVector(7, amps))


def decode(codeword: CodewordState) -> StateVector:
    """Project a codeword back to its logical qubit.

    Raises DecodeError when the state has support outside the code space
    (squared overlap with the codeword basis below 1 - 1e-6).
    """
    amps = codeword.state.amplitudes
    a = complex(np.vdot(LOGICAL_ZERO, amps))
    b = complex(np.vdot(LOGICAL_ONE, amps))
    weight = abs(a) ** 2 + abs(b) ** 2
    if weight < 1.0 - 1e-6:
        raise DecodeError(f"state lies outside the code space (overlap {weight:.6f})")
    scale = 1.0 / math.sqrt(weight)
    return StateVector(1, np.array([a * scale, b * scale]))


def extract_syndrome_classical(error: PauliString) -> Syndrome:
    """Syndrome of a Pauli error, computed by support overlap parity."""
    if error.num_qubits != 7:
        raise ValueError("expected a 7-qubit error string")
    x = error.x_bits.astype(np.uint8)
    z = error.z_bits.astype(np.uint8)
    n_half = tuple(-1 if int(MEMBERSHIP[j] @ x) % 2 else 1 for j in range(3))
    m_half = tuple(-1 if int(MEMBERSHIP[j] @ z) % 2 else 1 for j in range(3))
    return Syndrome(n_half, m_half)


def extract_syndrome_circuit(codeword: CodewordState, rng: Rng):
    """Measure all six generators with ancilla circuits.

    Appends six fresh ancillas (qubits 7..12), runs the standard
    H-controlled-stabilizer-H pattern per generator (controlled-Z couplings
    for the bit-flip checks, CNOTs for the phase-flip checks), measures the
    ancillas, and returns (syndrome, post-measurement 7-qubit state).
    """
    state = tensor(codeword.state, StateVector.basis(6, 0))
    for j, support in enumerate(STABILIZER_SUPPORTS):
        ancilla = 7 + j
        state = apply_unitary(state, HADAMARD, [ancilla])
        for q in sorted(support):
            state = apply_unitary(state, CZ, [ancilla, q])
        state = apply_unitary(state, HADAMARD, [ancilla])
    for j, support in enumerate(STABILIZER_SUPPORTS):
        ancilla = 10 + j
        state = apply_unitary(state, HADAMARD, [ancilla])
        for q in sorted(support):
            state = apply_unitary(state, CNOT, [ancilla, q])
        state = apply_unitary(state, HADAMARD, [ancilla])
    eigenvalues = []
    ancilla_index = 0
    for j in range(6):
        outcome, state, eigenvalue = measure_projective(state, 7 + j, rng)
        eigenvalues.append(eigenvalue)
        ancilla_index = (ancilla_index << 1) | outcome
    data = state.amplitudes.reshape(128, 64)[:, ancilla_index]
    data = data / np.linalg.norm(data)
    syndrome = Syndrome(tuple(eigenvalues[:3]), tuple(eigenvalues[3:]))
    return syndrome, CodewordState(StateVector(7, data))


def decode_syndrome(syndrome: Syndrome) -> Correction:
    """Look up the recovery for a syndrome. Total: every input maps somewhere."""
    n_sig = tuple(1 if v == -1 else 0 for v in syndrome.n_eigenvalues)
    m_sig = tuple(1 if v == -1 else 0 for v in syndrome.m_eigenvalues)
    return Correction(
        x_qubit=_SIGNATURE_TO_QUBIT.get(n_sig),
        z_qubit=_SIGNATURE_TO_QUBIT.get(m_sig),
    )


def apply_correction(codeword: CodewordState, correction: Correction) -> CodewordState:
    """Apply a correction to a codeword (Y as one gate, to keep phases exact)."""
    state = codeword.state
    if correction.x_qubit is not None and correction.x_qubit == correction.z_qubit:
        state = apply_unitary(state, PAULI_GATES["Y"], [correction.x_qubit])
    else:
        if correction.x_qubit is not None:
            state = apply_unitary(state, PAULI_GATES["X"], [correction.x_qubit])
        if correction.z_qubit is not None:
            state = apply_unitary(state, PAULI_GATES["Z"], [correction.z_qubit])
    return CodewordState(state)


def qec_cycle(noisy: CodewordState, rng: Rng) -> CodewordState:
    """One full correction round: extract, look up, apply."""
    syndrome, post = extract_syndrome_circuit(noisy, rng)
    return apply_correction(post, decode_syndrome(syndrome))


def stabilizer_expectations(state: StateVector):
    """Expectation values of the six generators on a 7-qubit state.

    Returns (bit-flip checks, phase-flip checks) as two tuples of reals.
    """
    if state.num_qubits != 7:
        raise ValueError("expected a 7-qubit state")
    amps = state.amplitudes
    indices = np.arange(128)
    z_family = []
    x_family = []
    for support in STABILIZER_SUPPORTS:
        mask = sum(1 << (6 - q) for q in support)
        overlap = indices & mask
        parity = np.zeros(128, dtype=np.int64)
        for bit in range(7):
            parity ^= (overlap >> bit) & 1
        signs = 1.0 - 2.0 * parity
        z_family.append(float(np.sum(signs * np.abs(amps) ** 2)))
        x_family.append(float(np.real(np.vdot(amps, amps[indices ^ mask]))))
    return tuple(z_family), tuple(x_family)


def logical_expectations(state: StateVector):
    """Expectations of the transversal logical Z and X on a 7-qubit state."""
    if state.num_qubits != 7:
        raise ValueError("expected a 7-qubit state")
    amps = state.amplitudes
    indices = np.arange(128)
    parity = np.zeros(128, dtype=np.int64)
    for bit in range(7):
        parity ^= (indices >> bit) & 1
    signs = 1.0 - 2.0 * parity
    z_value = float(np.sum(signs * np.abs(amps) ** 2))
    x_value = float(np.real(np.vdot(amps, amps[indices ^ 0b1111111])))
    return z_value, x_value


def block_logical_residuals(x_bits: np.ndarray, z_bits: np.ndarray, level: int):
    """Decode batched X/Z error bits through ``level`` rounds of blocking.

    Inputs are (trials, 7**level) arrays of {0,1}. Each group of seven
    consecutive columns is one innermost block; blocks are decoded by
    syndrome lookup and replaced by their residual logical bit (parity of
    the corrected pattern), bottom-up until one bit per trial remains.
    The X and Z components are decoded independently at every level.
    Returns the pair of (trials,) residual bit arrays.
    """
    if level < 1:
        raise ValueError("level must be at least 1")
    x = np.asarray(x_bits, dtype=np.uint8)
    z = np.asarray(z_bits, dtype=np.uint8)
    if x.ndim != 2 or x.shape[1] != 7**level or z.shape != x.shape:
        raise ValueError(f"expected (trials, {7 ** level}) bit arrays")
    for _ in range(level):
        x = _decode_level(x)
        z = _decode_level(z)
    return x[:, 0], z[:, 0]


def _decode_level(bits: np.ndarray) -> np.ndarray:
    trials = bits.shape[0]
    blocks = bits.reshape(-1, 7)
    signatures = (blocks @ MEMBERSHIP.T) % 2
    corrected = signatures.any(axis=1).astype(np.uint8)
    residual = (blocks.sum(axis=1, dtype=np.int64) + corrected) % 2
    return residual.astype(np.uint8).reshape(trials, -1)


def concatenated_decode_classical(error: PauliString, level: int) -> PauliString:
    """Classical decode of a 7**level-qubit error down to its logical residual."""
    if level < 1:
        raise ValueError("level must be at least 1")
    if error.num_qubits != 7**level:
        raise ValueError(f"expected a {7 ** level}-qubit error for level {level}")
    x = error.x_bits.astype(np.uint8).reshape(1, -1)
    z = error.z_bits.astype(np.uint8).reshape(1, -1)
    rx, rz = block_logical_residuals(x, z, level)
    return PauliString(1, np.array([bool(rx[0])]), np.array([bool(rz[0])]))
