"""Monte Carlo validation of the closed-form error rates.

Two backends sample the same error stream:

- ``pauli_frame`` tracks errors as X/Z bit arrays and decodes them
  classically in vectorized chunks; it scales to concatenated blocks.
- ``circuit`` injects each sampled error into an encoded probe state, runs a
  full syndrome-extraction-and-correction round on the 13-qubit register,
  and checks the post-correction logical fidelity.

A trial counts as a *failure* when the sampled error is uncorrectable in the
closed-form model's sense: two or more qubits hit at level 1, recursively
two or more failed sub-blocks at higher levels. That is the event the
analytic rates describe. The decoder's actual outcome is strictly better
(some double errors still decode cleanly) and is reported separately as
``residual_failures``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analytics import concatenated_error
from .rng import Rng
from .states import PauliString, StateVector
from .steane import CodewordState, block_logical_residuals, decode, encode, qec_cycle

BACKENDS = ("pauli_frame", "circuit")

_CHUNK_TRIALS = 8192
_CIRCUIT_TRIAL_BUDGET = 100_000
_FIDELITY_FLOOR = 1.0 - 1e-6

# fixed logical probe far from every Pauli eigenstate, so any nonidentity
# logical residual drops the fidelity below the floor
_PROBE_LOGICAL = StateVector(
    1, np.array([math.cos(0.3), math.sin(0.3) * complex(math.cos(0.4), math.sin(0.4))])
)
_PROBE_CODEWORD = encode(_PROBE_LOGICAL)


@dataclass(frozen=True)
class TrialReport:
    """Outcome of one Monte Carlo run against an analytic rate.

    ``failures`` counts multi-error trials (the analytic event);
    ``residual_failures`` counts trials whose decoded residual was an actual
    logical error. ``z_score`` compares the estimated rate to the analytic one.
    """

    trials: int
    failures: int
    estimated_error: float
    std_error: float
    analytic_error: float
    z_score: float
    seed: int
    residual_failures: int
    backend: str
    level: int = 1


def _make_report(trials, failures, residual, analytic, seed, backend, level) -> TrialReport:
    estimated = failures / trials
    std = math.sqrt(estimated * (1.0 - estimated) / trials)
    if std > 0.0:
        z = (estimated - analytic) / std
    else:
        z = 0.0 if estimated == analytic else math.inf * (1 if estimated > analytic else -1)
    return TrialReport(
        trials=trials,
        failures=failures,
        estimated_error=estimated,
        std_error=std,
        analytic_error=analytic,
        z_score=z,
        seed=seed,
        residual_failures=residual,
        backend=backend,
        level=level,
    )


def _sample_letters(p: float, shape, rng: Rng) -> np.ndarray:
    """Depolarizing error letters: 0 = clean, 1/2/3 = X/Y/Z with weight p/3 each."""
    hits = rng.generator.random(shape) < p
    which = rng.generator.integers(1, 4, size=shape)
    return np.where(hits, which, 0).astype(np.uint8)


def sample_pauli_error(p: float, num_qubits: int, rng: Rng) -> PauliString:
    """Draw one i.i.d. depolarizing Pauli error on ``num_qubits`` qubits."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("error rate must lie in [0, 1]")
    if num_qubits < 1:
        raise ValueError("need at least one qubit")
    letters = _sample_letters(p, (num_qubits,), rng)
    x = (letters == 1) | (letters == 2)
    z = (letters == 2) | (letters == 3)
    return PauliString(num_qubits, x, z)


def _chunks(trials: int, size: int):
    index = 0
    start = 0
    while start < trials:
        count = min(size, trials - start)
        yield index, count
        index += 1
        start += count


def _weight_recursion_failures(nontrivial: np.ndarray, level: int) -> np.ndarray:
    """Analytic failure event per trial: >= 2 failed sub-blocks, recursively."""
    fails = nontrivial
    count = fails.shape[0]
    for _ in range(level):
        fails = fails.reshape(count, -1, 7).sum(axis=2) >= 2
    return fails[:, 0]


def _circuit_trial_fails(letters: np.ndarray, rng: Rng) -> bool:
    """Inject one 7-qubit error into the probe codeword and run a QEC round."""
    error = PauliString(
        7,
        (letters == 1) | (letters == 2),
        (letters == 2) | (letters == 3),
    )
    noisy = CodewordState(error.apply_to(_PROBE_CODEWORD.state))
    corrected = qec_cycle(noisy, rng)
    recovered = decode(corrected)
    return recovered.fidelity(_PROBE_LOGICAL) < _FIDELITY_FLOOR


def _chunk_counts(p: float, level: int, chunk_index: int, count: int, master: Rng, backend: str):
    """Failure counts of one chunk; a pure function of (seed, chunk index)."""
    error_rng = master.child(2 * chunk_index)
    letters = _sample_letters(p, (count, 7**level), error_rng)
    nontrivial = letters != 0
    failures = int(_weight_recursion_failures(nontrivial, level).sum())
    x = ((letters == 1) | (letters == 2)).astype(np.uint8)
    z = ((letters == 2) | (letters == 3)).astype(np.uint8)
    if backend == "pauli_frame":
        rx, rz = block_logical_residuals(x, z, level)
        residual = int(((rx | rz) != 0).sum())
    else:
        measure_rng = master.child(2 * chunk_index + 1)
        residual = 0
        weights = nontrivial.sum(axis=1)
        for t in range(count):
            if weights[t] == 0:
                continue  # identity error always recovers exactly
            if _circuit_trial_fails(letters[t], measure_rng):
                residual += 1
    return failures, residual


def _run_trials(p: float, level: int, trials: int, seed: int, backend: str) -> TrialReport:
    if backend not in BACKENDS:
        raise ValueError(f"backend must be one of {BACKENDS}")
    if trials < 1:
        raise ValueError("need at least one trial")
    if not 0.0 <= p <= 1.0:
        raise ValueError("error rate must lie in [0, 1]")
    if level < 1:
        raise ValueError("level must be at least 1")
    if backend == "circuit":
        if level != 1:
            raise ValueError("the circuit backend only supports level 1")
        if trials > _CIRCUIT_TRIAL_BUDGET:
            raise ValueError(f"the circuit backend is budgeted for {_CIRCUIT_TRIAL_BUDGET} trials")
    master = Rng(seed)
    chunk_size = max(1, _CHUNK_TRIALS // 7 ** (level - 1))
    failures = 0
    residual = 0
    for chunk_index, count in _chunks(trials, chunk_size):
        chunk_failures, chunk_residual = _chunk_counts(p, level, chunk_index, count, master, backend)
        failures += chunk_failures
        residual += chunk_residual
    analytic = concatenated_error(p, level)
    return _make_report(trials, failures, residual, analytic, seed, backend, level)


def run_steane_trials(p: float, trials: int, seed: int, backend: str = "pauli_frame") -> TrialReport:
    """Monte Carlo estimate of the single-block corrected error rate."""
    return _run_trials(p, 1, trials, seed, backend)


def run_concatenated_trials(p: float, level: int, trials: int, seed: int) -> TrialReport:
    """Monte Carlo estimate of the concatenated corrected error rate.

    At level 1 this is identical, count for count, to
    :func:`run_steane_trials` with the pauli_frame backend on the same seed.
    """
    return _run_trials(p, level, trials, seed, "pauli_frame")
