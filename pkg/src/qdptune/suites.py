"""Validation suites: syndrome table, Monte Carlo agreement, empirical privacy."""

from __future__ import annotations

from dataclasses import dataclass

from .montecarlo import TrialReport, run_concatenated_trials, run_steane_trials
from .privacy import DpCheckReport, verify_dp_empirical
from .rng import Rng
from .states import PauliString, StateVector
from .steane import (
    CodewordState,
    Syndrome,
    encode,
    extract_syndrome_circuit,
    extract_syndrome_classical,
)

# expected generator signatures of single-qubit errors: qubit -> flagged checks
_FLAG_PATTERNS = {
    0: (-1, 1, 1),
    1: (1, -1, 1),
    2: (1, 1, -1),
    3: (1, -1, -1),
    4: (-1, 1, -1),
    5: (-1, -1, 1),
    6: (-1, -1, -1),
}
_CLEAN = (1, 1, 1)


def expected_single_error_syndrome(letter: str, qubit: int) -> Syndrome:
    """Reference syndrome for a weight-1 error: X flags the bit-flip half,
    Z the phase-flip half, Y both."""
    pattern = _FLAG_PATTERNS[qubit]
    n_half = pattern if letter in ("X", "Y") else _CLEAN
    m_half = pattern if letter in ("Y", "Z") else _CLEAN
    return Syndrome(n_half, m_half)


@dataclass(frozen=True)
class SyndromeCase:
    letter: str
    qubit: int
    expected: Syndrome
    classical: Syndrome
    circuit: Syndrome

    @property
    def ok(self) -> bool:
        return self.classical == self.expected and self.circuit == self.expected


@dataclass(frozen=True)
class SyndromeSuiteResult:
    cases: tuple
    passed: bool

    @property
    def mismatches(self) -> tuple:
        return tuple(c for c in self.cases if not c.ok)


def syndrome_suite(seed: int = 0) -> SyndromeSuiteResult:
    """Check all 21 weight-1 errors through both extraction routes."""
    rng = Rng(seed)
    probe = encode(StateVector(1, [0.8, 0.6]))
    cases = []
    index = 0
    for letter in "XYZ":
        for qubit in range(7):
            error = PauliString.single(7, qubit, letter)
            classical = extract_syndrome_classical(error)
            noisy = CodewordState(error.apply_to(probe.state))
            circuit, _ = extract_syndrome_circuit(noisy, rng.child(index))
            cases.append(
                SyndromeCase(
                    letter=letter,
                    qubit=qubit,
                    expected=expected_single_error_syndrome(letter, qubit),
                    classical=classical,
                    circuit=circuit,
                )
            )
            index += 1
    cases = tuple(cases)
    return SyndromeSuiteResult(cases=cases, passed=all(c.ok for c in cases))


@dataclass(frozen=True)
class MonteCarloSuiteResult:
    report: TrialReport
    passed: bool


def montecarlo_suite(
    p: float = 0.03,
    trials: int = 100_000,
    seed: int = 0,
    backend: str = "pauli_frame",
    level: int = 1,
) -> MonteCarloSuiteResult:
    """Run a Monte Carlo batch and gate on |z| < 3 against the analytic rate."""
    if level == 1:
        report = run_steane_trials(p, trials, seed, backend=backend)
    else:
        report = run_concatenated_trials(p, level, trials, seed)
    return MonteCarloSuiteResult(report=report, passed=abs(report.z_score) < 3.0)


def dp_suite(
    p: float = 0.03,
    d: float = 0.5,
    num_pairs: int = 100,
    num_povms: int = 10,
    seed: int = 0,
    dim: int = 2,
) -> DpCheckReport:
    """Empirical privacy-bound hunt with a fresh seeded stream."""
    return verify_dp_empirical(p, d, num_pairs, num_povms, Rng(seed), dim=dim)
