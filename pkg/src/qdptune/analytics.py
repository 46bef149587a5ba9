"""Closed-form error rates for depolarized circuits with selective correction.

Every formula takes the uniform-mixture depolarizing parameter p (the
probability of replacing the qubit by the maximally mixed state). A corrected
gate succeeds when at most one of its block's seven qubits was hit, so the
per-gate accuracy after one correction round is (1-p)^7 + 7 p (1-p)^6.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

_THRESHOLD_TOL = 1e-12


def _check_probability(p: float, name: str = "p") -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {p}")
    return p


@dataclass(frozen=True)
class NoiseScenario:
    """A circuit of n depolarized gates, m of them error-corrected at ``level``."""

    n: int
    p: float
    m: int = 0
    level: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a scenario needs at least one gate")
        if not 0 <= self.m <= self.n:
            raise ValueError("corrected-gate count must lie in [0, n]")
        if self.level < 1:
            raise ValueError("correction level must be at least 1")
        _check_probability(self.p)


@dataclass(frozen=True)
class EffectiveError:
    """Net error probability of a scenario, with the scenario attached."""

    value: float
    scenario: NoiseScenario

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ValueError("effective error must lie in [0, 1]")


def corrected_accuracy(p: float) -> float:
    """Success probability of one gate after a single correction round."""
    p = _check_probability(p)
    return (1.0 - p) ** 7 + 7.0 * p * (1.0 - p) ** 6


def corrected_error(p: float) -> float:
    """Failure probability of one corrected gate (two or more qubits hit)."""
    return 1.0 - corrected_accuracy(p)


@lru_cache(maxsize=1)
def qec_threshold() -> float:
    """Break-even error rate: correction helps strictly below this p.

    Root of corrected_error(p) = p in (0, 1), found by bisection. Below the
    root correction reduces the error; above it correction makes things worse.
    """
    lo, hi = 1e-6, 0.5
    f_lo = corrected_error(lo) - lo
    f_hi = corrected_error(hi) - hi
    if not (f_lo < 0.0 < f_hi):
        raise RuntimeError("threshold bracket lost its sign change")
    while hi - lo > _THRESHOLD_TOL:
        mid = (lo + hi) / 2.0
        if corrected_error(mid) - mid < 0.0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


def error_two_gates_both_qec(p: float) -> float:
    """Failure probability of two gates when both are corrected."""
    return 1.0 - corrected_accuracy(p) ** 2


def error_two_gates_one_qec(p: float) -> float:
    """Failure probability of two gates when only one is corrected."""
    p = _check_probability(p)
    return 1.0 - corrected_accuracy(p) * (1.0 - p)


def error_global(n: int, p: float) -> float:
    """Failure probability of n uncorrected gates."""
    if n < 1:
        raise ValueError("gate count must be at least 1")
    p = _check_probability(p)
    return 1.0 - (1.0 - p) ** n


def concatenated_error(p: float, level: int) -> float:
    """Per-gate error after ``level`` nested correction rounds (0 = bare p)."""
    if level < 0:
        raise ValueError("level must be nonnegative")
    value = _check_probability(p)
    for _ in range(level):
        value = corrected_error(value)
    return value


def error_selective(n: int, m: int, p: float, level: int = 1) -> EffectiveError:
    """Net error of n gates with m of them corrected at the given level.

    The m corrected gates fail with the concatenated per-gate rate, the
    remaining n - m gates fail with the bare rate p.
    """
    scenario = NoiseScenario(n=n, p=float(p), m=m, level=level)
    per_gate = concatenated_error(scenario.p, level)
    value = 1.0 - (1.0 - per_gate) ** m * (1.0 - scenario.p) ** (n - m)
    return EffectiveError(value, scenario)
