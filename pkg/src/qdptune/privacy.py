"""Privacy budgets of depolarized circuits: closed form, planner, empirical check.

A depolarizing channel with mixing probability p acting on states no farther
than trace distance d apart (dimension ``dim``) satisfies pure eps-DP with

    eps = ln(1 + (1 - p) / p * d * dim)

so lower effective error buys a *smaller* budget and error correction, by
shrinking p, raises eps. The planner searches correction configurations to
meet a target budget; the empirical verifier hunts for bound violations with
random state pairs and measurements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analytics import NoiseScenario, error_selective, qec_threshold
from .rng import Rng
from .states import DensityMatrix, Povm, depolarize, povm_probabilities, state_pair_at_distance

# outcome probabilities below this are treated as numerical zeros and the
# ratio is skipped (and counted) instead of producing a spurious infinity
UNDERFLOW_FLOOR = 1e-15

_REPORT_ATOL = 1e-9


class InfiniteBudgetError(ValueError):
    """A zero error rate yields an unbounded privacy budget."""


def _check_d(d: float) -> float:
    d = float(d)
    if not 0.0 < d <= 1.0:
        raise ValueError(f"trace-distance bound must lie in (0, 1], got {d}")
    return d


def _check_dim(dim: int) -> int:
    if int(dim) != dim or dim < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {dim}")
    return int(dim)


def epsilon_from_p(p: float, d: float, dim: int) -> float:
    """Privacy budget of a depolarizing channel at error rate p."""
    p = float(p)
    d = _check_d(d)
    dim = _check_dim(dim)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"error rate must lie in [0, 1], got {p}")
    if p == 0.0:
        raise InfiniteBudgetError("error rate 0 leaves outcomes distinguishable at any budget")
    return math.log1p((1.0 - p) / p * d * dim)


def p_from_epsilon(epsilon: float, d: float, dim: int) -> float:
    """Error rate that realizes a given budget (inverse of epsilon_from_p)."""
    epsilon = float(epsilon)
    if epsilon < 0.0:
        raise ValueError("a privacy budget cannot be negative")
    d = _check_d(d)
    dim = _check_dim(dim)
    return d * dim / (math.expm1(epsilon) + d * dim)


@dataclass(frozen=True)
class PrivacyReport:
    """Budget of one noise scenario; epsilon is rederivable from the rest."""

    epsilon: float
    effective_p: float
    d: float
    dim: int
    scenario: NoiseScenario

    def __post_init__(self):
        if self.epsilon < 0.0:
            raise ValueError("budget cannot be negative")
        expected = epsilon_from_p(self.effective_p, self.d, self.dim)
        if abs(expected - self.epsilon) > _REPORT_ATOL:
            raise ValueError("epsilon is inconsistent with the stated error rate")


def budget_report(scenario: NoiseScenario, d: float, dim: int) -> PrivacyReport:
    """Compute the budget of a scenario's effective error rate."""
    effective = error_selective(scenario.n, scenario.m, scenario.p, scenario.level)
    epsilon = epsilon_from_p(effective.value, d, dim)
    return PrivacyReport(
        epsilon=epsilon,
        effective_p=effective.value,
        d=_check_d(d),
        dim=_check_dim(dim),
        scenario=effective.scenario,
    )


@dataclass(frozen=True)
class QecPlan:
    """Cheapest correction configuration found for a target budget."""

    scenario: NoiseScenario
    achieved_epsilon: float
    target_epsilon: float
    attainable: bool
    warning: str | None = None

    @property
    def m(self) -> int:
        return self.scenario.m

    @property
    def level(self) -> int:
        return self.scenario.level


def plan_qec(
    target_epsilon: float,
    n: int,
    p: float,
    d: float = 0.5,
    dim: int = 2,
    max_level: int = 3,
) -> QecPlan:
    """Find the cheapest (level, m) whose budget meets the target.

    Levels are scanned in ascending order with m ascending inside each level,
    and the first configuration reaching the target wins; deeper correction
    is strictly more expensive than correcting more gates at the same level.
    When nothing reaches the target the best configuration found is returned
    with ``attainable`` False.
    """
    if target_epsilon < 0.0:
        raise ValueError("target budget cannot be negative")
    if n < 1:
        raise ValueError("gate count must be at least 1")
    if not 0.0 < p < 1.0:
        raise ValueError("error rate must lie in (0, 1) for planning")
    if max_level < 1:
        raise ValueError("max_level must be at least 1")
    d = _check_d(d)
    dim = _check_dim(dim)
    warning = None
    if p > qec_threshold():
        warning = (
            "error rate is above the correction break-even point; "
            "correcting gates lowers the budget instead of raising it"
        )
    best: QecPlan | None = None
    for level in range(1, max_level + 1):
        for m in range(0, n + 1):
            effective = error_selective(n, m, p, level)
            epsilon = epsilon_from_p(effective.value, d, dim)
            candidate = QecPlan(
                scenario=effective.scenario,
                achieved_epsilon=epsilon,
                target_epsilon=target_epsilon,
                attainable=True,
                warning=warning,
            )
            if epsilon >= target_epsilon:
                return candidate
            if best is None or epsilon > best.achieved_epsilon:
                best = candidate
    assert best is not None
    return QecPlan(
        scenario=best.scenario,
        achieved_epsilon=best.achieved_epsilon,
        target_epsilon=target_epsilon,
        attainable=False,
        warning=warning,
    )


@dataclass(frozen=True)
class DpCheckReport:
    """Result of an empirical bound hunt."""

    max_log_ratio: float
    bound_epsilon: float
    passed: bool
    skipped: int
    num_pairs: int
    num_povms: int

    def __iter__(self):
        """Unpack as (max_log_ratio, bound_epsilon, passed)."""
        return iter((self.max_log_ratio, self.bound_epsilon, self.passed))


def _haar_unitary(dim: int, rng: Rng) -> np.ndarray:
    g = rng.generator.standard_normal((dim, dim)) + 1j * rng.generator.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    phases = np.diagonal(r).copy()
    phases = phases / np.abs(phases)
    return q * phases


def _random_projective_povm(dim: int, rng: Rng) -> Povm:
    basis = _haar_unitary(dim, rng)
    return Povm(tuple(np.outer(basis[:, k], basis[:, k].conj()) for k in range(dim)))


def _random_two_outcome_povm(dim: int, rng: Rng) -> Povm:
    basis = _haar_unitary(dim, rng)
    weights = rng.generator.random(dim)
    first = (basis * weights) @ basis.conj().T
    first = (first + first.conj().T) / 2.0
    return Povm((first, np.eye(dim) - first))


def verify_dp_empirical(
    p: float,
    d: float,
    num_pairs: int,
    num_povms: int,
    rng: Rng,
    dim: int = 2,
) -> DpCheckReport:
    """Hunt for violations of the budget bound with random pairs and POVMs.

    Each pair of states at trace distance d is pushed through the
    depolarizing channel; every nonempty outcome subset of every sampled
    POVM contributes the log probability ratio in both orientations of the
    pair. Ratios whose numerator or denominator underflows are skipped and
    counted. Pair i draws all of its randomness from rng.child(i), so the
    observed maximum does not depend on evaluation order.
    """
    p = float(p)
    if not 0.0 < p <= 1.0:
        raise ValueError("error rate must lie in (0, 1] for an empirical check")
    d = _check_d(d)
    dim = _check_dim(dim)
    num_qubits = (dim - 1).bit_length()
    if 2**num_qubits != dim:
        raise ValueError("dimension must be a power of two")
    if num_pairs < 1 or num_povms < 1:
        raise ValueError("need at least one pair and one measurement")
    bound = epsilon_from_p(p, d, dim)
    max_ratio = 0.0
    skipped = 0
    for i in range(num_pairs):
        pair_rng = rng.child(i)
        rho, sigma = state_pair_at_distance(num_qubits, d, pair_rng)
        rho_out = depolarize(rho, p)
        sigma_out = depolarize(sigma, p)
        for k in range(num_povms):
            if k % 2 == 0:
                povm = _random_projective_povm(dim, pair_rng)
            else:
                povm = _random_two_outcome_povm(dim, pair_rng)
            probs_rho = povm_probabilities(rho_out, povm)
            probs_sigma = povm_probabilities(sigma_out, povm)
            outcomes = len(povm.elements)
            for mask in range(1, 1 << outcomes):
                chosen = [j for j in range(outcomes) if mask >> j & 1]
                a = float(probs_rho[chosen].sum())
                b = float(probs_sigma[chosen].sum())
                if a < UNDERFLOW_FLOOR or b < UNDERFLOW_FLOOR:
                    skipped += 1
                    continue
                max_ratio = max(max_ratio, abs(math.log(a / b)))
    return DpCheckReport(
        max_log_ratio=max_ratio,
        bound_epsilon=bound,
        passed=max_ratio <= bound + 1e-6,
        skipped=skipped,
        num_pairs=num_pairs,
        num_povms=num_povms,
    )
