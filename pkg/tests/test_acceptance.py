"""End-to-end acceptance gate: one verdict line per criterion.

Each test prints and records a single PASS/FAIL line through the ``criterion``
fixture, checks the stated numeric tolerance, and enforces its runtime budget.
"""

import json
import time

import numpy as np
import pytest

from qdptune.analytics import concatenated_error, corrected_error, error_selective
from qdptune.cli import main
from qdptune.montecarlo import run_steane_trials
from qdptune.privacy import epsilon_from_p, plan_qec, verify_dp_empirical
from qdptune.rng import Rng
from qdptune.states import PauliString, random_pure_state
from qdptune.steane import (
    CodewordState,
    Syndrome,
    decode,
    encode,
    extract_syndrome_circuit,
    extract_syndrome_classical,
    qec_cycle,
)

# Independent statement of the expected single-error signatures: bit flips
# light the first triple, phase flips the second, Y errors both.
FLAGS = {
    0: (-1, 1, 1),
    1: (1, -1, 1),
    2: (1, 1, -1),
    3: (1, -1, -1),
    4: (-1, 1, -1),
    5: (-1, -1, 1),
    6: (-1, -1, -1),
}
TRIVIAL = (1, 1, 1)

# Binomial standard errors of the closed-form rates at 1e5 trials, frozen
# from a 50-digit evaluation.
SIGMA = {
    0.01: 0.0001423698178975144,
    0.03: 0.0004098885502935173,
    0.05: 0.0006512365903620859,
}


def _verdict(criterion, name, ok, detail, elapsed, budget):
    status = "PASS" if ok and elapsed < budget else "FAIL"
    line = f"{status} {name}: {detail} [{elapsed:.2f}s < {budget:.0f}s]"
    criterion(line)
    assert ok, line
    assert elapsed < budget, line


def test_criterion_1_threshold_command(criterion, capsys):
    start = time.perf_counter()
    code = main(["threshold"])
    elapsed = time.perf_counter() - start
    out = capsys.readouterr().out
    value = float(out.split("threshold p* = ")[1].split()[0])
    ok = code == 0 and abs(value - 0.0579) < 1e-3
    _verdict(
        criterion,
        "criterion 1 (threshold command)",
        ok,
        f"reported {value:.6f}, |value - 0.0579| = {abs(value - 0.0579):.1e} < 1e-3",
        elapsed,
        1.0,
    )


def test_criterion_2_syndrome_table(criterion):
    start = time.perf_counter()
    probe = random_pure_state(1, Rng(314))
    codeword = encode(probe)
    mismatches = 0
    for qubit in range(7):
        for letter in "XYZ":
            n_half = FLAGS[qubit] if letter in ("X", "Y") else TRIVIAL
            m_half = FLAGS[qubit] if letter in ("Z", "Y") else TRIVIAL
            expected = Syndrome(n_half, m_half)
            error = PauliString.single(7, qubit, letter)
            if extract_syndrome_classical(error) != expected:
                mismatches += 1
                continue
            noisy = CodewordState(error.apply_to(codeword.state))
            measured, _ = extract_syndrome_circuit(noisy, Rng(qubit))
            if measured != expected:
                mismatches += 1
    elapsed = time.perf_counter() - start
    _verdict(
        criterion,
        "criterion 2 (syndrome table)",
        mismatches == 0,
        f"21 single-qubit errors, both extraction routes, {mismatches} mismatches",
        elapsed,
        30.0,
    )


def test_criterion_3_baseline_budgets(criterion):
    start = time.perf_counter()
    raw = epsilon_from_p(0.03, 0.5, 2)
    corrected = epsilon_from_p(0.01709, 0.5, 2)
    grid = np.linspace(0.001, 0.05, 120)
    ordering = all(
        epsilon_from_p(corrected_error(float(p)), 0.5, 2) > epsilon_from_p(float(p), 0.5, 2)
        for p in grid
    )
    elapsed = time.perf_counter() - start
    ok = abs(raw - 3.5066) <= 1e-4 and abs(corrected - 4.0692) <= 1e-4 and ordering
    _verdict(
        criterion,
        "criterion 3 (baseline budgets)",
        ok,
        f"eps(0.03) = {raw:.6f} (3.5066 +/- 1e-4), eps(0.01709) = {corrected:.6f} "
        f"(4.0692 +/- 1e-4), corrected curve above raw on 120 points: {ordering}",
        elapsed,
        5.0,
    )


@pytest.mark.parametrize("p", [0.01, 0.03, 0.05])
def test_criterion_4_montecarlo_calibration(criterion, p):
    start = time.perf_counter()
    report = run_steane_trials(p, 100000, seed=0)
    elapsed = time.perf_counter() - start
    gap = abs(report.estimated_error - report.analytic_error)
    ok = gap <= 3 * SIGMA[p]
    _verdict(
        criterion,
        f"criterion 4 (trial calibration, p={p})",
        ok,
        f"1e5 trials: |{report.estimated_error:.6f} - {report.analytic_error:.6f}| "
        f"= {gap:.2e} <= 3 sigma = {3 * SIGMA[p]:.2e}",
        elapsed,
        60.0,
    )


def test_criterion_5_budget_orderings(criterion):
    start = time.perf_counter()
    d_grid = np.linspace(0.005, 1.0, 120)
    budgets = [epsilon_from_p(0.03, float(d), 2) for d in d_grid]
    increasing_in_d = all(a < b for a, b in zip(budgets, budgets[1:]))

    p_grid = np.linspace(0.0015, 0.05, 120)
    rowwise = True
    level_gain = True
    for p in p_grid:
        p = float(p)
        eps_by_m = [
            epsilon_from_p(error_selective(2, m, p).value, 0.5, 2) for m in range(3)
        ]
        rowwise = rowwise and eps_by_m[2] >= eps_by_m[1] >= eps_by_m[0]
        e1, e2 = concatenated_error(p, 1), concatenated_error(p, 2)
        level_gain = level_gain and e2 < e1 and (
            epsilon_from_p(e2, 0.5, 2) > epsilon_from_p(e1, 0.5, 2)
        )
    elapsed = time.perf_counter() - start
    ok = increasing_in_d and rowwise and level_gain
    _verdict(
        criterion,
        "criterion 5 (budget orderings)",
        ok,
        f"eps increasing in d: {increasing_in_d}; m = 2 >= 1 >= 0 rowwise: {rowwise}; "
        f"level 2 beats level 1: {level_gain} (120-point grids)",
        elapsed,
        5.0,
    )


def test_criterion_6_bound_never_violated(criterion):
    start = time.perf_counter()
    report = verify_dp_empirical(0.03, 0.5, 1000, 20, Rng(0))
    elapsed = time.perf_counter() - start
    ok = report.passed and report.max_log_ratio <= report.bound_epsilon + 1e-6
    _verdict(
        criterion,
        "criterion 6 (empirical bound)",
        ok,
        f"1000 pairs x 20 measurements: max log-ratio {report.max_log_ratio:.4f} "
        f"<= {report.bound_epsilon:.4f} + 1e-6, {report.skipped} skipped",
        elapsed,
        120.0,
    )


def test_criterion_7_round_trip_recovery(criterion):
    start = time.perf_counter()
    worst = 1.0
    failures = 0
    for k in range(100):
        logical = random_pure_state(1, Rng(2718).child(k))
        codeword = encode(logical)
        for qubit in range(7):
            for letter in "XYZ":
                noisy = CodewordState(
                    PauliString.single(7, qubit, letter).apply_to(codeword.state)
                )
                recovered = decode(qec_cycle(noisy, Rng(k * 31 + qubit)))
                fidelity = recovered.fidelity(logical)
                worst = min(worst, fidelity)
                if fidelity < 1 - 1e-9:
                    failures += 1
    elapsed = time.perf_counter() - start
    _verdict(
        criterion,
        "criterion 7 (round-trip recovery)",
        failures == 0,
        f"100 random logical states x 21 errors: {failures} below 1 - 1e-9, "
        f"worst fidelity 1 - {1 - worst:.1e}",
        elapsed,
        300.0,
    )


def _exhaustive_plan(target, n, p, max_level=3):
    feasible = []
    fallback = None
    for level in range(1, max_level + 1):
        for m in range(n + 1):
            eps = epsilon_from_p(error_selective(n, m, p, level).value, 0.5, 2)
            if eps >= target:
                feasible.append((level, m, eps))
            if fallback is None or eps > fallback[2]:
                fallback = (level, m, eps)
    if feasible:
        return min(feasible) + (True,)
    return fallback + (False,)


def test_criterion_8_planner_minimality(criterion):
    start = time.perf_counter()
    rng = Rng(2024).generator
    disagreements = 0
    for _ in range(50):
        target = float(rng.uniform(0.5, 8.0))
        n = int(rng.integers(1, 9))
        p = float(rng.uniform(0.005, 0.05))
        plan = plan_qec(target, n=n, p=p)
        level, m, eps, attainable = _exhaustive_plan(target, n, p)
        same = (
            plan.level == level
            and plan.m == m
            and plan.attainable == attainable
            and abs(plan.achieved_epsilon - eps) < 1e-12
        )
        disagreements += 0 if same else 1
    elapsed = time.perf_counter() - start
    _verdict(
        criterion,
        "criterion 8 (planner minimality)",
        disagreements == 0,
        f"50 random instances vs exhaustive search (level <= 3, m <= n): "
        f"{disagreements} disagreements",
        elapsed,
        10.0,
    )
