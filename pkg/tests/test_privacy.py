"""Budget arithmetic, correction planning, and the empirical bound check."""

import numpy as np
import pytest

from qdptune.analytics import (
    NoiseScenario,
    corrected_error,
    error_selective,
    qec_threshold,
)
from qdptune.privacy import (
    InfiniteBudgetError,
    PrivacyReport,
    budget_report,
    epsilon_from_p,
    p_from_epsilon,
    plan_qec,
    verify_dp_empirical,
)
from qdptune.rng import Rng
from qdptune.states import (
    DensityMatrix,
    Povm,
    StateVector,
    depolarize,
    povm_probabilities,
)

# Frozen reference values from a 50-digit arbitrary-precision evaluation of
# the same closed forms.
EPS_003 = 3.5065578973199817
EPS_001709 = 4.0692617818546375
EPS_CERR_003 = 4.0690842561398835
EPS_TWO_GATE_ONE_QEC = 3.0665787943105722
EPS_GLOBAL_2 = 2.8285243545700845
EPS_CONC_2 = 5.1507835244643571
EPS_D01 = 2.0104486701928845
EPS_D1 = 4.1845914400698788
P_FROM_40692 = 0.017091055884512671


# ---------------------------------------------------------------- budgets


def test_budget_matches_frozen_values():
    assert epsilon_from_p(0.03, 0.5, 2) == pytest.approx(EPS_003, abs=1e-12)
    assert epsilon_from_p(0.01709, 0.5, 2) == pytest.approx(EPS_001709, abs=1e-12)
    assert epsilon_from_p(corrected_error(0.03), 0.5, 2) == pytest.approx(
        EPS_CERR_003, abs=1e-12
    )


def test_budget_grows_with_distance_and_dimension():
    assert epsilon_from_p(0.03, 0.1, 2) == pytest.approx(EPS_D01, abs=1e-12)
    assert epsilon_from_p(0.03, 1.0, 2) == pytest.approx(EPS_D1, abs=1e-12)
    # only the product of distance and dimension enters
    assert epsilon_from_p(0.03, 0.5, 4) == pytest.approx(
        epsilon_from_p(0.03, 1.0, 2), abs=1e-15
    )


def test_budget_is_decreasing_in_noise():
    grid = np.linspace(0.001, 0.999, 200)
    values = [epsilon_from_p(p, 0.5, 2) for p in grid]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_noiseless_channel_has_no_finite_budget():
    with pytest.raises(InfiniteBudgetError):
        epsilon_from_p(0.0, 0.5, 2)


def test_fully_depolarizing_channel_gives_zero_budget():
    assert epsilon_from_p(1.0, 0.5, 2) == 0.0


def test_budget_input_validation():
    with pytest.raises(ValueError):
        epsilon_from_p(0.03, 0.0, 2)
    with pytest.raises(ValueError):
        epsilon_from_p(0.03, 1.5, 2)
    with pytest.raises(ValueError):
        epsilon_from_p(0.03, 0.5, 1)
    with pytest.raises(ValueError):
        epsilon_from_p(-0.1, 0.5, 2)


def test_inversion_matches_frozen_value():
    assert p_from_epsilon(4.0692, 0.5, 2) == pytest.approx(P_FROM_40692, abs=1e-15)


def test_inversion_round_trips():
    for p in np.geomspace(1e-6, 0.99, 40):
        eps = epsilon_from_p(float(p), 0.5, 2)
        assert p_from_epsilon(eps, 0.5, 2) == pytest.approx(float(p), rel=1e-12)


def test_zero_budget_inverts_to_full_noise():
    assert p_from_epsilon(0.0, 0.5, 2) == pytest.approx(1.0)


def test_negative_budget_rejected():
    with pytest.raises(ValueError):
        p_from_epsilon(-0.5, 0.5, 2)


# ---------------------------------------------------------------- reports


def test_budget_report_combines_scenario_and_budget():
    report = budget_report(NoiseScenario(n=2, p=0.03, m=1), 0.5, 2)
    assert report.effective_p == pytest.approx(0.0465802431582666, abs=1e-15)
    assert report.epsilon == pytest.approx(EPS_TWO_GATE_ONE_QEC, abs=1e-12)
    assert report.d == 0.5 and report.dim == 2


def test_uncorrected_report_uses_global_error():
    report = budget_report(NoiseScenario(n=2, p=0.03), 0.5, 2)
    assert report.effective_p == pytest.approx(0.0591, abs=1e-15)
    assert report.epsilon == pytest.approx(EPS_GLOBAL_2, abs=1e-12)


def test_tampered_report_is_rejected():
    good = budget_report(NoiseScenario(n=1, p=0.03), 0.5, 2)
    with pytest.raises(ValueError):
        PrivacyReport(
            epsilon=good.epsilon + 0.5,
            effective_p=good.effective_p,
            d=good.d,
            dim=good.dim,
            scenario=good.scenario,
        )


# ---------------------------------------------------------------- planning


def test_plan_prefers_shallow_levels():
    plan = plan_qec(3.0, n=2, p=0.03)
    assert plan.level == 1 and plan.m == 1
    assert plan.attainable
    assert plan.achieved_epsilon == pytest.approx(EPS_TWO_GATE_ONE_QEC, abs=1e-12)
    assert plan.warning is None


def test_plan_escalates_level_when_needed():
    plan = plan_qec(5.0, n=1, p=0.03, max_level=2)
    assert plan.level == 2 and plan.m == 1
    assert plan.attainable
    assert plan.achieved_epsilon == pytest.approx(EPS_CONC_2, abs=1e-12)


def test_plan_reports_best_effort_when_target_unreachable():
    plan = plan_qec(100.0, n=2, p=0.03)
    assert not plan.attainable
    assert plan.level == 3 and plan.m == 2
    assert plan.achieved_epsilon < 100.0
    assert plan.target_epsilon == 100.0


def test_plan_skips_correction_above_break_even():
    plan = plan_qec(1.0, n=1, p=0.2)
    assert plan.m == 0 and plan.level == 1
    assert plan.attainable
    assert plan.warning is not None
    hopeless = plan_qec(2.0, n=1, p=0.2)
    assert hopeless.m == 0 and not hopeless.attainable


def test_plan_with_trivial_target_needs_no_correction():
    plan = plan_qec(0.0, n=3, p=0.03)
    assert plan.m == 0 and plan.level == 1 and plan.attainable


def test_plan_validation():
    with pytest.raises(ValueError):
        plan_qec(-1.0, n=1, p=0.03)
    with pytest.raises(ValueError):
        plan_qec(3.0, n=0, p=0.03)
    with pytest.raises(ValueError):
        plan_qec(3.0, n=1, p=0.0)
    with pytest.raises(ValueError):
        plan_qec(3.0, n=1, p=0.03, max_level=0)


def _reference_plan(target, n, p, d, dim, max_level):
    """Independent exhaustive search mirroring the documented preference."""
    feasible = []
    fallback = None
    for level in range(1, max_level + 1):
        for m in range(n + 1):
            eps = epsilon_from_p(error_selective(n, m, p, level).value, d, dim)
            if eps >= target:
                feasible.append((level, m, eps))
            if fallback is None or eps > fallback[2]:
                fallback = (level, m, eps)
    if feasible:
        level, m, eps = min(feasible)
        return level, m, eps, True
    level, m, eps = fallback
    return level, m, eps, False


def test_plan_agrees_with_exhaustive_search():
    rng = Rng(1234).generator
    for _ in range(50):
        target = float(rng.uniform(0.5, 8.0))
        n = int(rng.integers(1, 9))
        p = float(rng.uniform(0.005, 0.05))
        d = float(rng.uniform(0.1, 1.0))
        dim = int(rng.choice([2, 4]))
        plan = plan_qec(target, n=n, p=p, d=d, dim=dim, max_level=3)
        level, m, eps, attainable = _reference_plan(target, n, p, d, dim, 3)
        assert (plan.level, plan.m, plan.attainable) == (level, m, attainable)
        assert plan.achieved_epsilon == pytest.approx(eps, abs=1e-12)


# ---------------------------------------------------------------- bound check


def test_extremal_pair_saturates_the_bound():
    # basis state vs maximally mixed at distance 0.5: the small-outcome ratio
    # equals the closed-form budget exactly
    rho = depolarize(StateVector.basis(1, 0).to_density(), 0.03)
    sigma = depolarize(DensityMatrix.maximally_mixed(1), 0.03)
    probs_rho = povm_probabilities(rho, Povm.computational(1))
    probs_sigma = povm_probabilities(sigma, Povm.computational(1))
    ratio = float(np.log(probs_sigma[1] / probs_rho[1]))
    assert ratio == pytest.approx(EPS_003, abs=1e-12)


def test_empirical_check_respects_the_bound():
    report = verify_dp_empirical(0.03, 0.5, 40, 8, Rng(0))
    assert report.passed
    assert report.max_log_ratio <= report.bound_epsilon + 1e-6
    assert report.bound_epsilon == pytest.approx(EPS_003, abs=1e-12)
    assert report.num_pairs == 40 and report.num_povms == 8


def test_empirical_check_is_deterministic():
    a = verify_dp_empirical(0.03, 0.5, 15, 5, Rng(7))
    b = verify_dp_empirical(0.03, 0.5, 15, 5, Rng(7))
    assert a == b


def test_empirical_check_unpacks_as_triple():
    max_ratio, bound, passed = verify_dp_empirical(0.03, 0.5, 5, 3, Rng(1))
    assert max_ratio <= bound + 1e-6
    assert passed is True


def test_full_noise_erases_all_distinguishability():
    report = verify_dp_empirical(1.0, 0.5, 10, 4, Rng(2))
    assert report.max_log_ratio == pytest.approx(0.0, abs=1e-9)
    assert report.bound_epsilon == 0.0
    assert report.passed


def test_empirical_check_validation():
    with pytest.raises(ValueError):
        verify_dp_empirical(0.03, 0.5, 10, 4, Rng(0), dim=3)
    with pytest.raises(ValueError):
        verify_dp_empirical(0.03, 0.5, 0, 4, Rng(0))
    with pytest.raises(ValueError):
        verify_dp_empirical(0.0, 0.5, 10, 4, Rng(0))
