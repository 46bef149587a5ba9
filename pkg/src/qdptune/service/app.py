"""HTTP service exposing budgets, sweeps, planning, and validation suites."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from fastapi.responses import PlainTextResponse

from ..analytics import NoiseScenario, qec_threshold
from ..privacy import budget_report, plan_qec
from ..suites import dp_suite, montecarlo_suite, syndrome_suite
from ..sweeps import SweepConfig, render_csv
from .schemas import (
    BudgetRequest,
    BudgetResponse,
    DpValidationRequest,
    DpValidationResponse,
    MonteCarloRequest,
    MonteCarloResponse,
    PlanRequest,
    PlanResponse,
    ScenarioModel,
    SweepRequest,
    SyndromeCaseModel,
    SyndromeValidationRequest,
    SyndromeValidationResponse,
    ThresholdResponse,
    TrialReportModel,
)

THRESHOLD_NOTE = "correction lowers the effective error only for p below this value; sweeps target p in (0, 0.05]"


def _scenario_model(scenario) -> ScenarioModel:
    return ScenarioModel(n=scenario.n, p=scenario.p, m=scenario.m, level=scenario.level)


def create_app() -> FastAPI:
    app = FastAPI(title="qdptune", version="0.1.0")

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/budget", response_model=BudgetResponse)
    def budget(request: BudgetRequest) -> BudgetResponse:
        scenario = NoiseScenario(
            n=request.gates, p=request.p, m=request.qec_gates, level=request.level
        )
        report = budget_report(scenario, request.d, request.dim)
        return BudgetResponse(
            epsilon=report.epsilon,
            effective_p=report.effective_p,
            d=report.d,
            dim=report.dim,
            scenario=_scenario_model(report.scenario),
        )

    @app.post("/sweep")
    def sweep(request: SweepRequest) -> PlainTextResponse:
        try:
            config = SweepConfig(
                parameter=request.parameter,
                start=request.start,
                stop=request.stop,
                steps=request.steps,
                n=request.gates,
                m=request.qec_gates,
                level=request.level,
                p=request.p,
                d=request.d,
                dim=request.dim,
            )
            text = render_csv(config)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return PlainTextResponse(text, media_type="text/csv")

    @app.get("/threshold", response_model=ThresholdResponse)
    def threshold() -> ThresholdResponse:
        return ThresholdResponse(threshold=qec_threshold(), note=THRESHOLD_NOTE)

    @app.post("/plan", response_model=PlanResponse)
    def plan(request: PlanRequest) -> PlanResponse:
        result = plan_qec(
            target_epsilon=request.target_epsilon,
            n=request.gates,
            p=request.p,
            d=request.d,
            dim=request.dim,
            max_level=request.max_level,
        )
        return PlanResponse(
            m=result.m,
            level=result.level,
            achieved_epsilon=result.achieved_epsilon,
            target_epsilon=result.target_epsilon,
            attainable=result.attainable,
            warning=result.warning,
            scenario=_scenario_model(result.scenario),
        )

    @app.post("/validate/syndromes", response_model=SyndromeValidationResponse)
    def validate_syndromes(request: SyndromeValidationRequest) -> SyndromeValidationResponse:
        result = syndrome_suite(seed=request.seed)
        cases = [
            SyndromeCaseModel(
                letter=case.letter,
                qubit=case.qubit,
                expected_n=case.expected.n_eigenvalues,
                expected_m=case.expected.m_eigenvalues,
                classical_ok=case.classical == case.expected,
                circuit_ok=case.circuit == case.expected,
            )
            for case in result.cases
        ]
        return SyndromeValidationResponse(passed=result.passed, cases=cases)

    @app.post("/validate/montecarlo", response_model=MonteCarloResponse)
    def validate_montecarlo(request: MonteCarloRequest) -> MonteCarloResponse:
        try:
            result = montecarlo_suite(
                p=request.p,
                trials=request.trials,
                seed=request.seed,
                backend=request.backend,
                level=request.level,
            )
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        report = result.report
        return MonteCarloResponse(passed=result.passed, report=TrialReportModel(**report.__dict__))

    @app.post("/validate/dp", response_model=DpValidationResponse)
    def validate_dp(request: DpValidationRequest) -> DpValidationResponse:
        try:
            report = dp_suite(
                p=request.p,
                d=request.d,
                num_pairs=request.pairs,
                num_povms=request.povms,
                seed=request.seed,
                dim=request.dim,
            )
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return DpValidationResponse(
            passed=report.passed,
            max_log_ratio=report.max_log_ratio,
            bound_epsilon=report.bound_epsilon,
            skipped=report.skipped,
            num_pairs=report.num_pairs,
            num_povms=report.num_povms,
        )

    return app


app = create_app()
