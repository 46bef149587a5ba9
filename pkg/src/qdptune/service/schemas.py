"""Request and response models for the HTTP service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator


class ScenarioModel(BaseModel):
    n: int
    p: float
    m: int
    level: int


class BudgetRequest(BaseModel):
    p: float = Field(default=0.03, gt=0.0, le=1.0)
    d: float = Field(default=0.5, gt=0.0, le=1.0)
    dim: int = Field(default=2, ge=2)
    gates: int = Field(default=1, ge=1)
    qec_gates: int = Field(default=0, ge=0)
    level: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _qec_gates_within_gates(self):
        if self.qec_gates > self.gates:
            raise ValueError("qec_gates cannot exceed gates")
        return self


class BudgetResponse(BaseModel):
    epsilon: float
    effective_p: float
    d: float
    dim: int
    scenario: ScenarioModel


class SweepRequest(BaseModel):
    parameter: Literal["p", "d", "m", "level", "n"]
    start: float
    stop: float
    steps: int = Field(ge=2)
    p: float = Field(default=0.03, gt=0.0, le=1.0)
    d: float = Field(default=0.5, gt=0.0, le=1.0)
    dim: int = Field(default=2, ge=2)
    gates: int = Field(default=1, ge=1)
    qec_gates: int = Field(default=0, ge=0)
    level: int = Field(default=1, ge=1)


class ThresholdResponse(BaseModel):
    threshold: float
    note: str


class PlanRequest(BaseModel):
    target_epsilon: float = Field(ge=0.0)
    gates: int = Field(default=1, ge=1)
    p: float = Field(default=0.03, gt=0.0, lt=1.0)
    d: float = Field(default=0.5, gt=0.0, le=1.0)
    dim: int = Field(default=2, ge=2)
    max_level: int = Field(default=3, ge=1)


class PlanResponse(BaseModel):
    m: int
    level: int
    achieved_epsilon: float
    target_epsilon: float
    attainable: bool
    warning: Optional[str] = None
    scenario: ScenarioModel


class SyndromeValidationRequest(BaseModel):
    seed: int = 0


class SyndromeCaseModel(BaseModel):
    letter: str
    qubit: int
    expected_n: tuple[int, int, int]
    expected_m: tuple[int, int, int]
    classical_ok: bool
    circuit_ok: bool


class SyndromeValidationResponse(BaseModel):
    passed: bool
    cases: list[SyndromeCaseModel]


class MonteCarloRequest(BaseModel):
    p: float = Field(default=0.03, ge=0.0, le=1.0)
    trials: int = Field(default=100_000, ge=1)
    seed: int = 0
    backend: Literal["pauli_frame", "circuit"] = "pauli_frame"
    level: int = Field(default=1, ge=1)


class TrialReportModel(BaseModel):
    trials: int
    failures: int
    estimated_error: float
    std_error: float
    analytic_error: float
    z_score: float
    seed: int
    residual_failures: int
    backend: str
    level: int


class MonteCarloResponse(BaseModel):
    passed: bool
    report: TrialReportModel


class DpValidationRequest(BaseModel):
    p: float = Field(default=0.03, gt=0.0, le=1.0)
    d: float = Field(default=0.5, gt=0.0, le=1.0)
    dim: int = Field(default=2, ge=2)
    pairs: int = Field(default=100, ge=1)
    povms: int = Field(default=10, ge=1)
    seed: int = 0


class DpValidationResponse(BaseModel):
    passed: bool
    max_log_ratio: float
    bound_epsilon: float
    skipped: int
    num_pairs: int
    num_povms: int
