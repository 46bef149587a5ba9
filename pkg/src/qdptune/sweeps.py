"""Parameter sweeps rendered as CSV plot data."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .analytics import NoiseScenario, error_selective
from .privacy import epsilon_from_p

SWEEPABLE = ("p", "d", "m", "level", "n")
_INTEGER_PARAMETERS = ("m", "level", "n")

CSV_SCHEMA = "qdptune-sweep-v1"
CSV_COLUMNS = (
    "sweep_value",
    "effective_p",
    "epsilon",
    "scenario_n",
    "scenario_m",
    "scenario_level",
    "d",
    "dim",
)


@dataclass(frozen=True)
class SweepConfig:
    """One swept parameter over [start, stop]; everything else held fixed."""

    parameter: str
    start: float
    stop: float
    steps: int
    n: int = 1
    m: int = 0
    level: int = 1
    p: float = 0.03
    d: float = 0.5
    dim: int = 2
    output_path: str | None = None

    def __post_init__(self):
        if self.parameter not in SWEEPABLE:
            raise ValueError(f"parameter must be one of {SWEEPABLE}, got {self.parameter!r}")
        if self.steps < 2:
            raise ValueError("a sweep needs at least 2 steps")
        if not self.start < self.stop:
            raise ValueError("sweep range must satisfy start < stop")
        NoiseScenario(n=self.n, p=self.p, m=self.m, level=self.level)  # validates the fixed part
        if not 0.0 < self.d <= 1.0:
            raise ValueError("d must lie in (0, 1]")
        if self.dim < 2:
            raise ValueError("dim must be at least 2")


def sweep_values(config: SweepConfig) -> list:
    """Grid of swept values; integer parameters round to the nearest int."""
    grid = np.linspace(config.start, config.stop, config.steps)
    if config.parameter in _INTEGER_PARAMETERS:
        return [int(round(v)) for v in grid]
    return [float(v) for v in grid]


def sweep_rows(config: SweepConfig) -> list:
    """One row per step: swept value, effective error, budget, scenario."""
    rows = []
    for value in sweep_values(config):
        scenario = NoiseScenario(n=config.n, p=config.p, m=config.m, level=config.level)
        d = config.d
        if config.parameter == "d":
            d = float(value)
            if not 0.0 < d <= 1.0:
                raise ValueError("swept d left (0, 1]")
        else:
            scenario = replace(scenario, **{config.parameter: value})
        effective = error_selective(scenario.n, scenario.m, scenario.p, scenario.level)
        epsilon = epsilon_from_p(effective.value, d, config.dim)
        rows.append(
            {
                "sweep_value": value,
                "effective_p": effective.value,
                "epsilon": epsilon,
                "scenario_n": scenario.n,
                "scenario_m": scenario.m,
                "scenario_level": scenario.level,
                "d": d,
                "dim": config.dim,
            }
        )
    return rows


def _format_cell(column: str, value) -> str:
    if column in ("scenario_n", "scenario_m", "scenario_level", "dim"):
        return str(int(value))
    return format(float(value), ".12g")


def render_csv(config: SweepConfig) -> str:
    """Render a sweep as CSV text; fixed schema, 12 significant digits."""
    lines = [
        f"# schema={CSV_SCHEMA} columns={','.join(CSV_COLUMNS)}",
        ",".join(CSV_COLUMNS),
    ]
    for row in sweep_rows(config):
        lines.append(",".join(_format_cell(col, row[col]) for col in CSV_COLUMNS))
    return "\n".join(lines) + "\n"
