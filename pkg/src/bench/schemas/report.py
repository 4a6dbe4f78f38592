from pydantic import BaseModel, Field, field_serializer
from src.interpreter.schemas.warning_payload import WarningPayload, WitnessInterval
from src.parallel.schemas.delta_ratio_stats import DeltaRatioStats

REPORT_VERSION = 1
PRECISION = 6


class InvariantEntry(BaseModel):
    line: int
    column: int
    bottom: bool = False
    cells: dict[str, WitnessInterval] = Field(default_factory=dict)


class MemoryStats(BaseModel):
    retention: str
    peak_retained: int
    distinct_nodes: int


class OracleErrorEntry(BaseModel):
    kind: str
    line: int
    column: int


class OracleSummary(BaseModel):
    """
    Сверка с конкретным исполнением.

    uncovered — ошибки оракула, для которых у анализатора нет предупреждения
    того же вида в той же позиции; у корректного анализатора список пуст.
    """

    mode: str
    parameter: int
    states: int
    exhausted: bool = False
    errors: list[OracleErrorEntry] = Field(default_factory=list)
    uncovered: list[OracleErrorEntry] = Field(default_factory=list)


class TimingRow(BaseModel):
    workers: int
    transport: str
    strategy: str
    seconds: list[float] = Field(default_factory=list)
    median_seconds: float = 0.0
    speedup: float = 1.0
    branch_micros: list[int] = Field(default_factory=list)
    digest: str = ""

    @field_serializer("seconds")
    def _round_list(self, values: list[float]) -> list[float]:
        return [round(value, PRECISION) for value in values]

    @field_serializer("median_seconds", "speedup")
    def _round(self, value: float) -> float:
        return round(value, PRECISION)


class SpeedupFit(BaseModel):
    """Подгонка t(p) = a/p + b; normalized_* делятся на t(1) = a + b."""

    a: float
    b: float
    normalized_a: float
    normalized_b: float
    reference: str = "0.75/p + 0.25"

    @field_serializer("a", "b", "normalized_a", "normalized_b")
    def _round(self, value: float) -> float:
        return round(value, PRECISION)


class Report(BaseModel):
    """
    Отчёт запуска.

    digest — SHA-256 (hex) канонических байт конечного окружения, инвариантов
    циклов и отсортированных предупреждений; времена в него не входят.
    """

    version: int = REPORT_VERSION
    program: str | None = None
    digest: str = ""
    warnings: list[WarningPayload] = Field(default_factory=list)
    invariants: list[InvariantEntry] = Field(default_factory=list)
    timings: list[TimingRow] = Field(default_factory=list)
    delta_ratio: DeltaRatioStats | None = None
    speedup_fit: SpeedupFit | None = None
    memory: MemoryStats | None = None
    oracle: list[OracleSummary] = Field(default_factory=list)
