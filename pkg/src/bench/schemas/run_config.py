from pathlib import Path
from pydantic import BaseModel, ConfigDict, Field, model_validator
from src.astral_settings import AstralSettings
from src.interpreter.invariants import RetentionPolicy
from src.interpreter.schemas.analysis_options import AnalysisOptions
from src.parallel.partition import Strategy


class RunConfig(BaseModel):
    """
    Параметры одного запуска CLI.

    Собирается из AstralSettings и аргументов командной строки; незаданные
    аргументы (None) берутся из настроек.
    """

    model_config = ConfigDict(frozen=True)

    inputs: list[Path] = Field(default_factory=list)
    workers: int = Field(default=1, ge=1)
    transport: str = "inproc"
    strategy: Strategy = Strategy.BLOCK
    seed: int | None = None
    ladder: str | None = None
    iter_bound: int | None = Field(default=None, ge=1)
    retention: RetentionPolicy | None = None
    report: Path | None = None
    table: bool = False
    emit_invariants: bool = False
    save_invariants: Path | None = None
    concrete_run: int | None = None
    enumerate_bound: int | None = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _seed_only_for_shuffle(self) -> "RunConfig":
        if (self.seed is not None) != (self.strategy is Strategy.SHUFFLE):
            raise ValueError("seed задаётся тогда и только тогда, когда стратегия shuffle")
        return self

    def analysis_options(self, settings: AstralSettings) -> AnalysisOptions:
        options = AnalysisOptions.from_settings(settings)
        overrides: dict[str, object] = {}
        if self.ladder is not None:
            overrides["ladder"] = self.ladder
        if self.iter_bound is not None:
            overrides["iter_bound"] = self.iter_bound
        if self.retention is not None:
            overrides["retention"] = self.retention
        return options.model_copy(update=overrides)
