from pydantic import BaseModel, ConfigDict, Field
from src.astral_settings import AstralSettings
from src.domain.ladder import WideningLadder
from src.interpreter.invariants import RetentionPolicy


class AnalysisOptions(BaseModel):
    """
    Параметры, от которых зависит результат анализа.

    Передаются воркерам при рукопожатии, чтобы мастер и воркеры анализировали
    ветви одинаково.
    """

    model_config = ConfigDict(frozen=True)

    ladder: str = Field(default_factory=lambda: WideningLadder().format())
    iter_bound: int = Field(default=1000, ge=1)
    widening_delay: int = Field(default=2, ge=0)
    narrowing_passes: int = Field(default=2, ge=0)
    retention: RetentionPolicy = RetentionPolicy.LOOP_HEADS
    min_branches: int = Field(default=2, ge=1)
    auto_dispatch: bool = True

    @classmethod
    def from_settings(cls, settings: AstralSettings) -> "AnalysisOptions":
        return cls(
            ladder=settings.LADDER,
            iter_bound=settings.ITER_BOUND,
            widening_delay=settings.WIDENING_DELAY,
            narrowing_passes=settings.NARROWING_PASSES,
            retention=RetentionPolicy(settings.RETENTION),
            min_branches=settings.MIN_BRANCHES,
            auto_dispatch=settings.AUTO_DISPATCH,
        )

    def widening_ladder(self) -> WideningLadder:
        return WideningLadder.parse(self.ladder)
