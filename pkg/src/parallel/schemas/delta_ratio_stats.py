from pydantic import BaseModel, Field, field_serializer

_PRECISION = 6


class DeltaRatioSample(BaseModel):
    patch_bytes: int = Field(ge=0)
    full_bytes: int = Field(ge=0)
    ratio: float = Field(ge=0)

    @field_serializer("ratio")
    def _round(self, value: float) -> float:
        return round(value, _PRECISION)


class DeltaRatioStats(BaseModel):
    """
    Доля байт патча от полного канонического окружения.

    Заголовок патча (версия, флаги, дайджест базы, число записей) в patch_bytes
    не входит: неизменённый результат даёт ровно 0.
    """

    samples: list[DeltaRatioSample] = Field(default_factory=list)
    total_patch_bytes: int = 0
    total_full_bytes: int = 0
    aggregate: float = 0.0
    max_ratio: float = 0.0

    @field_serializer("aggregate", "max_ratio")
    def _round(self, value: float) -> float:
        return round(value, _PRECISION)
