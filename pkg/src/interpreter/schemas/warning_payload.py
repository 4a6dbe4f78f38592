from pydantic import BaseModel
from src.domain.alarms import Alarm, WarningKind
from src.domain.interval import Interval
from src.frontend.ast import ScalarType
from src.frontend.tokens import Location


def _bound_text(bound: int | float) -> str:
    return repr(bound)


def _parse_bound(kind: ScalarType, text: str) -> int | float:
    if kind is ScalarType.FLOAT or text in ("inf", "-inf"):
        return float(text)
    return int(text)


class WitnessInterval(BaseModel):
    """Интервал-свидетель; границы — точная текстовая форма (repr), включая inf."""

    kind: ScalarType
    lo: str
    hi: str

    @classmethod
    def from_interval(cls, value: Interval) -> "WitnessInterval":
        return cls(kind=value.kind, lo=_bound_text(value.lo), hi=_bound_text(value.hi))

    def to_interval(self) -> Interval:
        lo = _parse_bound(self.kind, self.lo)
        hi = _parse_bound(self.kind, self.hi)
        if lo > hi:
            return Interval.empty(self.kind)
        return Interval(self.kind, lo, hi)


class WarningPayload(BaseModel):
    """
    Предупреждение в отчёте и в ответе воркера.

    Attributes:
        kind (WarningKind): Вид возможной ошибки.
        line (int): Строка.
        column (int): Столбец.
        witness (list[WitnessInterval]): Интервалы операндов, при которых ошибка возможна.
    """

    kind: WarningKind
    line: int
    column: int
    witness: list[WitnessInterval] = []

    @classmethod
    def from_alarm(cls, alarm: Alarm) -> "WarningPayload":
        return cls(
            kind=alarm.kind,
            line=alarm.loc.line,
            column=alarm.loc.column,
            witness=[WitnessInterval.from_interval(value) for value in alarm.witness],
        )

    def to_alarm(self) -> Alarm:
        return Alarm(self.kind, Location(self.line, self.column), tuple(w.to_interval() for w in self.witness))

