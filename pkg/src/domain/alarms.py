from enum import StrEnum
import attrs
from src.domain.interval import Interval
from src.frontend.tokens import Location


class WarningKind(StrEnum):
    OVERFLOW = "overflow"
    DIV_BY_ZERO = "div-by-zero"
    ARRAY_OUT_OF_BOUNDS = "array-out-of-bounds"
    ASSERT_MAY_FAIL = "assert-may-fail"


@attrs.frozen
class Alarm:
    """Возможная ошибка времени исполнения, найденная передаточной функцией."""

    kind: WarningKind
    loc: Location
    witness: tuple[Interval, ...] = ()
