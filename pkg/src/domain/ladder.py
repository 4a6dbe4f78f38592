import bisect
import math
import attrs
from src.domain.exceptions import LadderError
from src.domain.numeric import INT64_MAX, INT64_MIN

DEFAULT_THRESHOLDS = (
    -1_000_000_000, -1_000_000, -1000, -100, -10, -1, 1, 10, 100, 1000, 1_000_000, 1_000_000_000,
)


def _sorted_unique(values: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(sorted(set(values)))


def _within_int64(instance: object, attribute: attrs.Attribute, value: tuple[int, ...]) -> None:
    outside = [item for item in value if not INT64_MIN <= item <= INT64_MAX]
    if outside:
        raise LadderError(f"Пороги вне диапазона int64: {outside}")


@attrs.frozen
class WideningLadder:
    """Пороги расширения, по возрастанию. За крайними порогами граница уходит в бесконечность."""

    thresholds: tuple[int, ...] = attrs.field(
        default=DEFAULT_THRESHOLDS, converter=_sorted_unique, validator=_within_int64
    )

    @classmethod
    def parse(cls, text: str) -> "WideningLadder":
        """Строит лестницу из списка через запятую, например "-10,1,10,100"."""
        items = [item.strip() for item in text.split(",") if item.strip()]
        try:
            return cls(tuple(int(item) for item in items))
        except ValueError as error:
            raise ValueError(f"Некорректная лестница порогов: {text!r}") from error

    def __len__(self) -> int:
        return len(self.thresholds)

    def above(self, value: float) -> float:
        """Наименьший порог строго больше value либо +inf."""
        index = bisect.bisect_right(self.thresholds, value)
        return self.thresholds[index] if index < len(self.thresholds) else math.inf

    def below(self, value: float) -> float:
        """Наибольший порог строго меньше value либо -inf."""
        index = bisect.bisect_left(self.thresholds, value)
        return self.thresholds[index - 1] if index > 0 else -math.inf

    def format(self) -> str:
        return ",".join(str(item) for item in self.thresholds)
