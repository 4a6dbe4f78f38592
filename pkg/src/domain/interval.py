import math
from typing import Union
import attrs
from src.domain.ladder import WideningLadder
from src.domain.numeric import DBL_MAX, INT64_MAX, INT64_MIN, c_div, clamp_int, float_down, float_up
from src.frontend.ast import ScalarType

Bound = Union[int, float]

INF = math.inf


def _type_min(kind: ScalarType) -> Bound:
    return INT64_MIN if kind is ScalarType.INT else -DBL_MAX


def _type_max(kind: ScalarType) -> Bound:
    return INT64_MAX if kind is ScalarType.INT else DBL_MAX


def _down(value: float) -> float:
    return value if math.isinf(value) else math.nextafter(value, -INF)


def _up(value: float) -> float:
    return value if math.isinf(value) else math.nextafter(value, INF)


@attrs.frozen
class Interval:
    """
    Интервал значений одной ячейки.

    Границы целого интервала — int либо ±inf; вещественного — float, возможно ±inf.
    Пустой интервал хранится как (inf, -inf). Отрицательный ноль в границах
    заменяется на 0.0, так что равные множества имеют равные байты.
    """

    kind: ScalarType
    lo: Bound
    hi: Bound

    @classmethod
    def of(cls, kind: ScalarType, lo: Bound, hi: Bound) -> "Interval":
        if lo > hi:
            return cls.empty(kind)
        if kind is ScalarType.FLOAT:
            return cls(kind, float(lo) + 0.0, float(hi) + 0.0)
        return cls(kind, lo if math.isinf(lo) else int(lo), hi if math.isinf(hi) else int(hi))

    @classmethod
    def const(cls, kind: ScalarType, value: Bound) -> "Interval":
        return cls.of(kind, value, value)

    @classmethod
    def empty(cls, kind: ScalarType) -> "Interval":
        return cls(kind, INF, -INF)

    @classmethod
    def full(cls, kind: ScalarType) -> "Interval":
        """Весь диапазон типа: значение неинициализированной переменной."""
        return cls(kind, _type_min(kind), _type_max(kind))

    @property
    def is_empty(self) -> bool:
        return self.lo > self.hi

    @property
    def is_singleton(self) -> bool:
        return self.lo == self.hi

    def __contains__(self, value: Bound) -> bool:
        return self.lo <= value <= self.hi

    def __str__(self) -> str:
        if self.is_empty:
            return "⊥"
        return f"[{self.lo}, {self.hi}]"

    def finite(self) -> "Interval":
        """Бесконечные границы читаются как границы типа."""
        if self.is_empty:
            return self
        return Interval(self.kind, max(self.lo, _type_min(self.kind)), min(self.hi, _type_max(self.kind)))

    def join(self, other: "Interval") -> "Interval":
        if self.is_empty:
            return other
        if other.is_empty:
            return self
        if other.lo >= self.lo and other.hi <= self.hi:
            return self
        return Interval(self.kind, min(self.lo, other.lo), max(self.hi, other.hi))

    def meet(self, other: "Interval") -> "Interval":
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            return Interval.empty(self.kind)
        if lo == self.lo and hi == self.hi:
            return self
        return Interval(self.kind, lo, hi)

    def leq(self, other: "Interval") -> bool:
        if self.is_empty:
            return True
        return other.lo <= self.lo and self.hi <= other.hi

    def widen(self, other: "Interval", ladder: WideningLadder) -> "Interval":
        """Растущая граница прыгает к следующему порогу лестницы, за последним — к бесконечности."""
        if self.is_empty:
            return other
        if other.is_empty:
            return self
        lo = self.lo if other.lo >= self.lo else ladder.below(other.lo)
        hi = self.hi if other.hi <= self.hi else ladder.above(other.hi)
        if lo == self.lo and hi == self.hi:
            return self
        return Interval.of(self.kind, lo, hi)


@attrs.frozen
class ArithResult:
    """Результат абстрактной операции и флаги возможных ошибок."""

    value: Interval
    overflow: bool = False
    div_by_zero: bool = False


def _int_from_corners(corners: list[int]) -> ArithResult:
    lo, hi = min(corners), max(corners)
    lo_clamped, lo_over = clamp_int(lo)
    hi_clamped, hi_over = clamp_int(hi)
    return ArithResult(Interval(ScalarType.INT, lo_clamped, hi_clamped), lo_over or hi_over)


def _float_from_corners(corners: list[float]) -> ArithResult:
    lo, hi = min(corners), max(corners)
    overflow = math.isinf(lo) or math.isinf(hi)
    lo = min(max(_down(lo), -DBL_MAX), DBL_MAX)
    hi = max(min(_up(hi), DBL_MAX), -DBL_MAX)
    return ArithResult(Interval.of(ScalarType.FLOAT, lo, hi), overflow)


def _float_product(x: float, y: float) -> float:
    if x == 0.0 or y == 0.0:
        return 0.0
    return x * y


def arith(op: str, left: Interval, right: Interval) -> ArithResult:
    """
    Интервальная арифметика с той же семантикой, что и конкретное исполнение.

    Целые считаются точно и насыщаются в int64; вещественные округляются наружу
    и насыщаются в ±DBL_MAX. Деление на интервал, содержащий ноль, даёт флаг
    div_by_zero и включает 0 в результат.
    """
    kind = left.kind
    a, b = left.finite(), right.finite()
    if a.is_empty or b.is_empty:
        return ArithResult(Interval.empty(kind))
    if op == "+":
        corners = [a.lo + b.lo, a.hi + b.hi]
    elif op == "-":
        corners = [a.lo - b.hi, a.hi - b.lo]
    elif op == "*":
        if kind is ScalarType.FLOAT:
            corners = [_float_product(x, y) for x in (a.lo, a.hi) for y in (b.lo, b.hi)]
        else:
            corners = [x * y for x in (a.lo, a.hi) for y in (b.lo, b.hi)]
    elif op == "/":
        return _divide(a, b)
    elif op == "%":
        return _modulo(a, b)
    else:
        raise ValueError(f"Неизвестная арифметическая операция {op}")
    if kind is ScalarType.FLOAT:
        return _float_from_corners(corners)  # type: ignore[arg-type]
    return _int_from_corners(corners)  # type: ignore[arg-type]


def _nonzero_parts(divisor: Interval) -> list[tuple[Bound, Bound]]:
    """Части делителя без нуля; для вещественных ноль исключается через ближайшее ненулевое double."""
    parts: list[tuple[Bound, Bound]] = []
    if divisor.kind is ScalarType.INT:
        if divisor.lo <= -1:
            parts.append((divisor.lo, min(divisor.hi, -1)))
        if divisor.hi >= 1:
            parts.append((max(divisor.lo, 1), divisor.hi))
    else:
        tiny = math.ulp(0.0)
        if divisor.lo < 0.0:
            parts.append((divisor.lo, min(divisor.hi, -tiny)))
        if divisor.hi > 0.0:
            parts.append((max(divisor.lo, tiny), divisor.hi))
    return parts


def _divide(a: Interval, b: Interval) -> ArithResult:
    kind = a.kind
    div_by_zero = 0 in b
    results: list[ArithResult] = []
    for lo, hi in _nonzero_parts(b):
        if kind is ScalarType.INT:
            corners_int = [c_div(x, y) for x in (a.lo, a.hi) for y in (lo, hi)]  # type: ignore[arg-type]
            results.append(_int_from_corners(corners_int))
        else:
            corners_float = [x / y for x in (a.lo, a.hi) for y in (lo, hi)]
            results.append(_float_from_corners(corners_float))
    value = Interval.const(kind, 0) if div_by_zero else Interval.empty(kind)
    overflow = False
    for result in results:
        value = value.join(result.value)
        overflow = overflow or result.overflow
    return ArithResult(value, overflow, div_by_zero)


def _modulo(a: Interval, b: Interval) -> ArithResult:
    div_by_zero = 0 in b
    parts = _nonzero_parts(b)
    value = Interval.const(ScalarType.INT, 0) if div_by_zero else Interval.empty(ScalarType.INT)
    if parts:
        if a.is_singleton and b.is_singleton:
            rem = a.lo - b.lo * c_div(a.lo, b.lo)  # type: ignore[arg-type]
            return ArithResult(Interval.const(ScalarType.INT, rem))
        magnitude = max(max(abs(lo), abs(hi)) for lo, hi in parts) - 1
        lo = 0 if a.lo >= 0 else max(a.lo, -magnitude)
        hi = 0 if a.hi <= 0 else min(a.hi, magnitude)
        value = value.join(Interval(ScalarType.INT, lo, hi))
    return ArithResult(value, False, div_by_zero)


def negate(operand: Interval) -> ArithResult:
    a = operand.finite()
    if a.is_empty:
        return ArithResult(a)
    if a.kind is ScalarType.FLOAT:
        return ArithResult(Interval.of(ScalarType.FLOAT, -a.hi, -a.lo))
    return _int_from_corners([-a.hi, -a.lo])  # type: ignore[list-item]


def logical_not(operand: Interval) -> Interval:
    if operand.is_empty:
        return operand
    if operand.lo == 0 and operand.hi == 0:
        return Interval.const(ScalarType.INT, 1)
    if 0 not in operand:
        return Interval.const(ScalarType.INT, 0)
    return Interval(ScalarType.INT, 0, 1)


def cast(target: ScalarType, operand: Interval) -> ArithResult:
    a = operand.finite()
    if a.is_empty or a.kind is target:
        return ArithResult(a if not a.is_empty else Interval.empty(target))
    if target is ScalarType.FLOAT:
        return ArithResult(Interval.of(ScalarType.FLOAT, float_down(a.lo), float_up(a.hi)))  # type: ignore[arg-type]
    return _int_from_corners([math.trunc(a.lo), math.trunc(a.hi)])


_NEGATED = {"<": ">=", "<=": ">", ">": "<=", ">=": "<", "==": "!=", "!=": "=="}
_SWAPPED = {"<": ">", "<=": ">=", ">": "<", ">=": "<=", "==": "==", "!=": "!="}


def negate_comparison(op: str) -> str:
    return _NEGATED[op]


def compare(op: str, left: Interval, right: Interval) -> Interval:
    """Возможные значения сравнения как целый интервал внутри [0, 1]."""
    if left.is_empty or right.is_empty:
        return Interval.empty(ScalarType.INT)
    can_true = not refine_comparison(op, left, right)[0].is_empty
    can_false = not refine_comparison(_NEGATED[op], left, right)[0].is_empty
    return Interval.of(ScalarType.INT, 0 if can_false else 1, 1 if can_true else 0)


def _strict_below(bound: Bound, kind: ScalarType) -> Bound:
    if kind is ScalarType.INT:
        return bound - 1
    return _down(bound)  # type: ignore[arg-type]


def _strict_above(bound: Bound, kind: ScalarType) -> Bound:
    if kind is ScalarType.INT:
        return bound + 1
    return _up(bound)  # type: ignore[arg-type]


def refine_comparison(op: str, left: Interval, right: Interval) -> tuple[Interval, Interval]:
    """
    Сужает оба операнда при условии, что сравнение left op right истинно.

    Если условие невыполнимо, оба результата пусты.
    """
    kind = left.kind
    a, b = left.finite(), right.finite()
    if a.is_empty or b.is_empty:
        return Interval.empty(kind), Interval.empty(kind)
    if op in (">", ">="):
        new_b, new_a = refine_comparison(_SWAPPED[op], b, a)
        return new_a, new_b
    if op == "<":
        new_a = Interval.of(kind, a.lo, min(a.hi, _strict_below(b.hi, kind)))
        new_b = Interval.of(kind, max(b.lo, _strict_above(a.lo, kind)), b.hi)
    elif op == "<=":
        new_a = Interval.of(kind, a.lo, min(a.hi, b.hi))
        new_b = Interval.of(kind, max(b.lo, a.lo), b.hi)
    elif op == "==":
        new_a = a.meet(b)
        new_b = new_a
    elif op == "!=":
        new_a = _exclude_point(a, b)
        new_b = _exclude_point(b, a)
    else:
        raise ValueError(f"Неизвестное сравнение {op}")
    if new_a.is_empty or new_b.is_empty:
        return Interval.empty(kind), Interval.empty(kind)
    return new_a, new_b


def _exclude_point(a: Interval, point: Interval) -> Interval:
    if not point.is_singleton:
        return a
    value = point.lo
    if a.is_singleton and a.lo == value:
        return Interval.empty(a.kind)
    if a.lo == value:
        return Interval.of(a.kind, _strict_above(value, a.kind), a.hi)
    if a.hi == value:
        return Interval.of(a.kind, a.lo, _strict_below(value, a.kind))
    return a
