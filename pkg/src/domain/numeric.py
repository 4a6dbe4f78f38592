"""Машинная арифметика мини-C: 64-битные целые и двоичные64 с насыщением."""

import math
import sys

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1
DBL_MAX = sys.float_info.max


def clamp_int(value: int) -> tuple[int, bool]:
    """Насыщает значение в диапазон int64; второй элемент — признак переполнения."""
    if value > INT64_MAX:
        return INT64_MAX, True
    if value < INT64_MIN:
        return INT64_MIN, True
    return value, False


def clamp_float(value: float) -> tuple[float, bool]:
    """Заменяет бесконечный результат на ±DBL_MAX; второй элемент — признак переполнения."""
    if math.isinf(value):
        return math.copysign(DBL_MAX, value), True
    return value, False


def c_div(a: int, b: int) -> int:
    """Целочисленное деление с округлением к нулю, как в C99."""
    quotient = abs(a) // abs(b)
    return quotient if (a >= 0) == (b >= 0) else -quotient


def c_mod(a: int, b: int) -> int:
    """Остаток со знаком делимого, согласованный с c_div."""
    return a - b * c_div(a, b)


def float_to_int(value: float) -> tuple[int, bool]:
    """Приведение (int) с отбрасыванием дробной части и насыщением."""
    return clamp_int(math.trunc(value))


def int_to_float(value: int) -> float:
    return float(value)


def float_down(value: int) -> float:
    """Наибольшее double, не превосходящее целое value."""
    result = float(value)
    if result > value:
        result = math.nextafter(result, -math.inf)
    return result


def float_up(value: int) -> float:
    """Наименьшее double, не меньшее целого value."""
    result = float(value)
    if result < value:
        result = math.nextafter(result, math.inf)
    return result
