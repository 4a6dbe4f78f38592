"""
Самопроверка вещественной арифметики.

Мастер и воркеры вычисляют один и тот же набор выражений в 64-битной точности
(включая шаги наружного округления интервалов) и сравнивают битовые образы
с эталоном. Расхождение означает, что распределённый анализ может дать
другие байты, и запуск отклоняется.
"""

import math
import struct
from src.domain.interval import Interval, arith
from src.frontend.ast import ScalarType
from src.parallel.exceptions import FloatSelfTestMismatch

_VECTOR = struct.Struct("!8d")

REFERENCE_BITS = (
    0x3FD3333333333334,
    0x3FD5555555555555,
    0x3FE5555555555555,
    0x3FF6A09E667F3BCD,
    0x3FD3333333333333,
    0x3FD3333333333335,
    0x7FF0000000000000,
    0x3FD3333333333334,
)


def _bits(value: float) -> int:
    return struct.unpack("!Q", struct.pack("!d", value))[0]


def _battery() -> tuple[float, ...]:
    tenth = Interval.const(ScalarType.FLOAT, 0.1)
    fifth = Interval.const(ScalarType.FLOAT, 0.2)
    rounded = arith("+", tenth, fifth).value
    return (
        0.1 + 0.2,
        1.0 / 3.0,
        2.0 / 3.0,
        math.sqrt(2.0),
        float(rounded.lo),
        float(rounded.hi),
        1e308 * 10.0,
        0.1 * 3.0,
    )


def selftest_vector() -> bytes:
    """64 байта: восемь double в порядке battery, big-endian."""
    return _VECTOR.pack(*_battery())


def reference_vector() -> bytes:
    return b"".join(struct.pack("!Q", bits) for bits in REFERENCE_BITS)


def check_vector(vector: bytes, origin: str) -> None:
    """
    Raises:
        FloatSelfTestMismatch: vector отличается от эталона.
    """
    if vector == reference_vector():
        return
    values = _VECTOR.unpack(vector) if len(vector) == _VECTOR.size else ()
    mismatched = [
        index for index, (value, bits) in enumerate(zip(values, REFERENCE_BITS)) if _bits(value) != bits
    ]
    raise FloatSelfTestMismatch(f"{origin}: самопроверка вещественной арифметики не прошла, позиции {mismatched}")
