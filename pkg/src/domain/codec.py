"""
Каноническое двоичное представление окружений.

Байты зависят только от значения: ячейки идут в лексикографическом порядке,
границы кодируются фиксированной ширины, вещественные — битами IEEE-754.
Форма дерева и история построения на результат не влияют.
"""

import hashlib
import math
import struct
from src.domain.abstract_env import AbstractEnv
from src.domain.exceptions import PatchFormatError
from src.domain.interval import Interval
from src.frontend.ast import ScalarType

FORMAT_VERSION = 0x01
TAG_BOTTOM = 0
TAG_VALUE = 1

_BOUND_FINITE = 0
_BOUND_NEG_INF = 1
_BOUND_POS_INF = 2

_KIND_CODES = {ScalarType.INT: 0, ScalarType.FLOAT: 1}
_KINDS = {code: kind for kind, code in _KIND_CODES.items()}

_HEADER = struct.Struct("!BB")
_COUNT = struct.Struct("!I")
_NAME_LEN = struct.Struct("!H")
_BOUND = struct.Struct("!B8s")


def _encode_bound(kind: ScalarType, bound: int | float) -> bytes:
    if isinstance(bound, float) and math.isinf(bound):
        return _BOUND.pack(_BOUND_NEG_INF if bound < 0 else _BOUND_POS_INF, bytes(8))
    if kind is ScalarType.INT:
        return _BOUND.pack(_BOUND_FINITE, struct.pack("!q", bound))
    return _BOUND.pack(_BOUND_FINITE, struct.pack("!d", bound))


def _decode_bound(kind: ScalarType, data: bytes, offset: int) -> int | float:
    tag, payload = _BOUND.unpack_from(data, offset)
    if tag == _BOUND_NEG_INF:
        return -math.inf
    if tag == _BOUND_POS_INF:
        return math.inf
    if tag != _BOUND_FINITE:
        raise PatchFormatError(f"неизвестный тег границы {tag}")
    if kind is ScalarType.INT:
        return struct.unpack("!q", payload)[0]  # type: ignore[no-any-return]
    return struct.unpack("!d", payload)[0]  # type: ignore[no-any-return]


def encode_cell(cell: str, value: Interval) -> bytes:
    """Имя ячейки, код типа и две границы."""
    name = cell.encode("utf-8")
    return b"".join((
        _NAME_LEN.pack(len(name)),
        name,
        bytes((_KIND_CODES[value.kind],)),
        _encode_bound(value.kind, value.lo),
        _encode_bound(value.kind, value.hi),
    ))


def decode_cell(data: bytes, offset: int) -> tuple[str, Interval, int]:
    """Обратное к encode_cell; возвращает также смещение за концом записи."""
    try:
        (name_len,) = _NAME_LEN.unpack_from(data, offset)
        offset += _NAME_LEN.size
        cell = data[offset:offset + name_len].decode("utf-8")
        offset += name_len
        kind = _KINDS[data[offset]]
        offset += 1
        lo = _decode_bound(kind, data, offset)
        offset += _BOUND.size
        hi = _decode_bound(kind, data, offset)
        offset += _BOUND.size
    except (struct.error, IndexError, KeyError, UnicodeDecodeError) as error:
        raise PatchFormatError(f"повреждённая запись ячейки на смещении {offset}") from error
    return cell, Interval(kind, lo, hi), offset


def canonical_serialize(env: AbstractEnv) -> bytes:
    """Каноническая сериализация; результат кэшируется в самом окружении."""

    def compute() -> bytes:
        if env.is_bottom:
            return _HEADER.pack(FORMAT_VERSION, TAG_BOTTOM)
        parts = [_HEADER.pack(FORMAT_VERSION, TAG_VALUE), _COUNT.pack(len(env))]
        parts.extend(encode_cell(cell, value) for cell, value in env.items())
        return b"".join(parts)

    return env.memo("canonical", compute)  # type: ignore[no-any-return]


def deserialize_env(data: bytes) -> AbstractEnv:
    try:
        version, tag = _HEADER.unpack_from(data, 0)
    except struct.error as error:
        raise PatchFormatError("слишком короткое представление окружения") from error
    if version != FORMAT_VERSION:
        raise PatchFormatError(f"неподдерживаемая версия формата {version}")
    if tag == TAG_BOTTOM:
        return AbstractEnv.BOTTOM
    try:
        (count,) = _COUNT.unpack_from(data, _HEADER.size)
    except struct.error as error:
        raise PatchFormatError("нет числа ячеек в представлении окружения") from error
    offset = _HEADER.size + _COUNT.size
    cells: dict[str, Interval] = {}
    for _ in range(count):
        cell, value, offset = decode_cell(data, offset)
        cells[cell] = value
    if offset != len(data):
        raise PatchFormatError("лишние байты после окружения")
    return AbstractEnv.from_items(cells)


def env_digest(env: AbstractEnv) -> bytes:
    """SHA-256 канонических байт (32 байта)."""
    return env.memo("digest", lambda: hashlib.sha256(canonical_serialize(env)).digest())  # type: ignore[no-any-return]
