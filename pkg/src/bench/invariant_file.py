"""
Двоичный файл таблицы инвариантов циклов.

Формат: сигнатура ASTI, число записей (u32), затем для каждой головы цикла
по возрастанию позиции строка (u32), столбец (u32) и каноническое
представление окружения с длиной (u32). Байты зависят только от значений.
"""

import struct
from pathlib import Path
from src.domain.abstract_env import AbstractEnv
from src.domain.codec import canonical_serialize, deserialize_env
from src.domain.exceptions import PatchFormatError
from src.frontend.tokens import Location

MAGIC = b"ASTI"
_ENTRY = struct.Struct("!III")
_COUNT = struct.Struct("!I")


def encode_invariants(invariants: dict[Location, AbstractEnv]) -> bytes:
    parts = [MAGIC, _COUNT.pack(len(invariants))]
    for loc in sorted(invariants):
        body = canonical_serialize(invariants[loc])
        parts.append(_ENTRY.pack(loc.line, loc.column, len(body)))
        parts.append(body)
    return b"".join(parts)


def decode_invariants(data: bytes) -> dict[Location, AbstractEnv]:
    if not data.startswith(MAGIC):
        raise PatchFormatError("нет сигнатуры файла инвариантов")
    offset = len(MAGIC)
    try:
        (count,) = _COUNT.unpack_from(data, offset)
        offset += _COUNT.size
        result: dict[Location, AbstractEnv] = {}
        for _ in range(count):
            line, column, length = _ENTRY.unpack_from(data, offset)
            offset += _ENTRY.size
            result[Location(line, column)] = deserialize_env(data[offset:offset + length])
            offset += length
    except struct.error as error:
        raise PatchFormatError("файл инвариантов обрезан") from error
    if offset != len(data):
        raise PatchFormatError("лишние байты в файле инвариантов")
    return result


def save_invariants(path: Path, invariants: dict[Location, AbstractEnv]) -> None:
    path.write_bytes(encode_invariants(invariants))


def load_invariants(path: Path) -> dict[Location, AbstractEnv]:
    return decode_invariants(path.read_bytes())
