import logging
import struct
import attrs
from src.domain import env_tree
from src.domain.abstract_env import AbstractEnv
from src.domain.codec import FORMAT_VERSION, decode_cell, encode_cell, env_digest
from src.domain.env_tree import VisitCounter
from src.domain.exceptions import DigestMismatch, PatchFormatError
from src.domain.interval import Interval

logger = logging.getLogger(__name__)

_SET = 0
_REMOVE = 1
_FLAG_FROM_BOTTOM = 0x01
_FLAG_TO_BOTTOM = 0x02

_PATCH_HEADER = struct.Struct("!BB32sI")
PATCH_HEADER_SIZE = _PATCH_HEADER.size
_NAME_LEN = struct.Struct("!H")


@attrs.frozen
class DeltaPatch:
    """
    Разница между базовым и производным окружением.

    Attributes:
        base_digest (bytes): SHA-256 канонических байт базы.
        entries (tuple): Пары (ячейка, Interval) для установки и (ячейка, None) для удаления,
            строго по возрастанию имени.
        from_bottom (bool): База — ⊥, entries перечисляют все ячейки результата.
        to_bottom (bool): Результат — ⊥.
    """

    base_digest: bytes
    entries: tuple[tuple[str, Interval | None], ...] = ()
    from_bottom: bool = False
    to_bottom: bool = False

    @property
    def is_empty(self) -> bool:
        return not self.entries and not self.to_bottom and not self.from_bottom


def diff(base: AbstractEnv, derived: AbstractEnv, counter: VisitCounter | None = None) -> DeltaPatch:
    """
    Строит патч base -> derived физическим сравнением деревьев.

    Поддеревья, общие по идентичности, пропускаются без обхода.
    """
    digest = env_digest(base)
    if derived.is_bottom:
        return DeltaPatch(digest, to_bottom=not base.is_bottom)
    if base.is_bottom:
        return DeltaPatch(digest, tuple(derived.items()), from_bottom=True)
    entries: list[tuple[str, Interval | None]] = []
    env_tree.diff_entries(base.root, derived.root, entries, counter)
    return DeltaPatch(digest, tuple(entries))


def apply_patch(base: AbstractEnv, patch: DeltaPatch) -> AbstractEnv:
    """
    Применяет патч к базе; нетронутые поддеревья базы входят в результат без копирования.

    Raises:
        DigestMismatch: Патч построен для другой базы.
    """
    if env_digest(base) != patch.base_digest:
        raise DigestMismatch("дайджест базы не совпадает с дайджестом патча")
    if patch.to_bottom:
        return AbstractEnv.BOTTOM
    if patch.from_bottom:
        return AbstractEnv.from_items({cell: value for cell, value in patch.entries if value is not None})
    if not patch.entries:
        return base
    root = base.root
    for cell, value in patch.entries:
        root = env_tree.delete(root, cell) if value is None else env_tree.insert(root, cell, value)
    return AbstractEnv(root)


def encode_patch(patch: DeltaPatch) -> bytes:
    flags = (_FLAG_FROM_BOTTOM if patch.from_bottom else 0) | (_FLAG_TO_BOTTOM if patch.to_bottom else 0)
    parts = [_PATCH_HEADER.pack(FORMAT_VERSION, flags, patch.base_digest, len(patch.entries))]
    for cell, value in patch.entries:
        if value is None:
            name = cell.encode("utf-8")
            parts.append(bytes((_REMOVE,)) + _NAME_LEN.pack(len(name)) + name)
        else:
            parts.append(bytes((_SET,)) + encode_cell(cell, value))
    return b"".join(parts)


def decode_patch(data: bytes) -> DeltaPatch:
    """
    Разбирает патч из байт.

    Raises:
        PatchFormatError: Неверная версия, повреждённые записи или нарушен порядок ячеек.
    """
    try:
        version, flags, digest, count = _PATCH_HEADER.unpack_from(data, 0)
    except struct.error as error:
        raise PatchFormatError("слишком короткий патч") from error
    if version != FORMAT_VERSION:
        raise PatchFormatError(f"неподдерживаемая версия патча {version}")
    offset = _PATCH_HEADER.size
    entries: list[tuple[str, Interval | None]] = []
    for _ in range(count):
        if offset >= len(data):
            raise PatchFormatError("патч обрезан")
        tag = data[offset]
        offset += 1
        if tag == _SET:
            cell, value, offset = decode_cell(data, offset)
            entries.append((cell, value))
        elif tag == _REMOVE:
            (name_len,) = _NAME_LEN.unpack_from(data, offset)
            offset += _NAME_LEN.size
            entries.append((data[offset:offset + name_len].decode("utf-8"), None))
            offset += name_len
        else:
            raise PatchFormatError(f"неизвестное действие патча {tag}")
        if len(entries) > 1 and entries[-2][0] >= entries[-1][0]:
            raise PatchFormatError("ячейки патча не упорядочены строго по возрастанию")
    if offset != len(data):
        raise PatchFormatError("лишние байты после патча")
    return DeltaPatch(digest, tuple(entries), bool(flags & _FLAG_FROM_BOTTOM), bool(flags & _FLAG_TO_BOTTOM))
