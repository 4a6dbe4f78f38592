"""
Двоичный протокол мастер-воркер.

Кадр: длина (4 байта, big-endian, включает байт типа), байт типа, полезная нагрузка.
Типы: 0x10 запрос, 0x20 ответ, 0x30 ошибка, 0x40 рукопожатие.
"""

import struct
import attrs
from src.frontend.tokens import Location
from src.interpreter.mode import Mode
from src.parallel.exceptions import ProtocolViolation

PROTOCOL_VERSION = 0x01

TYPE_REQUEST = 0x10
TYPE_RESPONSE = 0x20
TYPE_ERROR = 0x30
TYPE_HANDSHAKE = 0x40

FRAME_HEADER = struct.Struct("!IB")
_LENGTH = struct.Struct("!I")
_U16 = struct.Struct("!H")
_TASK = struct.Struct("!Q")
_LOC = struct.Struct("!II")
_REQUEST_HEAD = struct.Struct("!QIIBH")
_RECORD_HEAD = struct.Struct("!HQ")

_MODES = {Mode.ITERATE: 0, Mode.REPORT: 1}
_MODE_CODES = {code: mode for mode, code in _MODES.items()}

MAX_FRAME = 1 << 30


@attrs.frozen
class Handshake:
    """
    Рукопожатие. Мастер присылает программу и параметры; воркер отвечает тем же
    сообщением со своим дайджестом программы и вектором самопроверки (source=None).
    """

    program_digest: bytes
    selftest: bytes
    options_json: bytes = b""
    source: str | None = None
    version: int = PROTOCOL_VERSION


@attrs.frozen
class Request:
    """
    Задача воркеру: ветви точки диспетчеризации от базового окружения.

    env=None означает, что база должна быть у воркера в кэше.
    """

    task_id: int
    loc: Location
    mode: Mode
    branches: tuple[int, ...]
    base_digest: bytes
    env: bytes | None = None


@attrs.frozen
class BranchRecord:
    index: int
    micros: int
    patch: bytes
    warnings_json: bytes = b"[]"
    invariants: tuple[tuple[Location, bytes], ...] = ()


@attrs.frozen
class Response:
    task_id: int
    records: tuple[BranchRecord, ...] = ()


@attrs.frozen
class ErrorMessage:
    task_id: int
    diagnostic: str


Message = Handshake | Request | Response | ErrorMessage


class _Reader:
    def __init__(self, data: bytes):
        self._data = data
        self._offset = 0

    def take(self, layout: struct.Struct) -> tuple:
        try:
            values = layout.unpack_from(self._data, self._offset)
        except struct.error as error:
            raise ProtocolViolation("сообщение обрезано") from error
        self._offset += layout.size
        return values

    def raw(self, length: int) -> bytes:
        if self._offset + length > len(self._data):
            raise ProtocolViolation("сообщение обрезано")
        chunk = self._data[self._offset:self._offset + length]
        self._offset += length
        return chunk

    def blob(self) -> bytes:
        (length,) = self.take(_LENGTH)
        return self.raw(length)

    def rest(self) -> bytes:
        chunk = self._data[self._offset:]
        self._offset = len(self._data)
        return chunk

    def finish(self) -> None:
        if self._offset != len(self._data):
            raise ProtocolViolation("лишние байты в сообщении")


def _blob(data: bytes) -> bytes:
    return _LENGTH.pack(len(data)) + data


def _encode_payload(message: Message) -> tuple[int, bytes]:
    match message:
        case Handshake():
            source = message.source.encode("utf-8") if message.source is not None else b""
            return TYPE_HANDSHAKE, b"".join((
                bytes((message.version,)),
                message.program_digest,
                message.selftest,
                _blob(message.options_json),
                _blob(source),
            ))
        case Request():
            head = _REQUEST_HEAD.pack(
                message.task_id, message.loc.line, message.loc.column, _MODES[message.mode], len(message.branches)
            )
            indices = b"".join(_U16.pack(index) for index in message.branches)
            flag = bytes((message.env is not None,))
            return TYPE_REQUEST, head + indices + message.base_digest + flag + (message.env or b"")
        case Response():
            parts = [_TASK.pack(message.task_id), _U16.pack(len(message.records))]
            for record in message.records:
                parts.append(_RECORD_HEAD.pack(record.index, record.micros))
                parts.append(_blob(record.patch))
                parts.append(_blob(record.warnings_json))
                parts.append(_U16.pack(len(record.invariants)))
                for loc, patch in record.invariants:
                    parts.append(_LOC.pack(loc.line, loc.column) + _blob(patch))
            return TYPE_RESPONSE, b"".join(parts)
        case ErrorMessage():
            return TYPE_ERROR, _TASK.pack(message.task_id) + message.diagnostic.encode("utf-8")
    raise TypeError(f"Неизвестное сообщение {message!r}")


def encode_message(message: Message) -> bytes:
    """Кадр целиком: заголовок длины и типа плюс полезная нагрузка."""
    kind, payload = _encode_payload(message)
    return FRAME_HEADER.pack(len(payload) + 1, kind) + payload


def _decode_handshake(reader: _Reader) -> Handshake:
    (version,) = reader.take(struct.Struct("!B"))
    if version != PROTOCOL_VERSION:
        raise ProtocolViolation(f"неподдерживаемая версия протокола {version}")
    digest = reader.raw(32)
    selftest = reader.raw(64)
    options_json = reader.blob()
    source = reader.blob()
    return Handshake(digest, selftest, options_json, source.decode("utf-8") if source else None, version)


def _decode_request(reader: _Reader) -> Request:
    task_id, line, column, mode, count = reader.take(_REQUEST_HEAD)
    if mode not in _MODE_CODES:
        raise ProtocolViolation(f"неизвестный режим {mode}")
    branches = tuple(reader.take(_U16)[0] for _ in range(count))
    digest = reader.raw(32)
    (flag,) = reader.take(struct.Struct("!B"))
    env = reader.rest() if flag else None
    return Request(task_id, Location(line, column), _MODE_CODES[mode], branches, digest, env)


def _decode_response(reader: _Reader) -> Response:
    (task_id,) = reader.take(_TASK)
    (count,) = reader.take(_U16)
    records = []
    for _ in range(count):
        index, micros = reader.take(_RECORD_HEAD)
        patch = reader.blob()
        warnings_json = reader.blob()
        (invariant_count,) = reader.take(_U16)
        invariants = []
        for _ in range(invariant_count):
            line, column = reader.take(_LOC)
            invariants.append((Location(line, column), reader.blob()))
        records.append(BranchRecord(index, micros, patch, warnings_json, tuple(invariants)))
    return Response(task_id, tuple(records))


def decode_message(kind: int, payload: bytes) -> Message:
    """
    Разбирает полезную нагрузку кадра данного типа.

    Raises:
        ProtocolViolation: Неизвестный тип, обрезанное или лишнее содержимое.
    """
    reader = _Reader(payload)
    message: Message
    if kind == TYPE_HANDSHAKE:
        message = _decode_handshake(reader)
    elif kind == TYPE_REQUEST:
        message = _decode_request(reader)
    elif kind == TYPE_RESPONSE:
        message = _decode_response(reader)
    elif kind == TYPE_ERROR:
        (task_id,) = reader.take(_TASK)
        message = ErrorMessage(task_id, reader.rest().decode("utf-8", errors="replace"))
    else:
        raise ProtocolViolation(f"неизвестный тип сообщения 0x{kind:02x}")
    reader.finish()
    return message


def split_frame(frame: bytes) -> tuple[int, bytes]:
    """Тип и полезная нагрузка кадра, полученного целиком."""
    if len(frame) < FRAME_HEADER.size:
        raise ProtocolViolation("кадр короче заголовка")
    length, kind = FRAME_HEADER.unpack_from(frame, 0)
    if length != len(frame) - _LENGTH.size:
        raise ProtocolViolation("длина кадра не совпадает с заголовком")
    return kind, frame[FRAME_HEADER.size:]
