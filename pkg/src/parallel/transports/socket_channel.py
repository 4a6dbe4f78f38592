import logging
import socket
from src.parallel.exceptions import ProtocolViolation, TransportError
from src.parallel.wire import FRAME_HEADER, MAX_FRAME, Message, decode_message, encode_message

logger = logging.getLogger(__name__)


class SocketChannel:
    """
    Кадрированный обмен сообщениями через потоковый сокет.

    Конец потока и ошибки сокета поднимаются как TransportError, нарушение
    формата кадра как ProtocolViolation.
    """

    def __init__(self, sock: socket.socket):
        self._sock = sock

    def send(self, message: Message) -> None:
        try:
            self._sock.sendall(encode_message(message))
        except OSError as error:
            raise TransportError(f"отправка не удалась: {error}") from error

    def _exact(self, size: int) -> bytes:
        chunks = []
        remaining = size
        while remaining:
            try:
                chunk = self._sock.recv(min(remaining, 1 << 20))
            except TimeoutError as error:
                raise TransportError("таймаут ожидания сообщения") from error
            except OSError as error:
                raise TransportError(f"чтение не удалось: {error}") from error
            if not chunk:
                raise TransportError("соединение закрыто")
            chunks.append(chunk)
            remaining -= len(chunk)
        return b"".join(chunks)

    def receive(self, timeout: float | None = None) -> Message:
        try:
            self._sock.settimeout(timeout)
        except OSError as error:
            raise TransportError(f"сокет недоступен: {error}") from error
        length, kind = FRAME_HEADER.unpack(self._exact(FRAME_HEADER.size))
        if not 1 <= length <= MAX_FRAME:
            raise ProtocolViolation(f"недопустимая длина кадра {length}")
        return decode_message(kind, self._exact(length - 1))

    def close(self) -> None:
        try:
            self._sock.shutdown(socket.SHUT_RDWR)
        except OSError:
            pass
        self._sock.close()
