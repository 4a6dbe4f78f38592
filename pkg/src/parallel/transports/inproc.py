"""
Воркеры-потоки в том же процессе.

Сообщения проходят через тот же кодек, что и в сокетных транспортах: в очередь
кладутся байты кадра, а не объекты.
"""

import logging
import queue
import threading
from src.parallel.exceptions import TransportError
from src.parallel.interfaces.transport_interface import WorkerHandle
from src.parallel.wire import Message, decode_message, encode_message, split_frame
from src.parallel.worker import serve_channel

logger = logging.getLogger(__name__)

_EOF = b""


class QueueChannel:
    """Конец пары очередей; пустые байты означают конец потока."""

    def __init__(self, inbox: "queue.Queue[bytes]", outbox: "queue.Queue[bytes]"):
        self._inbox = inbox
        self._outbox = outbox
        self._closed = False

    def send(self, message: Message) -> None:
        if self._closed:
            raise TransportError("канал закрыт")
        self._outbox.put(encode_message(message))

    def receive(self, timeout: float | None = None) -> Message:
        if self._closed:
            raise TransportError("канал закрыт")
        try:
            frame = self._inbox.get(timeout=timeout)
        except queue.Empty as error:
            raise TransportError("таймаут ожидания сообщения") from error
        if frame == _EOF:
            self._closed = True
            raise TransportError("соединение закрыто")
        return decode_message(*split_frame(frame))

    def close(self) -> None:
        if not self._closed:
            self._closed = True
            self._outbox.put(_EOF)


class InprocHandle:
    def __init__(self, worker_id: int, cache_size: int):
        self.worker_id = worker_id
        to_worker: queue.Queue[bytes] = queue.Queue()
        to_master: queue.Queue[bytes] = queue.Queue()
        self._channel = QueueChannel(to_master, to_worker)
        self._thread = threading.Thread(
            target=serve_channel,
            args=(QueueChannel(to_worker, to_master), cache_size),
            name=f"astral-worker-{worker_id}",
            daemon=True,
        )
        self._thread.start()

    def send(self, message: Message) -> None:
        self._channel.send(message)

    def receive(self, timeout: float | None = None) -> Message:
        return self._channel.receive(timeout)

    def close(self) -> None:
        self._channel.close()
        self._thread.join(timeout=5)

    def kill(self) -> None:
        """Поток нельзя прервать; канал закрывается, и воркер считается потерянным."""
        self._channel.close()
        logger.warning("Воркер остановлен", extra={"worker": self.worker_id})


class InprocTransport:
    name = "inproc"

    def __init__(self, cache_size: int = 4):
        self._cache_size = cache_size

    def open(self, count: int) -> list[WorkerHandle]:
        return [InprocHandle(worker_id, self._cache_size) for worker_id in range(count)]
