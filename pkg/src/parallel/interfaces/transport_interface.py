from typing import Protocol
from src.parallel.wire import Message


class WorkerHandle(Protocol):
    """
    Протокол для соединения мастера с одним воркером.

    Методы:
        send(message) -> None:
            Отправляет сообщение воркеру.
        receive(timeout) -> Message:
            Ждёт следующее сообщение не дольше timeout секунд.
        close() -> None:
            Штатно завершает соединение; воркер видит конец потока и выходит.
        kill() -> None:
            Аварийно останавливает воркера.

    Атрибуты:
        worker_id (int): Номер воркера, от 0.

    Ошибки соединения и таймауты поднимаются как TransportError.
    """

    worker_id: int

    def send(self, message: Message) -> None:
        pass

    def receive(self, timeout: float | None = None) -> Message:
        pass

    def close(self) -> None:
        pass

    def kill(self) -> None:
        pass


class Transport(Protocol):
    """
    Протокол для способа запуска воркеров.

    Методы:
        open(count) -> list[WorkerHandle]:
            Запускает (или подключает) count воркеров с номерами 0..count-1.
    """

    name: str

    def open(self, count: int) -> list[WorkerHandle]:
        pass


class Channel(Protocol):
    """Двусторонний поток сообщений со стороны воркера."""

    def send(self, message: Message) -> None:
        pass

    def receive(self, timeout: float | None = None) -> Message:
        pass

    def close(self) -> None:
        pass
