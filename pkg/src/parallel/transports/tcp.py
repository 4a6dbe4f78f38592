import logging
import socket
from src.parallel.exceptions import TransportError
from src.parallel.interfaces.transport_interface import WorkerHandle
from src.parallel.transports.socket_channel import SocketChannel
from src.parallel.wire import Message
from src.parallel.worker import parse_endpoint

logger = logging.getLogger(__name__)


class TcpHandle:
    """Соединение с воркером, запущенным заранее с ASTRAL_WORKER=host:port."""

    def __init__(self, worker_id: int, endpoint: str, connect_timeout: float = 10.0):
        self.worker_id = worker_id
        self.endpoint = endpoint
        try:
            sock = socket.create_connection(parse_endpoint(endpoint), timeout=connect_timeout)
        except OSError as error:
            raise TransportError(f"нет соединения с {endpoint}: {error}") from error
        self._channel = SocketChannel(sock)
        logger.info("Подключён воркер", extra={"worker": worker_id, "endpoint": endpoint})

    def send(self, message: Message) -> None:
        self._channel.send(message)

    def receive(self, timeout: float | None = None) -> Message:
        return self._channel.receive(timeout)

    def close(self) -> None:
        self._channel.close()

    def kill(self) -> None:
        self._channel.close()


class TcpTransport:
    """
    Воркеры по явно заданным адресам; если воркеров нужно больше, чем адресов,
    адреса используются по кругу (каждое соединение обслуживается отдельно).
    """

    name = "tcp"

    def __init__(self, endpoints: list[str]):
        if not endpoints:
            raise ValueError("Для tcp не заданы адреса воркеров")
        self._endpoints = endpoints

    def open(self, count: int) -> list[WorkerHandle]:
        return [TcpHandle(worker_id, self._endpoints[worker_id % len(self._endpoints)]) for worker_id in range(count)]
