"""
Воркер параллельного анализа.

Воркер получает при рукопожатии исходный текст программы и параметры анализа,
компилирует программу сам и дальше отвечает на запросы: анализирует
перечисленные ветви точки диспетчеризации от базового окружения и возвращает
по патчу на ветвь.
"""

import logging
import socket
from cachetools import LRUCache
from pydantic import ValidationError
from src.domain.abstract_env import AbstractEnv
from src.domain.codec import deserialize_env, env_digest
from src.domain.delta import diff, encode_patch
from src.domain.exceptions import DomainError
from src.frontend.exceptions import FrontendError
from src.frontend.pipeline import compile_source, program_digest
from src.frontend.tokens import Location
from src.interpreter.exceptions import AnalysisError
from src.interpreter.interpreter import Interpreter
from src.interpreter.result import warnings_bytes
from src.interpreter.schemas.analysis_options import AnalysisOptions
from src.parallel.dispatch_points import DispatchPoint
from src.parallel.exceptions import ParallelError, ProtocolViolation, TransportError
from src.parallel.float_selftest import selftest_vector
from src.parallel.interfaces.transport_interface import Channel
from src.parallel.transports.socket_channel import SocketChannel
from src.parallel.wire import BranchRecord, ErrorMessage, Handshake, Message, Request, Response

logger = logging.getLogger(__name__)

BASE_NOT_CACHED = "base not cached"
UNKNOWN_POINT = "unknown dispatch point"
HANDSHAKE_REQUIRED = "handshake required"


class WorkerSession:
    """
    Состояние одного соединения воркера.

    Алгоритм работы:
    ----------------
    1. Рукопожатие: компилирует присланный исходный текст, сверяет дайджест
       программы с дайджестом мастера и отвечает своим дайджестом и вектором
       самопроверки вещественной арифметики.
    2. Запрос: берёт базовое окружение из сообщения (и кладёт его в кэш) или
       из кэша по дайджесту; при промахе отвечает "base not cached".
    3. Анализирует ветви по возрастанию номера, каждая от одной и той же базы,
       и отвечает патчами diff(base, результат ветви).

    Атрибуты класса:
    ----------------
    - `_cache`: LRUCache базовых окружений по дайджесту.
    - `_interpreter`: Интерпретатор программы из рукопожатия.
    - `_points`: Точки диспетчеризации программы по позиции.

    Логирование:
    ------------
    - Рукопожатие и отказы в запросах пишутся в лог с номером задачи.
    """

    def __init__(self, cache_size: int = 4):
        self._cache: LRUCache[bytes, AbstractEnv] = LRUCache(maxsize=cache_size)
        self._interpreter: Interpreter | None = None
        self._points: dict[Location, DispatchPoint] = {}

    @property
    def ready(self) -> bool:
        return self._interpreter is not None

    def handle(self, message: Message) -> Message:
        """
        Ответ на одно сообщение мастера.

        Raises:
            ProtocolViolation: Сообщение не может прийти от мастера.
        """
        if isinstance(message, Handshake):
            return self._handshake(message)
        if isinstance(message, Request):
            return self._request(message)
        raise ProtocolViolation(f"неожиданное сообщение {type(message).__name__}")

    def _handshake(self, message: Handshake) -> Message:
        if message.source is None:
            return ErrorMessage(0, "handshake without program source")
        try:
            program = compile_source(message.source)
            options = AnalysisOptions.model_validate_json(message.options_json or b"{}")
        except (FrontendError, ValidationError) as error:
            logger.error("Программа из рукопожатия не принята", extra={"error": str(error)})
            return ErrorMessage(0, f"program rejected: {error}")
        digest = program_digest(program)
        if digest != message.program_digest:
            logger.error("Дайджест программы не совпадает с мастером")
            return ErrorMessage(0, "program digest mismatch")
        self._interpreter = Interpreter(program, options)
        self._points = {point.loc: point for point in self._interpreter.dispatch_points}
        self._cache.clear()
        logger.info("Рукопожатие выполнено", extra={"dispatch_points": len(self._points)})
        return Handshake(digest, selftest_vector())

    def _base(self, message: Request) -> AbstractEnv | None:
        if message.env is None:
            return self._cache.get(message.base_digest)
        base = deserialize_env(message.env)
        if env_digest(base) != message.base_digest:
            raise ProtocolViolation("дайджест присланной базы не совпадает с заявленным")
        self._cache[message.base_digest] = base
        return base

    def _request(self, message: Request) -> Message:
        if self._interpreter is None:
            return ErrorMessage(message.task_id, HANDSHAKE_REQUIRED)
        point = self._points.get(message.loc)
        if point is None:
            return ErrorMessage(message.task_id, UNKNOWN_POINT)
        if not message.branches:
            return Response(message.task_id)
        if any(index >= len(point.branches) for index in message.branches):
            return ErrorMessage(message.task_id, "branch index out of range")
        try:
            base = self._base(message)
        except DomainError as error:
            return ErrorMessage(message.task_id, f"bad base environment: {error}")
        if base is None:
            logger.debug("База не в кэше", extra={"task": message.task_id})
            return ErrorMessage(message.task_id, BASE_NOT_CACHED)
        records = []
        for index in sorted(message.branches):
            try:
                result = self._interpreter.analyze_branch(point, index, base, message.mode)
            except AnalysisError as error:
                logger.error(
                    "Ошибка анализа ветви",
                    extra={"task": message.task_id, "branch": index, "error": str(error)},
                )
                return ErrorMessage(message.task_id, f"analysis error in branch {index}: {error}")
            records.append(BranchRecord(
                index=index,
                micros=result.micros,
                patch=encode_patch(diff(base, result.env)),
                warnings_json=warnings_bytes(result.warnings),
                invariants=tuple((loc, encode_patch(diff(base, env))) for loc, env in result.invariants),
            ))
        return Response(message.task_id, tuple(records))


def serve_channel(channel: Channel, cache_size: int = 4) -> None:
    """
    Цикл обслуживания одного соединения; завершается, когда мастер закрывает поток.

    Нарушение протокола закрывает соединение сообщением об ошибке.
    """
    session = WorkerSession(cache_size)
    try:
        while True:
            try:
                message = channel.receive()
            except TransportError:
                logger.info("Мастер закрыл соединение")
                return
            try:
                reply = session.handle(message)
            except ProtocolViolation as error:
                logger.error("Нарушение протокола", extra={"error": str(error)})
                channel.send(ErrorMessage(getattr(message, "task_id", 0), f"protocol violation: {error}"))
                return
            channel.send(reply)
    except ProtocolViolation as error:
        logger.error("Нарушение протокола", extra={"error": str(error)})
        try:
            channel.send(ErrorMessage(0, f"protocol violation: {error}"))
        except ParallelError:
            pass
    except TransportError:
        logger.warning("Соединение с мастером потеряно")
    finally:
        channel.close()


def parse_endpoint(endpoint: str) -> tuple[str, int]:
    """"host:port" -> (host, port)."""
    host, separator, port = endpoint.rpartition(":")
    if not separator or not host or not port.isdigit():
        raise ValueError(f"Неизвестный формат адреса: {endpoint}")
    return host, int(port)


def worker_serve(endpoint: str, cache_size: int = 4) -> None:
    """
    Запускает воркера на адресе "fd:N" (унаследованный сокет) или "host:port".

    На "host:port" воркер слушает порт и обслуживает соединения по одному,
    пока его не остановят.
    """
    if endpoint.startswith("fd:"):
        fd = int(endpoint.removeprefix("fd:"))
        logger.info("Воркер запущен на унаследованном сокете", extra={"fd": fd})
        serve_channel(SocketChannel(socket.socket(fileno=fd)), cache_size)
        return
    host, port = parse_endpoint(endpoint)
    with socket.create_server((host, port)) as server:
        logger.info("Воркер слушает порт", extra={"host": host, "port": port})
        while True:
            connection, address = server.accept()
            logger.info("Мастер подключился", extra={"peer": str(address)})
            serve_channel(SocketChannel(connection), cache_size)
