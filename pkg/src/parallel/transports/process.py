"""
Воркеры в отдельных процессах.

Каждый воркер — интерпретатор Python с `-m src.main`, которому через
ASTRAL_WORKER=fd:N передаётся один конец socketpair.
"""

import logging
import os
import socket
import subprocess
import sys
from pathlib import Path
from src.parallel.exceptions import TransportError
from src.parallel.interfaces.transport_interface import WorkerHandle
from src.parallel.transports.socket_channel import SocketChannel
from src.parallel.wire import Message

logger = logging.getLogger(__name__)

_REPO_ROOT = Path(__file__).resolve().parents[3]


class ProcessHandle:
    def __init__(self, worker_id: int, cache_size: int):
        self.worker_id = worker_id
        master_end, worker_end = socket.socketpair()
        env = {
            **os.environ,
            "ASTRAL_WORKER": f"fd:{worker_end.fileno()}",
            "ASTRAL_WORKER_CACHE_SIZE": str(cache_size),
        }
        try:
            self._process = subprocess.Popen(
                [sys.executable, "-m", "src.main"],
                cwd=_REPO_ROOT,
                env=env,
                pass_fds=(worker_end.fileno(),),
                stdin=subprocess.DEVNULL,
            )
        except OSError as error:
            master_end.close()
            raise TransportError(f"не удалось запустить воркер {worker_id}: {error}") from error
        finally:
            worker_end.close()
        self._channel = SocketChannel(master_end)
        logger.info("Процесс воркера запущен", extra={"worker": worker_id, "pid": self._process.pid})

    @property
    def pid(self) -> int:
        return self._process.pid

    def send(self, message: Message) -> None:
        self._channel.send(message)

    def receive(self, timeout: float | None = None) -> Message:
        return self._channel.receive(timeout)

    def close(self) -> None:
        self._channel.close()
        try:
            self._process.wait(timeout=10)
        except subprocess.TimeoutExpired:
            self._process.kill()
            self._process.wait()

    def kill(self) -> None:
        self._process.kill()
        self._process.wait()
        self._channel.close()
        logger.warning("Процесс воркера убит", extra={"worker": self.worker_id, "pid": self._process.pid})


class ProcessTransport:
    name = "proc"

    def __init__(self, cache_size: int = 4):
        self._cache_size = cache_size

    def open(self, count: int) -> list[WorkerHandle]:
        handles: list[WorkerHandle] = []
        try:
            for worker_id in range(count):
                handles.append(ProcessHandle(worker_id, self._cache_size))
        except TransportError:
            for handle in handles:
                handle.kill()
            raise
        return handles
