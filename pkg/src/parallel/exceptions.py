class ParallelError(Exception):
    """Базовое исключение параллельного анализа."""


class WorkerFailure(ParallelError):
    """
    Воркер не смог выполнить задачу.

    Attributes:
        worker_id (int): Номер воркера.
        diagnostic (str): Описание отказа.
    """

    def __init__(self, worker_id: int, diagnostic: str):
        self.worker_id = worker_id
        self.diagnostic = diagnostic
        super().__init__(f"воркер {worker_id}: {diagnostic}")


class TransportError(ParallelError):
    pass


class ProtocolViolation(ParallelError):
    pass


class FloatSelfTestMismatch(ParallelError):
    pass


class DeterminismViolation(ParallelError):
    pass
