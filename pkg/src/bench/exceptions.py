class BenchError(Exception):
    """Базовое исключение CLI и бенчмарков."""


class ReportWriteError(BenchError):
    """
    Отчёт не удалось записать.

    Attributes:
        path (str): Путь, по которому писался отчёт.
    """

    def __init__(self, path: str, reason: str):
        self.path = path
        super().__init__(f"{path}: {reason}")
