from typing import Protocol
from src.parallel.partition import PartitionPlan, TimingRecord


class Partitioner(Protocol):
    """
    Протокол для стратегий распределения ветвей по воркерам.

    Методы:
        plan(n, workers, timings) -> PartitionPlan:
            Назначает каждой ветви 0..n-1 воркер с номером меньше workers.
            Результат зависит только от аргументов и параметров стратегии.

    Параметры:
        n (int): Число ветвей, n >= 1.
        workers (int): Число воркеров, workers >= 1.
        timings (TimingRecord | None): Длительности ветвей с прошлой итерации.
    """

    def plan(self, n: int, workers: int, timings: TimingRecord | None = None) -> PartitionPlan:
        pass
