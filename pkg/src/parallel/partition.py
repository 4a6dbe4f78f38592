"""
Распределение ветвей точки диспетчеризации по воркерам.

Точное разбиение NP-трудно, поэтому используются простые стратегии: блоки
подряд идущих ветвей, блоки после перемешивания и жадное LPT по измеренным
длительностям.
"""

import random
from enum import StrEnum
import attrs
import numpy as np


class Strategy(StrEnum):
    BLOCK = "block"
    SHUFFLE = "shuffle"
    GREEDY = "greedy"


@attrs.frozen
class TimingRecord:
    """
    Длительности анализа ветвей в микросекундах, по номеру ветви.
    """

    micros: tuple[int, ...]

    def __attrs_post_init__(self) -> None:
        if any(value < 0 for value in self.micros):
            raise ValueError("длительность ветви не может быть отрицательной")

    def loads(self, plan: "PartitionPlan") -> list[int]:
        """Нагрузка l_k каждого воркера: сумма длительностей его ветвей."""
        totals = [0] * plan.workers
        for index, worker in enumerate(plan.assignment):
            totals[worker] += self.micros[index]
        return totals


@attrs.frozen
class PartitionPlan:
    """
    Назначение ветвей воркерам.

    Attributes:
        workers (int): Число воркеров p.
        assignment (tuple[int, ...]): Воркер для каждой ветви 0..n-1.
        strategy (str): Имя стратегии, с seed для shuffle ("shuffle(3)").
    """

    workers: int
    assignment: tuple[int, ...]
    strategy: str

    def __attrs_post_init__(self) -> None:
        if self.workers < 1:
            raise ValueError("число воркеров должно быть не меньше 1")
        if any(not 0 <= worker < self.workers for worker in self.assignment):
            raise ValueError("номер воркера вне диапазона")

    def groups(self) -> list[list[int]]:
        """Ветви каждого воркера по возрастанию номера."""
        result: list[list[int]] = [[] for _ in range(self.workers)]
        for index, worker in enumerate(self.assignment):
            result[worker].append(index)
        return result


def _chunks(order: list[int], workers: int) -> list[int]:
    """Режет order на workers почти равных подряд идущих кусков."""
    assignment = [0] * len(order)
    base, extra = divmod(len(order), workers)
    position = 0
    for worker in range(workers):
        size = base + (1 if worker < extra else 0)
        for index in order[position:position + size]:
            assignment[index] = worker
        position += size
    return assignment


def _check(n: int, workers: int) -> None:
    if n < 1 or workers < 1:
        raise ValueError(f"нужно n >= 1 и p >= 1, получено n={n}, p={workers}")


class BlockPartitioner:
    def plan(self, n: int, workers: int, timings: TimingRecord | None = None) -> PartitionPlan:
        _check(n, workers)
        return PartitionPlan(workers, tuple(_chunks(list(range(n)), workers)), Strategy.BLOCK.value)


class ShufflePartitioner:
    """Детерминированная перестановка ветвей по seed, затем блоки."""

    def __init__(self, seed: int = 0):
        self.seed = seed

    def plan(self, n: int, workers: int, timings: TimingRecord | None = None) -> PartitionPlan:
        _check(n, workers)
        order = list(range(n))
        random.Random(self.seed).shuffle(order)
        return PartitionPlan(workers, tuple(_chunks(order, workers)), f"{Strategy.SHUFFLE.value}({self.seed})")


class GreedyPartitioner:
    """
    LPT: ветви по убыванию длительности, каждая достаётся наименее загруженному воркеру.

    Без измерений (первая итерация) ведёт себя как block. Равные длительности
    упорядочиваются по номеру ветви, равные нагрузки по номеру воркера.
    """

    def plan(self, n: int, workers: int, timings: TimingRecord | None = None) -> PartitionPlan:
        _check(n, workers)
        if timings is None or len(timings.micros) != n:
            plan = BlockPartitioner().plan(n, workers)
            return PartitionPlan(workers, plan.assignment, Strategy.GREEDY.value)
        order = sorted(range(n), key=lambda index: (-timings.micros[index], index))
        loads = np.zeros(workers, dtype=np.int64)
        assignment = [0] * n
        for index in order:
            worker = int(np.argmin(loads))
            assignment[index] = worker
            loads[worker] += timings.micros[index]
        return PartitionPlan(workers, tuple(assignment), Strategy.GREEDY.value)


def partition(
    n: int, workers: int, strategy: Strategy | str = Strategy.BLOCK, timings: TimingRecord | None = None, seed: int = 0
) -> PartitionPlan:
    """Разбиение n ветвей на workers воркеров выбранной стратегией."""
    from src.parallel.factories.partitioner_factory import PartitionerFactory

    return PartitionerFactory.create(strategy, seed).plan(n, workers, timings)
