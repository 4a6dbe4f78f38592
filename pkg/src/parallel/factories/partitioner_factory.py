from src.parallel.interfaces.partitioner_interface import Partitioner
from src.parallel.partition import BlockPartitioner, GreedyPartitioner, ShufflePartitioner, Strategy


class PartitionerFactory:
    """Создаёт стратегию распределения ветвей по её имени."""

    @staticmethod
    def create(kind: Strategy | str, seed: int = 0) -> Partitioner:
        if kind == Strategy.BLOCK:
            return BlockPartitioner()
        if kind == Strategy.SHUFFLE:
            return ShufflePartitioner(seed)
        if kind == Strategy.GREEDY:
            return GreedyPartitioner()
        raise ValueError(f"Неизвестный тип стратегии: {kind}")
