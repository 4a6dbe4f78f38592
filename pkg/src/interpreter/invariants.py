"""
Хранение инвариантов во время анализа.

Политика определяет, какие окружения удерживаются до конца анализа. Только
инварианты голов циклов нужны для корректности; остальные политики нужны для
измерения памяти и для сверки с оракулом в каждой точке.
"""

from enum import StrEnum
from src.domain import env_tree
from src.domain.abstract_env import AbstractEnv
from src.frontend.ast import ProgramPoint
from src.frontend.tokens import Location


class RetentionPolicy(StrEnum):
    LOOP_HEADS = "loop-heads"
    FUNCTIONS = "functions"
    BLOCKS = "blocks"
    STATEMENTS = "statements"


_ORDER = list(RetentionPolicy)

_POINT_POLICY = {
    "function-entry": RetentionPolicy.FUNCTIONS,
    "function-exit": RetentionPolicy.FUNCTIONS,
    "block-entry": RetentionPolicy.BLOCKS,
    "block-exit": RetentionPolicy.BLOCKS,
    "stmt": RetentionPolicy.STATEMENTS,
}


class InvariantStore:
    """
    Инварианты голов циклов и, в зависимости от политики, окружения в других точках.

    Атрибуты:
        loop_invariants (dict[Location, AbstractEnv]): Таблица инвариантов циклов;
            содержит ровно головы циклов программы.
        points (dict[ProgramPoint, AbstractEnv]): Окружения в прочих удерживаемых точках.
        peak (int): Наибольшее число одновременно удерживаемых окружений
            (рабочий набор и точки, удержанные политикой).

    Повторные посещения точки объединяются с уже записанным окружением.
    """

    def __init__(self, policy: RetentionPolicy, loop_heads: list[Location]):
        self.policy = policy
        self.loop_invariants: dict[Location, AbstractEnv] = {loc: AbstractEnv.BOTTOM for loc in sorted(loop_heads)}
        self.points: dict[ProgramPoint, AbstractEnv] = {}
        self.peak = 0

    def retains(self, kind: str) -> bool:
        required = _POINT_POLICY.get(kind)
        return required is not None and _ORDER.index(self.policy) >= _ORDER.index(required)

    def record(self, point: ProgramPoint, env: AbstractEnv) -> None:
        if env.is_bottom or not self.retains(point.kind):
            return
        old = self.points.get(point)
        self.points[point] = env if old is None else old.join(env)

    def record_loop(self, loc: Location, env: AbstractEnv) -> None:
        self.loop_invariants[loc] = self.loop_invariants.get(loc, AbstractEnv.BOTTOM).join(env)

    @property
    def retained(self) -> int:
        return len(self.points)

    def touch(self, live: int) -> None:
        """
        Учитывает рабочий набор: стек итераций циклов, ожидающие метки, результаты ветвей.

        Таблица инвариантов циклов в счётчик не входит: это результат анализа, его
        размер определяется числом циклов.
        """
        self.peak = max(self.peak, self.retained + live)

    def distinct_nodes(self) -> int:
        """Число различных узлов деревьев во всех удерживаемых окружениях; общие поддеревья считаются один раз."""
        seen: set[int] = set()
        for env in (*self.loop_invariants.values(), *self.points.values()):
            env_tree.collect_nodes(env.root, seen)
        return len(seen)
