import logging
from collections.abc import Iterable
import attrs
from src.frontend.ast import Program, ProgramPoint, ScalarType
from src.oracle.exceptions import StateSpaceTooLarge
from src.oracle.executor import ConcreteExecutor
from src.oracle.state import ConcreteState, ErrorRecord, Scalar

logger = logging.getLogger(__name__)

DEFAULT_VALUE_BOUND = 1_000_000


class EnumeratedInputs:
    """Все значения input() и все цели косвенного вызова."""

    def __init__(self, bound: int):
        self._bound = bound

    def values(self, ty: ScalarType, lo: Scalar, hi: Scalar) -> list[Scalar]:
        if ty is ScalarType.FLOAT:
            if lo != hi:
                raise StateSpaceTooLarge(f"вещественный input в [{lo}, {hi}] нельзя перебрать")
            return [float(lo)]
        count = int(hi) - int(lo) + 1
        if count > self._bound:
            raise StateSpaceTooLarge(f"input в [{lo}, {hi}] даёт {count} значений, предел {self._bound}")
        return list(range(int(lo), int(hi) + 1))

    def targets(self, targets: tuple[str, ...]) -> list[str]:
        return list(targets)


@attrs.frozen
class ReachableStates:
    """
    Точные множества достижимых состояний.

    Attributes:
        points (dict): Точка программы -> множество состояний в ней.
        errors (frozenset[ErrorRecord]): Все возможные ошибки времени исполнения.
        final (frozenset[ConcreteState]): Состояния в конце программы.
    """

    points: dict[ProgramPoint, frozenset[ConcreteState]]
    errors: frozenset[ErrorRecord]
    final: frozenset[ConcreteState]

    def at(self, point: ProgramPoint) -> frozenset[ConcreteState]:
        return self.points.get(point, frozenset())


def enumerate_reachable(program: Program, value_bound: int = DEFAULT_VALUE_BOUND) -> ReachableStates:
    """
    Перебирает все исполнения программы.

    Циклы исполняются до исчерпания новых состояний в голове цикла, поэтому
    перебор конечен, если конечно пространство состояний.

    Raises:
        StateSpaceTooLarge: Число различных состояний (суммарно по точкам) или
            диапазон одного input() превышает value_bound.
    """
    points: dict[ProgramPoint, set[ConcreteState]] = {}
    total = 0

    def observe(point: ProgramPoint, states: Iterable[ConcreteState]) -> None:
        nonlocal total
        bucket = points.setdefault(point, set())
        before = len(bucket)
        bucket.update(states)
        total += len(bucket) - before
        if total > value_bound:
            raise StateSpaceTooLarge(f"пространство состояний превысило {value_bound}")

    executor = ConcreteExecutor(program, EnumeratedInputs(value_bound), observe, explore_loops=True)
    final = executor.run()
    logger.debug(
        "Перебор состояний завершён",
        extra={"points": len(points), "states": total, "errors": len(executor.errors)},
    )
    return ReachableStates(
        {point: frozenset(states) for point, states in points.items()},
        frozenset(executor.errors),
        frozenset(final),
    )
