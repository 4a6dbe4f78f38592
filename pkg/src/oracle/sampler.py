import logging
import random
from collections.abc import Iterable
import attrs
from src.frontend.ast import Program, ProgramPoint, ScalarType
from src.oracle.exceptions import BudgetExhausted
from src.oracle.executor import ConcreteExecutor
from src.oracle.state import ConcreteState, ErrorRecord, Scalar

logger = logging.getLogger(__name__)


class SampledInputs:
    """Одно равномерно выбранное значение input() и одна цель косвенного вызова."""

    def __init__(self, seed: int):
        self._rng = random.Random(seed)

    def values(self, ty: ScalarType, lo: Scalar, hi: Scalar) -> list[Scalar]:
        if ty is ScalarType.INT:
            return [self._rng.randint(int(lo), int(hi))]
        value = self._rng.uniform(float(lo), float(hi))
        return [min(max(value, float(lo)), float(hi))]

    def targets(self, targets: tuple[str, ...]) -> list[str]:
        return [self._rng.choice(targets)]


@attrs.frozen
class SampledRun:
    """
    Результат одиночного конкретного запуска.

    Attributes:
        trace (tuple): Пары (точка программы, состояние) в порядке исполнения.
        errors (tuple[ErrorRecord, ...]): Ошибки в порядке возникновения.
        final (ConcreteState | None): Состояние в конце программы; None, если бюджет исчерпан.
        exhausted (bool): Запуск остановлен по бюджету шагов, а не завершился.
        steps (int): Число исполненных шагов.
    """

    trace: tuple[tuple[ProgramPoint, ConcreteState], ...]
    errors: tuple[ErrorRecord, ...]
    final: ConcreteState | None
    exhausted: bool
    steps: int


def run_sampled(program: Program, seed: int, step_budget: int = 100_000) -> SampledRun:
    """
    Исполняет программу один раз, выбирая значения input() генератором с зерном seed.

    Одинаковые seed дают одинаковые трассы. Исчерпание бюджета не является ошибкой:
    оно возвращается флагом exhausted.
    """
    trace: list[tuple[ProgramPoint, ConcreteState]] = []

    def observe(point: ProgramPoint, states: Iterable[ConcreteState]) -> None:
        trace.extend((point, state) for state in states)

    executor = ConcreteExecutor(program, SampledInputs(seed), observe, step_budget=step_budget)
    final: ConcreteState | None = None
    exhausted = False
    try:
        finals = executor.run()
        final = next(iter(finals)) if finals else None
    except BudgetExhausted:
        exhausted = True
        logger.info("Конкретный запуск исчерпал бюджет", extra={"seed": seed, "step_budget": step_budget})
    logger.debug(
        "Конкретный запуск завершён",
        extra={"seed": seed, "steps": executor.steps, "errors": len(executor.errors)},
    )
    return SampledRun(tuple(trace), tuple(executor.errors), final, exhausted, executor.steps)
