"""
Поиск постфиксной точки: возрастающая последовательность с задержкой расширения,
затем ограниченное число проходов сужения. Проверка результата (certify) —
отдельный путь, не разделяющий код с итерацией.
"""

import logging
from collections.abc import Callable
from src.domain.abstract_env import AbstractEnv
from src.domain.ladder import WideningLadder
from src.frontend.tokens import Location
from src.interpreter.exceptions import CheckFailed, NonTermination

logger = logging.getLogger(__name__)

Phi = Callable[[AbstractEnv], AbstractEnv]


def lfp(
    phi: Phi,
    d0: AbstractEnv,
    ladder: WideningLadder,
    iter_bound: int = 1000,
    widening_delay: int = 2,
    narrowing_passes: int = 2,
    loc: Location | None = None,
) -> AbstractEnv:
    """
    Возвращает x, для которого phi(x) ⊑ x.

    Первые widening_delay шагов используют объединение, далее расширение по лестнице.
    После стабилизации выполняется сужение x' = x ⊓ phi(x), пока результат остаётся
    постфиксной точкой.

    Raises:
        NonTermination: Возрастающая последовательность не стабилизировалась за iter_bound шагов.
    """
    x = d0
    iteration = 0
    while True:
        y = phi(x)
        if y.leq(x):
            break
        iteration += 1
        if iteration > iter_bound:
            raise NonTermination(f"цикл не стабилизировался за {iter_bound} итераций", loc)
        x = x.join(y) if iteration <= widening_delay else x.widen(y, ladder)
    ascending = iteration
    for _ in range(narrowing_passes):
        candidate = x.meet(y)
        if candidate.same_value(x):
            break
        refined = phi(candidate)
        if not refined.leq(candidate):
            break
        x, y = candidate, refined
    logger.debug("Неподвижная точка найдена", extra={"loc": str(loc), "iterations": ascending})
    return x


def certify(phi: Phi, invariant: AbstractEnv, loc: Location | None = None) -> None:
    """
    Независимо проверяет, что phi(invariant) ⊑ invariant.

    Raises:
        CheckFailed: Инвариант не является постфиксной точкой.
    """
    image = phi(invariant)
    if not image.leq(invariant):
        logger.error("Повторная проверка инварианта не прошла", extra={"loc": str(loc)})
        raise CheckFailed("инвариант цикла не является постфиксной точкой", loc)
