from collections.abc import Callable
from typing import Protocol
from src.domain.abstract_env import AbstractEnv
from src.interpreter.flow_state import BranchResult
from src.interpreter.mode import Mode
from src.parallel.dispatch_points import DispatchPoint

BranchAnalyzer = Callable[[DispatchPoint, int, AbstractEnv, Mode], BranchResult]


class Dispatcher(Protocol):
    """
    Протокол для классов, вычисляющих ветви точки диспетчеризации.

    Методы:
        dispatch(point, base, mode, local) -> list[BranchResult]:
            Возвращает результаты всех ветвей point от окружения base в порядке
            номеров ветвей. local анализирует одну ветвь в текущем процессе;
            реализации используют его для последовательного анализа и как
            запасной путь при отказе воркера.
        close() -> None:
            Освобождает воркеров и соединения.
    """

    def dispatch(
        self, point: DispatchPoint, base: AbstractEnv, mode: Mode, local: BranchAnalyzer
    ) -> list[BranchResult]:
        pass

    def close(self) -> None:
        pass
