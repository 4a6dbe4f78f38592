from src.domain.abstract_env import AbstractEnv
from src.interpreter.flow_state import BranchResult
from src.interpreter.interfaces.dispatcher_interface import BranchAnalyzer, Dispatcher
from src.interpreter.mode import Mode
from src.parallel.dispatch_points import DispatchPoint


class SequentialDispatcher(Dispatcher):
    """Ветви по очереди в текущем процессе; эталон для сравнения с параллельным анализом."""

    def __init__(self) -> None:
        self.last_micros: tuple[int, ...] = ()

    def dispatch(
        self, point: DispatchPoint, base: AbstractEnv, mode: Mode, local: BranchAnalyzer
    ) -> list[BranchResult]:
        results = [local(point, index, base, mode) for index in range(len(point.branches))]
        self.last_micros = tuple(result.micros for result in results)
        return results

    def close(self) -> None:
        return None
