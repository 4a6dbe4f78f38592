from collections.abc import Mapping
import attrs
from src.domain.abstract_env import AbstractEnv
from src.domain.alarms import Alarm
from src.frontend.tokens import Location


@attrs.frozen
class FlowState:
    """
    Состояние потока управления в расширенной семантике переходов.

    Attributes:
        direct (AbstractEnv): Прямой поток; ⊥ означает мёртвый код.
        pending (Mapping[str, AbstractEnv]): Окружения, ожидающие у меток ("функция:метка").
        warnings (tuple[Alarm, ...]): Предупреждения, накопленные в режиме REPORT.
    """

    direct: AbstractEnv
    pending: Mapping[str, AbstractEnv] = attrs.field(factory=dict)
    warnings: tuple[Alarm, ...] = ()


@attrs.frozen
class BranchResult:
    """
    Результат анализа одной ветви точки диспетчеризации.

    Attributes:
        index (int): Номер ветви в порядке исходного текста.
        env (AbstractEnv): Окружение после ветви.
        warnings (tuple[Alarm, ...]): Предупреждения ветви (только в режиме REPORT).
        invariants (tuple): Пары (позиция цикла, инвариант) для циклов внутри ветви.
        micros (int): Время анализа ветви в микросекундах.
    """

    index: int
    env: AbstractEnv
    warnings: tuple[Alarm, ...] = ()
    invariants: tuple[tuple[Location, AbstractEnv], ...] = ()
    micros: int = 0
