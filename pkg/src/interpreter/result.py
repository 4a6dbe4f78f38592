import hashlib
import json
import attrs
from src.domain.abstract_env import AbstractEnv
from src.domain.alarms import Alarm
from src.domain.codec import canonical_serialize
from src.frontend.ast import ProgramPoint
from src.frontend.tokens import Location
from src.interpreter.schemas.warning_payload import WarningPayload


def warnings_bytes(warnings: tuple[Alarm, ...]) -> bytes:
    """Каноническое представление отсортированного списка предупреждений."""
    payload = [WarningPayload.from_alarm(alarm).model_dump(mode="json") for alarm in warnings]
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode("utf-8")


@attrs.frozen
class AnalysisResult:
    """
    Итог анализа программы.

    Attributes:
        final (AbstractEnv): Окружение в конце входной функции.
        invariants (dict[Location, AbstractEnv]): Инварианты голов циклов по позиции.
        warnings (tuple[Alarm, ...]): Предупреждения, отсортированные по (позиция, вид).
        points (dict[ProgramPoint, AbstractEnv]): Окружения в точках, удержанных политикой хранения.
        peak_retained (int): Наибольшее число одновременно удерживаемых окружений.
        distinct_nodes (int): Число различных узлов в удержанных окружениях.
    """

    final: AbstractEnv
    invariants: dict[Location, AbstractEnv]
    warnings: tuple[Alarm, ...]
    points: dict[ProgramPoint, AbstractEnv] = attrs.field(factory=dict)
    peak_retained: int = 0
    distinct_nodes: int = 0

    def digest(self) -> bytes:
        """
        Дайджест детерминизма: SHA-256 от канонических байт конечного окружения,
        инвариантов циклов по возрастанию позиции и предупреждений.
        """
        hasher = hashlib.sha256(canonical_serialize(self.final))
        for loc in sorted(self.invariants):
            hasher.update(canonical_serialize(self.invariants[loc]))
        hasher.update(warnings_bytes(self.warnings))
        return hasher.digest()
