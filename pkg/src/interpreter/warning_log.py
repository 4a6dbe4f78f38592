from collections.abc import Iterable
from src.domain.alarms import Alarm, WarningKind
from src.frontend.tokens import Location


def _join_witness(old: tuple, new: tuple) -> tuple:
    if len(old) != len(new):
        return old
    return tuple(a.join(b) for a, b in zip(old, new))


class WarningLog:
    """
    Журнал предупреждений без повторов.

    Предупреждения с одинаковыми (позиция, вид) сливаются в одно, интервалы-свидетели
    объединяются. Результат не зависит от порядка добавления.
    """

    def __init__(self, alarms: Iterable[Alarm] = ()):
        self._entries: dict[tuple[Location, WarningKind], Alarm] = {}
        self.add(alarms)

    def __len__(self) -> int:
        return len(self._entries)

    def add(self, alarms: Iterable[Alarm]) -> None:
        for alarm in alarms:
            key = (alarm.loc, alarm.kind)
            old = self._entries.get(key)
            if old is None:
                self._entries[key] = alarm
            else:
                self._entries[key] = Alarm(alarm.kind, alarm.loc, _join_witness(old.witness, alarm.witness))

    def sorted(self) -> tuple[Alarm, ...]:
        """Предупреждения в порядке (позиция, вид)."""
        return tuple(self._entries[key] for key in sorted(self._entries))
