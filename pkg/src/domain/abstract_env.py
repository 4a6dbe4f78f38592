from collections.abc import Callable, Iterator
from typing import Any, ClassVar
from src.domain import env_tree
from src.domain.env_tree import Tree, VisitCounter
from src.domain.exceptions import KindMismatch, Rebind, UnboundVariable
from src.domain.interval import Interval
from src.domain.ladder import WideningLadder


def _checked(combine: Callable[[Interval, Interval], Interval]) -> Callable[[str, Interval, Interval], Interval]:
    def merge(cell: str, a: Interval, b: Interval) -> Interval:
        if a.kind is not b.kind:
            raise KindMismatch(f"ячейка {cell} имеет тип {a.kind} и {b.kind}")
        return combine(a, b)

    return merge


_JOIN = _checked(Interval.join)
_MEET = _checked(Interval.meet)


class AbstractEnv:
    """
    Абстрактное окружение: неизменяемое отображение ячейка -> Interval.

    Хранится в персистентном сбалансированном дереве; окружения, полученные из
    общего предка, разделяют все нетронутые поддеревья. ⊥ — отдельное значение
    AbstractEnv.BOTTOM без ячеек.

    new_var запоминает окружение-аргумент, пока корень не изменился, поэтому
    del_var(new_var(d)) возвращает сам d.
    """

    __slots__ = ("_root", "_bottom", "_undo", "_memo")

    BOTTOM: ClassVar["AbstractEnv"]

    def __init__(self, root: Tree = None, bottom: bool = False, undo: tuple[str, "AbstractEnv"] | None = None):
        self._root = root
        self._bottom = bottom
        self._undo = undo
        self._memo: dict[str, Any] = {}

    @classmethod
    def empty(cls) -> "AbstractEnv":
        """Окружение без ячеек (не ⊥)."""
        return cls()

    @classmethod
    def from_items(cls, cells: dict[str, Interval]) -> "AbstractEnv":
        root: Tree = None
        for cell, value in cells.items():
            if value.is_empty:
                return cls.BOTTOM
            root = env_tree.insert(root, cell, value)
        return cls(root)

    # --- inspection ----------------------------------------------------------

    @property
    def is_bottom(self) -> bool:
        return self._bottom

    @property
    def root(self) -> Tree:
        return self._root

    def __len__(self) -> int:
        return env_tree.size(self._root)

    def __contains__(self, cell: str) -> bool:
        return env_tree.lookup(self._root, cell)[0]

    def __iter__(self) -> Iterator[str]:
        return (cell for cell, _ in env_tree.items(self._root))

    def items(self) -> Iterator[tuple[str, Interval]]:
        return env_tree.items(self._root)

    def get(self, cell: str) -> Interval:
        found, value = env_tree.lookup(self._root, cell)
        if not found:
            raise UnboundVariable(f"ячейка {cell} не объявлена")
        return value  # type: ignore[no-any-return]

    def to_dict(self) -> dict[str, Interval]:
        return dict(self.items())

    def memo(self, key: str, compute: Callable[[], Any]) -> Any:
        """Кэш значений, зависящих только от содержимого (канонические байты, дайджест)."""
        if key not in self._memo:
            self._memo[key] = compute()
        return self._memo[key]

    def __repr__(self) -> str:
        if self._bottom:
            return "AbstractEnv(⊥)"
        body = ", ".join(f"{cell}: {value}" for cell, value in self.items())
        return f"AbstractEnv({{{body}}})"

    # --- updates -------------------------------------------------------------

    def set(self, cell: str, value: Interval) -> "AbstractEnv":
        """Сильное обновление ячейки; пустой интервал делает окружение ⊥."""
        if self._bottom:
            return self
        if value.is_empty:
            return AbstractEnv.BOTTOM
        found, old = env_tree.lookup(self._root, cell)
        if not found:
            raise UnboundVariable(f"ячейка {cell} не объявлена")
        if old is value or old == value:
            return self
        if old.kind is not value.kind:
            raise KindMismatch(f"ячейка {cell} имеет тип {old.kind}, присваивается {value.kind}")
        return AbstractEnv(env_tree.insert(self._root, cell, value))

    def new_var(self, cell: str, value: Interval) -> "AbstractEnv":
        if self._bottom:
            return self
        if cell in self:
            raise Rebind(f"ячейка {cell} уже объявлена")
        return AbstractEnv(env_tree.insert(self._root, cell, value), undo=(cell, self))

    def del_var(self, cell: str) -> "AbstractEnv":
        if self._bottom:
            return self
        if self._undo is not None and self._undo[0] == cell:
            return self._undo[1]
        if cell not in self:
            raise UnboundVariable(f"ячейка {cell} не объявлена")
        return AbstractEnv(env_tree.delete(self._root, cell))

    # --- lattice -------------------------------------------------------------

    def _combine(
        self,
        other: "AbstractEnv",
        combine: Callable[[str, Interval, Interval], Interval],
        counter: VisitCounter | None,
    ) -> "AbstractEnv":
        root = env_tree.union_with(self._root, other._root, combine, counter)
        if root is self._root:
            return self
        if root is other._root:
            return other
        return AbstractEnv(root)

    def join(self, other: "AbstractEnv", counter: VisitCounter | None = None) -> "AbstractEnv":
        """Поячеечная оболочка интервалов; ключи объединяются, результат делит поддеревья с self."""
        if other._bottom or self is other:
            return self
        if self._bottom:
            return other
        return self._combine(other, _JOIN, counter)

    def widen(self, other: "AbstractEnv", ladder: WideningLadder, counter: VisitCounter | None = None) -> "AbstractEnv":
        if other._bottom or self is other:
            return self
        if self._bottom:
            return other
        widen = _checked(lambda a, b: a.widen(b, ladder))
        return self._combine(other, widen, counter)

    def meet(self, other: "AbstractEnv") -> "AbstractEnv":
        """Поячеечное пересечение; пустая ячейка превращает результат в ⊥."""
        if self._bottom or self is other:
            return self
        if other._bottom:
            return other
        emptied = False

        def meet_cell(cell: str, a: Interval, b: Interval) -> Interval:
            nonlocal emptied
            result = _MEET(cell, a, b)
            if result.is_empty:
                emptied = True
                return a
            return result

        result = self._combine(other, meet_cell, None)
        return AbstractEnv.BOTTOM if emptied else result

    def leq(self, other: "AbstractEnv", counter: VisitCounter | None = None) -> bool:
        """
        Поячеечное включение интервалов.

        Raises:
            KindMismatch: Множества ячеек различаются либо ячейка имеет разный тип.
        """
        if self._bottom or self is other:
            return True
        if other._bottom:
            return False
        if len(self) != len(other):
            raise KindMismatch(f"сравниваются окружения с разными ячейками ({len(self)} и {len(other)})")

        def included(cell: str, a: Interval, b: Interval) -> bool:
            if a.kind is not b.kind:
                raise KindMismatch(f"ячейка {cell} имеет тип {a.kind} и {b.kind}")
            return a.leq(b)

        result = env_tree.all_pairs(self._root, other._root, included, counter)
        if not result and list(self) != list(other):
            raise KindMismatch("сравниваются окружения с разными ячейками")
        return result

    def same_value(self, other: "AbstractEnv") -> bool:
        if self is other:
            return True
        if self._bottom or other._bottom:
            return self._bottom and other._bottom
        return list(self.items()) == list(other.items())


AbstractEnv.BOTTOM = AbstractEnv(bottom=True)
