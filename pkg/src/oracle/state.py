from collections.abc import Iterator, Mapping
from enum import StrEnum
from typing import Union
import attrs
from src.domain.alarms import WarningKind
from src.frontend.ast import ScalarType, VarDecl
from src.frontend.tokens import Location

Scalar = Union[int, float]
Value = Union[int, float, tuple[Scalar, ...]]


class ErrorKind(StrEnum):
    OVERFLOW = "overflow"
    DIV_BY_ZERO = "div-by-zero"
    ARRAY_OUT_OF_BOUNDS = "array-out-of-bounds"
    ASSERT_FAILURE = "assert-failure"

    @property
    def warning_kind(self) -> WarningKind:
        """Вид предупреждения анализатора, который должен покрывать эту ошибку."""
        if self is ErrorKind.ASSERT_FAILURE:
            return WarningKind.ASSERT_MAY_FAIL
        return WarningKind(self.value)


@attrs.frozen
class ErrorRecord:
    kind: ErrorKind
    loc: Location
    values: tuple[Scalar, ...] = ()


def zero_of(ty: ScalarType) -> Scalar:
    return 0 if ty is ScalarType.INT else 0.0


def initial_value(decl: VarDecl) -> Value:
    """Начальное значение объявленной переменной: нули, для массива поэлементно."""
    if decl.size is not None:
        return (zero_of(decl.ty),) * decl.size
    return zero_of(decl.ty)


class ConcreteState:
    """
    Конкретное состояние памяти: ячейка -> значение.

    Неизменяемо; каждое обновление возвращает новое состояние. Массив хранится
    в одной ячейке кортежем элементов. Хэшируется по содержимому, поэтому
    состояния можно складывать в множества при переборе.
    """

    __slots__ = ("_cells", "_hash")

    def __init__(self, cells: Mapping[str, Value] | None = None):
        self._cells: dict[str, Value] = dict(cells or {})
        self._hash: int | None = None

    def __contains__(self, cell: str) -> bool:
        return cell in self._cells

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self._cells))

    def __len__(self) -> int:
        return len(self._cells)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ConcreteState) and self._cells == other._cells

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._cells.items()))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"{cell}: {self._cells[cell]}" for cell in self)
        return f"ConcreteState({{{body}}})"

    def items(self) -> Iterator[tuple[str, Value]]:
        return ((cell, self._cells[cell]) for cell in self)

    def get(self, cell: str) -> Value:
        return self._cells[cell]

    def _with(self, cell: str, value: Value) -> "ConcreteState":
        cells = dict(self._cells)
        cells[cell] = value
        return ConcreteState(cells)

    def bind(self, cell: str, value: Value) -> "ConcreteState":
        if cell in self._cells:
            raise KeyError(f"ячейка {cell} уже связана")
        return self._with(cell, value)

    def unbind(self, cell: str) -> "ConcreteState":
        cells = dict(self._cells)
        del cells[cell]
        return ConcreteState(cells)

    def set(self, cell: str, value: Scalar) -> "ConcreteState":
        if cell not in self._cells:
            raise KeyError(f"ячейка {cell} не связана")
        if self._cells[cell] == value and type(self._cells[cell]) is type(value):
            return self
        return self._with(cell, value)

    def set_element(self, cell: str, index: int, value: Scalar) -> "ConcreteState":
        elements = list(self._cells[cell])  # type: ignore[arg-type]
        elements[index] = value
        return self._with(cell, tuple(elements))
