from collections.abc import Iterator
from enum import StrEnum
from typing import Union
import attrs
from src.frontend.tokens import Location

__all__ = (
    "ARITHMETIC_OPS", "COMPARISON_OPS", "LOGICAL_OPS", "Assert", "Assign", "BinOp", "Block",
    "Break", "Call", "Cast", "Const", "Continue", "Decl", "Expr", "Function", "FunctionPointer",
    "Goto", "If", "IndexLV", "IndirectCall", "Input", "LValue", "Label", "Program", "ProgramPoint",
    "Read", "Return", "ScalarType", "Stmt", "Switch", "SwitchArm", "UnOp", "VarDecl", "VarLV",
    "While", "child_blocks", "iter_statements",
)

ARITHMETIC_OPS = frozenset({"+", "-", "*", "/", "%"})
COMPARISON_OPS = frozenset({"<", "<=", ">", ">=", "==", "!="})
LOGICAL_OPS = frozenset({"&&", "||"})


class ScalarType(StrEnum):
    INT = "int"
    FLOAT = "float"


def _loc() -> Location:
    return attrs.field(eq=False)  # type: ignore[no-any-return]


@attrs.frozen
class VarDecl:
    """
    Объявление переменной после разрешения имён.

    Attributes:
        name (str): Имя в исходном тексте.
        ty (ScalarType): Тип элемента.
        size (int | None): Размер массива, None для скаляра.
        cell (str): Уникальное имя ячейки в окружениях анализатора и оракула.
        is_global (bool): Глобальная переменная.
    """

    name: str
    ty: ScalarType
    size: int | None
    cell: str
    is_global: bool
    loc: Location = _loc()

    @property
    def is_array(self) -> bool:
        return self.size is not None


# --- expressions -------------------------------------------------------------

@attrs.frozen
class Const:
    value: int | float
    ty: ScalarType
    loc: Location = _loc()


@attrs.frozen
class VarLV:
    decl: VarDecl
    loc: Location = _loc()


@attrs.frozen
class IndexLV:
    decl: VarDecl
    index: "Expr"
    loc: Location = _loc()


LValue = Union[VarLV, IndexLV]


@attrs.frozen
class Read:
    lvalue: LValue
    loc: Location = _loc()

    @property
    def ty(self) -> ScalarType:
        return self.lvalue.decl.ty


@attrs.frozen
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"
    ty: ScalarType
    loc: Location = _loc()


@attrs.frozen
class UnOp:
    op: str
    operand: "Expr"
    ty: ScalarType
    loc: Location = _loc()


@attrs.frozen
class Cast:
    ty: ScalarType
    operand: "Expr"
    loc: Location = _loc()


Expr = Union[Const, Read, BinOp, UnOp, Cast]


# --- statements --------------------------------------------------------------

@attrs.frozen
class Decl:
    decl: VarDecl
    loc: Location = _loc()


@attrs.frozen
class Assign:
    target: LValue
    value: Expr
    loc: Location = _loc()


@attrs.frozen
class Block:
    stmts: tuple["Stmt", ...]
    loc: Location = _loc()


@attrs.frozen
class If:
    cond: Expr
    then: Block
    orelse: Union[Block, "If", None]
    loc: Location = _loc()
    annotated: bool = False


@attrs.frozen
class While:
    cond: Expr
    body: Block
    loc: Location = _loc()


@attrs.frozen
class Label:
    name: str
    loc: Location = _loc()


@attrs.frozen
class Goto:
    label: str
    loc: Location = _loc()


@attrs.frozen
class Break:
    loc: Location = _loc()


@attrs.frozen
class Continue:
    loc: Location = _loc()


@attrs.frozen
class Return:
    value: Expr | None
    loc: Location = _loc()


@attrs.frozen
class Call:
    callee: str
    target: LValue | None
    loc: Location = _loc()


@attrs.frozen
class IndirectCall:
    """Вызов через указатель; targets заполняет валидатор в порядке объявления."""

    pointer: str
    targets: tuple[str, ...]
    target: LValue | None
    loc: Location = _loc()
    annotated: bool = False


@attrs.frozen
class SwitchArm:
    """Ветвь switch; value=None обозначает default. Ветви не проваливаются."""

    value: int | None
    body: Block
    loc: Location = _loc()


@attrs.frozen
class Switch:
    scrutinee: Expr
    arms: tuple[SwitchArm, ...]
    loc: Location = _loc()
    annotated: bool = False


@attrs.frozen
class Assert:
    cond: Expr
    loc: Location = _loc()


@attrs.frozen
class Input:
    target: LValue
    lo: Const
    hi: Const
    loc: Location = _loc()


Stmt = Union[
    Decl, Assign, Block, If, While, Label, Goto, Break, Continue, Return, Call, IndirectCall,
    Switch, Assert, Input,
]


@attrs.frozen
class Function:
    name: str
    ret: ScalarType | None
    body: Block
    loc: Location = _loc()

    @property
    def result_cell(self) -> str:
        return f"{self.name}.$result"


@attrs.frozen
class FunctionPointer:
    name: str
    targets: tuple[str, ...]
    loc: Location = _loc()


@attrs.frozen
class Program:
    """
    Программа целиком.

    Attributes:
        globals (tuple[Decl, ...]): Глобальные переменные в порядке объявления.
        functions (tuple[Function, ...]): Функции в порядке определения.
        pointers (tuple[FunctionPointer, ...]): Указатели на функции с множествами целей.
        entry (str): Имя входной функции.
        validated (bool): Программа прошла validate().
    """

    globals: tuple[Decl, ...]
    functions: tuple[Function, ...]
    pointers: tuple[FunctionPointer, ...]
    entry: str
    validated: bool = attrs.field(default=False, eq=False)

    def function(self, name: str) -> Function:
        for function in self.functions:
            if function.name == name:
                return function
        raise KeyError(name)

    def pointer(self, name: str) -> FunctionPointer:
        for pointer in self.pointers:
            if pointer.name == name:
                return pointer
        raise KeyError(name)


@attrs.frozen(order=True)
class ProgramPoint:
    """
    Точка программы для сравнения конкретных и абстрактных состояний.

    kind: "stmt" — перед оператором, "loop-head" — голова цикла, "exit" — конец программы.
    """

    kind: str
    loc: Location


def child_blocks(stmt: Stmt) -> Iterator[Block]:
    """Непосредственно вложенные блоки оператора."""
    match stmt:
        case Block():
            yield stmt
        case If(then=then, orelse=orelse):
            yield then
            if isinstance(orelse, Block):
                yield orelse
            elif isinstance(orelse, If):
                yield from child_blocks(orelse)
        case While(body=body):
            yield body
        case Switch(arms=arms):
            for arm in arms:
                yield arm.body
        case _:
            return


def iter_statements(stmt: Stmt) -> Iterator[Stmt]:
    """Обход оператора и всех вложенных операторов в порядке исходного текста."""
    yield stmt
    if isinstance(stmt, Block):
        for inner in stmt.stmts:
            yield from iter_statements(inner)
        return
    if isinstance(stmt, If) and isinstance(stmt.orelse, If):
        yield from iter_statements(stmt.then)
        yield from iter_statements(stmt.orelse)
        return
    for block in child_blocks(stmt):
        yield from iter_statements(block)
