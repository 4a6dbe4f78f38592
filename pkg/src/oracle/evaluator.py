"""
Конкретная семантика выражений мини-C.

Ошибки времени исполнения — данные, а не исключения: вычисление продолжается
с насыщенным значением, а ErrorRecord дописывается в список errors.
"""

import operator
from collections.abc import Callable
from src.domain.numeric import c_div, c_mod, clamp_float, clamp_int, float_to_int
from src.frontend.ast import BinOp, Cast, Const, Expr, IndexLV, LValue, Read, ScalarType, UnOp
from src.frontend.tokens import Location
from src.oracle.state import ConcreteState, ErrorKind, ErrorRecord, Scalar

_COMPARISONS: dict[str, Callable[[Scalar, Scalar], bool]] = {
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
    "==": operator.eq,
    "!=": operator.ne,
}


def element_index(
    state: ConcreteState, lvalue: IndexLV, errors: list[ErrorRecord]
) -> int:
    """Индекс элемента массива; выход за границы сообщается и прижимается к [0, size-1]."""
    index = _eval(state, lvalue.index, errors)
    size = lvalue.decl.size
    assert size is not None
    if 0 <= index < size:  # type: ignore[operator]
        return index  # type: ignore[return-value]
    errors.append(ErrorRecord(ErrorKind.ARRAY_OUT_OF_BOUNDS, lvalue.loc, (index,)))  # type: ignore[arg-type]
    return min(max(index, 0), size - 1)  # type: ignore[type-var, return-value]


def read_lvalue(state: ConcreteState, lvalue: LValue, errors: list[ErrorRecord]) -> Scalar:
    if isinstance(lvalue, IndexLV):
        index = element_index(state, lvalue, errors)
        return state.get(lvalue.decl.cell)[index]  # type: ignore[index]
    return state.get(lvalue.decl.cell)  # type: ignore[return-value]


def _int_arith(op: str, left: int, right: int, loc: Location, errors: list[ErrorRecord]) -> int:
    if op in ("/", "%") and right == 0:
        errors.append(ErrorRecord(ErrorKind.DIV_BY_ZERO, loc, (left, right)))
        return 0
    if op == "/":
        exact = c_div(left, right)
    elif op == "%":
        exact = c_mod(left, right)
    elif op == "+":
        exact = left + right
    elif op == "-":
        exact = left - right
    else:
        exact = left * right
    value, overflow = clamp_int(exact)
    if overflow:
        errors.append(ErrorRecord(ErrorKind.OVERFLOW, loc, (left, right)))
    return value


def _float_arith(op: str, left: float, right: float, loc: Location, errors: list[ErrorRecord]) -> float:
    if op == "/":
        if right == 0.0:
            errors.append(ErrorRecord(ErrorKind.DIV_BY_ZERO, loc, (left, right)))
            return 0.0
        raw = left / right
    elif op == "+":
        raw = left + right
    elif op == "-":
        raw = left - right
    else:
        raw = left * right
    value, overflow = clamp_float(raw)
    if overflow:
        errors.append(ErrorRecord(ErrorKind.OVERFLOW, loc, (left, right)))
    return value + 0.0


def _eval(state: ConcreteState, expr: Expr, errors: list[ErrorRecord]) -> Scalar:
    match expr:
        case Const(value=value):
            return value
        case Read(lvalue=lvalue):
            return read_lvalue(state, lvalue, errors)
        case UnOp(op="!", operand=operand):
            return int(_eval(state, operand, errors) == 0)
        case UnOp(operand=operand, ty=ScalarType.FLOAT):
            return -_eval(state, operand, errors) + 0.0
        case UnOp(operand=operand):
            value = _eval(state, operand, errors)
            negated, overflow = clamp_int(-value)  # type: ignore[arg-type]
            if overflow:
                errors.append(ErrorRecord(ErrorKind.OVERFLOW, expr.loc, (value,)))
            return negated
        case Cast(ty=ty, operand=operand):
            value = _eval(state, operand, errors)
            if operand.ty is ty:
                return value
            if ty is ScalarType.FLOAT:
                return float(value)
            converted, overflow = float_to_int(value)  # type: ignore[arg-type]
            if overflow:
                errors.append(ErrorRecord(ErrorKind.OVERFLOW, expr.loc, (value,)))
            return converted
        case BinOp(op="&&", left=left, right=right):
            if _eval(state, left, errors) == 0:
                return 0
            return int(_eval(state, right, errors) != 0)
        case BinOp(op="||", left=left, right=right):
            if _eval(state, left, errors) != 0:
                return 1
            return int(_eval(state, right, errors) != 0)
        case BinOp(op=op, left=left, right=right) if op in _COMPARISONS:
            return int(_COMPARISONS[op](_eval(state, left, errors), _eval(state, right, errors)))
        case BinOp(op=op, left=left, right=right, ty=ty):
            a = _eval(state, left, errors)
            b = _eval(state, right, errors)
            if ty is ScalarType.INT:
                return _int_arith(op, a, b, expr.loc, errors)  # type: ignore[arg-type]
            return _float_arith(op, a, b, expr.loc, errors)  # type: ignore[arg-type]
    raise TypeError(f"Неизвестное выражение {expr!r}")


def eval_expr(state: ConcreteState, expr: Expr) -> tuple[Scalar, list[ErrorRecord]]:
    """
    Значение выражения в состоянии state.

    Returns:
        tuple[Scalar, list[ErrorRecord]]: Детерминированное значение и ошибки вычисления
            в порядке их возникновения.
    """
    errors: list[ErrorRecord] = []
    return _eval(state, expr, errors), errors
