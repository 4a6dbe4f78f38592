"""
Передаточные функции интервального домена: вычисление выражений, присваивание,
сужение по условию, объявление и удаление переменных.

Каждая функция возвращает новое окружение и список возможных ошибок (Alarm).
Из ⊥ всегда получается ⊥ без ошибок.
"""

from src.domain.abstract_env import AbstractEnv
from src.domain.alarms import Alarm, WarningKind
from src.domain.interval import (
    Interval, arith, cast, compare, logical_not, negate, negate_comparison, refine_comparison,
)
from src.frontend.ast import (
    COMPARISON_OPS, BinOp, Cast, Const, Expr, IndexLV, LValue, Read, ScalarType, UnOp, VarDecl, VarLV,
)
from src.frontend.tokens import Location


def _check_index(lvalue: IndexLV, env: AbstractEnv, alarms: list[Alarm]) -> None:
    index = _eval(lvalue.index, env, alarms).finite()
    size = lvalue.decl.size
    assert size is not None
    if not index.is_empty and (index.lo < 0 or index.hi > size - 1):
        alarms.append(Alarm(WarningKind.ARRAY_OUT_OF_BOUNDS, lvalue.loc, (index,)))


def _read(lvalue: LValue, env: AbstractEnv, alarms: list[Alarm]) -> Interval:
    if isinstance(lvalue, IndexLV):
        _check_index(lvalue, env, alarms)
    return env.get(lvalue.decl.cell)


def _may_be_true(value: Interval) -> bool:
    return not value.is_empty and not (value.lo == 0 and value.hi == 0)


def _may_be_false(value: Interval) -> bool:
    return 0 in value


def _truth_interval(may_false: bool, may_true: bool) -> Interval:
    return Interval.of(ScalarType.INT, 0 if may_false else 1, 1 if may_true else 0)


def _eval(expr: Expr, env: AbstractEnv, alarms: list[Alarm]) -> Interval:
    if env.is_bottom:
        return Interval.empty(expr.ty)
    match expr:
        case Const(value=value, ty=ty):
            return Interval.const(ty, value)
        case Read(lvalue=lvalue):
            return _read(lvalue, env, alarms)
        case UnOp(op="!", operand=operand):
            return logical_not(_eval(operand, env, alarms))
        case UnOp(operand=operand):
            value = _eval(operand, env, alarms)
            result = negate(value)
            if result.overflow:
                alarms.append(Alarm(WarningKind.OVERFLOW, expr.loc, (value,)))
            return result.value
        case Cast(ty=ty, operand=operand):
            value = _eval(operand, env, alarms)
            result = cast(ty, value)
            if result.overflow:
                alarms.append(Alarm(WarningKind.OVERFLOW, expr.loc, (value,)))
            return result.value
        case BinOp(op="&&", left=left, right=right):
            first = _eval(left, env, alarms)
            may_false = _may_be_false(first)
            may_true = False
            if _may_be_true(first):
                second = _eval(right, guard(left, True, env)[0], alarms)
                may_false = may_false or _may_be_false(second)
                may_true = _may_be_true(second)
            return _truth_interval(may_false, may_true)
        case BinOp(op="||", left=left, right=right):
            first = _eval(left, env, alarms)
            may_true = _may_be_true(first)
            may_false = False
            if _may_be_false(first):
                second = _eval(right, guard(left, False, env)[0], alarms)
                may_true = may_true or _may_be_true(second)
                may_false = _may_be_false(second)
            return _truth_interval(may_false, may_true)
        case BinOp(op=op, left=left, right=right) if op in COMPARISON_OPS:
            return compare(op, _eval(left, env, alarms), _eval(right, env, alarms))
        case BinOp(op=op, left=left, right=right):
            a = _eval(left, env, alarms)
            b = _eval(right, env, alarms)
            result = arith(op, a, b)
            if result.div_by_zero:
                alarms.append(Alarm(WarningKind.DIV_BY_ZERO, expr.loc, (b,)))
            if result.overflow:
                alarms.append(Alarm(WarningKind.OVERFLOW, expr.loc, (a, b)))
            return result.value
    raise TypeError(f"Неизвестное выражение {expr!r}")


def eval_interval(expr: Expr, env: AbstractEnv) -> tuple[Interval, list[Alarm]]:
    """
    Интервал значений выражения во всех состояниях env.

    Returns:
        tuple[Interval, list[Alarm]]: Значение (пустое для ⊥) и возможные ошибки вычисления.
    """
    alarms: list[Alarm] = []
    return _eval(expr, env, alarms), alarms


def _store(lvalue: LValue, value: Interval, env: AbstractEnv, alarms: list[Alarm]) -> AbstractEnv:
    cell = lvalue.decl.cell
    if isinstance(lvalue, IndexLV):
        _check_index(lvalue, env, alarms)
        return env.set(cell, env.get(cell).join(value))
    return env.set(cell, value)


def assign(lvalue: LValue, expr: Expr, env: AbstractEnv) -> tuple[AbstractEnv, list[Alarm]]:
    """Сильное обновление скаляра либо слабое обновление ячейки массива."""
    if env.is_bottom:
        return env, []
    alarms: list[Alarm] = []
    value = _eval(expr, env, alarms)
    return _store(lvalue, value, env, alarms), alarms


def assign_interval(lvalue: LValue, value: Interval, env: AbstractEnv) -> tuple[AbstractEnv, list[Alarm]]:
    """Присваивание готового интервала: input() и результат вызова функции."""
    if env.is_bottom:
        return env, []
    alarms: list[Alarm] = []
    return _store(lvalue, value, env, alarms), alarms


def _refine_lvalue(expr: Expr, refined: Interval, env: AbstractEnv) -> AbstractEnv:
    if isinstance(expr, Read) and isinstance(expr.lvalue, VarLV):
        cell = expr.lvalue.decl.cell
        return env.set(cell, env.get(cell).meet(refined))
    return env


def _guard_comparison(op: str, left: Expr, right: Expr, env: AbstractEnv, alarms: list[Alarm]) -> AbstractEnv:
    a = _eval(left, env, alarms)
    b = _eval(right, env, alarms)
    new_a, new_b = refine_comparison(op, a, b)
    if new_a.is_empty:
        return AbstractEnv.BOTTOM
    env = _refine_lvalue(left, new_a, env)
    return _refine_lvalue(right, new_b, env)


def _guard(expr: Expr, branch: bool, env: AbstractEnv, alarms: list[Alarm]) -> AbstractEnv:
    if env.is_bottom:
        return env
    match expr:
        case Const(value=value):
            return env if (value != 0) == branch else AbstractEnv.BOTTOM
        case UnOp(op="!", operand=operand):
            return _guard(operand, not branch, env, alarms)
        case BinOp(op="&&", left=left, right=right):
            if branch:
                return _guard(right, True, _guard(left, True, env, alarms), alarms)
            left_false = _guard(left, False, env, alarms)
            right_false = _guard(right, False, _guard(left, True, env, alarms), alarms)
            return left_false.join(right_false)
        case BinOp(op="||", left=left, right=right):
            if not branch:
                return _guard(right, False, _guard(left, False, env, alarms), alarms)
            left_true = _guard(left, True, env, alarms)
            right_true = _guard(right, True, _guard(left, False, env, alarms), alarms)
            return left_true.join(right_true)
        case BinOp(op=op, left=left, right=right) if op in COMPARISON_OPS:
            return _guard_comparison(op if branch else negate_comparison(op), left, right, env, alarms)
    zero = Const(0, expr.ty, expr.loc) if expr.ty is ScalarType.INT else Const(0.0, expr.ty, expr.loc)
    return _guard_comparison("!=" if branch else "==", expr, zero, env, alarms)


def guard(expr: Expr, branch: bool, env: AbstractEnv) -> tuple[AbstractEnv, list[Alarm]]:
    """
    Сужает env до состояний, в которых условие expr принимает значение branch.

    Сравнения переменной с выражением уточняют границы переменной; &&, || и !
    разбираются рекурсивно. Невыполнимое условие даёт ⊥.
    """
    alarms: list[Alarm] = []
    return _guard(expr, branch, env, alarms), alarms


def assert_cond(cond: Expr, env: AbstractEnv, loc: Location) -> tuple[AbstractEnv, list[Alarm]]:
    """assert не меняет состояние; если условие может быть ложным, выдаётся assert-may-fail."""
    if env.is_bottom:
        return env, []
    alarms: list[Alarm] = []
    value = _eval(cond, env, alarms)
    if not _guard(cond, False, env, []).is_bottom:
        alarms.append(Alarm(WarningKind.ASSERT_MAY_FAIL, loc, (value,)))
    return env, alarms


def new_var(decl: VarDecl, env: AbstractEnv) -> AbstractEnv:
    """Связывает ячейку с полным диапазоном типа."""
    return env.new_var(decl.cell, Interval.full(decl.ty))


def del_var(decl: VarDecl, env: AbstractEnv) -> AbstractEnv:
    return env.del_var(decl.cell)


def refine_not_equal_all(expr: Expr, values: list[int], env: AbstractEnv) -> tuple[AbstractEnv, list[Alarm]]:
    """Ветвь switch без совпадения: значение отличается от каждой из констант."""
    alarms: list[Alarm] = []
    changed = True
    while changed and not env.is_bottom:
        before = env
        for value in sorted(values):
            env = _guard_comparison("!=", expr, Const(value, ScalarType.INT, expr.loc), env, alarms)
            if env.is_bottom:
                break
        changed = env is not before
    return env, alarms


def guard_case(expr: Expr, value: int, env: AbstractEnv) -> tuple[AbstractEnv, list[Alarm]]:
    """Ветвь switch: значение выражения равно константе case."""
    alarms: list[Alarm] = []
    if env.is_bottom:
        return env, alarms
    return _guard_comparison("==", expr, Const(value, ScalarType.INT, expr.loc), env, alarms), alarms
