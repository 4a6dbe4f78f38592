#  type: ignore

import pytest
from src.domain import transfer
from src.domain.abstract_env import AbstractEnv
from src.domain.alarms import WarningKind
from src.domain.interval import Interval
from src.domain.numeric import INT64_MAX, INT64_MIN
from src.frontend.ast import ScalarType
from src.frontend.pipeline import compile_source
from src.frontend.tokens import Location

INT = ScalarType.INT
FLOAT = ScalarType.FLOAT


def _i(lo, hi):
    return Interval.of(INT, lo, hi)


def _main(source):
    return compile_source(source).function("main").body.stmts


def _env(**cells):
    return AbstractEnv.from_items(cells)


def _kinds(alarms):
    return [alarm.kind for alarm in alarms]


def test_assign_increment():
    (stmt,) = _main("int x; x = x + 1;")
    env, alarms = transfer.assign(stmt.target, stmt.value, _env(x=_i(0, 2)))
    assert env.get("x") == _i(1, 3)
    assert alarms == []


def test_array_store_is_weak_update():
    (stmt,) = _main("int t[10]; int i; t[i] = 5;")
    env, alarms = transfer.assign(stmt.target, stmt.value, _env(t=_i(0, 0), i=_i(0, 9)))
    assert env.get("t") == _i(0, 5)
    assert alarms == []


def test_array_index_may_be_out_of_bounds():
    (stmt,) = _main("int t[10]; int i; t[i] = 5;")
    _, alarms = transfer.assign(stmt.target, stmt.value, _env(t=_i(0, 0), i=_i(0, 10)))
    assert _kinds(alarms) == [WarningKind.ARRAY_OUT_OF_BOUNDS]
    assert alarms[0].loc == stmt.target.loc


def test_overflow_saturates_and_reports_operator_location():
    (stmt,) = _main("int x; x = x + 1;")
    env, alarms = transfer.assign(stmt.target, stmt.value, _env(x=_i(INT64_MAX - 1, INT64_MAX)))
    assert env.get("x") == _i(INT64_MAX, INT64_MAX)
    assert _kinds(alarms) == [WarningKind.OVERFLOW]
    assert alarms[0].loc == Location(1, 14)


def test_division_by_possible_zero():
    (stmt,) = _main("int x; int y; y = 100 / x;")
    env, alarms = transfer.assign(stmt.target, stmt.value, _env(x=_i(0, 10), y=_i(0, 0)))
    assert env.get("y") == _i(0, 100)
    assert _kinds(alarms) == [WarningKind.DIV_BY_ZERO]


def test_cast_overflow():
    (stmt,) = _main("int x; float f; x = (int)f;")
    env, alarms = transfer.assign(
        stmt.target, stmt.value, _env(x=_i(0, 0), f=Interval.of(FLOAT, 0.0, 1e300))
    )
    assert env.get("x").hi == INT64_MAX
    assert _kinds(alarms) == [WarningKind.OVERFLOW]


def test_float_multiplication_contains_exact_result():
    (stmt,) = _main("float f; f = f * 0.5;")
    env, _ = transfer.assign(stmt.target, stmt.value, _env(f=Interval.of(FLOAT, 1.0, 2.0)))
    assert 0.5 in env.get("f") and 1.0 in env.get("f")


@pytest.mark.parametrize(
    "branch, expected",
    [(True, _i(0, 4)), (False, _i(5, 10))],
)
def test_guard_less_than(branch, expected):
    (stmt,) = _main("int x; if (x < 5) { }")
    env, _ = transfer.guard(stmt.cond, branch, _env(x=_i(0, 10)))
    assert env.get("x") == expected


def test_unsatisfiable_guard_is_bottom():
    (stmt,) = _main("int x; if (x < 5) { }")
    env, _ = transfer.guard(stmt.cond, True, _env(x=_i(6, 10)))
    assert env.is_bottom


def test_guard_conjunction():
    (stmt,) = _main("int x; int y; if (x > 0 && y > 0) { }")
    start = _env(x=_i(-5, 5), y=_i(-5, 5))
    taken, _ = transfer.guard(stmt.cond, True, start)
    assert taken.get("x") == _i(1, 5) and taken.get("y") == _i(1, 5)
    skipped, _ = transfer.guard(stmt.cond, False, start)
    assert skipped.get("x") == _i(-5, 5) and skipped.get("y") == _i(-5, 5)


def test_guard_disjunction_and_negation():
    stmts = _main("int x; if (x < 0 || x > 10) { } if (!(x == 0)) { }")
    inside, _ = transfer.guard(stmts[0].cond, False, _env(x=_i(-5, 20)))
    assert inside.get("x") == _i(0, 10)
    nonzero, _ = transfer.guard(stmts[1].cond, True, _env(x=_i(0, 5)))
    assert nonzero.get("x") == _i(1, 5)


def test_assert_keeps_state_and_reports():
    (stmt,) = _main("int x; assert(x >= 0);")
    start = _env(x=_i(-1, 3))
    env, alarms = transfer.assert_cond(stmt.cond, start, stmt.loc)
    assert env is start
    assert _kinds(alarms) == [WarningKind.ASSERT_MAY_FAIL]
    assert alarms[0].loc == stmt.loc
    _, proven = transfer.assert_cond(stmt.cond, _env(x=_i(0, 3)), stmt.loc)
    assert proven == []


def test_switch_arms_refine_scrutinee():
    (stmt,) = _main("int x; switch (x) { case 0: x = 1; case 1: x = 2; }")
    start = _env(x=_i(0, 3))
    case_one, _ = transfer.guard_case(stmt.scrutinee, 1, start)
    assert case_one.get("x") == _i(1, 1)
    no_match, _ = transfer.refine_not_equal_all(stmt.scrutinee, [1, 0], start)
    assert no_match.get("x") == _i(2, 3)
    covered, _ = transfer.refine_not_equal_all(stmt.scrutinee, [0, 1], _env(x=_i(0, 1)))
    assert covered.is_bottom


def test_local_scope_binds_full_range_and_restores():
    program = compile_source("void f() { int a; float b; }")
    decls = [stmt.decl for stmt in program.function("f").body.stmts]
    start = _env(g=_i(0, 0))
    scoped = transfer.new_var(decls[1], transfer.new_var(decls[0], start))
    assert scoped.get("f.a") == _i(INT64_MIN, INT64_MAX)
    assert scoped.get("f.b") == Interval.full(FLOAT)
    assert transfer.del_var(decls[0], transfer.del_var(decls[1], scoped)) is start


def test_bottom_stays_bottom():
    (stmt,) = _main("int x; x = 10 / x;")
    env, alarms = transfer.assign(stmt.target, stmt.value, AbstractEnv.BOTTOM)
    assert env.is_bottom and alarms == []
    value, alarms = transfer.eval_interval(stmt.value, AbstractEnv.BOTTOM)
    assert value.is_empty and alarms == []
