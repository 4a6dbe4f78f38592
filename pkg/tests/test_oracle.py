#  type: ignore

import pytest
from src.bench.generator import generate_source
from src.bench.schemas.bench_spec import BenchSpec
from src.domain.numeric import INT64_MAX
from src.frontend.ast import ProgramPoint
from src.frontend.pipeline import compile_source
from src.oracle.enumerator import enumerate_reachable
from src.oracle.evaluator import eval_expr
from src.oracle.exceptions import StateSpaceTooLarge
from src.oracle.executor import exec_stmt
from src.oracle.sampler import SampledInputs, run_sampled
from src.oracle.state import ConcreteState, ErrorKind


def _main(program):
    return program.function("main").body.stmts


def _value_of_assignment(source, **cells):
    program = compile_source(source)
    assign = _main(program)[-1]
    return eval_expr(ConcreteState(cells), assign.value)


def _kinds(errors):
    return [error.kind for error in errors]


def test_eval_increment():
    value, errors = _value_of_assignment("int x; x = x + 1;", x=3)
    assert value == 4
    assert errors == []


def test_eval_overflow_clamps():
    value, errors = _value_of_assignment("int x; x = x + 1;", x=INT64_MAX)
    assert value == INT64_MAX
    assert _kinds(errors) == [ErrorKind.OVERFLOW]


def test_eval_division_by_zero_yields_zero():
    value, errors = _value_of_assignment("int x; int y; x = x / y;", x=1, y=0)
    assert value == 0
    assert _kinds(errors) == [ErrorKind.DIV_BY_ZERO]


def test_goto_moves_state_into_bank():
    program = compile_source("int x; goto L; x = 5; L: x = 2;")
    state = ConcreteState({"x": 1})
    successor, bank, errors = exec_stmt(state, {}, _main(program)[0], SampledInputs(0), program)
    assert successor is None
    assert bank["main:L"] == {state}
    assert errors == []


@pytest.mark.parametrize(
    "source, cells, expected",
    [
        ("int x; x = 2;", {"x": 1}, {"x": 2}),
        ("int i; if (i < 1) { i = 5; } else { i = 9; }", {"i": 0}, {"i": 5}),
    ],
)
def test_exec_stmt_direct_successor(source, cells, expected):
    program = compile_source(source)
    successor, bank, _ = exec_stmt(ConcreteState(cells), {}, _main(program)[0], SampledInputs(0), program)
    assert successor == ConcreteState(expected)
    assert bank == {}


def test_sampled_loop_terminates():
    run = run_sampled(compile_source("int x; x = 0; while (x < 3) { x = x + 1; }"), seed=0)
    assert not run.exhausted
    assert run.final.get("x") == 3


def test_sampled_event_loop_exhausts_budget():
    program = compile_source(generate_source(BenchSpec(handlers=3, variables=4)))
    run = run_sampled(program, seed=0, step_budget=2_000)
    assert run.exhausted
    assert run.final is None


def test_sampled_reachable_assert_failure():
    run = run_sampled(compile_source("int x; assert(x == 1); x = 4;"), seed=0)
    assert _kinds(run.errors) == [ErrorKind.ASSERT_FAILURE]
    assert run.final.get("x") == 4


def test_sampled_runs_are_deterministic_in_seed():
    program = compile_source("int x; int y; input(x, 0, 1000); input(y, -50, 50); x = x + y;")
    assert run_sampled(program, seed=7) == run_sampled(program, seed=7)


def test_enumerate_input_range():
    reachable = enumerate_reachable(compile_source("int x; input(x, 0, 2); x = x + 1;"))
    assert {state.get("x") for state in reachable.final} == {1, 2, 3}


def test_enumerate_loop_head():
    program = compile_source("int x; x = 0; while (x < 2) { x = x + 1; }")
    loop = _main(program)[1]
    reachable = enumerate_reachable(program)
    assert {state.get("x") for state in reachable.at(ProgramPoint("loop-head", loop.loc))} == {0, 1, 2}


def test_enumerate_refuses_large_state_space():
    with pytest.raises(StateSpaceTooLarge):
        enumerate_reachable(compile_source("int x; input(x, 0, 99999999);"))


def test_enumerate_refuses_float_range():
    with pytest.raises(StateSpaceTooLarge):
        enumerate_reachable(compile_source("float f; input(f, 0.0, 1.0);"))


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_sampled_trace_is_contained_in_enumeration(seed):
    program = compile_source(
        "int x; int y; input(x, -3, 3); y = 0;"
        " while (y < 4) { if (x > 0) { x = x - 1; } else { x = x + 2; } y = y + 1; }"
        " if (x == 2) { y = 10 / (x - 2); }"
    )
    reachable = enumerate_reachable(program)
    run = run_sampled(program, seed)
    for point, state in run.trace:
        assert state in reachable.at(point)
    assert set(run.errors) <= reachable.errors


def test_overflow_continuation_stays_in_range():
    run = run_sampled(compile_source("int x; input(x, 9223372036854775800, 9223372036854775807); x = x * 2;"), 0)
    assert _kinds(run.errors) == [ErrorKind.OVERFLOW]
    assert run.final.get("x") == INT64_MAX
