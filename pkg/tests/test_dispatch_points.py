#  type: ignore

import pytest
from src.bench.generator import generate_source
from src.bench.schemas.bench_spec import BenchSpec
from src.frontend.pipeline import compile_source
from src.parallel.dispatch_points import DispatchKind, find_dispatch_points


def test_sequencer_switch_is_found():
    program = compile_source(generate_source(BenchSpec(handlers=8)))
    (point,) = find_dispatch_points(program)
    assert point.kind is DispatchKind.SWITCH
    assert point.function == "main"
    assert [branch.index for branch in point.branches] == list(range(8))
    assert [branch.label for branch in point.branches] == [str(arm) for arm in range(8)]


def test_straight_line_program_has_none():
    assert find_dispatch_points(compile_source("int x; x = 1; x = x + 1;")) == []


def test_switch_outside_event_loop_is_not_automatic():
    program = compile_source("int i; switch (i) { case 0: i = 1; case 1: i = 2; }")
    assert find_dispatch_points(program) == []


def test_annotated_if_chain():
    program = compile_source(
        "int x; /*@dispatch*/ if (x < 1) { x = 1; } else if (x < 2) { x = 2; } else { x = 3; }"
    )
    (point,) = find_dispatch_points(program)
    assert point.kind is DispatchKind.IF_CHAIN
    assert [branch.label for branch in point.branches] == ["if#0", "if#1", "else"]


def test_annotated_indirect_call():
    program = compile_source(
        "int x; void (*fp)() = { a, b, c }; void a() { x = 1; } void b() { x = 2; } void c() { }"
        " /*@dispatch*/ (*fp)();"
    )
    (point,) = find_dispatch_points(program)
    assert point.kind is DispatchKind.INDIRECT
    assert [branch.label for branch in point.branches] == ["a", "b", "c"]


def test_auto_detection_can_be_disabled():
    program = compile_source(generate_source(BenchSpec(handlers=4)))
    assert find_dispatch_points(program, auto=False) == []


@pytest.mark.parametrize("min_branches, expected", [(4, 1), (5, 0)])
def test_min_branches(min_branches, expected):
    program = compile_source(generate_source(BenchSpec(handlers=4)))
    assert len(find_dispatch_points(program, min_branches)) == expected


def test_branch_escaping_by_goto_is_rejected():
    program = compile_source(
        "int x; /*@dispatch*/ if (x < 1) { goto out; } else { x = 2; } out: x = 3;"
    )
    assert find_dispatch_points(program) == []


def test_break_inside_switch_arm_is_allowed():
    program = compile_source(
        "int i; int tick; while (1) { input(tick, 0, 1);"
        " switch (i) { case 0: i = 1; break; case 1: i = 0; } }"
    )
    (point,) = find_dispatch_points(program)
    assert len(point.branches) == 2
