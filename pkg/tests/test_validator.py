#  type: ignore

import pytest
from src.frontend.ast import Call, IndirectCall, Switch, iter_statements
from src.frontend.exceptions import (
    BackwardGoto, DuplicateLabel, InvalidGoto, MisplacedBreak, RecursiveCall, TypeCheckError,
    UnresolvedTarget,
)
from src.frontend.pipeline import compile_source
from src.bench.generator import generate_source
from src.bench.schemas.bench_spec import BenchSpec


def test_backward_goto():
    with pytest.raises(BackwardGoto):
        compile_source("int x; L: x = 1; goto L;")


def test_recursive_call_reports_cycle():
    with pytest.raises(RecursiveCall) as error:
        compile_source("void f() { g(); } void g() { f(); } f();")
    assert error.value.cycle == ["f", "g"]


def test_self_recursion_through_pointer():
    with pytest.raises(RecursiveCall) as error:
        compile_source("void (*fp)() = { f }; void f() { (*fp)(); } f();")
    assert error.value.cycle == ["f"]


def test_duplicate_label():
    with pytest.raises(DuplicateLabel):
        compile_source("int x; goto L; L: x = 1; { L: x = 2; }")


@pytest.mark.parametrize(
    "source",
    [
        "int x; missing();",
        "int x; (*nowhere)();",
        "void (*fp)() = { g, ghost }; void g() { } (*fp)();",
        "int x; goto NOWHERE;",
    ],
)
def test_unresolved_targets(source):
    with pytest.raises(UnresolvedTarget):
        compile_source(source)


def test_goto_into_nested_block():
    with pytest.raises(InvalidGoto):
        compile_source("int x; goto L; { L: x = 1; }")


def test_goto_out_of_nested_block_is_allowed():
    program = compile_source("int x; while (x < 3) { x = x + 1; if (x == 2) { goto OUT; } } OUT: x = 0;")
    assert program.validated


@pytest.mark.parametrize("source", ["int x; break;", "int x; switch (x) { case 0: continue; }"])
def test_misplaced_loop_exits(source):
    with pytest.raises(MisplacedBreak):
        compile_source(source)


def test_call_result_type_checked():
    with pytest.raises(TypeCheckError):
        compile_source("float f() { return 1.0; } int x; x = f();")
    with pytest.raises(TypeCheckError):
        compile_source("void g() { } int x; x = g();")


def test_indirect_calls_get_targets_in_declared_order():
    program = compile_source("void (*fp)() = { h, g }; void g() { } void h() { } (*fp)();")
    calls = [stmt for stmt in iter_statements(program.function("main").body) if isinstance(stmt, IndirectCall)]
    assert calls[0].targets == ("h", "g")


def test_generated_sequencer_validates_with_arms_in_source_order():
    spec = BenchSpec(handlers=6, body_size=4, variables=12, touched_fraction=0.5, seed=3)
    program = compile_source(generate_source(spec))
    assert program.validated
    switches = [
        stmt for stmt in iter_statements(program.function("main").body) if isinstance(stmt, Switch)
    ]
    assert [arm.value for arm in switches[0].arms] == list(range(6))


def test_validated_call_graph_is_acyclic_by_independent_traversal():
    program = compile_source(
        "int x; void a() { b(); c(); } void b() { c(); } void c() { x = x + 1; } a(); b();"
    )
    graph = {
        function.name: {
            stmt.callee for stmt in iter_statements(function.body) if isinstance(stmt, Call)
        }
        for function in program.functions
    }
    order = []
    remaining = dict(graph)
    while remaining:
        leaves = [name for name, callees in remaining.items() if not callees & set(remaining)]
        assert leaves
        order.extend(sorted(leaves))
        for name in leaves:
            del remaining[name]
    assert order.index("c") < order.index("b") < order.index("a") < order.index("main")


def test_goto_over_declaration():
    with pytest.raises(InvalidGoto, match="объявление"):
        compile_source("void f() { int x; goto L; int y; L: x = 1; } f();")
