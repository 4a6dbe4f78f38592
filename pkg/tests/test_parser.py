#  type: ignore

import pytest
from src.frontend.ast import (
    Assign, BinOp, Block, Call, Cast, Const, Decl, If, IndexLV, IndirectCall, Input, Read,
    ScalarType, Switch, UnOp, While,
)
from src.frontend.exceptions import ParseError, TypeCheckError
from src.frontend.lexer import tokenize
from src.frontend.parser import parse_program
from src.frontend.pipeline import compile_source
from src.frontend.printer import print_program

SEQUENCER = """
int i;
int x;
int tick;
i = 0;
while (1) {
    input(tick, 0, 0);
    switch (i) {
    case 0:
        x = x + 1;
    case 1:
        x = x - 1;
    }
    i = (i + 1) % 2;
}
"""


def _parse(source):
    return parse_program(tokenize(source))


def _main_body(program):
    return program.function("main").body.stmts


def test_minimal_program():
    program = _parse("int x; x = 3;")
    assert len(program.globals) == 1
    assert program.globals[0].decl.cell == "x"
    (stmt,) = _main_body(program)
    assert isinstance(stmt, Assign)
    assert stmt.value == Const(3, ScalarType.INT, None)


def test_sequencer_skeleton():
    program = _parse(SEQUENCER)
    loop = _main_body(program)[1]
    assert isinstance(loop, While)
    switch = loop.body.stmts[1]
    assert isinstance(switch, Switch)
    assert [arm.value for arm in switch.arms] == [0, 1]


def test_syntax_error_location():
    with pytest.raises(ParseError) as error:
        _parse("int x;\nx = ;")
    assert error.value.loc.line == 2
    assert error.value.loc.column == 5


def test_precedence():
    (stmt,) = _main_body(_parse("int x; x = 1 + 2 * 3 < 4 || 0;"))
    top = stmt.value
    assert isinstance(top, BinOp) and top.op == "||"
    comparison = top.left
    assert comparison.op == "<"
    assert comparison.left.op == "+"
    assert comparison.left.right.op == "*"


def test_negative_literal_folds_and_unary_minus_on_variables():
    stmts = _main_body(_parse("int x; int y; x = -5; y = -x;"))
    assert stmts[0].value == Const(-5, ScalarType.INT, None)
    assert isinstance(stmts[1].value, UnOp)


def test_shadowed_locals_get_distinct_cells():
    program = _parse("void f() { int a; { int a; a = 1; } a = 2; }")
    body = program.function("f").body.stmts
    outer = body[0].decl
    inner_block = body[1]
    inner = inner_block.stmts[0].decl
    assert outer.cell == "f.a"
    assert inner.cell == "f.a.1"
    assert inner_block.stmts[1].target.decl == inner
    assert body[2].target.decl == outer


def test_arrays_and_casts():
    stmts = _main_body(_parse("int t[4]; float f; int i; t[i] = 2; f = (float)t[1];"))
    assert isinstance(stmts[0].target, IndexLV)
    assert isinstance(stmts[1].value, Cast)
    assert isinstance(stmts[1].value.operand, Read)


def test_input_and_calls():
    program = _parse(
        "int x; void (*fp)() = { g, h }; void g() { x = 1; } void h() { x = 2; }"
        " int r() { return 4; } input(x, -3, 7); g(); (*fp)(); x = r();"
    )
    stmts = _main_body(program)
    assert isinstance(stmts[0], Input) and stmts[0].lo.value == -3
    assert isinstance(stmts[1], Call) and stmts[1].target is None
    assert isinstance(stmts[2], IndirectCall) and stmts[2].targets == ()
    assert isinstance(stmts[3], Call) and stmts[3].target.decl.name == "x"
    assert program.pointer("fp").targets == ("g", "h")


def test_annotations():
    stmts = _main_body(_parse(
        "int x; void (*fp)() = { g }; void g() { }"
        " /*@dispatch*/ if (x < 1) { x = 1; } else if (x < 2) { x = 2; } else { x = 3; }"
        " /*@dispatch*/ (*fp)();"
    ))
    assert isinstance(stmts[0], If) and stmts[0].annotated
    assert isinstance(stmts[0].orelse, If) and not stmts[0].orelse.annotated
    assert isinstance(stmts[1], IndirectCall) and stmts[1].annotated


def test_annotation_before_plain_statement():
    with pytest.raises(ParseError, match="аннотация"):
        _parse("int x; /*@dispatch*/ x = 1;")


@pytest.mark.parametrize(
    "source, message",
    [
        ("int t[3]; t = 1;", "использован как скаляр"),
        ("int x; x[0] = 1;", "не является массивом"),
        ("y = 1;", "необъявленная переменная"),
        ("int x; float f; x = f;", "ожидался тип int"),
        ("int x; float f; x = x + (int)f + f;", "разные типы"),
        ("float f; if (f) { }", "условие должно иметь тип int"),
        ("float f; f = f % 2.0;", "операнды %"),
        ("void g() { return 1; }", "не возвращает значение"),
    ],
)
def test_type_errors(source, message):
    with pytest.raises(TypeCheckError, match=message):
        _parse(source)


def test_statements_outside_functions_with_explicit_main():
    with pytest.raises(ParseError, match="явно определённой main"):
        _parse("int x; x = 1; void main() { x = 2; }")


def test_declaration_with_initializer_splits_into_assignment():
    stmts = _main_body(_parse("void main() { int x = 4; }"))
    assert isinstance(stmts[0], Decl)
    assert isinstance(stmts[1], Assign)


def test_unbraced_bodies_become_blocks():
    (loop,) = _main_body(_parse("int x; while (x < 3) x = x + 1;"))
    assert isinstance(loop.body, Block)
    assert len(loop.body.stmts) == 1


@pytest.mark.parametrize(
    "source",
    [
        SEQUENCER,
        "int x; float f; input(f, -1.5, 2.0); f = f * 0.1 - -0.25; x = (int)(f / 3.0);",
        "int r() { int k = 2; if (k > 1 && !(k == 3)) { return k; } return 0; }"
        " int x; x = r(); assert(x >= 0);",
        "int t[8]; int i; void (*fp)() = { a, b }; void a() { t[i] = 1; } void b() { t[0] = i % 3; }"
        " input(i, 0, 7); /*@dispatch*/ (*fp)(); L: i = i - 1;",
        "int x; input(x, 0, 3); switch (x) { case -1: x = 0; case 2: { int y = x; x = y; } default: x = 1; }",
        "int x; while (x < 10) { x = x + 1; if (x == 5) { break; } else { continue; } } goto E; x = 0; E: x = 1;",
    ],
)
def test_print_then_parse_is_identity(source):
    program = compile_source(source)
    reparsed = compile_source(print_program(program))
    assert reparsed == program
