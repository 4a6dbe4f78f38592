from src.frontend.ast import (
    Assert, Assign, BinOp, Block, Break, Call, Cast, Const, Continue, Decl, Expr, Function,
    FunctionPointer, Goto, If, IndexLV, IndirectCall, Input, Label, LValue, Program, Read, Return,
    ScalarType, Stmt, Switch, UnOp, VarDecl, While,
)
from src.frontend.lexer import DISPATCH_ANNOTATION

_INDENT = "    "


def format_const(const: Const) -> str:
    if const.ty is ScalarType.FLOAT:
        return repr(float(const.value))
    return str(const.value)


def format_lvalue(lvalue: LValue) -> str:
    if isinstance(lvalue, IndexLV):
        return f"{lvalue.decl.name}[{format_expr(lvalue.index)}]"
    return lvalue.decl.name


def _operand(expr: Expr) -> str:
    text = format_expr(expr)
    if isinstance(expr, (BinOp, UnOp, Cast)) or (isinstance(expr, Const) and expr.value < 0):
        return f"({text})"
    if isinstance(expr, Const) and expr.ty is ScalarType.FLOAT and str(expr.value).startswith("-"):
        return f"({text})"
    return text


def format_expr(expr: Expr) -> str:
    """Текст выражения; вложенные операции берутся в скобки, так что разбор восстанавливает то же дерево."""
    match expr:
        case Const():
            return format_const(expr)
        case Read(lvalue=lvalue):
            return format_lvalue(lvalue)
        case BinOp(op=op, left=left, right=right):
            return f"{_operand(left)} {op} {_operand(right)}"
        case UnOp(op=op, operand=operand):
            return f"{op}{_operand(operand)}"
        case Cast(ty=ty, operand=operand):
            return f"({ty}){_operand(operand)}"
    raise TypeError(f"неизвестное выражение {expr!r}")


def _format_decl(decl: VarDecl) -> str:
    size = f"[{decl.size}]" if decl.size is not None else ""
    return f"{decl.ty} {decl.name}{size};"


def _call_prefix(target: LValue | None) -> str:
    return f"{format_lvalue(target)} = " if target is not None else ""


class _Printer:
    def __init__(self) -> None:
        self._lines: list[str] = []

    def emit(self, depth: int, text: str) -> None:
        self._lines.append(_INDENT * depth + text)

    def text(self) -> str:
        return "\n".join(self._lines) + "\n"

    def block_body(self, block: Block, depth: int) -> None:
        for stmt in block.stmts:
            self.stmt(stmt, depth)

    def stmt(self, stmt: Stmt, depth: int) -> None:
        match stmt:
            case Decl(decl=decl):
                self.emit(depth, _format_decl(decl))
            case Assign(target=target, value=value):
                self.emit(depth, f"{format_lvalue(target)} = {format_expr(value)};")
            case Block():
                self.emit(depth, "{")
                self.block_body(stmt, depth + 1)
                self.emit(depth, "}")
            case If():
                self.if_chain(stmt, depth)
            case While(cond=cond, body=body):
                self.emit(depth, f"while ({format_expr(cond)}) {{")
                self.block_body(body, depth + 1)
                self.emit(depth, "}")
            case Label(name=name):
                self.emit(depth, f"{name}:")
            case Goto(label=label):
                self.emit(depth, f"goto {label};")
            case Break():
                self.emit(depth, "break;")
            case Continue():
                self.emit(depth, "continue;")
            case Return(value=value):
                self.emit(depth, "return;" if value is None else f"return {format_expr(value)};")
            case Call(callee=callee, target=target):
                self.emit(depth, f"{_call_prefix(target)}{callee}();")
            case IndirectCall(pointer=pointer, target=target, annotated=annotated):
                prefix = f"{DISPATCH_ANNOTATION} " if annotated else ""
                self.emit(depth, f"{prefix}{_call_prefix(target)}(*{pointer})();")
            case Switch(scrutinee=scrutinee, arms=arms, annotated=annotated):
                prefix = f"{DISPATCH_ANNOTATION} " if annotated else ""
                self.emit(depth, f"{prefix}switch ({format_expr(scrutinee)}) {{")
                for arm in arms:
                    self.emit(depth, "default:" if arm.value is None else f"case {arm.value}:")
                    self.block_body(arm.body, depth + 1)
                self.emit(depth, "}")
            case Assert(cond=cond):
                self.emit(depth, f"assert({format_expr(cond)});")
            case Input(target=target, lo=lo, hi=hi):
                self.emit(depth, f"input({format_lvalue(target)}, {format_const(lo)}, {format_const(hi)});")
            case _:
                raise TypeError(f"неизвестный оператор {stmt!r}")

    def if_chain(self, stmt: If, depth: int) -> None:
        prefix = f"{DISPATCH_ANNOTATION} " if stmt.annotated else ""
        self.emit(depth, f"{prefix}if ({format_expr(stmt.cond)}) {{")
        self.block_body(stmt.then, depth + 1)
        orelse = stmt.orelse
        while isinstance(orelse, If):
            self.emit(depth, f"}} else if ({format_expr(orelse.cond)}) {{")
            self.block_body(orelse.then, depth + 1)
            orelse = orelse.orelse
        if orelse is not None:
            self.emit(depth, "} else {")
            self.block_body(orelse, depth + 1)
        self.emit(depth, "}")

    def pointer(self, pointer: FunctionPointer) -> None:
        self.emit(0, f"void (*{pointer.name})() = {{ {', '.join(pointer.targets)} }};")

    def function(self, function: Function) -> None:
        ret = str(function.ret) if function.ret is not None else "void"
        self.emit(0, f"{ret} {function.name}() {{")
        self.block_body(function.body, 1)
        self.emit(0, "}")


def print_program(program: Program) -> str:
    """
    Печатает программу в том же диалекте, что принимает парсер.

    Глобальные переменные и указатели идут первыми, затем функции в порядке
    определения; main всегда печатается явной функцией.
    """
    printer = _Printer()
    for decl in program.globals:
        printer.stmt(decl, 0)
    for pointer in program.pointers:
        printer.pointer(pointer)
    for function in program.functions:
        printer.function(function)
    return printer.text()
