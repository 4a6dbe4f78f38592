import logging
import attrs
from src.frontend.ast import (
    Block, Break, Call, Continue, Decl, Function, Goto, If, IndirectCall, Label, Program, Stmt, Switch,
    While, iter_statements,
)
from src.frontend.exceptions import (
    BackwardGoto, DuplicateLabel, InvalidGoto, MisplacedBreak, RecursiveCall, TypeCheckError,
    UnresolvedTarget,
)
from src.frontend.tokens import Location

logger = logging.getLogger(__name__)


class ProgramValidator:
    """
    Проверки, которые нельзя выполнить при разборе: ссылки на функции и метки,
    направление goto, ацикличность графа вызовов и размещение break/continue.
    """

    def __init__(self, program: Program):
        self._program = program
        self._functions = {function.name: function for function in program.functions}
        self._pointers = {pointer.name: pointer for pointer in program.pointers}

    def validate(self) -> Program:
        functions = tuple(self._resolve_function(function) for function in self._program.functions)
        for function in functions:
            self._check_labels(function)
            self._check_loop_exits(function.body, in_loop=False, in_switch=False)
        self._check_acyclic(functions)
        logger.info(
            "Программа прошла валидацию",
            extra={"functions": len(functions), "pointers": len(self._pointers)},
        )
        return attrs.evolve(self._program, functions=functions, validated=True)

    # --- call targets --------------------------------------------------------

    def _resolve_function(self, function: Function) -> Function:
        return attrs.evolve(function, body=self._resolve_block(function.body))

    def _resolve_block(self, block: Block) -> Block:
        return attrs.evolve(block, stmts=tuple(self._resolve_stmt(stmt) for stmt in block.stmts))

    def _resolve_stmt(self, stmt: Stmt) -> Stmt:
        match stmt:
            case Block():
                return self._resolve_block(stmt)
            case If(then=then, orelse=orelse):
                resolved_else: Block | If | None = orelse
                if isinstance(orelse, Block):
                    resolved_else = self._resolve_block(orelse)
                elif isinstance(orelse, If):
                    resolved_else = self._resolve_stmt(orelse)  # type: ignore[assignment]
                return attrs.evolve(stmt, then=self._resolve_block(then), orelse=resolved_else)
            case While(body=body):
                return attrs.evolve(stmt, body=self._resolve_block(body))
            case Switch(arms=arms):
                return attrs.evolve(
                    stmt, arms=tuple(attrs.evolve(arm, body=self._resolve_block(arm.body)) for arm in arms)
                )
            case Call():
                self._check_callee(stmt.callee, stmt.target, stmt.loc)
                return stmt
            case IndirectCall():
                pointer = self._pointers.get(stmt.pointer)
                if pointer is None:
                    raise UnresolvedTarget(f"неизвестный указатель на функцию {stmt.pointer}", stmt.loc)
                for target in pointer.targets:
                    self._check_callee(target, stmt.target, stmt.loc)
                return attrs.evolve(stmt, targets=pointer.targets)
        return stmt

    def _check_callee(self, name: str, target: object, loc: Location) -> None:
        callee = self._functions.get(name)
        if callee is None:
            raise UnresolvedTarget(f"неизвестная функция {name}", loc)
        if target is None:
            return
        if callee.ret is None:
            raise TypeCheckError(f"функция {name} не возвращает значение", loc)
        if callee.ret is not target.decl.ty:  # type: ignore[attr-defined]
            raise TypeCheckError(f"функция {name} возвращает {callee.ret}, а не {target.decl.ty}", loc)  # type: ignore[attr-defined]

    # --- call graph ----------------------------------------------------------

    @staticmethod
    def _callees(function: Function) -> list[str]:
        callees: list[str] = []
        for stmt in iter_statements(function.body):
            if isinstance(stmt, Call):
                callees.append(stmt.callee)
            elif isinstance(stmt, IndirectCall):
                callees.extend(stmt.targets)
        return callees

    def _check_acyclic(self, functions: tuple[Function, ...]) -> None:
        graph = {function.name: self._callees(function) for function in functions}
        done: set[str] = set()
        stack: list[str] = []
        on_stack: set[str] = set()

        def visit(name: str) -> None:
            stack.append(name)
            on_stack.add(name)
            for callee in graph[name]:
                if callee in on_stack:
                    cycle = stack[stack.index(callee):]
                    raise RecursiveCall(cycle, self._functions[name].loc)
                if callee not in done:
                    visit(callee)
            stack.pop()
            on_stack.discard(name)
            done.add(name)

        for function in functions:
            if function.name not in done:
                visit(function.name)

    # --- labels and gotos ----------------------------------------------------

    def _check_labels(self, function: Function) -> None:
        labels: dict[str, Location] = {}
        for stmt in iter_statements(function.body):
            if isinstance(stmt, Label):
                if stmt.name in labels:
                    raise DuplicateLabel(f"метка {stmt.name} объявлена повторно в {function.name}", stmt.loc)
                labels[stmt.name] = stmt.loc
        self._check_gotos(function.body, [], labels)

    def _check_gotos(self, block: Block, visible: list[set[str]], labels: dict[str, Location]) -> None:
        """visible[k] — метки k-го объемлющего блока, доступные из текущей позиции."""
        for index, stmt in enumerate(block.stmts):
            ahead = self._labels_ahead(block.stmts, index)
            if isinstance(stmt, Goto):
                self._check_goto(stmt, [*visible, ahead], labels)
                continue
            for child in self._nested_blocks(stmt):
                self._check_gotos(child, [*visible, ahead], labels)

    @staticmethod
    def _labels_ahead(stmts: tuple[Stmt, ...], index: int) -> set[str]:
        """Метки после позиции index, до которых можно дойти, не пропуская объявлений."""
        ahead: set[str] = set()
        for stmt in stmts[index + 1:]:
            if isinstance(stmt, Decl):
                break
            if isinstance(stmt, Label):
                ahead.add(stmt.name)
        return ahead

    @staticmethod
    def _nested_blocks(stmt: Stmt) -> list[Block]:
        match stmt:
            case Block():
                return [stmt]
            case If(then=then, orelse=orelse):
                nested = [then]
                while isinstance(orelse, If):
                    nested.append(orelse.then)
                    orelse = orelse.orelse
                if isinstance(orelse, Block):
                    nested.append(orelse)
                return nested
            case While(body=body):
                return [body]
            case Switch(arms=arms):
                return [arm.body for arm in arms]
        return []

    @staticmethod
    def _check_goto(goto: Goto, visible: list[set[str]], labels: dict[str, Location]) -> None:
        target = labels.get(goto.label)
        if target is None:
            raise UnresolvedTarget(f"неизвестная метка {goto.label}", goto.loc)
        if target < goto.loc:
            raise BackwardGoto(f"goto {goto.label} ведёт назад", goto.loc)
        if not any(goto.label in scope for scope in visible):
            raise InvalidGoto(f"goto {goto.label} ведёт внутрь вложенного блока или через объявление", goto.loc)

    def _check_loop_exits(self, stmt: Stmt, in_loop: bool, in_switch: bool) -> None:
        match stmt:
            case Break():
                if not (in_loop or in_switch):
                    raise MisplacedBreak("break вне цикла или switch", stmt.loc)
            case Continue():
                if not in_loop:
                    raise MisplacedBreak("continue вне цикла", stmt.loc)
            case While(body=body):
                self._check_loop_exits(body, in_loop=True, in_switch=in_switch)
            case Switch(arms=arms):
                for arm in arms:
                    self._check_loop_exits(arm.body, in_loop=in_loop, in_switch=True)
            case Block(stmts=stmts):
                for inner in stmts:
                    self._check_loop_exits(inner, in_loop, in_switch)
            case If():
                for block in self._nested_blocks(stmt):
                    self._check_loop_exits(block, in_loop, in_switch)


def validate(program: Program) -> Program:
    """
    Проверяет разобранную программу и разрешает цели косвенных вызовов.

    Args:
        program (Program): Результат parse_program().

    Returns:
        Program: Та же программа с заполненными IndirectCall.targets и validated=True.

    Raises:
        BackwardGoto: goto на метку, стоящую раньше.
        InvalidGoto: goto внутрь вложенного блока или через объявление переменной.
        DuplicateLabel: Метка повторяется в функции.
        RecursiveCall: Граф вызовов содержит цикл.
        UnresolvedTarget: Неизвестная функция, указатель или метка.
        MisplacedBreak: break или continue вне цикла.
        TypeCheckError: Тип результата вызова не совпадает с целью присваивания.
    """
    return ProgramValidator(program).validate()
