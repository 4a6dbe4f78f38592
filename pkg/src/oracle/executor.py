"""
Конкретное исполнение над множествами состояний с ветвящейся семантикой.

Оператор переводит множество состояний прямого потока в новое множество;
goto переносит состояния в банк меток (LabelBank), метка забирает их обратно.
Выбор значений input() и целей косвенного вызова делегируется InputSource:
при выборке берётся одно случайное значение, при переборе — все.
"""

import logging
from collections.abc import Callable, Iterable
from typing import Protocol
from src.frontend.ast import (
    Assert, Assign, Block, Break, Call, Continue, Decl, Expr, Function, Goto, If, IndexLV, IndirectCall,
    Input, Label, LValue, Program, ProgramPoint, Return, ScalarType, Stmt, Switch, VarDecl, VarLV,
    While,
)
from src.oracle.evaluator import element_index, eval_expr
from src.oracle.exceptions import BudgetExhausted
from src.oracle.state import ConcreteState, ErrorKind, ErrorRecord, Scalar, initial_value, zero_of

logger = logging.getLogger(__name__)

States = set[ConcreteState]
LabelBank = dict[str, States]
Observer = Callable[[ProgramPoint, Iterable[ConcreteState]], None]

RETURN_LABEL = "$return"


class InputSource(Protocol):
    """Источник недетерминизма: значения input() и выбор цели косвенного вызова."""

    def values(self, ty: ScalarType, lo: Scalar, hi: Scalar) -> list[Scalar]:
        ...

    def targets(self, targets: tuple[str, ...]) -> list[str]:
        ...


def _ignore(point: ProgramPoint, states: Iterable[ConcreteState]) -> None:
    return None


def _truthy(value: Scalar) -> bool:
    return value != 0


class ConcreteExecutor:
    """
    Исполнитель программы над множествами конкретных состояний.

    Атрибуты:
        errors (list[ErrorRecord]): Ошибки времени исполнения в порядке возникновения;
            при unique_errors=True повторы отбрасываются.

    Циклы исполняются до исчерпания фронта: при explore_loops=True уже виденные
    в голове цикла состояния не повторяются, что делает перебор конечным на
    конечном пространстве состояний.
    """

    def __init__(
        self,
        program: Program,
        inputs: InputSource,
        observe: Observer | None = None,
        step_budget: int | None = None,
        explore_loops: bool = False,
    ):
        self._program = program
        self._functions = {function.name: function for function in program.functions}
        self._inputs = inputs
        self._observe = observe or _ignore
        self._budget = step_budget
        self._explore = explore_loops
        self._steps = 0
        self._errors: dict[ErrorRecord, None] | list[ErrorRecord] = {} if explore_loops else []
        self.bank: LabelBank = {}
        self._scopes: list[list[VarDecl]] = []
        self._label_depth: dict[str, int] = {}
        self._breaks: list[str] = []
        self._continues: list[str] = []
        self._function: Function | None = None

    @property
    def errors(self) -> list[ErrorRecord]:
        return list(self._errors)

    @property
    def steps(self) -> int:
        return self._steps

    def initial_state(self) -> ConcreteState:
        """Глобальные переменные, инициализированные нулями."""
        return ConcreteState({decl.decl.cell: initial_value(decl.decl) for decl in self._program.globals})

    def run(self, states: States | None = None) -> States:
        entry = self._functions[self._program.entry]
        states = self.exec_function(entry, states if states is not None else {self.initial_state()})
        self._observe(ProgramPoint("exit", entry.loc), states)
        return states

    # --- plumbing ------------------------------------------------------------

    def _record(self, errors: Iterable[ErrorRecord]) -> None:
        if isinstance(self._errors, dict):
            self._errors.update(dict.fromkeys(errors))
        else:
            self._errors.extend(errors)

    def _key(self, label: str) -> str:
        assert self._function is not None
        return f"{self._function.name}:{label}"

    def _goto(self, key: str, states: States) -> States:
        """Переносит состояния в банк; локальные переменные покидаемых блоков удаляются."""
        depth = self._label_depth[key]
        dropped = [decl.cell for frame in self._scopes[depth:] for decl in frame]
        moved = set()
        for state in states:
            for cell in dropped:
                state = state.unbind(cell)
            moved.add(state)
        self.bank.setdefault(key, set()).update(moved)
        return set()

    def _take(self, key: str) -> States:
        return self.bank.pop(key, set())

    def _store(self, state: ConcreteState, target: LValue, value: Scalar) -> ConcreteState:
        if isinstance(target, IndexLV):
            errors: list[ErrorRecord] = []
            index = element_index(state, target, errors)
            self._record(errors)
            return state.set_element(target.decl.cell, index, value)
        return state.set(target.decl.cell, value)

    def _count(self, states: States) -> None:
        self._steps += len(states)
        if self._budget is not None and self._steps > self._budget:
            raise BudgetExhausted(f"исчерпан бюджет в {self._budget} шагов")

    # --- statements ----------------------------------------------------------

    def exec_function(self, function: Function, states: States) -> States:
        saved = (self._function, self._breaks, self._continues)
        self._function, self._breaks, self._continues = function, [], []
        end = self._key(RETURN_LABEL)
        self._label_depth[end] = len(self._scopes)
        states = self.exec_block(function.body, states) | self._take(end)
        self._function, self._breaks, self._continues = saved
        return states

    def exec_block(self, block: Block, states: States) -> States:
        self._scopes.append([])
        depth = len(self._scopes)
        for stmt in block.stmts:
            if isinstance(stmt, Label):
                self._label_depth[self._key(stmt.name)] = depth
        for stmt in block.stmts:
            states = self.exec_stmt(stmt, states)
        frame = self._scopes.pop()
        for decl in reversed(frame):
            states = {state.unbind(decl.cell) for state in states}
        return states

    def exec_stmt(self, stmt: Stmt, states: States) -> States:
        if isinstance(stmt, Label):
            self._observe(ProgramPoint("stmt", stmt.loc), states)
            return states | self._take(self._key(stmt.name))
        if not states:
            return states
        if not isinstance(stmt, Block):
            self._observe(ProgramPoint("stmt", stmt.loc), states)
            self._count(states)
        match stmt:
            case Decl(decl=decl):
                self._scopes[-1].append(decl)
                return {state.bind(decl.cell, initial_value(decl)) for state in states}
            case Assign(target=target, value=value):
                return {self._assign(state, target, value) for state in states}
            case Block():
                return self.exec_block(stmt, states)
            case If():
                return self._exec_if(stmt, states)
            case While():
                return self._exec_while(stmt, states)
            case Goto(label=label):
                return self._goto(self._key(label), states)
            case Break():
                return self._goto(self._breaks[-1], states)
            case Continue():
                return self._goto(self._continues[-1], states)
            case Return(value=value):
                assert self._function is not None
                if value is not None:
                    result = VarLV(VarDecl("$result", self._function.ret, None, self._function.result_cell, False, stmt.loc), stmt.loc)  # type: ignore[arg-type]
                    states = {self._assign(state, result, value) for state in states}
                return self._goto(self._key(RETURN_LABEL), states)
            case Call(callee=callee, target=target):
                return self._exec_call(self._functions[callee], target, states)
            case IndirectCall(targets=targets, target=target):
                return self._exec_indirect(targets, target, states)
            case Switch():
                return self._exec_switch(stmt, states)
            case Assert(cond=cond):
                for state in states:
                    value, errors = eval_expr(state, cond)
                    self._record(errors)
                    if not _truthy(value):
                        self._record([ErrorRecord(ErrorKind.ASSERT_FAILURE, stmt.loc, (value,))])
                return states
            case Input(target=target, lo=lo, hi=hi):
                result: States = set()
                for state in states:
                    for value in self._inputs.values(target.decl.ty, lo.value, hi.value):
                        result.add(self._store(state, target, value))
                return result
        raise TypeError(f"Неизвестный оператор {stmt!r}")

    def _assign(self, state: ConcreteState, target: LValue, value_expr: Expr) -> ConcreteState:
        value, errors = eval_expr(state, value_expr)
        self._record(errors)
        return self._store(state, target, value)

    def _exec_if(self, stmt: If, states: States) -> States:
        taken: States = set()
        skipped: States = set()
        for state in states:
            value, errors = eval_expr(state, stmt.cond)
            self._record(errors)
            (taken if _truthy(value) else skipped).add(state)
        result = self.exec_block(stmt.then, taken)
        if isinstance(stmt.orelse, If):
            return result | self.exec_stmt(stmt.orelse, skipped)
        if isinstance(stmt.orelse, Block):
            return result | self.exec_block(stmt.orelse, skipped)
        return result | skipped

    def _exec_while(self, stmt: While, states: States) -> States:
        break_key = self._key(f"$break@{stmt.loc}")
        continue_key = self._key(f"$continue@{stmt.loc}")
        self._label_depth[break_key] = self._label_depth[continue_key] = len(self._scopes)
        self._breaks.append(break_key)
        self._continues.append(continue_key)
        head = ProgramPoint("loop-head", stmt.loc)
        seen: States = set()
        exits: States = set()
        frontier = states
        while frontier:
            if self._explore:
                frontier = frontier - seen
                seen |= frontier
                if not frontier:
                    break
            self._observe(head, frontier)
            self._count(frontier)
            entering: States = set()
            for state in frontier:
                value, errors = eval_expr(state, stmt.cond)
                self._record(errors)
                (entering if _truthy(value) else exits).add(state)
            frontier = self.exec_block(stmt.body, entering) | self._take(continue_key)
        self._breaks.pop()
        self._continues.pop()
        return exits | self._take(break_key)

    def _exec_call(self, function: Function, target: LValue | None, states: States) -> States:
        if function.ret is not None:
            states = {state.bind(function.result_cell, zero_of(function.ret)) for state in states}
        states = self.exec_function(function, states)
        if function.ret is None:
            return states
        result: States = set()
        for state in states:
            if target is not None:
                state = self._store(state, target, state.get(function.result_cell))  # type: ignore[arg-type]
            result.add(state.unbind(function.result_cell))
        return result

    def _exec_indirect(self, targets: tuple[str, ...], target: LValue | None, states: States) -> States:
        result: States = set()
        for state in states:
            for name in self._inputs.targets(targets):
                result |= self._exec_call(self._functions[name], target, {state})
        return result

    def _exec_switch(self, stmt: Switch, states: States) -> States:
        break_key = self._key(f"$break@{stmt.loc}")
        self._label_depth[break_key] = len(self._scopes)
        self._breaks.append(break_key)
        default = next((index for index, arm in enumerate(stmt.arms) if arm.value is None), None)
        routed: dict[int, States] = {}
        unmatched: States = set()
        for state in states:
            value, errors = eval_expr(state, stmt.scrutinee)
            self._record(errors)
            index = next((i for i, arm in enumerate(stmt.arms) if arm.value == value), default)
            if index is None:
                unmatched.add(state)
            else:
                routed.setdefault(index, set()).add(state)
        result = unmatched
        for index, arm in enumerate(stmt.arms):
            if index in routed:
                result = result | self.exec_block(arm.body, routed[index])
        self._breaks.pop()
        return result | self._take(break_key)


def exec_stmt(
    state: ConcreteState, bank: LabelBank, stmt: Stmt, inputs: InputSource, program: Program
) -> tuple[ConcreteState | None, LabelBank, list[ErrorRecord]]:
    """
    Один оператор уровня функции входа для одного состояния.

    Returns:
        tuple: Прямой преемник (None, если поток ушёл в банк меток), обновлённый банк
            и ошибки. Если недетерминизм input() дал несколько преемников, возвращается
            наименьший по представлению.
    """
    executor = ConcreteExecutor(program, inputs)
    executor.bank = {key: set(states) for key, states in bank.items()}
    executor._function = program.function(program.entry)
    executor._scopes.append([])
    for label in (s for s in executor._function.body.stmts if isinstance(s, Label)):
        executor._label_depth[executor._key(label.name)] = 1
    result = executor.exec_stmt(stmt, {state})
    successor = min(result, key=repr) if result else None
    return successor, executor.bank, executor.errors
