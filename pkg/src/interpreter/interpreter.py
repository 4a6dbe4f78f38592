"""
Денотационный абстрактный интерпретатор мини-C.

Оператор переводит прямое окружение в новое; goto, break, continue и return
переносят окружение в ожидающие метки (pending), метка забирает его обратно.
Циклы вычисляются поиском постфиксной точки в режиме ITERATE, затем тело
анализируется ещё раз от найденного инварианта в текущем режиме.
"""

import logging
import time
from collections.abc import Iterator
from contextlib import contextmanager
from src.domain.abstract_env import AbstractEnv
from src.domain.alarms import Alarm
from src.domain.exceptions import UnboundVariable
from src.domain.interval import Interval
from src.domain.transfer import (
    assert_cond, assign, assign_interval, del_var, eval_interval, guard, guard_case, new_var,
    refine_not_equal_all,
)
from src.frontend.ast import (
    Assert, Assign, Block, Break, Call, Continue, Decl, Function, Goto, If, IndirectCall, Input, Label,
    LValue, Program, ProgramPoint, Return, Stmt, Switch, VarDecl, VarLV, While, iter_statements,
)
from src.frontend.tokens import Location
from src.interpreter.exceptions import InternalScopeError
from src.interpreter.flow_state import BranchResult, FlowState
from src.interpreter.interfaces.dispatcher_interface import Dispatcher
from src.interpreter.invariants import InvariantStore, RetentionPolicy
from src.interpreter.lfp import certify, lfp
from src.interpreter.mode import Mode
from src.interpreter.result import AnalysisResult
from src.interpreter.schemas.analysis_options import AnalysisOptions
from src.interpreter.warning_log import WarningLog
from src.parallel.dispatch_points import DispatchKind, DispatchPoint, find_dispatch_points, if_chain

logger = logging.getLogger(__name__)

RETURN_LABEL = "$return"


def loop_heads(program: Program) -> list[Location]:
    """Позиции всех циклов программы."""
    return sorted(
        stmt.loc
        for function in program.functions
        for stmt in iter_statements(function.body)
        if isinstance(stmt, While)
    )


def _fold(envs: list[AbstractEnv]) -> AbstractEnv:
    result = AbstractEnv.BOTTOM
    for env in envs:
        result = result.join(env)
    return result


class Interpreter:
    """
    Абстрактный интерпретатор программы.

    Алгоритм работы
    ---------------
    1. analyze_program начинает с окружения, где глобальные переменные имеют
       полный диапазон типа, и анализирует входную функцию в режиме REPORT.
    2. Вызовы встраиваются: тело вызываемой функции анализируется в текущем окружении.
    3. Цикл: lfp в режиме ITERATE, независимая проверка постфиксной точки,
       затем повторный анализ тела от инварианта в текущем режиме.
    4. Точки диспетчеризации, если задан dispatcher, вычисляются по ветвям через
       него; результаты ветвей объединяются строго по возрастанию номера ветви.

    Атрибуты класса
    ---------------
    store : InvariantStore
        Инварианты циклов и окружения, удерживаемые политикой хранения.
    dispatch_points : list[DispatchPoint]
        Найденные точки диспетчеризации.

    Логирование
    -----------
    * **info**  — начало и конец анализа программы;
    * **debug** — инварианты циклов и точки диспетчеризации;
    * **error** — провал повторной проверки (логирует lfp.certify).
    """

    def __init__(
        self,
        program: Program,
        options: AnalysisOptions | None = None,
        dispatcher: Dispatcher | None = None,
        dispatch_points: list[DispatchPoint] | None = None,
    ):
        self._program = program
        self._options = options or AnalysisOptions()
        self._ladder = self._options.widening_ladder()
        self._functions = {function.name: function for function in program.functions}
        self._dispatcher = dispatcher
        if dispatch_points is None:
            dispatch_points = find_dispatch_points(
                program, self._options.min_branches, self._options.auto_dispatch
            )
        self._points = {point.loc: point for point in dispatch_points}
        self._reset()

    def _reset(self) -> None:
        self.store = InvariantStore(self._options.retention, loop_heads(self._program))
        self._live = 0
        self._reset_context()

    def _reset_context(self) -> None:
        """Состояние обхода; накопленные инварианты не трогает."""
        self._mode = Mode.REPORT
        self._pending: dict[str, AbstractEnv] = {}
        self._warnings = WarningLog()
        self._scopes: list[list[VarDecl]] = []
        self._label_depth: dict[str, int] = {}
        self._breaks: list[str] = []
        self._continues: list[str] = []
        self._function: Function | None = None
        self._in_branch = False
        self._branch_loops: dict[Location, AbstractEnv] | None = None

    @property
    def dispatch_points(self) -> list[DispatchPoint]:
        return list(self._points.values())

    @property
    def program(self) -> Program:
        return self._program

    @property
    def options(self) -> AnalysisOptions:
        return self._options

    # --- entry points --------------------------------------------------------

    def initial_env(self) -> AbstractEnv:
        """Глобальные переменные с полным диапазоном типа."""
        env = AbstractEnv.empty()
        for decl in self._program.globals:
            env = new_var(decl.decl, env)
        return env

    def analyze_program(self, entry_env: AbstractEnv | None = None) -> AnalysisResult:
        """
        Анализирует программу целиком.

        Returns:
            AnalysisResult: Конечное окружение, таблица инвариантов циклов и предупреждения.

        Raises:
            CheckFailed: Инвариант цикла не прошёл повторную проверку.
            NonTermination: Цикл не стабилизировался за предел итераций.
        """
        self._reset()
        entry = self._functions[self._program.entry]
        env = entry_env if entry_env is not None else self.initial_env()
        logger.info(
            "Анализ программы начат",
            extra={"entry": entry.name, "cells": len(env), "dispatch_points": len(self._points)},
        )
        final = self._exec_function(entry, env)
        self.store.touch(self._live)
        result = AnalysisResult(
            final=final,
            invariants=dict(self.store.loop_invariants),
            warnings=self._warnings.sorted(),
            points=dict(self.store.points),
            peak_retained=self.store.peak,
            distinct_nodes=self.store.distinct_nodes(),
        )
        logger.info(
            "Анализ программы завершён",
            extra={
                "warnings": len(result.warnings),
                "loops": len(result.invariants),
                "peak_retained": result.peak_retained,
            },
        )
        return result

    @contextmanager
    def _entry_context(self, fs: FlowState, mode: Mode) -> Iterator[None]:
        self._reset_context()
        self._function = self._functions[self._program.entry]
        self._scopes.append([])
        for stmt in self._function.body.stmts:
            if isinstance(stmt, Label):
                self._label_depth[self._key(stmt.name)] = 1
        self._pending = dict(fs.pending)
        self._warnings = WarningLog(fs.warnings)
        self._mode = mode
        yield

    def analyze_stmt(self, stmt: Stmt, fs: FlowState, mode: Mode) -> FlowState:
        """
        Один оператор уровня входной функции.

        Ключи pending имеют вид "функция:метка".
        """
        with self._entry_context(fs, mode):
            direct = self._stmt(stmt, fs.direct)
            return FlowState(direct, dict(self._pending), self._warnings.sorted())

    def analyze_while(self, stmt: While, fs: FlowState, mode: Mode) -> FlowState:
        return self.analyze_stmt(stmt, fs, mode)

    def analyze_call(self, site: Call | IndirectCall, fs: FlowState, mode: Mode) -> FlowState:
        return self.analyze_stmt(site, fs, mode)

    def analyze_branch(self, point: DispatchPoint, index: int, base: AbstractEnv, mode: Mode) -> BranchResult:
        """
        Одна ветвь точки диспетчеризации от окружения base.

        Вычисляется в собственном контексте, не зависящем от места вызова, поэтому
        результат одинаков у мастера и у воркера. Вложенные точки диспетчеризации
        внутри ветви анализируются последовательно.
        """
        saved = (
            self._function, self._scopes, self._breaks, self._continues, self._pending,
            self._warnings, self._mode, self._in_branch, self._branch_loops,
        )
        self._function = self._functions[point.function]
        self._scopes = [[]]
        self._breaks, self._continues = [], []
        self._pending = {}
        self._warnings = WarningLog()
        self._mode = mode
        self._in_branch = True
        self._branch_loops = {}
        started = time.perf_counter_ns()
        try:
            env = self._branch(point, index, base)
            if self._pending:
                raise InternalScopeError(f"ветвь {index} оставила переходы к {sorted(self._pending)}", point.loc)
            return BranchResult(
                index=index,
                env=env,
                warnings=self._warnings.sorted(),
                invariants=tuple(sorted(self._branch_loops.items())),
                micros=(time.perf_counter_ns() - started) // 1000,
            )
        finally:
            (
                self._function, self._scopes, self._breaks, self._continues, self._pending,
                self._warnings, self._mode, self._in_branch, self._branch_loops,
            ) = saved

    # --- plumbing ------------------------------------------------------------

    @property
    def _dispatches(self) -> bool:
        """Ветви отдаются диспетчеру только на верхнем уровне и при хранении одних голов циклов."""
        return (
            self._dispatcher is not None
            and not self._in_branch
            and self._options.retention is RetentionPolicy.LOOP_HEADS
        )

    def _key(self, label: str) -> str:
        assert self._function is not None
        return f"{self._function.name}:{label}"

    def _report(self, alarms: list[Alarm]) -> None:
        if self._mode is Mode.REPORT and alarms:
            self._warnings.add(alarms)

    def _observe(self, kind: str, loc: Location, env: AbstractEnv) -> None:
        if self._mode is Mode.REPORT:
            self.store.record(ProgramPoint(kind, loc), env)

    def _record_loop(self, loc: Location, env: AbstractEnv) -> None:
        if self._branch_loops is not None:
            self._branch_loops[loc] = self._branch_loops.get(loc, AbstractEnv.BOTTOM).join(env)
        else:
            self.store.record_loop(loc, env)

    def _goto(self, key: str, env: AbstractEnv) -> AbstractEnv:
        """Переносит окружение к метке; локальные переменные покидаемых блоков удаляются."""
        depth = self._label_depth.get(key)
        if depth is None:
            raise InternalScopeError(f"метка {key} не зарегистрирована")
        try:
            for frame in reversed(self._scopes[depth:]):
                for decl in reversed(frame):
                    env = del_var(decl, env)
        except UnboundVariable as error:
            raise InternalScopeError(f"переход к {key}: {error}") from error
        self._pending[key] = self._pending.get(key, AbstractEnv.BOTTOM).join(env)
        return AbstractEnv.BOTTOM

    def _take(self, key: str) -> AbstractEnv:
        return self._pending.pop(key, AbstractEnv.BOTTOM)

    # --- statements ----------------------------------------------------------

    def _exec_function(self, function: Function, env: AbstractEnv) -> AbstractEnv:
        saved = (self._function, self._breaks, self._continues)
        self._function, self._breaks, self._continues = function, [], []
        end = self._key(RETURN_LABEL)
        self._label_depth[end] = len(self._scopes)
        self._observe("function-entry", function.loc, env)
        env = self._block(function.body, env).join(self._take(end))
        self._observe("function-exit", function.loc, env)
        leftover = [key for key in self._pending if key.startswith(f"{function.name}:")]
        if leftover:
            raise InternalScopeError(f"необработанные переходы {leftover}", function.loc)
        self._function, self._breaks, self._continues = saved
        return env

    def _block(self, block: Block, env: AbstractEnv) -> AbstractEnv:
        if env.is_bottom:
            return env
        self._scopes.append([])
        depth = len(self._scopes)
        for stmt in block.stmts:
            if isinstance(stmt, Label):
                self._label_depth[self._key(stmt.name)] = depth
        self._observe("block-entry", block.loc, env)
        for stmt in block.stmts:
            env = self._stmt(stmt, env)
        frame = self._scopes.pop()
        for decl in reversed(frame):
            env = del_var(decl, env)
        self._observe("block-exit", block.loc, env)
        return env

    def _stmt(self, stmt: Stmt, env: AbstractEnv) -> AbstractEnv:
        if isinstance(stmt, Label):
            self._observe("stmt", stmt.loc, env)
            return env.join(self._take(self._key(stmt.name)))
        if env.is_bottom:
            return env
        if not isinstance(stmt, Block):
            self._observe("stmt", stmt.loc, env)
        self.store.touch(self._live + len(self._pending))
        point = self._points.get(stmt.loc)
        if point is not None and point.stmt is stmt and self._dispatches:
            return self._dispatch(point, env)
        match stmt:
            case Decl(decl=decl):
                self._scopes[-1].append(decl)
                return new_var(decl, env)
            case Assign(target=target, value=value):
                env, alarms = assign(target, value, env)
                self._report(alarms)
                return env
            case Block():
                return self._block(stmt, env)
            case If():
                return self._if(stmt, env)
            case While():
                return self._while(stmt, env)
            case Goto(label=label):
                return self._goto(self._key(label), env)
            case Break():
                return self._goto(self._breaks[-1], env)
            case Continue():
                return self._goto(self._continues[-1], env)
            case Return(value=value):
                assert self._function is not None
                if value is not None:
                    ret = self._function.ret
                    result = VarLV(VarDecl("$result", ret, None, self._function.result_cell, False, stmt.loc), stmt.loc)  # type: ignore[arg-type]
                    env, alarms = assign(result, value, env)
                    self._report(alarms)
                return self._goto(self._key(RETURN_LABEL), env)
            case Call(callee=callee, target=target):
                return self._call(self._functions[callee], target, env)
            case IndirectCall(targets=targets, target=target):
                return _fold([self._call(self._functions[name], target, env) for name in targets])
            case Switch():
                return self._switch(stmt, env)
            case Assert(cond=cond):
                env, alarms = assert_cond(cond, env, stmt.loc)
                self._report(alarms)
                return env
            case Input(target=target, lo=lo, hi=hi):
                value = Interval.of(target.decl.ty, lo.value, hi.value)
                env, alarms = assign_interval(target, value, env)
                self._report(alarms)
                return env
        raise TypeError(f"Неизвестный оператор {stmt!r}")

    def _if(self, stmt: If, env: AbstractEnv) -> AbstractEnv:
        _, alarms = eval_interval(stmt.cond, env)
        self._report(alarms)
        then_env, _ = guard(stmt.cond, True, env)
        else_env, _ = guard(stmt.cond, False, env)
        result = self._block(stmt.then, then_env)
        if isinstance(stmt.orelse, If):
            return result.join(self._stmt(stmt.orelse, else_env))
        if isinstance(stmt.orelse, Block):
            return result.join(self._block(stmt.orelse, else_env))
        return result.join(else_env)

    def _while(self, stmt: While, env: AbstractEnv) -> AbstractEnv:
        break_key = self._key(f"$break@{stmt.loc}")
        continue_key = self._key(f"$continue@{stmt.loc}")
        self._label_depth[break_key] = self._label_depth[continue_key] = len(self._scopes)
        self._breaks.append(break_key)
        self._continues.append(continue_key)
        entry = env

        def phi(head: AbstractEnv) -> AbstractEnv:
            saved_pending, saved_mode = self._pending, self._mode
            self._pending, self._mode = dict(saved_pending), Mode.ITERATE
            try:
                entering, _ = guard(stmt.cond, True, head)
                back = self._block(stmt.body, entering).join(self._take(continue_key))
            finally:
                self._pending, self._mode = saved_pending, saved_mode
            return entry.join(back)

        self._live += 2
        try:
            invariant = lfp(
                phi,
                entry,
                self._ladder,
                self._options.iter_bound,
                self._options.widening_delay,
                self._options.narrowing_passes,
                stmt.loc,
            )
            certify(phi, invariant, stmt.loc)
        finally:
            self._live -= 2
        if self._mode is Mode.REPORT:
            self._record_loop(stmt.loc, invariant)
        logger.debug("Инвариант цикла", extra={"loc": str(stmt.loc), "cells": len(invariant), "mode": self._mode})
        _, alarms = eval_interval(stmt.cond, invariant)
        self._report(alarms)
        entering, _ = guard(stmt.cond, True, invariant)
        self._block(stmt.body, entering)
        self._take(continue_key)
        exiting, _ = guard(stmt.cond, False, invariant)
        self._breaks.pop()
        self._continues.pop()
        return exiting.join(self._take(break_key))

    def _call(self, function: Function, target: LValue | None, env: AbstractEnv) -> AbstractEnv:
        if function.ret is not None:
            env = env.new_var(function.result_cell, Interval.const(function.ret, 0))
        env = self._exec_function(function, env)
        if function.ret is None or env.is_bottom:
            return env
        if target is not None:
            env, alarms = assign_interval(target, env.get(function.result_cell), env)
            self._report(alarms)
        return env.del_var(function.result_cell)

    def _switch_arm(self, stmt: Switch, index: int, env: AbstractEnv, break_key: str) -> AbstractEnv:
        arm = stmt.arms[index]
        if arm.value is None:
            values = [other.value for other in stmt.arms if other.value is not None]
            entry, _ = refine_not_equal_all(stmt.scrutinee, values, env)
        else:
            entry, _ = guard_case(stmt.scrutinee, arm.value, env)
        return self._block(arm.body, entry).join(self._take(break_key))

    def _unmatched(self, stmt: Switch, env: AbstractEnv) -> AbstractEnv:
        if any(arm.value is None for arm in stmt.arms):
            return AbstractEnv.BOTTOM
        values = [arm.value for arm in stmt.arms if arm.value is not None]
        return refine_not_equal_all(stmt.scrutinee, values, env)[0]

    def _switch(self, stmt: Switch, env: AbstractEnv) -> AbstractEnv:
        _, alarms = eval_interval(stmt.scrutinee, env)
        self._report(alarms)
        break_key = self._key(f"$break@{stmt.loc}")
        self._label_depth[break_key] = len(self._scopes)
        self._breaks.append(break_key)
        results = [self._switch_arm(stmt, index, env, break_key) for index in range(len(stmt.arms))]
        self._breaks.pop()
        return _fold(results).join(self._unmatched(stmt, env))

    # --- dispatch points -----------------------------------------------------

    def _if_branch(self, stmt: If, index: int, env: AbstractEnv) -> AbstractEnv:
        chain = if_chain(stmt)
        for link in chain[:index]:
            env, _ = guard(link.cond, False, env)
        if index < len(chain):
            return self._block(chain[index].then, guard(chain[index].cond, True, env)[0])
        last = chain[-1].orelse
        return self._block(last, env) if isinstance(last, Block) else env

    def _branch(self, point: DispatchPoint, index: int, base: AbstractEnv) -> AbstractEnv:
        stmt = point.stmt
        if point.kind is DispatchKind.SWITCH:
            assert isinstance(stmt, Switch)
            break_key = self._key(f"$break@{stmt.loc}")
            self._label_depth[break_key] = len(self._scopes)
            self._breaks.append(break_key)
            return self._switch_arm(stmt, index, base, break_key)
        if point.kind is DispatchKind.IF_CHAIN:
            assert isinstance(stmt, If)
            return self._if_branch(stmt, index, base)
        assert isinstance(stmt, IndirectCall)
        return self._call(self._functions[stmt.targets[index]], stmt.target, base)

    def _dispatch_prelude(self, point: DispatchPoint, env: AbstractEnv) -> None:
        """Предупреждения и точки наблюдения, которые у мастера возникают до ветвей."""
        stmt = point.stmt
        if isinstance(stmt, Switch):
            self._report(eval_interval(stmt.scrutinee, env)[1])
        elif isinstance(stmt, If):
            for position, link in enumerate(if_chain(stmt)):
                if position > 0:
                    self._observe("stmt", link.loc, env)
                self._report(eval_interval(link.cond, env)[1])
                env, _ = guard(link.cond, False, env)
                if env.is_bottom:
                    break

    def _dispatch(self, point: DispatchPoint, env: AbstractEnv) -> AbstractEnv:
        assert self._dispatcher is not None
        self._dispatch_prelude(point, env)
        width = len(point.branches)
        self._live += width
        try:
            results = self._dispatcher.dispatch(point, env, self._mode, self.analyze_branch)
            self.store.touch(self._live + len(self._pending))
        finally:
            self._live -= width
        results = sorted(results, key=lambda result: result.index)
        if [result.index for result in results] != list(range(width)):
            raise InternalScopeError(f"неполный набор ветвей точки диспетчеризации {point.loc}", point.loc)
        merged = _fold([result.env for result in results])
        if self._mode is Mode.REPORT:
            for result in results:
                self._warnings.add(result.warnings)
                for loc, invariant in result.invariants:
                    self._record_loop(loc, invariant)
        logger.debug(
            "Точка диспетчеризации вычислена",
            extra={"loc": str(point.loc), "branches": width, "mode": self._mode},
        )
        if isinstance(point.stmt, Switch):
            merged = merged.join(self._unmatched(point.stmt, env))
        return merged
