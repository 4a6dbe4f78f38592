"""
Поиск точек диспетчеризации: мест, где поток управления делится между
долгими независимыми ветвями (switch в цикле событий, цепочка if/else if,
косвенный вызов).
"""

import logging
from enum import StrEnum
import attrs
from src.frontend.ast import (
    Block, Break, Const, Continue, Goto, If, IndirectCall, Label, Program, Return, Stmt, Switch, While,
    child_blocks, iter_statements,
)
from src.frontend.tokens import Location

logger = logging.getLogger(__name__)


class DispatchKind(StrEnum):
    SWITCH = "switch"
    IF_CHAIN = "if-chain"
    INDIRECT = "indirect"


@attrs.frozen
class Branch:
    index: int
    loc: Location
    label: str


@attrs.frozen
class DispatchPoint:
    """
    Точка диспетчеризации.

    Attributes:
        loc (Location): Позиция оператора.
        kind (DispatchKind): Вид оператора.
        function (str): Функция, в теле которой находится оператор.
        branches (tuple[Branch, ...]): Ветви с номерами 0..n-1 в порядке исходного текста.
        stmt (Stmt): Сам оператор.
    """

    loc: Location
    kind: DispatchKind
    function: str
    branches: tuple[Branch, ...]
    stmt: Stmt = attrs.field(eq=False, repr=False)


def if_chain(stmt: If) -> list[If]:
    """Условия цепочки if / else if по порядку."""
    chain = [stmt]
    while isinstance(chain[-1].orelse, If):
        chain.append(chain[-1].orelse)  # type: ignore[arg-type]
    return chain


def _branches(stmt: Stmt) -> tuple[Branch, ...]:
    match stmt:
        case Switch(arms=arms):
            return tuple(
                Branch(i, arm.loc, "default" if arm.value is None else str(arm.value)) for i, arm in enumerate(arms)
            )
        case IndirectCall(targets=targets):
            return tuple(Branch(i, stmt.loc, name) for i, name in enumerate(targets))
        case If():
            chain = if_chain(stmt)
            branches = [Branch(i, link.then.loc, f"if#{i}") for i, link in enumerate(chain)]
            last = chain[-1].orelse
            branches.append(Branch(len(chain), last.loc if last is not None else chain[-1].loc, "else"))
            return tuple(branches)
    return ()


def _contained(stmt: Stmt, labels: set[str], break_ok: bool, continue_ok: bool) -> bool:
    match stmt:
        case Goto(label=label):
            return label in labels
        case Break():
            return break_ok
        case Continue():
            return continue_ok
        case Return():
            return False
        case Block(stmts=stmts):
            return all(_contained(inner, labels, break_ok, continue_ok) for inner in stmts)
        case While(body=body):
            return _contained(body, labels, True, True)
        case Switch(arms=arms):
            return all(_contained(arm.body, labels, True, continue_ok) for arm in arms)
    return all(_contained(block, labels, break_ok, continue_ok) for block in child_blocks(stmt))


def _self_contained(stmt: Stmt) -> bool:
    """Ветви не передают управление за пределы оператора (кроме break из ветви switch)."""
    if isinstance(stmt, IndirectCall):
        return True
    labels = {inner.name for inner in iter_statements(stmt) if isinstance(inner, Label)}
    if isinstance(stmt, Switch):
        return all(_contained(arm.body, labels, True, False) for arm in stmt.arms)
    return all(_contained(block, labels, False, False) for block in child_blocks(stmt))


def _is_forever(loop: While) -> bool:
    return isinstance(loop.cond, Const) and loop.cond.value != 0


def find_dispatch_points(program: Program, min_branches: int = 2, auto: bool = True) -> list[DispatchPoint]:
    """
    Точки диспетчеризации программы в порядке позиций.

    Возвращает операторы с аннотацией /*@dispatch*/ и, при auto=True, каждый switch или
    косвенный вызов, стоящий непосредственно в теле цикла while с ненулевой
    константой в условии и имеющий не меньше min_branches ветвей.
    """
    found: dict[Location, DispatchPoint] = {}
    for function in program.functions:
        for stmt in iter_statements(function.body):
            candidates: list[Stmt] = []
            if getattr(stmt, "annotated", False):
                candidates.append(stmt)
            if auto and isinstance(stmt, While) and _is_forever(stmt):
                candidates.extend(
                    inner for inner in stmt.body.stmts
                    if isinstance(inner, Switch | IndirectCall) and len(_branches(inner)) >= min_branches
                )
            for candidate in candidates:
                if candidate.loc in found:
                    continue
                if not _self_contained(candidate):
                    logger.warning(
                        "Оператор не может быть точкой диспетчеризации: ветви выходят за его пределы",
                        extra={"loc": str(candidate.loc), "function": function.name},
                    )
                    continue
                kind = {Switch: DispatchKind.SWITCH, If: DispatchKind.IF_CHAIN}.get(type(candidate), DispatchKind.INDIRECT)
                found[candidate.loc] = DispatchPoint(candidate.loc, kind, function.name, _branches(candidate), candidate)
    points = [found[loc] for loc in sorted(found)]
    logger.debug("Точки диспетчеризации найдены", extra={"count": len(points)})
    return points
