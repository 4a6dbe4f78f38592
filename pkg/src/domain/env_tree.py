"""
Персистентное весо-сбалансированное дерево поиска по имени ячейки.

Узлы неизменяемы; любая операция копирует только путь от корня до изменённых
ключей, остальные поддеревья разделяются с исходным деревом. Пустое дерево — None.
Бинарные операции сначала сравнивают поддеревья по идентичности и не спускаются
в физически общие части.
"""

from collections.abc import Callable, Iterator
from typing import Any, Optional
import attrs

_DELTA = 3
_GAMMA = 2


class Node:
    __slots__ = ("left", "key", "value", "right", "size")

    def __init__(self, left: Optional["Node"], key: str, value: Any, right: Optional["Node"]):
        self.left = left
        self.key = key
        self.value = value
        self.right = right
        self.size = size(left) + size(right) + 1


Tree = Optional[Node]


@attrs.define
class VisitCounter:
    """Счётчик посещённых пар узлов, накапливается на время одной операции."""

    visits: int = 0


def size(node: Tree) -> int:
    return node.size if node is not None else 0


def _weight(node: Tree) -> int:
    return size(node) + 1


def _single_left(left: Tree, key: str, value: Any, right: Node) -> Node:
    return Node(Node(left, key, value, right.left), right.key, right.value, right.right)


def _single_right(left: Node, key: str, value: Any, right: Tree) -> Node:
    return Node(left.left, left.key, left.value, Node(left.right, key, value, right))


def _double_left(left: Tree, key: str, value: Any, right: Node) -> Node:
    middle = right.left
    assert middle is not None
    return Node(
        Node(left, key, value, middle.left),
        middle.key, middle.value,
        Node(middle.right, right.key, right.value, right.right),
    )


def _double_right(left: Node, key: str, value: Any, right: Tree) -> Node:
    middle = left.right
    assert middle is not None
    return Node(
        Node(left.left, left.key, left.value, middle.left),
        middle.key, middle.value,
        Node(middle.right, key, value, right),
    )


def balance(left: Tree, key: str, value: Any, right: Tree) -> Node:
    """Сборка узла при перекосе весов не больше чем на один элемент."""
    left_weight = _weight(left)
    right_weight = _weight(right)
    if right_weight > _DELTA * left_weight:
        assert right is not None
        if _weight(right.left) < _GAMMA * _weight(right.right):
            return _single_left(left, key, value, right)
        return _double_left(left, key, value, right)
    if left_weight > _DELTA * right_weight:
        assert left is not None
        if _weight(left.right) < _GAMMA * _weight(left.left):
            return _single_right(left, key, value, right)
        return _double_right(left, key, value, right)
    return Node(left, key, value, right)


def link(left: Tree, key: str, value: Any, right: Tree) -> Node:
    """Сборка узла из поддеревьев произвольного размера; все ключи left меньше key, right — больше."""
    if left is None:
        return insert(right, key, value)
    if right is None:
        return insert(left, key, value)
    if _DELTA * _weight(left) < _weight(right):
        return balance(link(left, key, value, right.left), right.key, right.value, right.right)
    if _DELTA * _weight(right) < _weight(left):
        return balance(left.left, left.key, left.value, link(left.right, key, value, right))
    return Node(left, key, value, right)


def _pop_min(node: Node) -> tuple[str, Any, Tree]:
    if node.left is None:
        return node.key, node.value, node.right
    key, value, rest = _pop_min(node.left)
    return key, value, balance(rest, node.key, node.value, node.right)


def merge(left: Tree, right: Tree) -> Tree:
    """Склейка двух деревьев, все ключи left меньше ключей right."""
    if left is None:
        return right
    if right is None:
        return left
    if _DELTA * _weight(left) < _weight(right):
        return balance(merge(left, right.left), right.key, right.value, right.right)
    if _DELTA * _weight(right) < _weight(left):
        return balance(left.left, left.key, left.value, merge(left.right, right))
    key, value, rest = _pop_min(right)
    return balance(left, key, value, rest)


def lookup(node: Tree, key: str) -> tuple[bool, Any]:
    while node is not None:
        if key < node.key:
            node = node.left
        elif node.key < key:
            node = node.right
        else:
            return True, node.value
    return False, None


def insert(node: Tree, key: str, value: Any) -> Node:
    if node is None:
        return Node(None, key, value, None)
    if key < node.key:
        return balance(insert(node.left, key, value), node.key, node.value, node.right)
    if node.key < key:
        return balance(node.left, node.key, node.value, insert(node.right, key, value))
    if node.value is value:
        return node
    return Node(node.left, key, value, node.right)


def delete(node: Tree, key: str) -> Tree:
    if node is None:
        return None
    if key < node.key:
        left = delete(node.left, key)
        return node if left is node.left else balance(left, node.key, node.value, node.right)
    if node.key < key:
        right = delete(node.right, key)
        return node if right is node.right else balance(node.left, node.key, node.value, right)
    return merge(node.left, node.right)


def split(node: Tree, key: str) -> tuple[Tree, bool, Any, Tree]:
    """Делит дерево на ключи меньше key, значение по key (если есть) и ключи больше key."""
    if node is None:
        return None, False, None, None
    if key < node.key:
        left, found, value, right = split(node.left, key)
        return left, found, value, link(right, node.key, node.value, node.right)
    if node.key < key:
        left, found, value, right = split(node.right, key)
        return link(node.left, node.key, node.value, left), found, value, right
    return node.left, True, node.value, node.right


def items(node: Tree) -> Iterator[tuple[str, Any]]:
    """Пары (ключ, значение) в лексикографическом порядке ключей."""
    stack: list[Node] = []
    while stack or node is not None:
        while node is not None:
            stack.append(node)
            node = node.left
        node = stack.pop()
        yield node.key, node.value
        node = node.right


def height(node: Tree) -> int:
    if node is None:
        return 0
    return 1 + max(height(node.left), height(node.right))


def collect_nodes(node: Tree, seen: set[int]) -> None:
    """Добавляет в seen идентификаторы всех узлов, ещё не встреченных; общие поддеревья обходятся один раз."""
    while node is not None and id(node) not in seen:
        seen.add(id(node))
        collect_nodes(node.left, seen)
        node = node.right


def union_with(
    a: Tree, b: Tree, combine: Callable[[str, Any, Any], Any], counter: VisitCounter | None = None
) -> Tree:
    """
    Объединение ключей двух деревьев; общие ключи сливаются функцией combine.

    Если результат совпадает с a по значению, возвращается сам a. Физически
    общие поддеревья возвращаются без обхода.
    """
    if a is b or b is None:
        return a
    if a is None:
        return b
    if counter is not None:
        counter.visits += 1
    if a.key == b.key:
        left = union_with(a.left, b.left, combine, counter)
        right = union_with(a.right, b.right, combine, counter)
        value = a.value if a.value is b.value else combine(a.key, a.value, b.value)
    else:
        b_left, found, b_value, b_right = split(b, a.key)
        left = union_with(a.left, b_left, combine, counter)
        right = union_with(a.right, b_right, combine, counter)
        value = combine(a.key, a.value, b_value) if found else a.value
    if left is a.left and right is a.right and value is a.value:
        return a
    return link(left, a.key, value, right)


def all_pairs(
    a: Tree, b: Tree, predicate: Callable[[str, Any, Any], bool], counter: VisitCounter | None = None
) -> bool:
    """
    Проверяет predicate на общих ключах; физически общие поддеревья считаются выполненными.

    Возвращает False, если множества ключей различаются.
    """
    if a is b:
        return True
    if a is None or b is None:
        return False
    if counter is not None:
        counter.visits += 1
    if a.key == b.key:
        if a.value is not b.value and not predicate(a.key, a.value, b.value):
            return False
        return all_pairs(a.left, b.left, predicate, counter) and all_pairs(a.right, b.right, predicate, counter)
    b_left, found, b_value, b_right = split(b, a.key)
    if not found or not predicate(a.key, a.value, b_value):
        return False
    return all_pairs(a.left, b_left, predicate, counter) and all_pairs(a.right, b_right, predicate, counter)


def diff_entries(
    base: Tree, derived: Tree, out: list[tuple[str, Any]], counter: VisitCounter | None = None
) -> None:
    """
    Дописывает в out различия base -> derived в порядке ключей.

    Элемент (ключ, значение) означает установку значения, (ключ, None) — удаление.
    """
    if base is derived:
        return
    if base is None:
        out.extend(items(derived))
        return
    if derived is None:
        out.extend((key, None) for key, _ in items(base))
        return
    if counter is not None:
        counter.visits += 1
    if base.key == derived.key:
        diff_entries(base.left, derived.left, out, counter)
        if base.value is not derived.value and base.value != derived.value:
            out.append((derived.key, derived.value))
        diff_entries(base.right, derived.right, out, counter)
        return
    d_left, found, d_value, d_right = split(derived, base.key)
    diff_entries(base.left, d_left, out, counter)
    if not found:
        out.append((base.key, None))
    elif base.value is not d_value and base.value != d_value:
        out.append((base.key, d_value))
    diff_entries(base.right, d_right, out, counter)
