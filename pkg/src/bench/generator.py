"""
Генератор синтетических программ-секвенсоров.

Форма программы: глобальный вектор состояния, бесконечный цикл, в нём ожидание
такта (input), switch по счётчику i с n ветвями и i = (i + 1) % n. Текст
полностью определяется BenchSpec, включая seed.
"""

import random
from src.bench.schemas.bench_spec import BenchSpec

_INDENT = "    "


def _statement(rng: random.Random, target: int, chosen: list[int]) -> str:
    form = rng.randrange(3)
    if form == 0:
        return f"g{target} = {rng.randint(-100, 100)};"
    if form == 1:
        limit = rng.randint(1, 1000)
        return f"if (g{target} < {limit}) {{ g{target} = g{target} + 1; }} else {{ g{target} = 0; }}"
    source = rng.choice(chosen)
    return f"g{target} = g{source} % {rng.randint(2, 9)};"


def _handler_body(spec: BenchSpec, rng: random.Random, arm: int) -> list[str]:
    touched = max(1, round(spec.touched_fraction * spec.variables))
    chosen = sorted(rng.sample(range(spec.variables), touched))
    lines = [_statement(rng, chosen[position % touched], chosen) for position in range(max(spec.body_size, touched))]
    for level in reversed(range(spec.depth)):
        counter = f"k{level}"
        lines = [
            "{",
            f"{_INDENT}int {counter} = 0;",
            f"{_INDENT}while ({counter} < 3) {{",
            *(f"{_INDENT * 2}{line}" for line in lines),
            f"{_INDENT * 2}{counter} = {counter} + 1;",
            f"{_INDENT}}}",
            "}",
        ]
    for extra in range(spec.blocks):
        lines.append(f"{{ int t = {extra}; }}")
    for helper in range(arm, spec.helpers, spec.handlers):
        lines.append(f"h{helper}();")
    return lines


def _helper(rng: random.Random, spec: BenchSpec, index: int) -> list[str]:
    target = rng.randrange(spec.variables)
    return [
        f"void h{index}() {{",
        f"{_INDENT}{{ int t = g{target} % 5; g{target} = t; }}",
        "}",
    ]


def generate_source(spec: BenchSpec) -> str:
    """Текст программы; одинаковый spec даёт одинаковые байты."""
    rng = random.Random(spec.seed)
    lines = ["int tick;", "int i;"]
    lines.extend(f"int g{index};" for index in range(spec.variables))
    for index in range(spec.helpers):
        lines.extend(_helper(rng, spec, index))
    lines.append("i = 0;")
    lines.append("while (1) {")
    lines.append(f"{_INDENT}input(tick, 0, 1);")
    lines.append(f"{_INDENT}switch (i) {{")
    for arm in range(spec.handlers):
        lines.append(f"{_INDENT}case {arm}:")
        lines.extend(f"{_INDENT * 2}{line}" for line in _handler_body(spec, rng, arm))
    lines.append(f"{_INDENT}}}")
    lines.append(f"{_INDENT}i = (i + 1) % {spec.handlers};")
    lines.append("}")
    return "\n".join(lines) + "\n"
