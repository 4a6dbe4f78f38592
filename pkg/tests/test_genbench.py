#  type: ignore

import re
import pytest
from pydantic import ValidationError
from src.bench.generator import generate_source
from src.bench.schemas.bench_spec import BenchSpec
from src.frontend.pipeline import compile_source
from src.interpreter.interpreter import Interpreter
from src.parallel.dispatch_points import find_dispatch_points


@pytest.fixture
def spec():
    return BenchSpec(handlers=6, body_size=3, variables=20, touched_fraction=0.2, seed=11)


def test_same_spec_same_bytes(spec):
    assert generate_source(spec) == generate_source(spec)


def test_seed_changes_program(spec):
    assert generate_source(spec) != generate_source(spec.model_copy(update={"seed": 12}))


def test_program_shape(spec):
    source = generate_source(spec)
    assert source.startswith("int tick;\nint i;\nint g0;\n")
    assert "int g19;" in source and "int g20;" not in source
    assert source.count("case ") == 6
    assert "i = (i + 1) % 6;" in source
    assert "input(tick, 0, 1);" in source


def test_handlers_touch_chosen_fraction(spec):
    source = generate_source(spec)
    arms = re.split(r"\n    case \d+:\n", source.split("switch (i) {")[1])[1:]
    for arm in arms:
        touched = set(re.findall(r"\bg(\d+) =", arm))
        assert 1 <= len(touched) <= 4


@pytest.mark.parametrize(
    "spec",
    [
        BenchSpec(handlers=1),
        BenchSpec(handlers=8, depth=2),
        BenchSpec(handlers=3, helpers=7, blocks=2),
        BenchSpec(handlers=2, variables=1, touched_fraction=1.0),
    ],
)
def test_generated_program_validates(spec):
    program = compile_source(generate_source(spec))
    assert [function.name for function in program.functions][-1] == "main"


def test_single_handler_is_not_dispatched():
    program = compile_source(generate_source(BenchSpec(handlers=1)))
    assert find_dispatch_points(program) == []


def test_dispatch_point_has_one_branch_per_handler():
    program = compile_source(generate_source(BenchSpec(handlers=8)))
    (point,) = Interpreter(program).dispatch_points
    assert len(point.branches) == 8


def test_helpers_are_spread_over_handlers():
    source = generate_source(BenchSpec(handlers=3, helpers=7))
    assert source.count("void h") == 7
    assert all(f"h{index}();" in source for index in range(7))


@pytest.mark.parametrize(
    "update",
    [{"handlers": 0}, {"variables": 0}, {"touched_fraction": 0.0}, {"touched_fraction": 1.5}],
)
def test_spec_rejects_bad_parameters(update):
    with pytest.raises(ValidationError):
        BenchSpec(**update)
