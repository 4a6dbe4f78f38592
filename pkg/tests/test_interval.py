#  type: ignore

import math
import pytest
from hypothesis import given
from hypothesis import strategies as st
from src.domain.exceptions import LadderError
from src.domain.interval import Interval, arith, cast, compare, refine_comparison
from src.domain.ladder import WideningLadder
from src.domain.numeric import DBL_MAX, INT64_MAX, INT64_MIN, c_div, c_mod, clamp_float, clamp_int
from src.frontend.ast import ScalarType
from tests.hypothesis_profiles import STANDARD_SETTINGS

INT = ScalarType.INT
FLOAT = ScalarType.FLOAT


def _i(lo, hi):
    return Interval.of(INT, lo, hi)


def _f(lo, hi):
    return Interval.of(FLOAT, lo, hi)


def test_widen_jumps_to_next_threshold():
    assert _i(0, 1).widen(_i(0, 2), WideningLadder()) == _i(0, 10)


def test_ladder_parse_accepts_int64_edges():
    ladder = WideningLadder.parse(f"{INT64_MAX},1,{INT64_MIN}")
    assert ladder.thresholds == (INT64_MIN, 1, INT64_MAX)


@pytest.mark.parametrize("text", ["1,10,100000000000000000000", f"{INT64_MIN - 1},0", f"{2**64}"])
def test_ladder_rejects_thresholds_outside_int64(text):
    with pytest.raises(LadderError):
        WideningLadder.parse(text)


def test_widen_without_growth_is_identity():
    prev = _i(0, 1)
    assert prev.widen(_i(0, 1), WideningLadder()) is prev


def test_widen_past_last_threshold_goes_to_infinity():
    ladder = WideningLadder((-1, 1, 10, 100))
    assert _i(0, 10).widen(_i(-1, 10), ladder) == Interval(INT, -math.inf, 10)


def test_widening_chain_stabilizes_within_ladder_length():
    ladder = WideningLadder()
    current = _i(0, 0)
    for step in range(len(ladder) + 2):
        grown = _i(current.lo, current.finite().hi + 1)
        widened = current.widen(grown, ladder)
        if widened == current:
            break
        current = widened
    assert current.hi == math.inf
    assert step <= len(ladder) + 1


def test_ladder_parse_sorts_and_rejects_garbage():
    assert WideningLadder.parse("100, 1,10").thresholds == (1, 10, 100)
    with pytest.raises(ValueError, match="лестница"):
        WideningLadder.parse("1,ten")


def test_join_meet_leq():
    assert _i(1, 3).join(_i(2, 5)) == _i(1, 5)
    assert _i(1, 3).meet(_i(2, 5)) == _i(2, 3)
    assert _i(1, 3).meet(_i(4, 5)).is_empty
    assert _i(1, 2).leq(_i(0, 5))
    assert not _i(1, 2).leq(_i(2, 5))
    assert Interval.empty(INT).leq(_i(0, 0))


def test_negative_zero_is_normalized():
    assert math.copysign(1.0, _f(-0.0, 1.0).lo) == 1.0


@pytest.mark.parametrize(
    "op, left, right, expected, overflow, div_by_zero",
    [
        ("+", _i(0, 2), _i(1, 1), _i(1, 3), False, False),
        ("+", _i(INT64_MAX - 1, INT64_MAX), _i(1, 1), _i(INT64_MAX, INT64_MAX), True, False),
        ("/", _i(100, 100), _i(0, 10), _i(0, 100), False, True),
        ("/", _i(100, 100), _i(1, 10), _i(10, 100), False, False),
        ("/", _i(-7, -7), _i(2, 2), _i(-3, -3), False, False),
        ("/", _i(INT64_MIN, INT64_MIN), _i(-1, -1), _i(INT64_MAX, INT64_MAX), True, False),
        ("%", _i(1, 8), _i(8, 8), _i(0, 7), False, False),
        ("%", _i(-7, -7), _i(3, 3), _i(-1, -1), False, False),
        ("*", _i(-3, 2), _i(-5, 4), _i(-12, 15), False, False),
    ],
)
def test_int_arith(op, left, right, expected, overflow, div_by_zero):
    result = arith(op, left, right)
    assert result.value == expected
    assert result.overflow is overflow
    assert result.div_by_zero is div_by_zero


def test_float_arith_is_outward_rounded():
    result = arith("+", _f(0.1, 0.1), _f(0.2, 0.2))
    assert result.value.lo < 0.1 + 0.2 < result.value.hi


def test_float_overflow_clamps_to_dbl_max():
    result = arith("*", _f(1e308, 1e308), _f(10.0, 10.0))
    assert result.overflow
    assert result.value.hi == DBL_MAX


def test_casts():
    assert cast(INT, _f(1.5, 2.5)).value == _i(1, 2)
    assert cast(INT, _f(-2.5, -1.5)).value == _i(-2, -1)
    assert cast(INT, _f(0.0, 1e300)).overflow
    widened = cast(FLOAT, _i(INT64_MAX, INT64_MAX)).value
    assert widened.lo <= INT64_MAX <= widened.hi


def test_refine_and_compare():
    assert refine_comparison("<", _i(0, 10), _i(5, 5))[0] == _i(0, 4)
    assert refine_comparison(">=", _i(0, 10), _i(5, 5))[0] == _i(5, 10)
    assert refine_comparison("<", _i(6, 10), _i(5, 5))[0].is_empty
    assert refine_comparison("!=", _i(0, 10), _i(0, 0))[0] == _i(1, 10)
    assert compare("<", _i(0, 3), _i(5, 6)) == _i(1, 1)
    assert compare("==", _i(0, 3), _i(2, 6)) == _i(0, 1)


_finite = st.floats(min_value=-1e300, max_value=1e300, allow_nan=False, allow_infinity=False)


def _concrete_float(op, x, y):
    if op == "/":
        if y == 0.0:
            return 0.0
        return clamp_float(x / y)[0]
    return clamp_float({"+": x + y, "-": x - y, "*": x * y}[op])[0]


@given(
    op=st.sampled_from(["+", "-", "*", "/"]),
    xs=st.lists(_finite, min_size=2, max_size=2),
    ys=st.lists(_finite, min_size=2, max_size=2),
    data=st.data(),
)
@STANDARD_SETTINGS
def test_float_arith_contains_concrete_results(op, xs, ys, data):
    left, right = _f(min(xs), max(xs)), _f(min(ys), max(ys))
    x = data.draw(st.floats(min_value=left.lo, max_value=left.hi))
    y = data.draw(st.floats(min_value=right.lo, max_value=right.hi))
    assert _concrete_float(op, x, y) in arith(op, left, right).value


_int64 = st.integers(min_value=INT64_MIN, max_value=INT64_MAX)


def _concrete_int(op, x, y):
    if op in "/%" and y == 0:
        return 0
    exact = {"+": x + y, "-": x - y, "*": x * y}.get(op)
    if op == "/":
        exact = c_div(x, y)
    if op == "%":
        exact = c_mod(x, y)
    return clamp_int(exact)[0]


@given(
    op=st.sampled_from(["+", "-", "*", "/", "%"]),
    xs=st.lists(_int64, min_size=2, max_size=2),
    ys=st.lists(_int64 | st.integers(min_value=-3, max_value=3), min_size=2, max_size=2),
    data=st.data(),
)
@STANDARD_SETTINGS
def test_int_arith_contains_concrete_results(op, xs, ys, data):
    left, right = _i(min(xs), max(xs)), _i(min(ys), max(ys))
    x = data.draw(st.integers(min_value=left.lo, max_value=left.hi))
    y = data.draw(st.integers(min_value=right.lo, max_value=right.hi))
    assert _concrete_int(op, x, y) in arith(op, left, right).value


@pytest.mark.slow
def test_float_outward_rounding_million_samples():
    import numpy as np

    rng = np.random.default_rng(0)
    samples = rng.uniform(-1e6, 1e6, size=(1_000_000, 2))
    ops = ["+", "-", "*", "/"]
    for index, (x, y) in enumerate(samples):
        op = ops[index % 4]
        x, y = float(x), float(y)
        result = arith(op, _f(x, x), _f(y, y)).value
        assert _concrete_float(op, x, y) in result
