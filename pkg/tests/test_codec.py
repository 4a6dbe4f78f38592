#  type: ignore

import math
import struct
import pytest
from hypothesis import given
from hypothesis import strategies as st
from src.domain.abstract_env import AbstractEnv
from src.domain.codec import canonical_serialize, deserialize_env, env_digest
from src.domain.exceptions import PatchFormatError
from src.domain.interval import Interval
from src.frontend.ast import ScalarType
from tests.hypothesis_profiles import DETERMINISM_SETTINGS

INT = ScalarType.INT
FLOAT = ScalarType.FLOAT


def test_bottom_bytes():
    assert canonical_serialize(AbstractEnv.BOTTOM) == b"\x01\x00"


def test_layout_of_single_cell():
    data = canonical_serialize(AbstractEnv.from_items({"x": Interval.of(INT, 0, 1)}))
    expected = (
        b"\x01\x01" + struct.pack("!I", 1)
        + struct.pack("!H", 1) + b"x" + b"\x00"
        + b"\x00" + struct.pack("!q", 0)
        + b"\x00" + struct.pack("!q", 1)
    )
    assert data == expected


def test_infinite_and_float_bounds():
    env = AbstractEnv.from_items({
        "f": Interval.of(FLOAT, 0.5, 2.0),
        "i": Interval(INT, -math.inf, 7),
    })
    data = canonical_serialize(env)
    assert struct.pack("!d", 0.5) in data
    assert b"\x01" + bytes(8) in data
    restored = deserialize_env(data)
    assert restored.same_value(env)


def test_negative_zero_has_canonical_bytes():
    positive = AbstractEnv.from_items({"f": Interval.of(FLOAT, 0.0, 1.0)})
    negative = AbstractEnv.from_items({"f": Interval.of(FLOAT, -0.0, 1.0)})
    assert canonical_serialize(positive) == canonical_serialize(negative)


def test_digest_is_sha256_of_bytes():
    import hashlib

    env = AbstractEnv.from_items({"x": Interval.of(INT, 3, 4)})
    assert env_digest(env) == hashlib.sha256(canonical_serialize(env)).digest()


@pytest.mark.parametrize(
    "data",
    [b"", b"\x02\x00", b"\x01\x01\x00\x00\x00\x02", b"\x01\x01\x00\x00\x00\x00junk"],
)
def test_deserialize_rejects_malformed(data):
    with pytest.raises(PatchFormatError):
        deserialize_env(data)


_bound = st.integers(min_value=-(2**63), max_value=2**63 - 1)
_float = st.floats(allow_nan=False, allow_infinity=False)


@st.composite
def _cells(draw):
    names = draw(st.lists(st.text(alphabet="abcxyz.$0123", min_size=1, max_size=6), unique=True, max_size=8))
    cells = {}
    for name in names:
        if draw(st.booleans()):
            lo, hi = sorted((draw(_bound), draw(_bound)))
            cells[name] = Interval.of(INT, lo, hi)
        else:
            lo, hi = sorted((draw(_float), draw(_float)))
            cells[name] = Interval.of(FLOAT, lo, hi)
    return cells


@given(cells=_cells(), order=st.randoms())
@DETERMINISM_SETTINGS
def test_bytes_depend_only_on_value(cells, order):
    names = list(cells)
    order.shuffle(names)
    first = AbstractEnv.from_items(cells)
    second = AbstractEnv.from_items({name: cells[name] for name in names})
    assert canonical_serialize(first) == canonical_serialize(second)
    assert env_digest(first) == env_digest(second)
    assert deserialize_env(canonical_serialize(first)).same_value(first)
