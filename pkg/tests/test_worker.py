#  type: ignore

import pytest
from src.bench.generator import generate_source
from src.bench.schemas.bench_spec import BenchSpec
from src.domain.codec import canonical_serialize, env_digest
from src.domain.delta import apply_patch, decode_patch
from src.domain.interval import Interval
from src.frontend.ast import ScalarType
from src.frontend.pipeline import compile_source, program_digest
from src.frontend.tokens import Location
from src.interpreter.interpreter import Interpreter
from src.interpreter.mode import Mode
from src.interpreter.schemas.analysis_options import AnalysisOptions
from src.parallel.exceptions import ProtocolViolation
from src.parallel.float_selftest import reference_vector
from src.parallel.worker import (
    BASE_NOT_CACHED, HANDSHAKE_REQUIRED, UNKNOWN_POINT, WorkerSession, parse_endpoint,
)
from src.parallel.wire import ErrorMessage, Handshake, Request, Response

SOURCE = generate_source(BenchSpec(handlers=4, variables=6))


@pytest.fixture
def program():
    return compile_source(SOURCE)


@pytest.fixture
def interpreter(program):
    return Interpreter(program)


@pytest.fixture
def point(interpreter):
    (point,) = interpreter.dispatch_points
    return point


@pytest.fixture
def base(interpreter):
    return interpreter.initial_env()


def _hello(program, source=SOURCE):
    options = AnalysisOptions().model_dump_json().encode("utf-8")
    return Handshake(program_digest(program), reference_vector(), options, source)


@pytest.fixture
def session(program):
    session = WorkerSession(cache_size=2)
    reply = session.handle(_hello(program))
    assert isinstance(reply, Handshake)
    return session


def _request(point, base, branches=(0, 1), with_env=True, task_id=1):
    env = canonical_serialize(base) if with_env else None
    return Request(task_id, point.loc, Mode.REPORT, tuple(branches), env_digest(base), env)


def test_handshake_reply(program):
    session = WorkerSession()
    reply = session.handle(_hello(program))
    assert reply.program_digest == program_digest(program)
    assert reply.selftest == reference_vector()
    assert reply.source is None
    assert session.ready


def test_handshake_digest_mismatch(program):
    hello = _hello(program)
    reply = WorkerSession().handle(Handshake(bytes(32), hello.selftest, hello.options_json, hello.source))
    assert reply == ErrorMessage(0, "program digest mismatch")


def test_handshake_rejects_broken_source(program):
    reply = WorkerSession().handle(_hello(program, source="int x; x = ;"))
    assert isinstance(reply, ErrorMessage)
    assert reply.diagnostic.startswith("program rejected")


def test_request_before_handshake(point, base):
    assert WorkerSession().handle(_request(point, base)) == ErrorMessage(1, HANDSHAKE_REQUIRED)


def test_branches_match_local_analysis(session, interpreter, point, base):
    reply = session.handle(_request(point, base))
    assert isinstance(reply, Response)
    assert [record.index for record in reply.records] == [0, 1]
    for record in reply.records:
        expected = interpreter.analyze_branch(point, record.index, base, Mode.REPORT)
        assert apply_patch(base, decode_patch(record.patch)).same_value(expected.env)


def test_cached_base_is_reused(session, point, base):
    session.handle(_request(point, base))
    reply = session.handle(_request(point, base, branches=(2, 3), with_env=False, task_id=2))
    assert isinstance(reply, Response)
    assert [record.index for record in reply.records] == [2, 3]


def test_uncached_base(session, point, base):
    reply = session.handle(_request(point, base, with_env=False))
    assert reply == ErrorMessage(1, BASE_NOT_CACHED)


def test_cache_evicts_oldest_base(program, point, base):
    session = WorkerSession(cache_size=1)
    session.handle(_hello(program))
    other = base.set("i", Interval.of(ScalarType.INT, 0, 3))
    session.handle(_request(point, base))
    session.handle(_request(point, other, task_id=2))
    assert session.handle(_request(point, base, with_env=False, task_id=3)) == ErrorMessage(3, BASE_NOT_CACHED)
    assert isinstance(session.handle(_request(point, other, with_env=False, task_id=4)), Response)


def test_empty_branch_list(session, point, base):
    assert session.handle(_request(point, base, branches=())) == Response(1)


def test_unknown_point(session, base):
    request = Request(5, Location(999, 1), Mode.REPORT, (0,), env_digest(base), canonical_serialize(base))
    assert session.handle(request) == ErrorMessage(5, UNKNOWN_POINT)


def test_branch_index_out_of_range(session, point, base):
    reply = session.handle(_request(point, base, branches=(0, 9)))
    assert isinstance(reply, ErrorMessage)


def test_base_digest_mismatch(session, point, base):
    request = Request(1, point.loc, Mode.REPORT, (0,), bytes(32), canonical_serialize(base))
    with pytest.raises(ProtocolViolation):
        session.handle(request)


def test_worker_does_not_accept_responses(session):
    with pytest.raises(ProtocolViolation):
        session.handle(Response(1))


@pytest.mark.parametrize("endpoint, expected", [("localhost:7000", ("localhost", 7000)), ("::1:9", ("::1", 9))])
def test_parse_endpoint(endpoint, expected):
    assert parse_endpoint(endpoint) == expected


@pytest.mark.parametrize("endpoint", ["localhost", ":80", "host:port"])
def test_parse_endpoint_rejects(endpoint):
    with pytest.raises(ValueError):
        parse_endpoint(endpoint)
