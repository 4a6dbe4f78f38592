#  type: ignore

import os
import signal
import pytest
from src.bench.generator import generate_source
from src.bench.schemas.bench_spec import BenchSpec
from src.domain.abstract_env import AbstractEnv
from src.domain.interval import Interval
from src.frontend.ast import ScalarType
from src.frontend.pipeline import compile_source
from src.interpreter.interpreter import Interpreter
from src.interpreter.schemas.analysis_options import AnalysisOptions
from src.interpreter.sequential_dispatcher import SequentialDispatcher
from src.parallel.coordinator import ParallelDispatcher
from src.parallel.delta_ratio import measure_delta_ratio
from src.domain.delta import PATCH_HEADER_SIZE, diff, encode_patch
from src.parallel.exceptions import TransportError, WorkerFailure
from src.parallel.factories.partitioner_factory import PartitionerFactory
from src.parallel.factories.transport_factory import TransportFactory
from src.parallel.partition import Strategy
from src.parallel.transports.inproc import InprocTransport
from src.parallel.transports.process import ProcessTransport
from src.parallel.wire import ErrorMessage
from src.parallel.worker import BASE_NOT_CACHED

SOURCE = generate_source(BenchSpec(handlers=8, variables=16, depth=1, seed=3))


@pytest.fixture(scope="module")
def program():
    return compile_source(SOURCE)


@pytest.fixture(scope="module")
def sequential_digest(program):
    return Interpreter(program, dispatcher=SequentialDispatcher()).analyze_program().digest()


def _parallel(program, workers, strategy=Strategy.BLOCK, transport=None, source=SOURCE, seed=5):
    return ParallelDispatcher(
        source,
        program,
        AnalysisOptions(),
        transport or InprocTransport(),
        workers,
        PartitionerFactory.create(strategy, seed=seed),
        timeout=60.0,
    )


def _run(program, dispatcher):
    try:
        return Interpreter(program, dispatcher=dispatcher).analyze_program()
    finally:
        dispatcher.close()


def test_dispatching_does_not_change_result(program, sequential_digest):
    assert Interpreter(program).analyze_program().digest() == sequential_digest


@pytest.mark.parametrize("strategy", list(Strategy))
@pytest.mark.parametrize("workers", [1, 2, 3, 4, 5])
def test_parallel_digest_matches_sequential(program, sequential_digest, workers, strategy):
    dispatcher = _parallel(program, workers, strategy)
    assert _run(program, dispatcher).digest() == sequential_digest
    assert all(dispatcher.alive)
    assert dispatcher.plans


def test_greedy_uses_measured_timings(program):
    dispatcher = _parallel(program, 3, Strategy.GREEDY)
    _run(program, dispatcher)
    assert len(dispatcher.plans) > 1
    assert len(dispatcher.last_micros) == 8


def test_killed_worker_falls_back_to_local(program, sequential_digest):
    dispatcher = _parallel(program, 3)
    dispatcher.handles[0].kill()
    assert _run(program, dispatcher).digest() == sequential_digest
    assert dispatcher.alive == [False, True, True]


def test_transport_failure_falls_back_to_local(mocker, program, sequential_digest):
    dispatcher = _parallel(program, 2)
    mocker.patch.object(dispatcher.handles[1], "receive", side_effect=TransportError("обрыв"))
    assert _run(program, dispatcher).digest() == sequential_digest
    assert dispatcher.alive == [True, False]


def test_base_refused_twice_falls_back_to_local(mocker, program, sequential_digest):
    dispatcher = _parallel(program, 2)
    send = mocker.patch.object(dispatcher.handles[1], "send")
    mocker.patch.object(dispatcher.handles[1], "receive", return_value=ErrorMessage(0, BASE_NOT_CACHED))
    assert _run(program, dispatcher).digest() == sequential_digest
    assert dispatcher.alive == [True, False]
    assert send.call_count == 2


def test_handshake_rejects_foreign_program(program):
    with pytest.raises(WorkerFailure, match="program digest mismatch"):
        _parallel(program, 2, source="int x; x = 1;")


def test_delta_sizes_are_collected(program):
    dispatcher = _parallel(program, 2)
    _run(program, dispatcher)
    stats = dispatcher.delta_stats()
    assert stats.samples
    assert 0 < stats.aggregate < 1


@pytest.mark.slow
def test_process_workers_match_sequential(program, sequential_digest):
    dispatcher = _parallel(program, 2, transport=ProcessTransport())
    try:
        assert all(handle.pid > 0 for handle in dispatcher.handles)
        result = Interpreter(program, dispatcher=dispatcher).analyze_program()
    finally:
        dispatcher.close()
    assert result.digest() == sequential_digest


def _cells(count, lo):
    return AbstractEnv.from_items({f"g{index:03}": Interval.of(ScalarType.INT, lo, lo + 1) for index in range(count)})


def test_delta_ratio_of_unchanged_env_is_zero():
    base = _cells(100, 0)
    assert measure_delta_ratio(base, [base]).aggregate == 0.0


def test_delta_ratio_of_fully_changed_env_is_about_one():
    stats = measure_delta_ratio(_cells(100, 0), [_cells(100, 5)])
    assert 0.9 <= stats.aggregate <= 1.1


def test_sequencer_delta_ratio_is_small():
    spec = BenchSpec(handlers=4, variables=200, touched_fraction=0.1, body_size=1)
    program = compile_source(generate_source(spec))
    dispatcher = _parallel(program, 2, source=generate_source(spec))
    _run(program, dispatcher)
    assert dispatcher.delta_stats().aggregate <= 0.2


@pytest.mark.parametrize("kind", ["udp", "tcp", "procs"])
def test_unknown_transport(kind):
    with pytest.raises(ValueError, match="Неизвестный тип транспорта"):
        TransportFactory.create(kind)


@pytest.mark.slow
def test_process_worker_killed_mid_run(mocker, program, sequential_digest):
    dispatcher = _parallel(program, 3, transport=ProcessTransport())
    dispatch = dispatcher.dispatch
    calls = []

    def dispatch_then_kill(*args):
        results = dispatch(*args)
        calls.append(dispatcher.plans[-1])
        if len(calls) == 1:
            assert 0 in dispatcher.plans[-1].groups()[0]
            os.kill(dispatcher.handles[0].pid, signal.SIGKILL)
        return results

    mocker.patch.object(dispatcher, "dispatch", side_effect=dispatch_then_kill)
    assert _run(program, dispatcher).digest() == sequential_digest
    assert len(calls) > 1
    assert dispatcher.alive == [False, True, True]


WIDE_SOURCE = generate_source(BenchSpec(handlers=8, variables=1000, touched_fraction=0.05, seed=1))

WIDE_STRATEGIES = [
    (Strategy.BLOCK, 0),
    (Strategy.SHUFFLE, 0),
    (Strategy.SHUFFLE, 1),
    (Strategy.SHUFFLE, 2),
    (Strategy.GREEDY, 0),
]


@pytest.fixture(scope="module")
def wide_program():
    return compile_source(WIDE_SOURCE)


@pytest.fixture(scope="module")
def wide_digest(wide_program):
    return Interpreter(wide_program, dispatcher=SequentialDispatcher()).analyze_program().digest()


@pytest.mark.slow
@pytest.mark.parametrize("transport", ["inproc", "proc"])
@pytest.mark.parametrize("strategy, seed", WIDE_STRATEGIES)
@pytest.mark.parametrize("workers", [1, 2, 3, 4, 5])
def test_wide_sequencer_digest_is_stable(wide_program, wide_digest, workers, strategy, seed, transport):
    dispatcher = _parallel(
        wide_program, workers, strategy, TransportFactory.create(transport), source=WIDE_SOURCE, seed=seed
    )
    assert _run(wide_program, dispatcher).digest() == wide_digest
    assert all(dispatcher.alive)


def _touch(env, count):
    for index in range(count):
        env = env.set(f"g{index:05}", Interval.of(ScalarType.INT, -7, 7))
    return env


@pytest.fixture(scope="module")
def ten_thousand_cells():
    return AbstractEnv.from_items(
        {f"g{index:05}": Interval.of(ScalarType.INT, 0, index) for index in range(10_000)}
    )


def test_tenth_of_ten_thousand_cells_ratio(ten_thousand_cells):
    results = [_touch(ten_thousand_cells, 1000) for _ in range(4)]
    assert measure_delta_ratio(ten_thousand_cells, results).aggregate <= 0.2


def test_untouched_ten_thousand_cells_patch_is_header_only(ten_thousand_cells):
    assert len(encode_patch(diff(ten_thousand_cells, ten_thousand_cells))) == PATCH_HEADER_SIZE
    stats = measure_delta_ratio(ten_thousand_cells, [ten_thousand_cells, _touch(ten_thousand_cells, 0)])
    assert stats.aggregate < 0.01


@pytest.mark.slow
def test_sequencer_over_ten_thousand_cells_ratio():
    source = generate_source(BenchSpec(handlers=2, variables=10_000, touched_fraction=0.1, body_size=1))
    program = compile_source(source)
    dispatcher = _parallel(program, 2, source=source)
    _run(program, dispatcher)
    assert dispatcher.delta_stats().aggregate <= 0.2
