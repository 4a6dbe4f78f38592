"""
Команды CLI: анализ программы, генерация бенчмарка, замер ускорения.
"""

import logging
import statistics
import time
from collections.abc import Iterable
from pathlib import Path
from src.astral_settings import AstralSettings
from src.bench.generator import generate_source
from src.bench.invariant_file import save_invariants
from src.bench.schemas.bench_spec import BenchSpec
from src.bench.schemas.report import (
    InvariantEntry, MemoryStats, OracleErrorEntry, OracleSummary, Report, TimingRow,
)
from src.bench.schemas.run_config import RunConfig
from src.bench.speedup_fit import fit_speedup
from src.domain.abstract_env import AbstractEnv
from src.domain.alarms import Alarm
from src.frontend.ast import Program
from src.frontend.pipeline import compile_source, load_program
from src.frontend.tokens import Location
from src.interpreter.interfaces.dispatcher_interface import Dispatcher
from src.interpreter.interpreter import Interpreter
from src.interpreter.result import AnalysisResult
from src.interpreter.schemas.analysis_options import AnalysisOptions
from src.interpreter.schemas.warning_payload import WarningPayload, WitnessInterval
from src.interpreter.sequential_dispatcher import SequentialDispatcher
from src.oracle.enumerator import enumerate_reachable
from src.oracle.sampler import run_sampled
from src.oracle.state import ErrorRecord
from src.parallel.coordinator import ParallelDispatcher
from src.parallel.delta_ratio import stats_from_sizes
from src.parallel.exceptions import DeterminismViolation
from src.parallel.factories.partitioner_factory import PartitionerFactory
from src.parallel.factories.transport_factory import TransportFactory
from src.parallel.partition import Strategy

logger = logging.getLogger(__name__)


def build_dispatcher(
    source: str, program: Program, options: AnalysisOptions, config: RunConfig, settings: AstralSettings
) -> Dispatcher:
    """Последовательный диспетчер для одного воркера в процессе, иначе параллельный."""
    if config.workers == 1 and config.transport == "inproc":
        return SequentialDispatcher()
    return ParallelDispatcher(
        source,
        program,
        options,
        TransportFactory.create(config.transport, settings.WORKER_CACHE_SIZE),
        config.workers,
        PartitionerFactory.create(config.strategy, config.seed or 0),
        timeout=settings.WORKER_TIMEOUT,
        cache_size=settings.WORKER_CACHE_SIZE,
    )


def run_analysis(
    source: str, program: Program, options: AnalysisOptions, config: RunConfig, settings: AstralSettings
) -> tuple[AnalysisResult, Dispatcher]:
    dispatcher = build_dispatcher(source, program, options, config, settings)
    try:
        result = Interpreter(program, options, dispatcher).analyze_program()
    finally:
        dispatcher.close()
    return result, dispatcher


def invariant_entries(invariants: dict[Location, AbstractEnv]) -> list[InvariantEntry]:
    return [
        InvariantEntry(
            line=loc.line,
            column=loc.column,
            bottom=env.is_bottom,
            cells={cell: WitnessInterval.from_interval(value) for cell, value in env.items()},
        )
        for loc, env in sorted(invariants.items())
    ]


def _error_entry(error: ErrorRecord) -> OracleErrorEntry:
    return OracleErrorEntry(kind=error.kind.value, line=error.loc.line, column=error.loc.column)


def _summary(
    mode: str, parameter: int, states: int, errors: Iterable[ErrorRecord], warnings: tuple[Alarm, ...],
    exhausted: bool = False,
) -> OracleSummary:
    flagged = {(alarm.loc, alarm.kind) for alarm in warnings}
    distinct = sorted({(error.loc, error.kind) for error in errors})
    records = [ErrorRecord(kind, loc) for loc, kind in distinct]
    return OracleSummary(
        mode=mode,
        parameter=parameter,
        states=states,
        exhausted=exhausted,
        errors=[_error_entry(error) for error in records],
        uncovered=[
            _error_entry(error) for error in records if (error.loc, error.kind.warning_kind) not in flagged
        ],
    )


def cmd_analyze(config: RunConfig, settings: AstralSettings) -> Report:
    """
    Полный конвейер для одного файла.

    Raises:
        FrontendError: Программа не прошла разбор или проверку.
        AnalysisError: Ошибка анализа (CheckFailed, NonTermination, ...).
        ParallelError: Отказ параллельного режима, не покрытый локальным запасным путём.
        StateSpaceTooLarge: Перебор (--enumerate) не уложился в предел.
    """
    if len(config.inputs) != 1:
        raise ValueError("analyze ожидает ровно один входной файл")
    path = config.inputs[0]
    source, program = load_program(path)
    options = config.analysis_options(settings)
    result, dispatcher = run_analysis(source, program, options, config, settings)
    report = Report(
        program=str(path),
        digest=result.digest().hex(),
        warnings=[WarningPayload.from_alarm(alarm) for alarm in result.warnings],
        invariants=invariant_entries(result.invariants) if config.emit_invariants else [],
        memory=MemoryStats(
            retention=options.retention.value,
            peak_retained=result.peak_retained,
            distinct_nodes=result.distinct_nodes,
        ),
    )
    if isinstance(dispatcher, ParallelDispatcher):
        stats = dispatcher.delta_stats()
        report.delta_ratio = stats.model_copy(update={"samples": []})
    if config.save_invariants is not None:
        save_invariants(config.save_invariants, result.invariants)
    if config.concrete_run is not None:
        run = run_sampled(program, config.concrete_run, settings.STEP_BUDGET)
        report.oracle.append(
            _summary("concrete-run", config.concrete_run, len(run.trace), run.errors, result.warnings, run.exhausted)
        )
    if config.enumerate_bound is not None:
        reachable = enumerate_reachable(program, config.enumerate_bound)
        states = sum(len(bucket) for bucket in reachable.points.values())
        report.oracle.append(
            _summary("enumerate", config.enumerate_bound, states, reachable.errors, result.warnings)
        )
    logger.info(
        "Анализ файла завершён",
        extra={"path": str(path), "warnings": len(report.warnings), "digest": report.digest},
    )
    return report


def cmd_genbench(spec: BenchSpec) -> str:
    return generate_source(spec)


def cmd_bench(
    spec: BenchSpec,
    workers_list: list[int],
    repetitions: int,
    config: RunConfig,
    settings: AstralSettings,
    source: str | None = None,
) -> Report:
    """
    Замеряет анализ при каждом числе воркеров.

    Для каждого числа воркеров берётся медиана времени по повторам; время запуска
    воркеров в замер не входит. Дайджесты всех запусков обязаны совпасть.

    Raises:
        DeterminismViolation: Дайджесты разных запусков различаются.
    """
    if repetitions < 1 or not workers_list:
        raise ValueError("нужны хотя бы один повтор и одно число воркеров")
    source = source if source is not None else generate_source(spec)
    program = compile_source(source)
    options = config.analysis_options(settings)
    rows: list[TimingRow] = []
    delta_sizes: list[tuple[int, int]] = []
    reference: str | None = None
    result: AnalysisResult | None = None
    for workers in workers_list:
        run_config = config.model_copy(update={"workers": workers})
        seconds: list[float] = []
        micros: tuple[int, ...] = ()
        for repetition in range(repetitions):
            dispatcher = build_dispatcher(source, program, options, run_config, settings)
            try:
                started = time.perf_counter()
                result = Interpreter(program, options, dispatcher).analyze_program()
                seconds.append(time.perf_counter() - started)
            finally:
                dispatcher.close()
            if isinstance(dispatcher, ParallelDispatcher):
                delta_sizes.extend(dispatcher.delta_sizes)
            micros = getattr(dispatcher, "last_micros", ())
            digest = result.digest().hex()
            if reference is None:
                reference = digest
            elif digest != reference:
                raise DeterminismViolation(
                    f"дайджест при {workers} воркерах (повтор {repetition}) отличается от первого запуска"
                )
        median = statistics.median(seconds)
        rows.append(TimingRow(
            workers=workers,
            transport=config.transport,
            strategy=config.strategy.value if config.strategy is not Strategy.SHUFFLE else f"shuffle({config.seed})",
            seconds=seconds,
            median_seconds=median,
            branch_micros=list(micros),
            digest=digest,
        ))
        logger.info("Замер завершён", extra={"workers": workers, "median_seconds": median})
    baseline = rows[0].median_seconds
    for row in rows:
        row.speedup = baseline / row.median_seconds if row.median_seconds > 0 else 0.0
    assert result is not None
    return Report(
        program=None,
        digest=reference or "",
        warnings=[WarningPayload.from_alarm(alarm) for alarm in result.warnings],
        invariants=invariant_entries(result.invariants) if config.emit_invariants else [],
        timings=rows,
        delta_ratio=stats_from_sizes(delta_sizes).model_copy(update={"samples": []}) if delta_sizes else None,
        speedup_fit=fit_speedup([row.workers for row in rows], [row.median_seconds for row in rows]),
    )


def write_source(path: Path | None, source: str) -> None:
    if path is not None:
        path.write_text(source, encoding="utf-8")
