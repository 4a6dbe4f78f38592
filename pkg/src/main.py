import argparse
import logging
import sys
from pathlib import Path
from pydantic import ValidationError
import src.log_config  # noqa: F401
from src.astral_settings import AstralSettings
from src.bench.commands import cmd_analyze, cmd_bench, cmd_genbench, write_source
from src.bench.exceptions import BenchError
from src.bench.report_writer import emit_report, format_table
from src.bench.schemas.bench_spec import BenchSpec
from src.bench.schemas.report import Report
from src.bench.schemas.run_config import RunConfig
from src.domain.exceptions import DomainError
from src.frontend.exceptions import FrontendError
from src.interpreter.exceptions import AnalysisError
from src.oracle.exceptions import OracleError
from src.parallel.exceptions import ParallelError
from src.parallel.partition import Strategy
from src.parallel.worker import worker_serve

logger = logging.getLogger(__name__)

EXIT_CLEAN = 0
EXIT_WARNINGS = 1
EXIT_ANALYSIS_ERROR = 2
EXIT_USAGE_ERROR = 3

_COMMANDS = ("analyze", "genbench", "bench")


def _run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--workers", type=int, default=1, help="Число воркеров")
    parser.add_argument("--transport", default="inproc", help="inproc, proc или tcp=host:port,...")
    parser.add_argument("--strategy", choices=[s.value for s in Strategy], default=Strategy.BLOCK.value)
    parser.add_argument("--seed", type=int, default=None, help="Зерно для стратегии shuffle")
    parser.add_argument("--ladder", default=None, help="Пороги расширения через запятую")
    parser.add_argument("--iter-bound", type=int, default=None)
    parser.add_argument("--retention", choices=["loop-heads", "functions", "blocks", "statements"], default=None)
    parser.add_argument("--report", type=Path, default=None, help="Файл JSON-отчёта")
    parser.add_argument("--table", action="store_true", help="Добавить таблицу для человека")
    parser.add_argument("--emit-invariants", action="store_true", help="Включить инварианты циклов в отчёт")


def _spec_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--handlers", type=int, default=8)
    parser.add_argument("--body-size", type=int, default=4)
    parser.add_argument("--variables", type=int, default=16)
    parser.add_argument("--touched-fraction", type=float, default=0.25)
    parser.add_argument("--depth", type=int, default=0)
    parser.add_argument("--spec-seed", type=int, default=0, help="Зерно генератора программы")
    parser.add_argument("--helpers", type=int, default=0)
    parser.add_argument("--blocks", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="astral", description="Параллельный абстрактный интерпретатор mini-C")
    commands = parser.add_subparsers(dest="command", required=True)

    analyze = commands.add_parser("analyze", help="Проанализировать программу")
    analyze.add_argument("file", type=Path)
    _run_flags(analyze)
    analyze.add_argument("--save-invariants", type=Path, default=None)
    analyze.add_argument("--concrete-run", type=int, default=None, metavar="SEED")
    analyze.add_argument("--enumerate", type=int, default=None, metavar="BOUND", dest="enumerate_bound")

    genbench = commands.add_parser("genbench", help="Сгенерировать программу-секвенсор")
    _spec_flags(genbench)
    genbench.add_argument("--output", type=Path, default=None)

    bench = commands.add_parser("bench", help="Замерить ускорение на сгенерированной программе")
    _run_flags(bench)
    _spec_flags(bench)
    bench.add_argument("--workers-list", default="1,2,4")
    bench.add_argument("--repetitions", type=int, default=3)
    bench.add_argument("--source", type=Path, default=None, help="Готовая программа вместо сгенерированной")
    return parser


def parse_args(argv: list[str]) -> argparse.Namespace:
    """Подкоманда analyze подразумевается, если первым аргументом идёт файл."""
    if argv and argv[0] not in _COMMANDS and argv[0] not in ("-h", "--help"):
        argv = ["analyze", *argv]
    return build_parser().parse_args(argv)


def _run_config(args: argparse.Namespace, inputs: list[Path]) -> RunConfig:
    seed = args.seed
    if args.strategy == Strategy.SHUFFLE and seed is None:
        seed = 0
    return RunConfig(
        inputs=inputs,
        workers=args.workers,
        transport=args.transport,
        strategy=Strategy(args.strategy),
        seed=seed,
        ladder=args.ladder,
        iter_bound=args.iter_bound,
        retention=args.retention,
        report=args.report,
        table=args.table,
        emit_invariants=args.emit_invariants,
        save_invariants=getattr(args, "save_invariants", None),
        concrete_run=getattr(args, "concrete_run", None),
        enumerate_bound=getattr(args, "enumerate_bound", None),
    )


def _bench_spec(args: argparse.Namespace) -> BenchSpec:
    return BenchSpec(
        handlers=args.handlers,
        body_size=args.body_size,
        variables=args.variables,
        touched_fraction=args.touched_fraction,
        depth=args.depth,
        seed=args.spec_seed,
        helpers=args.helpers,
        blocks=args.blocks,
    )


def _publish(report: Report, config: RunConfig) -> None:
    text = emit_report(report, config.report, config.table)
    if config.report is None:
        sys.stdout.write(format_table(report) if config.table else text)


def run(argv: list[str], settings: AstralSettings) -> int:
    """Выполняет команду и возвращает код завершения."""
    try:
        args = parse_args(argv)
    except SystemExit as exit_:
        return EXIT_CLEAN if exit_.code == 0 else EXIT_USAGE_ERROR
    try:
        if args.command == "genbench":
            source = cmd_genbench(_bench_spec(args))
            if args.output is None:
                sys.stdout.write(source)
            else:
                write_source(args.output, source)
            return EXIT_CLEAN
        if args.command == "bench":
            config = _run_config(args, [args.source] if args.source else [])
            workers_list = [int(item) for item in args.workers_list.split(",") if item]
            source = args.source.read_text(encoding="utf-8") if args.source else None
            report = cmd_bench(_bench_spec(args), workers_list, args.repetitions, config, settings, source)
        else:
            config = _run_config(args, [args.file])
            report = cmd_analyze(config, settings)
        _publish(report, config)
    except (FrontendError, OracleError, ValidationError, ValueError, OSError, BenchError) as error:
        logger.error("Ошибка входных данных", extra={"error": str(error)})
        sys.stderr.write(f"astral: {error}\n")
        return EXIT_USAGE_ERROR
    except (AnalysisError, ParallelError, DomainError) as error:
        logger.error("Ошибка анализа", extra={"error": str(error), "type": type(error).__name__})
        sys.stderr.write(f"astral: {type(error).__name__}: {error}\n")
        return EXIT_ANALYSIS_ERROR
    return EXIT_WARNINGS if report.warnings else EXIT_CLEAN


def main() -> None:
    settings = AstralSettings()
    if settings.WORKER:
        worker_serve(settings.WORKER, settings.WORKER_CACHE_SIZE)
        return
    sys.exit(run(sys.argv[1:], settings))


if __name__ == "__main__":
    main()
