import json
import logging
from pathlib import Path
import jsonschema
from src.bench.exceptions import ReportWriteError
from src.bench.schemas.report import Report

logger = logging.getLogger(__name__)

_SCHEMA = Report.model_json_schema()


def render_report(report: Report) -> str:
    """
    JSON отчёта с постоянным порядком ключей.

    Raises:
        jsonschema.ValidationError: Документ не соответствует схеме Report.
    """
    document = report.model_dump(mode="json")
    jsonschema.validate(document, _SCHEMA)
    return json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def format_table(report: Report) -> str:
    """Краткая таблица для человека: предупреждения и времена."""
    lines = [f"digest {report.digest}", f"warnings {len(report.warnings)}"]
    lines.extend(f"  {w.line}:{w.column} {w.kind}" for w in report.warnings)
    if report.timings:
        lines.append(f"{'workers':>8} {'transport':>10} {'strategy':>12} {'median, s':>10} {'speedup':>8}")
        lines.extend(
            f"{row.workers:>8} {row.transport:>10} {row.strategy:>12} {row.median_seconds:>10.3f} {row.speedup:>8.3f}"
            for row in report.timings
        )
    if report.speedup_fit is not None:
        fit = report.speedup_fit
        lines.append(f"fit {fit.normalized_a:.3f}/p + {fit.normalized_b:.3f} (reference {fit.reference})")
    if report.delta_ratio is not None:
        lines.append(f"delta ratio {report.delta_ratio.aggregate:.4f}")
    return "\n".join(lines) + "\n"


def emit_report(report: Report, path: Path | None = None, table: bool = False) -> str:
    """
    Пишет отчёт в path (или только возвращает текст, если path не задан).

    Raises:
        ReportWriteError: Файл не удалось записать.
    """
    text = render_report(report)
    if path is not None:
        try:
            path.write_text(text, encoding="utf-8")
            if table:
                path.with_suffix(".txt").write_text(format_table(report), encoding="utf-8")
        except OSError as error:
            raise ReportWriteError(str(path), error.strerror or str(error)) from error
        logger.info("Отчёт записан", extra={"path": str(path), "warnings": len(report.warnings)})
    return text
