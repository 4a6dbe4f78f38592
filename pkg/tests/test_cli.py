#  type: ignore

import json
import pytest
from src.astral_settings import AstralSettings
from src.main import EXIT_ANALYSIS_ERROR, EXIT_CLEAN, EXIT_USAGE_ERROR, EXIT_WARNINGS, run

CLEAN = "int x; x = 0; while (x < 10) { x = x + 1; }\n"
DIVIDES = "int x; int y; input(x, 0, 3);\ny = 12 / x;\n"


@pytest.fixture
def settings():
    return AstralSettings(_env_file=None)


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write


def _report(path):
    return json.loads(path.read_text(encoding="utf-8"))


def test_clean_program(settings, write, tmp_path):
    source = write("clean.c", CLEAN)
    report_path = tmp_path / "report.json"
    assert run(["analyze", str(source), "--report", str(report_path), "--emit-invariants"], settings) == EXIT_CLEAN
    report = _report(report_path)
    assert report["warnings"] == []
    assert len(report["digest"]) == 64
    (invariant,) = report["invariants"]
    assert invariant["line"] == 1
    assert report["memory"]["retention"] == "loop-heads"


def test_warnings_give_exit_one(settings, write, tmp_path):
    source = write("div.c", DIVIDES)
    report_path = tmp_path / "report.json"
    assert run([str(source), "--report", str(report_path)], settings) == EXIT_WARNINGS
    (warning,) = _report(report_path)["warnings"]
    assert warning["kind"] == "div-by-zero"
    assert warning["line"] == 2


def test_report_on_stdout(settings, write, capsys):
    source = write("clean.c", CLEAN)
    assert run([str(source)], settings) == EXIT_CLEAN
    assert json.loads(capsys.readouterr().out)["version"] == 1


def test_table_on_stdout(settings, write, capsys):
    source = write("div.c", DIVIDES)
    run([str(source), "--table"], settings)
    out = capsys.readouterr().out
    assert out.startswith("digest ")
    assert "div-by-zero" in out


def test_straight_line_program_has_empty_report(settings, write, tmp_path):
    source = write("flat.c", "int x; x = 1;\n")
    report_path = tmp_path / "report.json"
    assert run([str(source), "--report", str(report_path), "--emit-invariants"], settings) == EXIT_CLEAN
    report = _report(report_path)
    assert report["warnings"] == []
    assert report["invariants"] == []


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze", "missing.c"],
        ["analyze", "{bad}", "--strategy", "block", "--seed", "3"],
        ["bench", "--workers-list", "1", "--repetitions", "0"],
        ["frobnicate"],
    ],
)
def test_usage_errors(settings, write, argv):
    argv = [write("bad.c", CLEAN).as_posix() if item == "{bad}" else item for item in argv]
    assert run(argv, settings) == EXIT_USAGE_ERROR


def test_parse_error_is_usage_error(settings, write):
    assert run([str(write("broken.c", "int x; x = ;\n"))], settings) == EXIT_USAGE_ERROR


def test_nontermination_is_analysis_error(settings, write):
    source = write("loop.c", CLEAN)
    argv = [str(source), "--iter-bound", "1", "--ladder", "1000000"]
    assert run(argv, settings.model_copy(update={"WIDENING_DELAY": 50})) == EXIT_ANALYSIS_ERROR


def test_ladder_outside_int64_is_analysis_error(settings, write, capsys):
    source = write("grow.c", "int x; x = 0; while (x >= 0) { x = x + 1; }\n")
    argv = [str(source), "--ladder", "1,10,100000000000000000000"]
    assert run(argv, settings.model_copy(update={"NARROWING_PASSES": 0})) == EXIT_ANALYSIS_ERROR
    assert "LadderError" in capsys.readouterr().err


def test_genbench_and_analyze(settings, tmp_path):
    program = tmp_path / "seq.c"
    assert run(["genbench", "--handlers", "4", "--variables", "8", "--output", str(program)], settings) == EXIT_CLEAN
    report_path = tmp_path / "report.json"
    code = run([str(program), "--workers", "2", "--report", str(report_path)], settings)
    assert code in (EXIT_CLEAN, EXIT_WARNINGS)
    report = _report(report_path)
    assert report["delta_ratio"]["samples"] == []
    assert report["delta_ratio"]["total_full_bytes"] > 0


def test_save_invariants(settings, write, tmp_path):
    source = write("clean.c", CLEAN)
    saved = tmp_path / "inv.bin"
    assert run([str(source), "--save-invariants", str(saved)], settings) == EXIT_CLEAN
    assert saved.read_bytes().startswith(b"ASTI")


def test_oracle_summaries(settings, write, tmp_path):
    source = write("div.c", DIVIDES)
    report_path = tmp_path / "report.json"
    run([str(source), "--concrete-run", "1", "--enumerate", "1000", "--report", str(report_path)], settings)
    sampled, enumerated = _report(report_path)["oracle"]
    assert sampled["mode"] == "concrete-run"
    assert enumerated["mode"] == "enumerate"
    assert [error["kind"] for error in enumerated["errors"]] == ["div-by-zero"]
    assert enumerated["uncovered"] == []


def test_bench_rows(settings, tmp_path):
    report_path = tmp_path / "bench.json"
    argv = [
        "bench", "--handlers", "4", "--variables", "8", "--workers-list", "1,2",
        "--repetitions", "2", "--strategy", "shuffle", "--report", str(report_path),
    ]
    assert run(argv, settings) in (EXIT_CLEAN, EXIT_WARNINGS)
    report = _report(report_path)
    assert [row["workers"] for row in report["timings"]] == [1, 2]
    assert all(row["strategy"] == "shuffle(0)" for row in report["timings"])
    assert len({row["digest"] for row in report["timings"]}) == 1
    assert report["timings"][0]["speedup"] == 1.0
    assert all(len(row["seconds"]) == 2 for row in report["timings"])
