#  type: ignore

import json
import os
import pytest
from src.astral_settings import AstralSettings
from src.bench.speedup_fit import fit_speedup
from src.main import run


def test_fit_recovers_synthetic_model():
    workers = [1, 2, 3, 4, 8]
    fit = fit_speedup(workers, [6.0 / p + 2.0 for p in workers])
    assert fit.a == pytest.approx(6.0)
    assert fit.b == pytest.approx(2.0)
    assert fit.normalized_a == pytest.approx(0.75)
    assert fit.normalized_b == pytest.approx(0.25)


def test_fit_tolerates_noise():
    workers = [1, 1, 2, 2, 4, 4]
    seconds = [10.1, 9.9, 5.6, 5.4, 3.1, 2.9]
    fit = fit_speedup(workers, seconds)
    assert fit.a == pytest.approx(9.286, abs=0.01)
    assert fit.b == pytest.approx(0.75, abs=0.01)


def test_fit_needs_two_worker_counts():
    assert fit_speedup([2, 2, 2], [1.0, 1.1, 0.9]) is None


@pytest.mark.slow
@pytest.mark.skipif((os.cpu_count() or 1) < 2, reason="нужно хотя бы два ядра")
def test_two_workers_beat_one(tmp_path):
    report_path = tmp_path / "bench.json"
    argv = [
        "bench", "--handlers", "16", "--variables", "2000", "--touched-fraction", "0.1", "--depth", "2",
        "--workers-list", "1,2", "--repetitions", "3", "--transport", "proc", "--report", str(report_path),
    ]
    run(argv, AstralSettings(_env_file=None))
    report = json.loads(report_path.read_text(encoding="utf-8"))
    one, two = report["timings"]
    assert one["digest"] == two["digest"]
    assert two["median_seconds"] <= 0.75 * one["median_seconds"]
    assert report["speedup_fit"] is not None
