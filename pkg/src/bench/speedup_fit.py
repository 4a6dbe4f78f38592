import numpy as np
from src.bench.schemas.report import SpeedupFit


def fit_speedup(workers: list[int], seconds: list[float]) -> SpeedupFit | None:
    """
    Наименьшие квадраты для t(p) = a/p + b.

    Нужны хотя бы два разных числа воркеров; иначе подгонка не определена.
    """
    if len(set(workers)) < 2:
        return None
    design = np.column_stack([1.0 / np.asarray(workers, dtype=np.float64), np.ones(len(workers))])
    (a, b), *_ = np.linalg.lstsq(design, np.asarray(seconds, dtype=np.float64), rcond=None)
    total = a + b
    if total == 0:
        return SpeedupFit(a=float(a), b=float(b), normalized_a=0.0, normalized_b=0.0)
    return SpeedupFit(a=float(a), b=float(b), normalized_a=float(a / total), normalized_b=float(b / total))
