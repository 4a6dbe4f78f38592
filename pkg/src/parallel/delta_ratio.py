from collections.abc import Iterable
from src.domain.abstract_env import AbstractEnv
from src.domain.codec import canonical_serialize
from src.domain.delta import PATCH_HEADER_SIZE, diff, encode_patch
from src.parallel.schemas.delta_ratio_stats import DeltaRatioSample, DeltaRatioStats


def _ratio(patch_bytes: int, full_bytes: int) -> float:
    return patch_bytes / full_bytes if full_bytes else 0.0


def stats_from_sizes(sizes: Iterable[tuple[int, int]]) -> DeltaRatioStats:
    """Статистика по парам (байты патча без заголовка, байты полного окружения)."""
    samples = [
        DeltaRatioSample(patch_bytes=patch, full_bytes=full, ratio=_ratio(patch, full)) for patch, full in sizes
    ]
    total_patch = sum(sample.patch_bytes for sample in samples)
    total_full = sum(sample.full_bytes for sample in samples)
    return DeltaRatioStats(
        samples=samples,
        total_patch_bytes=total_patch,
        total_full_bytes=total_full,
        aggregate=_ratio(total_patch, total_full),
        max_ratio=max((sample.ratio for sample in samples), default=0.0),
    )


def patch_payload_size(encoded_patch: bytes) -> int:
    return len(encoded_patch) - PATCH_HEADER_SIZE


def measure_delta_ratio(base: AbstractEnv, results: Iterable[AbstractEnv]) -> DeltaRatioStats:
    """Сколько байт занимает патч base -> результат относительно полного результата."""
    return stats_from_sizes(
        (patch_payload_size(encode_patch(diff(base, result))), len(canonical_serialize(result)))
        for result in results
    )
