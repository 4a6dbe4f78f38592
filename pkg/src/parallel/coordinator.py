"""
Мастер параллельного анализа точек диспетчеризации.
"""

import itertools
import logging
from concurrent.futures import Future, ThreadPoolExecutor
from cachetools import LRUCache
from pydantic import TypeAdapter, ValidationError
from src.domain.abstract_env import AbstractEnv
from src.domain.codec import canonical_serialize, env_digest
from src.domain.delta import apply_patch, decode_patch
from src.domain.exceptions import DomainError
from src.frontend.ast import Program
from src.frontend.pipeline import program_digest
from src.frontend.tokens import Location
from src.interpreter.flow_state import BranchResult
from src.interpreter.interfaces.dispatcher_interface import BranchAnalyzer, Dispatcher
from src.interpreter.mode import Mode
from src.interpreter.schemas.analysis_options import AnalysisOptions
from src.interpreter.schemas.warning_payload import WarningPayload
from src.parallel.delta_ratio import patch_payload_size, stats_from_sizes
from src.parallel.dispatch_points import DispatchPoint
from src.parallel.exceptions import ProtocolViolation, TransportError, WorkerFailure
from src.parallel.float_selftest import check_vector, selftest_vector
from src.parallel.interfaces.partitioner_interface import Partitioner
from src.parallel.interfaces.transport_interface import Transport, WorkerHandle
from src.parallel.partition import BlockPartitioner, PartitionPlan, TimingRecord
from src.parallel.schemas.delta_ratio_stats import DeltaRatioStats
from src.parallel.wire import ErrorMessage, Handshake, Request, Response
from src.parallel.worker import BASE_NOT_CACHED

logger = logging.getLogger(__name__)

_WARNINGS = TypeAdapter(list[WarningPayload])


class ParallelDispatcher(Dispatcher):
    """
    Диспетчер, раздающий ветви точек диспетчеризации воркерам.

    Алгоритм работы:
    ----------------
    1. При создании запускает воркеров через транспорт и выполняет рукопожатие:
       исходный текст программы, её дайджест, параметры анализа, вектор
       самопроверки. Ответ воркера сверяется с эталоном; расхождение отменяет запуск.
    2. На каждой точке строит план распределения (для greedy по длительностям
       ветвей с прошлого посещения этой точки) и отправляет каждому воркеру его
       ветви. Базовое окружение отправляется только воркерам, у которых его нет в кэше.
    3. Ответы применяются как патчи к базе; результат собирается по номеру ветви,
       поэтому порядок прихода ответов на результат не влияет.
    4. Если воркер отказал (ошибка, таймаут, обрыв), его ветви анализируются
       локально, а воркер больше не используется.

    Атрибуты класса:
    ----------------
    - `_handles`: Соединения с воркерами.
    - `_alive`: Признак живого воркера.
    - `_cached`: Зеркало кэша баз каждого воркера (LRU того же размера).
    - `_timings`: Длительности ветвей по позиции точки.
    - `delta_sizes`: Пары (байты патча без заголовка, байты полного окружения)
      по всем полученным ветвям.

    Логирование:
    ------------
    - Отказ воркера пишется как warning с номером воркера и диагностикой.
    - План каждой точки и повторная отправка базы пишутся как debug.
    """

    def __init__(
        self,
        source: str,
        program: Program,
        options: AnalysisOptions,
        transport: Transport,
        workers: int,
        partitioner: Partitioner | None = None,
        timeout: float | None = 600.0,
        cache_size: int = 4,
    ):
        if workers < 1:
            raise ValueError("число воркеров должно быть не меньше 1")
        check_vector(selftest_vector(), "мастер")
        self._partitioner = partitioner or BlockPartitioner()
        self._timeout = timeout
        self._task_ids = itertools.count(1)
        self._timings: dict[Location, TimingRecord] = {}
        self.delta_sizes: list[tuple[int, int]] = []
        self.plans: list[PartitionPlan] = []
        self.last_micros: tuple[int, ...] = ()
        self._handles = transport.open(workers)
        self._alive = [True] * workers
        self._cached: list[LRUCache[bytes, bool]] = [LRUCache(maxsize=cache_size) for _ in range(workers)]
        self._executor = ThreadPoolExecutor(max_workers=workers, thread_name_prefix="astral-io")
        try:
            self._handshake(source, program, options)
        except Exception:
            self.close()
            raise
        logger.info("Воркеры готовы", extra={"workers": workers, "transport": transport.name})

    @property
    def handles(self) -> list[WorkerHandle]:
        return list(self._handles)

    @property
    def alive(self) -> list[bool]:
        return list(self._alive)

    def delta_stats(self) -> DeltaRatioStats:
        return stats_from_sizes(self.delta_sizes)

    def _handshake(self, source: str, program: Program, options: AnalysisOptions) -> None:
        digest = program_digest(program)
        hello = Handshake(digest, selftest_vector(), options.model_dump_json().encode("utf-8"), source)
        for handle in self._handles:
            handle.send(hello)
        for handle in self._handles:
            reply = handle.receive(self._timeout)
            if isinstance(reply, ErrorMessage):
                raise WorkerFailure(handle.worker_id, reply.diagnostic)
            if not isinstance(reply, Handshake):
                raise ProtocolViolation(f"воркер {handle.worker_id} ответил {type(reply).__name__} на рукопожатие")
            if reply.program_digest != digest:
                raise WorkerFailure(handle.worker_id, "program digest mismatch")
            check_vector(reply.selftest, f"воркер {handle.worker_id}")

    def dispatch(
        self, point: DispatchPoint, base: AbstractEnv, mode: Mode, local: BranchAnalyzer
    ) -> list[BranchResult]:
        width = len(point.branches)
        plan = self._partitioner.plan(width, len(self._handles), self._timings.get(point.loc))
        self.plans.append(plan)
        logger.debug("План точки диспетчеризации", extra={"loc": str(point.loc), "plan": plan.strategy})
        base_bytes = canonical_serialize(base)
        digest = env_digest(base)
        futures: dict[int, Future[list[BranchResult]]] = {}
        stranded: list[int] = []
        for worker, group in enumerate(plan.groups()):
            if not group:
                continue
            if not self._alive[worker]:
                stranded.extend(group)
                continue
            task_id = next(self._task_ids)
            futures[worker] = self._executor.submit(
                self._remote, worker, task_id, group, point, base, base_bytes, digest, mode
            )
        results: dict[int, BranchResult] = {}
        for index in stranded:
            results[index] = local(point, index, base, mode)
        for worker, future in futures.items():
            try:
                for result in future.result():
                    results[result.index] = result
            except (WorkerFailure, TransportError, ProtocolViolation, DomainError) as error:
                self._fail(worker, error)
                for index in plan.groups()[worker]:
                    results[index] = local(point, index, base, mode)
        ordered = [results[index] for index in range(width)]
        self._timings[point.loc] = TimingRecord(tuple(result.micros for result in ordered))
        self.last_micros = self._timings[point.loc].micros
        return ordered

    def _fail(self, worker: int, error: Exception) -> None:
        logger.warning(
            "Воркер отказал, его ветви анализируются локально",
            extra={"worker": worker, "diagnostic": str(error)},
        )
        self._alive[worker] = False
        try:
            self._handles[worker].kill()
        except Exception:
            logger.exception("Не удалось остановить воркер", extra={"worker": worker})

    def _exchange(self, worker: int, request: Request) -> Response:
        handle = self._handles[worker]
        handle.send(request)
        reply = handle.receive(self._timeout)
        if isinstance(reply, ErrorMessage):
            if reply.diagnostic == BASE_NOT_CACHED:
                raise LookupError(reply.diagnostic)
            raise WorkerFailure(worker, reply.diagnostic)
        if not isinstance(reply, Response) or reply.task_id != request.task_id:
            raise ProtocolViolation(f"воркер {worker} ответил не на задачу {request.task_id}")
        return reply

    def _remote(
        self,
        worker: int,
        task_id: int,
        group: list[int],
        point: DispatchPoint,
        base: AbstractEnv,
        base_bytes: bytes,
        digest: bytes,
        mode: Mode,
    ) -> list[BranchResult]:
        cached = self._cached[worker].get(digest, False)
        request = Request(task_id, point.loc, mode, tuple(group), digest, None if cached else base_bytes)
        try:
            reply = self._exchange(worker, request)
        except LookupError:
            logger.debug("База вытеснена у воркера, отправляется заново", extra={"worker": worker})
            try:
                reply = self._exchange(worker, Request(task_id, point.loc, mode, tuple(group), digest, base_bytes))
            except LookupError as error:
                raise ProtocolViolation(f"воркер {worker} не принял присланную базу") from error
        self._cached[worker][digest] = True
        if sorted(record.index for record in reply.records) != sorted(group):
            raise ProtocolViolation(f"воркер {worker} вернул не те ветви")
        results = []
        for record in reply.records:
            env = apply_patch(base, decode_patch(record.patch))
            try:
                warnings = tuple(payload.to_alarm() for payload in _WARNINGS.validate_json(record.warnings_json))
            except ValidationError as error:
                raise ProtocolViolation(f"повреждённые предупреждения от воркера {worker}") from error
            invariants = tuple((loc, apply_patch(base, decode_patch(patch))) for loc, patch in record.invariants)
            self.delta_sizes.append((patch_payload_size(record.patch), len(canonical_serialize(env))))
            results.append(BranchResult(record.index, env, warnings, invariants, record.micros))
        return results

    def close(self) -> None:
        for worker, handle in enumerate(self._handles):
            try:
                handle.close()
            except Exception:
                logger.exception("Ошибка при закрытии воркера", extra={"worker": worker})
        self._executor.shutdown(wait=True)
