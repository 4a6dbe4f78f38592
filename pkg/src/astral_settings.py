import typing
from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

__all__ = ("AstralSettings",)

DEFAULT_LADDER = "-1000000000,-1000000,-1000,-100,-10,-1,1,10,100,1000,1000000,1000000000"


class AstralSettings(BaseSettings):
    """
    Настройки анализатора.

    Класс использует pydantic BaseSettings: значения читаются из переменных окружения
    с префиксом ASTRAL_ или из файла .astralenv в корне репозитория. Флаги командной
    строки имеют приоритет над этими значениями (см. RunConfig).

    Атрибуты:
        WORKER (str | None): Адрес, на котором процесс работает как воркер
            ("fd:N" или "host:port"). None означает обычный режим CLI.
        LADDER (str): Пороги расширения через запятую, используются как есть.
        ITER_BOUND (int): Предел числа итераций поиска неподвижной точки.
        WIDENING_DELAY (int): Сколько первых итераций используют обычное объединение.
        NARROWING_PASSES (int): Число проходов сужения после расширения.
        ENUM_BOUND (int): Предел размера пространства состояний для перебора.
        STEP_BUDGET (int): Бюджет шагов для одиночного конкретного запуска.
        MIN_BRANCHES (int): Минимальное число ветвей у автоматической точки диспетчеризации.
        AUTO_DISPATCH (bool): Искать точки диспетчеризации без аннотаций.
        WORKER_CACHE_SIZE (int): Сколько базовых окружений хранит воркер.
        WORKER_TIMEOUT (float): Таймаут ответа воркера в секундах.
        RETENTION (str): Политика хранения инвариантов.
        LOG_LEVEL (str): Уровень логирования.
        LOG_FILE (str | None): Файл для логов, None — только stderr.

    Конфигурация (model_config):
        - extra="ignore": Игнорирует дополнительные поля.
        - frozen=True: Экземпляр неизменяем после создания.
        - case_sensitive=False: Имена переменных окружения нечувствительны к регистру.
        - env_prefix="ASTRAL_": Префикс для переменных окружения.
    """
    WORKER: str | None = Field(default=None)
    LADDER: str = Field(default=DEFAULT_LADDER)
    ITER_BOUND: int = Field(default=1000, ge=1)
    WIDENING_DELAY: int = Field(default=2, ge=0)
    NARROWING_PASSES: int = Field(default=2, ge=0)
    ENUM_BOUND: int = Field(default=1_000_000, ge=1)
    STEP_BUDGET: int = Field(default=100_000, ge=1)
    MIN_BRANCHES: int = Field(default=2, ge=1)
    AUTO_DISPATCH: bool = Field(default=True)
    WORKER_CACHE_SIZE: int = Field(default=4, ge=1)
    WORKER_TIMEOUT: float = Field(default=600.0, gt=0)
    RETENTION: str = Field(default="loop-heads")
    LOG_LEVEL: str = Field(default="INFO")
    LOG_FILE: str | None = Field(default=None)

    model_config: typing.ClassVar[SettingsConfigDict] = SettingsConfigDict(
        extra="ignore",
        frozen=True,
        case_sensitive=False,
        env_file=Path(__file__).parent.parent / ".astralenv",
        env_prefix="ASTRAL_",
    )
