from pydantic import BaseModel, ConfigDict, Field


class BenchSpec(BaseModel):
    """
    Параметры синтетической программы-секвенсора.

    Attributes:
        handlers (int): Число ветвей switch (секвенсоров).
        body_size (int): Примерное число операторов в ветви.
        variables (int): Размер глобального вектора состояния.
        touched_fraction (float): Доля вектора, которую меняет одна ветвь.
        depth (int): Глубина вложенных циклов внутри ветви.
        seed (int): Зерно генератора.
        helpers (int): Дополнительные функции без циклов, вызываемые из ветвей.
        blocks (int): Дополнительные вложенные блоки в каждой ветви.
    """

    model_config = ConfigDict(frozen=True)

    handlers: int = Field(default=8, ge=1)
    body_size: int = Field(default=4, ge=1)
    variables: int = Field(default=16, ge=1)
    touched_fraction: float = Field(default=0.25, gt=0, le=1)
    depth: int = Field(default=0, ge=0)
    seed: int = 0
    helpers: int = Field(default=0, ge=0)
    blocks: int = Field(default=0, ge=0)
