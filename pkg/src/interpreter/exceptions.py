from src.frontend.tokens import Location


class AnalysisError(Exception):
    """
    Базовое исключение абстрактного интерпретатора.

    Attributes:
        loc (Location | None): Позиция в исходном тексте, если она известна.
    """

    def __init__(self, message: str, loc: Location | None = None):
        self.loc = loc
        prefix = f"{loc}: " if loc is not None else ""
        super().__init__(prefix + message)


class CheckFailed(AnalysisError):
    """Повторная проверка показала, что инвариант цикла не является постфиксной точкой."""


class NonTermination(AnalysisError):
    """Поиск неподвижной точки превысил предел итераций."""


class InternalScopeError(AnalysisError):
    """Нарушение внутреннего инварианта областей видимости: ошибка анализатора, а не входной программы."""
