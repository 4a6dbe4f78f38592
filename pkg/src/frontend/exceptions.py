from src.frontend.tokens import Location


class FrontendError(Exception):
    """
    Базовое исключение фронтенда: лексера, парсера и валидатора.

    Attributes:
        loc (Location | None): Позиция в исходном тексте, если она известна.
    """

    def __init__(self, message: str, loc: Location | None = None):
        self.loc = loc
        prefix = f"{loc}: " if loc is not None else ""
        super().__init__(prefix + message)


class LexicalError(FrontendError):
    pass


class ParseError(FrontendError):
    pass


class TypeCheckError(FrontendError):
    pass


class BackwardGoto(FrontendError):
    pass


class InvalidGoto(FrontendError):
    pass


class DuplicateLabel(FrontendError):
    pass


class MisplacedBreak(FrontendError):
    pass


class RecursiveCall(FrontendError):
    """
    Граф вызовов содержит цикл.

    Attributes:
        cycle (list[str]): Функции цикла в порядке вызова, начиная с первой найденной.
    """

    def __init__(self, cycle: list[str], loc: Location | None = None):
        self.cycle = cycle
        super().__init__("рекурсивный вызов: " + " -> ".join([*cycle, cycle[0]]), loc)


class UnresolvedTarget(FrontendError):
    pass
