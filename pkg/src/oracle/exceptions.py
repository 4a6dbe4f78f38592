class OracleError(Exception):
    """Базовое исключение конкретного оракула."""


class StateSpaceTooLarge(OracleError):
    pass


class BudgetExhausted(OracleError):
    """Одиночный запуск исчерпал бюджет шагов; run_sampled возвращает это как флаг."""
