class DomainError(Exception):
    """Базовое исключение абстрактного домена."""


class KindMismatch(DomainError):
    pass


class DigestMismatch(DomainError):
    pass


class UnboundVariable(DomainError):
    pass


class Rebind(DomainError):
    pass


class PatchFormatError(DomainError):
    pass


class LadderError(DomainError):
    """Порог лестницы расширения вне диапазона int64."""
