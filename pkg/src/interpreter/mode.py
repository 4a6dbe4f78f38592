from enum import StrEnum


class Mode(StrEnum):
    """
    Режим анализа.

    ITERATE: поиск инвариантов, предупреждения не выдаются.
    REPORT: повторный проход от найденных инвариантов, предупреждения выдаются.
    """

    ITERATE = "iterate"
    REPORT = "report"
