from enum import StrEnum
import attrs

__all__ = ("KEYWORDS", "Location", "Token", "TokenKind")


class TokenKind(StrEnum):
    IDENTIFIER = "identifier"
    INTEGER = "integer-literal"
    FLOAT = "float-literal"
    KEYWORD = "keyword"
    PUNCTUATION = "punctuation"
    ANNOTATION = "annotation"


KEYWORDS = frozenset({
    "int", "float", "void", "if", "else", "while", "goto", "break", "continue",
    "return", "switch", "case", "default", "assert", "input",
})


@attrs.frozen(order=True)
class Location:
    """Позиция в исходном тексте: строка и столбец, обе с единицы."""

    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


@attrs.frozen
class Token:
    kind: TokenKind
    text: str
    loc: Location

    def is_punct(self, text: str) -> bool:
        return self.kind is TokenKind.PUNCTUATION and self.text == text

    def is_keyword(self, text: str) -> bool:
        return self.kind is TokenKind.KEYWORD and self.text == text
