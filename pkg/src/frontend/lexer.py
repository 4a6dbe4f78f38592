import logging
import re
from src.frontend.exceptions import LexicalError
from src.frontend.tokens import KEYWORDS, Location, Token, TokenKind

logger = logging.getLogger(__name__)

DISPATCH_ANNOTATION = "/*@dispatch*/"

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<line_comment>//[^\n]*)
  | (?P<annotation>/\*@dispatch\*/)
  | (?P<block_comment>/\*.*?\*/)
  | (?P<float>\d+\.\d*(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+)
  | (?P<integer>\d+)
  | (?P<identifier>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct><=|>=|==|!=|&&|\|\||[-+*/%<>=!(){}\[\];,:])
    """,
    re.VERBOSE | re.DOTALL,
)


def tokenize(source: str) -> list[Token]:
    """
    Разбивает исходный текст на токены.

    Пробелы и комментарии отбрасываются, кроме аннотации /*@dispatch*/, которая
    становится отдельным токеном. Конкатенация текстов токенов совпадает с входом
    без пробелов и комментариев.

    Args:
        source (str): Текст программы.

    Returns:
        list[Token]: Токены в порядке следования.

    Raises:
        LexicalError: Если встретился символ, не начинающий ни один токен,
            или незакрытый комментарий.
    """
    tokens: list[Token] = []
    pos = 0
    line = 1
    line_start = 0
    while pos < len(source):
        match = _TOKEN_RE.match(source, pos)
        loc = Location(line, pos - line_start + 1)
        if source.startswith("/*", pos) and (match is None or match.lastgroup == "punct"):
            raise LexicalError("незакрытый комментарий", loc)
        if match is None:
            raise LexicalError(f"неизвестный символ {source[pos]!r}", loc)
        group = match.lastgroup
        text = match.group()
        if group == "annotation":
            tokens.append(Token(TokenKind.ANNOTATION, text, loc))
        elif group == "float":
            tokens.append(Token(TokenKind.FLOAT, text, loc))
        elif group == "integer":
            tokens.append(Token(TokenKind.INTEGER, text, loc))
        elif group == "identifier":
            kind = TokenKind.KEYWORD if text in KEYWORDS else TokenKind.IDENTIFIER
            tokens.append(Token(kind, text, loc))
        elif group == "punct":
            tokens.append(Token(TokenKind.PUNCTUATION, text, loc))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            line_start = pos + text.rindex("\n") + 1
        pos = match.end()
    logger.debug("Исходный текст разбит на токены", extra={"tokens_count": len(tokens)})
    return tokens
