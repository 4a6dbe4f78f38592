import hashlib
import logging
from pathlib import Path
from src.frontend.ast import Program
from src.frontend.lexer import tokenize
from src.frontend.parser import parse_program
from src.frontend.printer import print_program
from src.frontend.validator import validate

logger = logging.getLogger(__name__)


def compile_source(source: str) -> Program:
    """Лексер, парсер и валидатор одной цепочкой."""
    return validate(parse_program(tokenize(source)))


def load_program(path: Path) -> tuple[str, Program]:
    source = path.read_text(encoding="utf-8")
    program = compile_source(source)
    logger.info("Программа загружена", extra={"path": str(path), "functions": len(program.functions)})
    return source, program


def program_digest(program: Program) -> bytes:
    """SHA-256 канонического текста программы; мастер и воркеры сверяют его при рукопожатии."""
    return hashlib.sha256(print_program(program).encode("utf-8")).digest()
