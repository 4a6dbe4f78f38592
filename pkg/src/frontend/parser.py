import logging
import math
from src.domain.numeric import INT64_MAX, INT64_MIN
from src.frontend.ast import (
    ARITHMETIC_OPS, Assert, Assign, BinOp, Block, Break, Call, Cast, Const, Continue, Decl,
    Expr, Function, FunctionPointer, Goto, If, IndexLV, IndirectCall, Input, Label, LValue,
    Program, Read, Return, ScalarType, Stmt, Switch, SwitchArm, UnOp, VarDecl, VarLV, While,
)
from src.frontend.exceptions import ParseError, TypeCheckError
from src.frontend.tokens import Location, Token, TokenKind

logger = logging.getLogger(__name__)

ENTRY_FUNCTION = "main"

_BINARY_LEVELS: tuple[frozenset[str], ...] = (
    frozenset({"||"}),
    frozenset({"&&"}),
    frozenset({"==", "!="}),
    frozenset({"<", "<=", ">", ">="}),
    frozenset({"+", "-"}),
    frozenset({"*", "/", "%"}),
)
_TYPE_KEYWORDS = {"int": ScalarType.INT, "float": ScalarType.FLOAT}


class Parser:
    """
    Рекурсивный спуск по токенам мини-C с разрешением имён и проверкой типов.

    Операторы верхнего уровня образуют тело неявной функции main, объявления
    верхнего уровня становятся глобальными переменными.
    """

    def __init__(self, tokens: list[Token]):
        self._tokens = tokens
        self._pos = 0
        self._scopes: list[dict[str, VarDecl]] = [{}]
        self._function = ENTRY_FUNCTION
        self._function_ret: ScalarType | None = None
        self._shadow_counts: dict[tuple[str, str], int] = {}

    # --- token helpers -------------------------------------------------------

    def _peek(self, offset: int = 0) -> Token | None:
        index = self._pos + offset
        return self._tokens[index] if index < len(self._tokens) else None

    def _here(self) -> Location:
        token = self._peek()
        if token is not None:
            return token.loc
        return self._tokens[-1].loc if self._tokens else Location(1, 1)

    def _next(self) -> Token:
        token = self._peek()
        if token is None:
            raise ParseError("неожиданный конец программы", self._here())
        self._pos += 1
        return token

    def _at_punct(self, text: str, offset: int = 0) -> bool:
        token = self._peek(offset)
        return token is not None and token.is_punct(text)

    def _at_keyword(self, text: str, offset: int = 0) -> bool:
        token = self._peek(offset)
        return token is not None and token.is_keyword(text)

    def _at_kind(self, kind: TokenKind, offset: int = 0) -> bool:
        token = self._peek(offset)
        return token is not None and token.kind is kind

    def _expect_punct(self, text: str) -> Token:
        token = self._next()
        if not token.is_punct(text):
            raise ParseError(f"ожидалось {text!r}, получено {token.text!r}", token.loc)
        return token

    def _expect_keyword(self, text: str) -> Token:
        token = self._next()
        if not token.is_keyword(text):
            raise ParseError(f"ожидалось {text!r}, получено {token.text!r}", token.loc)
        return token

    def _expect_identifier(self) -> Token:
        token = self._next()
        if token.kind is not TokenKind.IDENTIFIER:
            raise ParseError(f"ожидался идентификатор, получено {token.text!r}", token.loc)
        return token

    # --- program -------------------------------------------------------------

    def parse_program(self) -> Program:
        globals_: list[Decl] = []
        functions: list[Function] = []
        pointers: list[FunctionPointer] = []
        top_level: list[Stmt] = []
        first_loc = self._here()
        while self._peek() is not None:
            if self._at_function_definition():
                functions.append(self._parse_function())
            elif self._at_keyword("void") and self._at_punct("(", 1):
                pointers.append(self._parse_function_pointer())
            elif self._peek().kind is TokenKind.KEYWORD and self._peek().text in _TYPE_KEYWORDS:  # type: ignore[union-attr]
                for stmt in self._parse_declaration(is_global=True):
                    if isinstance(stmt, Decl):
                        globals_.append(stmt)
                    else:
                        top_level.append(stmt)
            else:
                self._function, self._function_ret = ENTRY_FUNCTION, None
                top_level.extend(self._parse_statement())

        names = [function.name for function in functions]
        if ENTRY_FUNCTION in names:
            if top_level:
                raise ParseError("операторы вне функций при явно определённой main", top_level[0].loc)
        else:
            functions.append(Function(ENTRY_FUNCTION, None, Block(tuple(top_level), first_loc), first_loc))
        for name in names:
            if names.count(name) > 1:
                raise ParseError(f"функция {name} определена повторно")
        program = Program(tuple(globals_), tuple(functions), tuple(pointers), ENTRY_FUNCTION)
        logger.debug(
            "Программа разобрана",
            extra={"functions": len(program.functions), "globals": len(program.globals)},
        )
        return program

    def _at_function_definition(self) -> bool:
        token = self._peek()
        if token is None or token.kind is not TokenKind.KEYWORD:
            return False
        if token.text not in ("int", "float", "void"):
            return False
        return self._at_kind(TokenKind.IDENTIFIER, 1) and self._at_punct("(", 2)

    def _parse_function(self) -> Function:
        type_token = self._next()
        ret = _TYPE_KEYWORDS.get(type_token.text)
        name = self._expect_identifier().text
        self._parse_empty_parameters()
        self._function, self._function_ret = name, ret
        body = self._parse_block()
        self._function, self._function_ret = ENTRY_FUNCTION, None
        return Function(name, ret, body, type_token.loc)

    def _parse_empty_parameters(self) -> None:
        self._expect_punct("(")
        if self._at_keyword("void"):
            self._next()
        self._expect_punct(")")

    def _parse_function_pointer(self) -> FunctionPointer:
        start = self._expect_keyword("void").loc
        self._expect_punct("(")
        self._expect_punct("*")
        name = self._expect_identifier().text
        self._expect_punct(")")
        self._parse_empty_parameters()
        self._expect_punct("=")
        self._expect_punct("{")
        targets = [self._expect_identifier().text]
        while self._at_punct(","):
            self._next()
            targets.append(self._expect_identifier().text)
        self._expect_punct("}")
        self._expect_punct(";")
        return FunctionPointer(name, tuple(targets), start)

    # --- declarations --------------------------------------------------------

    def _declare(self, name: str, ty: ScalarType, size: int | None, loc: Location, is_global: bool) -> VarDecl:
        scope = self._scopes[-1]
        if name in scope:
            raise TypeCheckError(f"переменная {name} уже объявлена в этой области", loc)
        if is_global:
            cell = name
        else:
            key = (self._function, name)
            count = self._shadow_counts.get(key, 0)
            self._shadow_counts[key] = count + 1
            cell = f"{self._function}.{name}" if count == 0 else f"{self._function}.{name}.{count}"
        decl = VarDecl(name, ty, size, cell, is_global, loc)
        scope[name] = decl
        return decl

    def _parse_declaration(self, is_global: bool) -> list[Stmt]:
        type_token = self._next()
        ty = _TYPE_KEYWORDS[type_token.text]
        name_token = self._expect_identifier()
        size: int | None = None
        if self._at_punct("["):
            self._next()
            size_token = self._next()
            if size_token.kind is not TokenKind.INTEGER or int(size_token.text) <= 0:
                raise ParseError("размер массива должен быть положительной целой константой", size_token.loc)
            size = int(size_token.text)
            self._expect_punct("]")
        initializer: Expr | None = None
        if self._at_punct("="):
            if size is not None:
                raise ParseError("инициализация массива не поддерживается", self._here())
            self._next()
            initializer = self._parse_expr()
        self._expect_punct(";")
        decl = self._declare(name_token.text, ty, size, name_token.loc, is_global)
        stmts: list[Stmt] = [Decl(decl, type_token.loc)]
        if initializer is not None:
            target = VarLV(decl, name_token.loc)
            self._check_same_type(ty, initializer.ty, name_token.loc)
            stmts.append(Assign(target, initializer, name_token.loc))
        return stmts

    def _lookup(self, token: Token) -> VarDecl:
        for scope in reversed(self._scopes):
            if token.text in scope:
                return scope[token.text]
        raise TypeCheckError(f"необъявленная переменная {token.text}", token.loc)

    # --- statements ----------------------------------------------------------

    def _parse_block(self) -> Block:
        start = self._expect_punct("{").loc
        self._scopes.append({})
        stmts: list[Stmt] = []
        while not self._at_punct("}"):
            if self._peek() is None:
                raise ParseError("незакрытый блок", start)
            stmts.extend(self._parse_statement())
        self._next()
        self._scopes.pop()
        return Block(tuple(stmts), start)

    def _parse_body(self) -> Block:
        if self._at_punct("{"):
            return self._parse_block()
        loc = self._here()
        self._scopes.append({})
        stmts = self._parse_statement()
        self._scopes.pop()
        return Block(tuple(stmts), loc)

    def _parse_statement(self) -> list[Stmt]:
        token = self._peek()
        if token is None:
            raise ParseError("ожидался оператор", self._here())
        if token.kind is TokenKind.ANNOTATION:
            self._next()
            return [self._parse_annotated(token)]
        if token.is_punct("{"):
            return [self._parse_block()]
        if token.kind is TokenKind.KEYWORD:
            if token.text in _TYPE_KEYWORDS:
                return self._parse_declaration(is_global=False)
            return [self._parse_keyword_statement(token)]
        if token.kind is TokenKind.IDENTIFIER and self._at_punct(":", 1):
            self._next()
            self._next()
            return [Label(token.text, token.loc)]
        if token.kind is TokenKind.IDENTIFIER and self._at_punct("(", 1):
            stmt = self._parse_direct_call(None, token.loc)
            self._expect_punct(";")
            return [stmt]
        if token.is_punct("(") and self._at_punct("*", 1):
            stmt = self._parse_indirect_call(None, token.loc, annotated=False)
            self._expect_punct(";")
            return [stmt]
        return [self._parse_assignment(annotated=False)]

    def _parse_annotated(self, annotation: Token) -> Stmt:
        if self._at_keyword("switch"):
            return self._parse_switch(annotated=True)
        if self._at_keyword("if"):
            return self._parse_if(annotated=True)
        if self._at_punct("(") and self._at_punct("*", 1):
            stmt = self._parse_indirect_call(None, self._here(), annotated=True)
            self._expect_punct(";")
            return stmt
        if self._at_kind(TokenKind.IDENTIFIER):
            stmt = self._parse_assignment(annotated=True)
            if isinstance(stmt, IndirectCall):
                return stmt
        raise ParseError("аннотация dispatch допустима только перед switch, if или косвенным вызовом", annotation.loc)

    def _parse_keyword_statement(self, token: Token) -> Stmt:
        match token.text:
            case "if":
                return self._parse_if(annotated=False)
            case "while":
                self._next()
                cond = self._parse_condition()
                return While(cond, self._parse_body(), token.loc)
            case "switch":
                return self._parse_switch(annotated=False)
            case "goto":
                self._next()
                label = self._expect_identifier().text
                self._expect_punct(";")
                return Goto(label, token.loc)
            case "break":
                self._next()
                self._expect_punct(";")
                return Break(token.loc)
            case "continue":
                self._next()
                self._expect_punct(";")
                return Continue(token.loc)
            case "return":
                return self._parse_return()
            case "assert":
                self._next()
                cond = self._parse_condition()
                self._expect_punct(";")
                return Assert(cond, token.loc)
            case "input":
                return self._parse_input()
        raise ParseError(f"неожиданное ключевое слово {token.text!r}", token.loc)

    def _parse_condition(self) -> Expr:
        self._expect_punct("(")
        cond = self._parse_expr()
        self._expect_punct(")")
        if cond.ty is not ScalarType.INT:
            raise TypeCheckError("условие должно иметь тип int", cond.loc)
        return cond

    def _parse_if(self, annotated: bool) -> If:
        start = self._expect_keyword("if").loc
        cond = self._parse_condition()
        then = self._parse_body()
        orelse: Block | If | None = None
        if self._at_keyword("else"):
            self._next()
            orelse = self._parse_if(annotated=False) if self._at_keyword("if") else self._parse_body()
        return If(cond, then, orelse, start, annotated)

    def _parse_switch(self, annotated: bool) -> Switch:
        start = self._expect_keyword("switch").loc
        self._expect_punct("(")
        scrutinee = self._parse_expr()
        self._expect_punct(")")
        if scrutinee.ty is not ScalarType.INT:
            raise TypeCheckError("выражение switch должно иметь тип int", scrutinee.loc)
        self._expect_punct("{")
        arms: list[SwitchArm] = []
        seen: set[int | None] = set()
        while not self._at_punct("}"):
            head = self._next()
            value: int | None
            if head.is_keyword("case"):
                value = self._parse_int_constant()
            elif head.is_keyword("default"):
                value = None
            else:
                raise ParseError(f"ожидалось case или default, получено {head.text!r}", head.loc)
            if value in seen:
                raise ParseError("повторная метка case", head.loc)
            seen.add(value)
            self._expect_punct(":")
            body_loc = self._here()
            self._scopes.append({})
            stmts: list[Stmt] = []
            while not (self._at_keyword("case") or self._at_keyword("default") or self._at_punct("}")):
                if self._peek() is None:
                    raise ParseError("незакрытый switch", start)
                stmts.extend(self._parse_statement())
            self._scopes.pop()
            arms.append(SwitchArm(value, Block(tuple(stmts), body_loc), head.loc))
        self._next()
        return Switch(scrutinee, tuple(arms), start, annotated)

    def _parse_int_constant(self) -> int:
        negative = False
        if self._at_punct("-"):
            self._next()
            negative = True
        token = self._next()
        if token.kind is not TokenKind.INTEGER:
            raise ParseError("ожидалась целая константа", token.loc)
        value = -int(token.text) if negative else int(token.text)
        if not INT64_MIN <= value <= INT64_MAX:
            raise ParseError("целая константа вне 64-битного диапазона", token.loc)
        return value

    def _parse_number_constant(self, ty: ScalarType) -> Const:
        loc = self._here()
        negative = False
        if self._at_punct("-"):
            self._next()
            negative = True
        token = self._next()
        if token.kind is TokenKind.INTEGER and ty is ScalarType.INT:
            value: int | float = -int(token.text) if negative else int(token.text)
            if not INT64_MIN <= value <= INT64_MAX:
                raise ParseError("целая константа вне 64-битного диапазона", token.loc)
        elif token.kind in (TokenKind.INTEGER, TokenKind.FLOAT) and ty is ScalarType.FLOAT:
            value = float(token.text)
            if not math.isfinite(value):
                raise ParseError("вещественная константа вне диапазона", token.loc)
            value = -value if negative else value
        else:
            raise ParseError(f"ожидалась числовая константа типа {ty}", token.loc)
        return Const(value, ty, loc)

    def _parse_input(self) -> Input:
        start = self._expect_keyword("input").loc
        self._expect_punct("(")
        target = self._parse_lvalue()
        self._expect_punct(",")
        lo = self._parse_number_constant(target.decl.ty)
        self._expect_punct(",")
        hi = self._parse_number_constant(target.decl.ty)
        self._expect_punct(")")
        self._expect_punct(";")
        if lo.value > hi.value:
            raise ParseError("нижняя граница input больше верхней", lo.loc)
        return Input(target, lo, hi, start)

    def _parse_return(self) -> Return:
        start = self._expect_keyword("return").loc
        if self._at_punct(";"):
            self._next()
            return Return(None, start)
        value = self._parse_expr()
        self._expect_punct(";")
        if self._function_ret is None:
            raise TypeCheckError(f"функция {self._function} не возвращает значение", value.loc)
        self._check_same_type(self._function_ret, value.ty, value.loc)
        return Return(value, start)

    def _parse_direct_call(self, target: LValue | None, loc: Location) -> Call:
        callee = self._expect_identifier().text
        self._expect_punct("(")
        self._expect_punct(")")
        return Call(callee, target, loc)

    def _parse_indirect_call(self, target: LValue | None, loc: Location, annotated: bool) -> IndirectCall:
        self._expect_punct("(")
        self._expect_punct("*")
        pointer = self._expect_identifier().text
        self._expect_punct(")")
        self._expect_punct("(")
        self._expect_punct(")")
        return IndirectCall(pointer, (), target, loc, annotated)

    def _parse_assignment(self, annotated: bool) -> Stmt:
        start = self._here()
        name_token = self._expect_identifier()
        index: Expr | None = None
        if self._at_punct("["):
            self._next()
            index = self._parse_expr()
            self._expect_punct("]")
        self._expect_punct("=")
        if self._at_kind(TokenKind.IDENTIFIER) and self._at_punct("(", 1):
            target = self._resolve_lvalue(name_token, index)
            stmt: Stmt = self._parse_direct_call(target, start)
        elif self._at_punct("(") and self._at_punct("*", 1):
            target = self._resolve_lvalue(name_token, index)
            stmt = self._parse_indirect_call(target, start, annotated)
        else:
            value = self._parse_expr()
            target = self._resolve_lvalue(name_token, index)
            self._check_same_type(target.decl.ty, value.ty, value.loc)
            stmt = Assign(target, value, start)
        self._expect_punct(";")
        return stmt

    def _parse_lvalue(self) -> LValue:
        name_token = self._expect_identifier()
        index: Expr | None = None
        if self._at_punct("["):
            self._next()
            index = self._parse_expr()
            self._expect_punct("]")
        return self._resolve_lvalue(name_token, index)

    def _resolve_lvalue(self, name_token: Token, index: Expr | None) -> LValue:
        decl = self._lookup(name_token)
        if index is None:
            if decl.is_array:
                raise TypeCheckError(f"массив {decl.name} использован как скаляр", name_token.loc)
            return VarLV(decl, name_token.loc)
        if not decl.is_array:
            raise TypeCheckError(f"{decl.name} не является массивом", name_token.loc)
        if index.ty is not ScalarType.INT:
            raise TypeCheckError("индекс массива должен иметь тип int", index.loc)
        return IndexLV(decl, index, name_token.loc)

    @staticmethod
    def _check_same_type(expected: ScalarType, actual: ScalarType, loc: Location) -> None:
        if expected is not actual:
            raise TypeCheckError(f"ожидался тип {expected}, получен {actual}", loc)

    # --- expressions ---------------------------------------------------------

    def _parse_expr(self, level: int = 0) -> Expr:
        if level == len(_BINARY_LEVELS):
            return self._parse_unary()
        left = self._parse_expr(level + 1)
        operators = _BINARY_LEVELS[level]
        while True:
            token = self._peek()
            if token is None or token.kind is not TokenKind.PUNCTUATION or token.text not in operators:
                return left
            self._next()
            right = self._parse_expr(level + 1)
            left = self._make_binary(token, left, right)

    def _make_binary(self, op: Token, left: Expr, right: Expr) -> BinOp:
        if op.text in ("&&", "||", "%"):
            if left.ty is not ScalarType.INT or right.ty is not ScalarType.INT:
                raise TypeCheckError(f"операнды {op.text} должны иметь тип int", op.loc)
            return BinOp(op.text, left, right, ScalarType.INT, op.loc)
        if left.ty is not right.ty:
            raise TypeCheckError(
                f"операнды {op.text} имеют разные типы {left.ty} и {right.ty}, нужно явное приведение",
                op.loc,
            )
        ty = left.ty if op.text in ARITHMETIC_OPS else ScalarType.INT
        return BinOp(op.text, left, right, ty, op.loc)

    def _parse_unary(self) -> Expr:
        token = self._peek()
        if token is None:
            raise ParseError("ожидалось выражение", self._here())
        if token.is_punct("-"):
            self._next()
            literal = self._peek()
            if literal is not None and literal.kind in (TokenKind.INTEGER, TokenKind.FLOAT):
                self._pos -= 1
                return self._parse_number_constant(
                    ScalarType.INT if literal.kind is TokenKind.INTEGER else ScalarType.FLOAT
                )
            operand = self._parse_unary()
            return UnOp("-", operand, operand.ty, token.loc)
        if token.is_punct("!"):
            self._next()
            operand = self._parse_unary()
            if operand.ty is not ScalarType.INT:
                raise TypeCheckError("операнд ! должен иметь тип int", token.loc)
            return UnOp("!", operand, ScalarType.INT, token.loc)
        next_token = self._peek(1)
        if token.is_punct("(") and next_token is not None and next_token.text in _TYPE_KEYWORDS \
                and next_token.kind is TokenKind.KEYWORD:
            self._next()
            self._next()
            self._expect_punct(")")
            operand = self._parse_unary()
            return Cast(_TYPE_KEYWORDS[next_token.text], operand, token.loc)
        return self._parse_primary()

    def _parse_primary(self) -> Expr:
        token = self._next()
        if token.kind is TokenKind.INTEGER:
            value = int(token.text)
            if value > INT64_MAX:
                raise ParseError("целая константа вне 64-битного диапазона", token.loc)
            return Const(value, ScalarType.INT, token.loc)
        if token.kind is TokenKind.FLOAT:
            number = float(token.text)
            if not math.isfinite(number):
                raise ParseError("вещественная константа вне диапазона", token.loc)
            return Const(number, ScalarType.FLOAT, token.loc)
        if token.kind is TokenKind.IDENTIFIER:
            index: Expr | None = None
            if self._at_punct("["):
                self._next()
                index = self._parse_expr()
                self._expect_punct("]")
            if self._at_punct("("):
                raise ParseError("вызов функции допустим только как оператор", token.loc)
            return Read(self._resolve_lvalue(token, index), token.loc)
        if token.is_punct("("):
            inner = self._parse_expr()
            self._expect_punct(")")
            return inner
        raise ParseError(f"неожиданный токен {token.text!r}", token.loc)


def parse_program(tokens: list[Token]) -> Program:
    """
    Строит AST программы по последовательности токенов.

    Args:
        tokens (list[Token]): Результат tokenize().

    Returns:
        Program: Невалидированная программа; ссылки на функции и метки проверяет validate().

    Raises:
        ParseError: Синтаксическая ошибка.
        TypeCheckError: Ошибка типов или необъявленная переменная.
    """
    return Parser(tokens).parse_program()
