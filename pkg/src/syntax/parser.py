"""Recursive-descent parser for the DarTwin DSL."""

import logging
from typing import Optional

from src.diagnostics import DartwinError, Diagnostic, Severity, Span
from src.syntax.lexer import SourceText, Token, TokenKind, tokenize
from src.syntax.tree import Construct, Multiplicity, Node, QualifiedName, SourceTree

logger = logging.getLogger("dartwin")


class ParseError(DartwinError):
    """Raised when the token stream does not match the grammar."""

    code = "ParseError"

    def __init__(
        self,
        span: Span,
        expected: tuple[str, ...],
        found: str,
        message: Optional[str] = None,
    ):
        self.expected = expected
        self.found = found
        super().__init__(
            message or f"expected {' or '.join(expected)}, found {found}", span
        )


def _describe(token: Optional[Token]) -> str:
    if token is None:
        return "end of input"
    return f"{token.kind.value} '{token.text}'"


class Parser:
    """Parser over a token stream of one source file."""

    def __init__(self, tokens: list[Token], source: SourceText):
        self.source = source
        self.tokens = self._significant(tokens)
        self.pos = 0
        self.diagnostics: list[Diagnostic] = []

    @staticmethod
    def _significant(tokens: list[Token]) -> list[Token]:
        """Drop comments, keeping block comments that follow ``doc``."""
        kept: list[Token] = []
        for token in tokens:
            if token.kind == TokenKind.LINE_COMMENT:
                continue
            if token.kind == TokenKind.DOC_COMMENT and not (
                kept and kept[-1].is_keyword("doc")
            ):
                continue
            kept.append(token)
        return kept

    # Token helpers

    def current_token(self) -> Optional[Token]:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        return None

    def peek_token(self, offset: int = 1) -> Optional[Token]:
        index = self.pos + offset
        if index < len(self.tokens):
            return self.tokens[index]
        return None

    def advance(self) -> Token:
        token = self.current_token()
        if token is None:
            raise self.error(("more input",))
        self.pos += 1
        return token

    def error(self, expected: tuple[str, ...], message: Optional[str] = None) -> ParseError:
        token = self.current_token()
        if token is None:
            end = len(self.source.text)
            span = self.source.span(end, end)
        else:
            span = token.span
        return ParseError(span, expected, _describe(token), message)

    def match_punct(self, *texts: str) -> bool:
        token = self.current_token()
        return token is not None and token.is_punct(*texts)

    def match_keyword(self, *texts: str) -> bool:
        token = self.current_token()
        return token is not None and token.is_keyword(*texts)

    def expect_punct(self, text: str) -> Token:
        if not self.match_punct(text):
            raise self.error((f"'{text}'",))
        return self.advance()

    def expect_keyword(self, text: str) -> Token:
        if not self.match_keyword(text):
            raise self.error((f"'{text}'",))
        return self.advance()

    def expect_identifier(self) -> str:
        token = self.current_token()
        if token is None or token.kind != TokenKind.IDENTIFIER:
            raise self.error(("identifier",))
        self.advance()
        return token.text

    def optional_name(self) -> Optional[str]:
        token = self.current_token()
        if token is not None and token.kind == TokenKind.IDENTIFIER:
            self.advance()
            return token.text
        return None

    def span_from(self, start: Token) -> Span:
        end = self.tokens[self.pos - 1].span.end
        return self.source.span(start.span.start, end)

    # Grammar

    def parse_file(self) -> list[Node]:
        """Parse top-level declarations, recovering after each failure."""
        roots: list[Node] = []
        while self.current_token() is not None:
            start = self.pos
            try:
                roots.append(self.parse_member())
            except ParseError as e:
                logger.debug(f"Parse error in {self.source.file}: {e.message}")
                self.diagnostics.append(e.to_diagnostic())
                self.pos = self._recover(start)
        return roots

    def _recover(self, start: int) -> int:
        """Skip past the top-level declaration that started at ``start``."""
        depth = 0
        index = start
        while index < len(self.tokens):
            token = self.tokens[index]
            if token.is_punct("{"):
                depth += 1
            elif token.is_punct("}"):
                depth -= 1
                if depth <= 0:
                    return index + 1
            elif token.is_punct(";") and depth == 0:
                return index + 1
            index += 1
        return max(index, start + 1)

    def parse_member(self) -> Node:
        token = self.current_token()
        if token is None:
            raise self.error(("declaration",))

        if token.kind == TokenKind.HASH_KEYWORD:
            return self.parse_keyword_usage()
        if token.kind == TokenKind.KEYWORD:
            handler = {
                "library": self.parse_package,
                "package": self.parse_package,
                "private": self.parse_import,
                "public": self.parse_import,
                "import": self.parse_import,
                "part": self.parse_part,
                "port": self.parse_port,
                "connection": self.parse_connection,
                "connect": self.parse_connection,
                "allocation": self.parse_allocation,
                "allocate": self.parse_allocation,
                "requirement": self.parse_requirement,
                "metadata": self.parse_metadata_def,
            }.get(token.text)
            if handler is not None:
                return handler()
            if token.text == "doc":
                raise self.error(("declaration",), "doc comment outside of a body")

        raise self.error(
            ("declaration",), f"unsupported SysML v2 construct '{token.text}'"
        )

    def parse_keyword_usage(self) -> Node:
        start = self.advance()
        name = self.optional_name()
        tail = self.parse_declaration_tail()
        connect = self.parse_clause("connect") if self.match_keyword("connect") else None
        children, doc = self.parse_body()
        return Node(
            Construct.KEYWORD_USAGE,
            name=name,
            hash_keyword=start.value,
            connect=connect,
            children=children,
            doc=doc,
            span=self.span_from(start),
            **tail,
        )

    def parse_package(self) -> Node:
        start = self.current_token()
        construct = Construct.PACKAGE
        if self.match_keyword("library"):
            self.advance()
            construct = Construct.LIBRARY_PACKAGE
        self.expect_keyword("package")
        name = self.expect_identifier()
        children, doc = self.parse_body()
        return Node(construct, name=name, children=children, doc=doc, span=self.span_from(start))

    def parse_import(self) -> Node:
        start = self.current_token()
        visibility = None
        if self.match_keyword("private", "public"):
            visibility = self.advance().text
        self.expect_keyword("import")
        path = [self.expect_identifier()]
        wildcard = False
        while self.match_punct("::", "."):
            self.advance()
            if self.match_punct("*"):
                self.advance()
                wildcard = True
                break
            path.append(self.expect_identifier())
        self.expect_punct(";")
        return Node(
            Construct.IMPORT,
            visibility=visibility,
            import_path=tuple(path),
            wildcard=wildcard,
            span=self.span_from(start),
        )

    def parse_part(self) -> Node:
        start = self.advance()
        if self.match_keyword("def"):
            self.advance()
            return self._finish_usage(start, Construct.PART_DEF, self.expect_identifier())
        return self._finish_usage(start, Construct.PART, self.optional_name())

    def parse_port(self) -> Node:
        start = self.advance()
        return self._finish_usage(start, Construct.PORT, self.optional_name())

    def parse_requirement(self) -> Node:
        start = self.advance()
        if self.match_keyword("def"):
            self.advance()
            return self._finish_usage(
                start, Construct.REQUIREMENT_DEF, self.expect_identifier()
            )
        return self._finish_usage(start, Construct.REQUIREMENT, self.optional_name())

    def parse_connection(self) -> Node:
        start = self.current_token()
        if self.match_keyword("connect"):
            connect = self.parse_clause("connect")
            children, doc = self.parse_body()
            return Node(
                Construct.CONNECTION,
                connect=connect,
                children=children,
                doc=doc,
                span=self.span_from(start),
            )

        self.advance()
        if self.match_keyword("def"):
            self.advance()
            return self._finish_usage(
                start, Construct.CONNECTION_DEF, self.expect_identifier()
            )
        name = self.optional_name()
        tail = self.parse_declaration_tail()
        connect = self.parse_clause("connect") if self.match_keyword("connect") else None
        children, doc = self.parse_body()
        return Node(
            Construct.CONNECTION,
            name=name,
            connect=connect,
            children=children,
            doc=doc,
            span=self.span_from(start),
            **tail,
        )

    def parse_allocation(self) -> Node:
        start = self.current_token()
        name = None
        tail: dict = {}
        if self.match_keyword("allocation"):
            self.advance()
            name = self.optional_name()
            tail = self.parse_declaration_tail()
        allocate = self.parse_clause("allocate") if self.match_keyword("allocate") else None
        children, doc = self.parse_body()
        return Node(
            Construct.ALLOCATION,
            name=name,
            allocate=allocate,
            children=children,
            doc=doc,
            span=self.span_from(start),
            **tail,
        )

    def parse_metadata_def(self) -> Node:
        start = self.advance()
        self.expect_keyword("def")
        short_name = None
        if self.match_punct("<"):
            self.advance()
            short_name = self.expect_identifier()
            self.expect_punct(">")
        name = self.expect_identifier()
        tail = self.parse_declaration_tail()
        children, doc = self.parse_body()
        return Node(
            Construct.METADATA_DEF,
            name=name,
            short_name=short_name,
            children=children,
            doc=doc,
            span=self.span_from(start),
            **tail,
        )

    def _finish_usage(self, start: Token, construct: Construct, name: Optional[str]) -> Node:
        tail = self.parse_declaration_tail()
        children, doc = self.parse_body()
        return Node(
            construct,
            name=name,
            children=children,
            doc=doc,
            span=self.span_from(start),
            **tail,
        )

    def parse_declaration_tail(self) -> dict:
        """Parse multiplicity, typing, ``:>`` and ``:>>`` in any order."""
        tail: dict = {}
        specializes: list[QualifiedName] = []
        while True:
            if self.match_punct("["):
                if "multiplicity" in tail:
                    raise self.error(("declaration body",), "duplicate multiplicity")
                tail["multiplicity"] = self.parse_multiplicity()
            elif self.match_punct(":"):
                self.advance()
                if "type_name" in tail:
                    raise self.error(("declaration body",), "duplicate type")
                tail["type_name"] = self.parse_path()
            elif self.match_punct(":>"):
                self.advance()
                specializes.append(self.parse_path())
                while self.match_punct(","):
                    self.advance()
                    specializes.append(self.parse_path())
            elif self.match_punct(":>>"):
                self.advance()
                if "redefines" in tail:
                    raise self.error(("declaration body",), "duplicate redefinition")
                tail["redefines"] = self.parse_path()
            else:
                break
        if specializes:
            tail["specializes"] = tuple(specializes)
        return tail

    def parse_multiplicity(self) -> Multiplicity:
        self.expect_punct("[")
        if self.match_punct("*"):
            self.advance()
            self.expect_punct("]")
            return Multiplicity(0, None)
        lower = self._bound()
        upper: Optional[int] = lower
        if self.match_punct(".."):
            self.advance()
            if self.match_punct("*"):
                self.advance()
                upper = None
            else:
                upper = self._bound()
        if upper is not None and upper < lower:
            raise self.error(("']'",), f"multiplicity upper bound {upper} below {lower}")
        self.expect_punct("]")
        return Multiplicity(lower, upper)

    def _bound(self) -> int:
        token = self.current_token()
        if token is None or token.kind != TokenKind.NUMBER:
            raise self.error(("number", "'*'"))
        self.advance()
        return int(token.text)

    def parse_path(self) -> QualifiedName:
        segments = [self.expect_identifier()]
        while self.match_punct(".", "::"):
            nxt = self.peek_token()
            if nxt is None or nxt.kind != TokenKind.IDENTIFIER:
                break
            self.advance()
            segments.append(self.expect_identifier())
        return tuple(segments)

    def parse_clause(self, keyword: str) -> tuple[QualifiedName, QualifiedName]:
        self.expect_keyword(keyword)
        source = self.parse_path()
        self.expect_keyword("to")
        target = self.parse_path()
        return source, target

    def parse_body(self) -> tuple[tuple[Node, ...], Optional[str]]:
        if self.match_punct(";"):
            self.advance()
            return (), None
        if not self.match_punct("{"):
            raise self.error(("'{'", "';'"))
        self.advance()

        children: list[Node] = []
        doc: Optional[str] = None
        while not self.match_punct("}"):
            if self.current_token() is None:
                raise self.error(("'}'",))
            if self.match_keyword("doc"):
                self.advance()
                token = self.current_token()
                if token is None or token.kind != TokenKind.DOC_COMMENT:
                    raise self.error(("doc comment",))
                self.advance()
                if doc is None:
                    doc = token.value
                else:
                    self.diagnostics.append(
                        Diagnostic(
                            Severity.WARNING,
                            "DuplicateDoc",
                            "only the first doc comment of a body is kept",
                            token.span,
                        )
                    )
                continue
            children.append(self.parse_member())
        self.advance()
        return tuple(children), doc


def parse(source: str, file: str = "<input>") -> SourceTree:
    """Parse DSL text into a source tree.

    Lexical and syntax errors never raise; they are attached to the returned
    tree as diagnostics and parsing resumes at the next top-level
    declaration.
    """
    diagnostics: list[Diagnostic] = []
    tokens = tokenize(source, file, errors=diagnostics)
    parser = Parser(tokens, SourceText(source, file))
    roots = parser.parse_file()
    diagnostics.extend(parser.diagnostics)
    logger.debug(f"Parsed {file}: {len(roots)} top-level declarations, {len(diagnostics)} diagnostics")
    return SourceTree(tuple(roots), tuple(diagnostics))
