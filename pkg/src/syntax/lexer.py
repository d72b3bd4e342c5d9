"""Lexer for the DarTwin textual DSL.

Converts source text into a lossless token stream: every token keeps the
whitespace that precedes it as trivia, and the last token also keeps the
whitespace that follows it, so ``reassemble(tokenize(text)) == text``.
"""

import logging
import re
from bisect import bisect_right
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from src.diagnostics import DartwinError, Diagnostic, Span

logger = logging.getLogger("dartwin")


class TokenKind(str, Enum):
    """Token kinds in the DarTwin DSL."""

    KEYWORD = "keyword"
    HASH_KEYWORD = "hash-keyword"
    IDENTIFIER = "identifier"
    NUMBER = "number"
    PUNCTUATION = "punctuation"
    DOC_COMMENT = "doc-comment"
    LINE_COMMENT = "line-comment"


KEYWORDS = frozenset(
    {
        "allocate",
        "allocation",
        "connect",
        "connection",
        "def",
        "doc",
        "import",
        "library",
        "metadata",
        "package",
        "part",
        "port",
        "private",
        "public",
        "requirement",
        "to",
    }
)

# Longest alternatives first: ":>>" must win over ":>" and ":".
PUNCTUATION = (":>>", ":>", "::", "..", "{", "}", ";", ".", ":", "[", "]", "*", ",", "<", ">", "=")

_WHITESPACE = re.compile(r"[ \t\r\n\f]+")
_TOKEN = re.compile(
    r"(?P<line_comment>//[^\n]*)"
    r"|(?P<hash>#[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<word>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<number>[0-9]+)"
    r"|(?P<punct>" + "|".join(re.escape(p) for p in PUNCTUATION) + r")"
)


class LexError(DartwinError):
    """Raised when the source cannot be tokenized."""


class IllegalCharacter(LexError):
    code = "IllegalCharacter"

    def __init__(self, char: str, span: Span):
        self.char = char
        super().__init__(f"illegal character {char!r}", span)


class UnterminatedComment(LexError):
    code = "UnterminatedComment"

    def __init__(self, span: Span):
        super().__init__("unterminated comment", span)


@dataclass(frozen=True)
class Token:
    """A lexical token with the whitespace that precedes it."""

    kind: TokenKind
    text: str
    span: Span
    trivia: str = ""
    trailing: str = ""

    @property
    def value(self) -> str:
        """Token text without decoration (``#`` prefix, comment delimiters)."""
        if self.kind == TokenKind.HASH_KEYWORD:
            return self.text[1:]
        if self.kind == TokenKind.DOC_COMMENT:
            return self.text[2:-2].strip()
        if self.kind == TokenKind.LINE_COMMENT:
            return self.text[2:].strip()
        return self.text

    def is_punct(self, *texts: str) -> bool:
        return self.kind == TokenKind.PUNCTUATION and self.text in texts

    def is_keyword(self, *texts: str) -> bool:
        return self.kind == TokenKind.KEYWORD and self.text in texts


class SourceText:
    """Maps character offsets of one source file to line/column positions."""

    def __init__(self, text: str, file: str = "<input>"):
        self.text = text
        self.file = file
        self._line_starts = [0] + [m.end() for m in re.finditer(r"\n", text)]

    def span(self, start: int, end: int) -> Span:
        line = bisect_right(self._line_starts, start)
        column = start - self._line_starts[line - 1] + 1
        return Span(start, end, self.file, line, column)


def tokenize(
    source: str, file: str = "<input>", errors: Optional[list[Diagnostic]] = None
) -> list[Token]:
    """Split source text into tokens.

    Args:
        source: Decoded source text
        file: File name used in spans
        errors: When given, lexical errors are appended here as diagnostics
            and the offending characters are kept as trivia instead of
            raising

    Returns:
        Tokens in source order; whitespace-only input yields no tokens

    Raises:
        IllegalCharacter: On a character outside the token alphabet
        UnterminatedComment: On a ``/*`` without closing ``*/``
    """
    text = SourceText(source, file)
    tokens: list[Token] = []
    trivia = ""
    pos = 0
    length = len(source)

    while pos < length:
        ws = _WHITESPACE.match(source, pos)
        if ws:
            trivia += ws.group()
            pos = ws.end()
            continue

        if source.startswith("/*", pos):
            close = source.find("*/", pos + 2)
            if close < 0:
                error = UnterminatedComment(text.span(pos, length))
                if errors is None:
                    raise error
                errors.append(error.to_diagnostic())
                trivia += source[pos:]
                break
            end = close + 2
            tokens.append(
                Token(TokenKind.DOC_COMMENT, source[pos:end], text.span(pos, end), trivia)
            )
            trivia = ""
            pos = end
            continue

        match = _TOKEN.match(source, pos)
        if match is None:
            error = IllegalCharacter(source[pos], text.span(pos, pos + 1))
            if errors is None:
                raise error
            errors.append(error.to_diagnostic())
            trivia += source[pos]
            pos += 1
            continue

        group = match.lastgroup
        lexeme = match.group()
        if group == "line_comment":
            kind = TokenKind.LINE_COMMENT
        elif group == "hash":
            kind = TokenKind.HASH_KEYWORD
        elif group == "word":
            kind = TokenKind.KEYWORD if lexeme in KEYWORDS else TokenKind.IDENTIFIER
        elif group == "number":
            kind = TokenKind.NUMBER
        else:
            kind = TokenKind.PUNCTUATION

        tokens.append(Token(kind, lexeme, text.span(pos, match.end()), trivia))
        trivia = ""
        pos = match.end()

    if tokens and trivia:
        last = tokens[-1]
        tokens[-1] = Token(last.kind, last.text, last.span, last.trivia, trivia)

    logger.debug(f"Tokenized {file}: {len(tokens)} tokens")
    return tokens


def reassemble(tokens: list[Token]) -> str:
    """Rebuild the source text from a token stream."""
    return "".join(t.trivia + t.text + t.trailing for t in tokens)
