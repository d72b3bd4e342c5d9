"""Tokenizing, parsing and printing of the DarTwin DSL."""

from src.syntax.lexer import (
    IllegalCharacter,
    LexError,
    Token,
    TokenKind,
    UnterminatedComment,
    reassemble,
    tokenize,
)
from src.syntax.parser import ParseError, parse
from src.syntax.printer import format_path, print_tree
from src.syntax.tree import Construct, Multiplicity, Node, QualifiedName, SourceTree

__all__ = [
    "Construct",
    "IllegalCharacter",
    "LexError",
    "Multiplicity",
    "Node",
    "ParseError",
    "QualifiedName",
    "SourceTree",
    "Token",
    "TokenKind",
    "UnterminatedComment",
    "format_path",
    "parse",
    "print_tree",
    "reassemble",
    "tokenize",
]
