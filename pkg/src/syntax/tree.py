"""Parse tree node types.

Nodes compare structurally: spans and attached diagnostics are excluded
from equality so that ``parse(print_tree(t)) == t`` can be checked with
plain ``==``.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from src.diagnostics import Diagnostic, Span

QualifiedName = tuple[str, ...]


class Construct(str, Enum):
    PACKAGE = "package"
    LIBRARY_PACKAGE = "library-package"
    IMPORT = "import"
    PART = "part"
    PART_DEF = "part-def"
    PORT = "port"
    CONNECTION = "connection"
    ALLOCATION = "allocation"
    REQUIREMENT = "requirement"
    REQUIREMENT_DEF = "requirement-def"
    CONNECTION_DEF = "connection-def"
    METADATA_DEF = "metadata-def"
    KEYWORD_USAGE = "keyword-usage"


DEFINITIONS = frozenset(
    {
        Construct.PART_DEF,
        Construct.REQUIREMENT_DEF,
        Construct.CONNECTION_DEF,
        Construct.METADATA_DEF,
    }
)


@dataclass(frozen=True)
class Multiplicity:
    """Multiplicity bounds; ``upper`` is None for ``*``."""

    lower: int
    upper: Optional[int] = None

    def __str__(self) -> str:
        if self.lower == 0 and self.upper is None:
            return "[*]"
        if self.lower == self.upper:
            return f"[{self.lower}]"
        upper = "*" if self.upper is None else str(self.upper)
        return f"[{self.lower}..{upper}]"


@dataclass(frozen=True)
class Node:
    """One declaration of the DSL."""

    construct: Construct
    name: Optional[str] = None
    hash_keyword: Optional[str] = None
    short_name: Optional[str] = None
    specializes: tuple[QualifiedName, ...] = ()
    redefines: Optional[QualifiedName] = None
    type_name: Optional[QualifiedName] = None
    multiplicity: Optional[Multiplicity] = None
    connect: Optional[tuple[QualifiedName, QualifiedName]] = None
    allocate: Optional[tuple[QualifiedName, QualifiedName]] = None
    doc: Optional[str] = None
    children: tuple["Node", ...] = ()
    visibility: Optional[str] = None
    import_path: Optional[QualifiedName] = None
    wildcard: bool = False
    span: Optional[Span] = field(default=None, compare=False, repr=False)

    @property
    def display_name(self) -> str:
        if self.name:
            return self.name
        if self.redefines:
            return self.redefines[-1]
        return "<anonymous>"

    def walk(self):
        """Yield this node and all descendants in pre-order."""
        yield self
        for child in self.children:
            yield from child.walk()


@dataclass(frozen=True)
class SourceTree:
    """Top-level declarations of one or more source files."""

    roots: tuple[Node, ...] = ()
    diagnostics: tuple[Diagnostic, ...] = field(default=(), compare=False)

    def walk(self):
        for root in self.roots:
            yield from root.walk()

    @staticmethod
    def merge(trees: list["SourceTree"]) -> "SourceTree":
        """Combine several parsed files into one namespace."""
        roots: list[Node] = []
        diagnostics: list[Diagnostic] = []
        for tree in trees:
            roots.extend(tree.roots)
            diagnostics.extend(tree.diagnostics)
        return SourceTree(tuple(roots), tuple(diagnostics))
