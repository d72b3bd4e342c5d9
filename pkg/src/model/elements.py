"""Resolved element graph."""

from dataclasses import dataclass
from typing import Iterator, Optional

import networkx as nx

from src.diagnostics import Diagnostic, Span
from src.model.kinds import ElementKind
from src.syntax.tree import Construct, Multiplicity, QualifiedName


@dataclass(frozen=True)
class Element:
    """One resolved model element; ``id`` is its index in the arena."""

    id: int
    kind: ElementKind
    name: Optional[str]
    effective_name: Optional[str]
    owner: Optional[int]
    members: tuple[int, ...] = ()
    specializes: tuple[int, ...] = ()
    redefines: Optional[int] = None
    doc: Optional[str] = None
    connect: Optional[tuple[int, int]] = None
    allocate: Optional[tuple[int, int]] = None
    multiplicity: Optional[Multiplicity] = None
    conflict_explanation: Optional[str] = None
    type_ref: Optional[int] = None
    construct: Construct = Construct.PART
    keyword: Optional[str] = None
    is_definition: bool = False
    span: Optional[Span] = None

    @property
    def bases(self) -> tuple[int, ...]:
        """Elements this one inherits members from."""
        if self.redefines is None:
            return self.specializes
        return self.specializes + (self.redefines,)


@dataclass(frozen=True)
class ImportRecord:
    owner: Optional[int]
    path: QualifiedName
    wildcard: bool
    visibility: Optional[str]


@dataclass(frozen=True)
class SemanticModel:
    """Arena of elements plus per-scope symbol tables.

    ``names[None]`` is the table of top-level elements.
    """

    elements: tuple[Element, ...]
    roots: tuple[int, ...]
    names: dict
    imports: tuple[ImportRecord, ...] = ()
    diagnostics: tuple[Diagnostic, ...] = ()

    def element(self, eid: int) -> Element:
        return self.elements[eid]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Element]:
        return iter(self.elements)

    def children(self, eid: int) -> list[Element]:
        return [self.elements[m] for m in self.elements[eid].members]

    def qualified_name(self, eid: int) -> str:
        segments = []
        current: Optional[int] = eid
        while current is not None:
            element = self.elements[current]
            segments.append(element.effective_name or f"${element.id}")
            current = element.owner
        return ".".join(reversed(segments))

    def find(self, qualified: str) -> Optional[int]:
        """Look up an element by its dotted path of own names from a root."""
        segments = qualified.split(".")
        current = self.names.get(None, {}).get(segments[0])
        for segment in segments[1:]:
            if current is None:
                return None
            current = self.names.get(current, {}).get(segment)
        return current

    def members_of_kind(self, eid: int, kind: ElementKind) -> list[Element]:
        return [e for e in self.children(eid) if e.kind == kind]


def specialization_graph(model: SemanticModel) -> nx.DiGraph:
    """Directed graph with an edge from each element to each of its bases."""
    graph = nx.DiGraph()
    graph.add_nodes_from(e.id for e in model.elements)
    for element in model.elements:
        for base in element.bases:
            graph.add_edge(element.id, base)
    return graph
