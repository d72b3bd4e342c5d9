"""Build a semantic model from a source tree."""

import logging
from dataclasses import dataclass, field
from typing import Mapping, Optional

from src.diagnostics import Diagnostic, Severity, Span
from src.model.elements import Element, ImportRecord, SemanticModel
from src.model.kinds import KEYWORD_KINDS, ElementKind, kind_for
from src.model.resolution import NameResolver, ResolutionError
from src.syntax.tree import DEFINITIONS, Construct, Node, QualifiedName, SourceTree

logger = logging.getLogger("dartwin")

_PENDING, _RESOLVING, _DONE = range(3)


@dataclass
class _Draft:
    id: int
    node: Node
    kind: ElementKind
    effective_name: Optional[str]
    owner: Optional[int]
    members: list[int] = field(default_factory=list)
    specializes: list[int] = field(default_factory=list)
    redefines: Optional[int] = None
    type_ref: Optional[int] = None
    connect: Optional[tuple[int, int]] = None
    allocate: Optional[tuple[int, int]] = None
    state: int = _PENDING


class ModelBuilder(NameResolver):
    """Two-pass builder: declare every element, then resolve references.

    Bases are resolved lazily so that lookups through ``:>`` chains work
    regardless of declaration order.
    """

    def __init__(self, tree: SourceTree):
        self.tree = tree
        self.drafts: list[_Draft] = []
        self.names: dict[Optional[int], dict[str, int]] = {None: {}}
        self.imports: list[ImportRecord] = []
        self.diagnostics: list[Diagnostic] = []

    # NameResolver hooks

    def own_table(self, eid: int) -> Mapping[str, int]:
        return self.names.get(eid, {})

    def root_table(self) -> Mapping[str, int]:
        return self.names[None]

    def owner(self, eid: int) -> Optional[int]:
        return self.drafts[eid].owner

    def redefines(self, eid: int) -> Optional[int]:
        self.bases(eid)
        return self.drafts[eid].redefines

    def label(self, eid: Optional[int]) -> str:
        if eid is None:
            return "<global>"
        segments = []
        current: Optional[int] = eid
        while current is not None:
            draft = self.drafts[current]
            segments.append(draft.effective_name or f"${draft.id}")
            current = draft.owner
        return ".".join(reversed(segments))

    def bases(self, eid: int) -> tuple[int, ...]:
        draft = self.drafts[eid]
        if draft.state == _PENDING:
            draft.state = _RESOLVING
            for path in draft.node.specializes:
                target = self._try_resolve(path, draft.owner, draft.node.span)
                if target is not None:
                    draft.specializes.append(target)
            if draft.node.redefines:
                draft.redefines = self._try_resolve(
                    draft.node.redefines, draft.owner, draft.node.span, frozenset({eid})
                )
            draft.state = _DONE
        elif draft.state == _RESOLVING:
            return ()
        if draft.redefines is None:
            return tuple(draft.specializes)
        return tuple(draft.specializes) + (draft.redefines,)

    # Construction

    def build(self) -> SemanticModel:
        for node in self.tree.roots:
            self._declare(node, None)
        for draft in self.drafts:
            self._resolve_references(draft)

        elements = tuple(self._freeze(d) for d in self.drafts)
        roots = tuple(d.id for d in self.drafts if d.owner is None)
        logger.debug(
            f"Built model: {len(elements)} elements, {len(self.diagnostics)} diagnostics"
        )
        return SemanticModel(
            elements=elements,
            roots=roots,
            names={owner: dict(table) for owner, table in self.names.items()},
            imports=tuple(self.imports),
            diagnostics=tuple(self.diagnostics),
        )

    def _report(self, severity: Severity, code: str, message: str, span: Optional[Span]):
        self.diagnostics.append(Diagnostic(severity, code, message, span))

    def _declare(self, node: Node, owner: Optional[int]) -> None:
        if node.construct == Construct.IMPORT:
            self.imports.append(
                ImportRecord(owner, node.import_path, node.wildcard, node.visibility)
            )
            return

        kind = kind_for(node)
        if kind is None:
            self._report(
                Severity.ERROR,
                "UnknownKeyword",
                f"unknown DarTwin keyword '#{node.hash_keyword}'",
                node.span,
            )
            return
        if (
            node.construct == Construct.METADATA_DEF
            and node.short_name
            and node.short_name not in KEYWORD_KINDS
        ):
            self._report(
                Severity.WARNING,
                "UnknownKeyword",
                f"unknown DarTwin keyword '<{node.short_name}>' declared by '{node.name}'",
                node.span,
            )

        effective_name = node.name or (node.redefines[-1] if node.redefines else None)
        table = self.names[owner]
        if effective_name is not None and effective_name in table:
            self._report(
                Severity.ERROR,
                "DuplicateName",
                f"duplicate name '{effective_name}' in scope '{self.label(owner)}'",
                node.span,
            )
            return

        draft = _Draft(len(self.drafts), node, kind, effective_name, owner)
        self.drafts.append(draft)
        self.names[draft.id] = {}
        if effective_name is not None:
            table[effective_name] = draft.id
        if owner is not None:
            self.drafts[owner].members.append(draft.id)

        for child in node.children:
            self._declare(child, draft.id)

    def _try_resolve(
        self,
        path: QualifiedName,
        scope: Optional[int],
        span: Optional[Span],
        exclude: frozenset = frozenset(),
    ) -> Optional[int]:
        try:
            return self.resolve(path, scope, exclude)
        except ResolutionError as e:
            logger.debug(f"Resolution failed for {'.'.join(path)}: {e.message}")
            self._report(Severity.ERROR, e.code, e.message, span)
            return None

    def _resolve_references(self, draft: _Draft) -> None:
        node = draft.node
        self.bases(draft.id)

        if node.type_name:
            draft.type_ref = self._try_resolve(node.type_name, draft.owner, node.span)

        if node.connect:
            source = self._try_resolve(node.connect[0], draft.owner, node.span)
            target = self._try_resolve(node.connect[1], draft.owner, node.span)
            if source is not None and target is not None:
                draft.connect = (source, target)
                if draft.kind == ElementKind.CONNECTION:
                    self._check_port(draft, source)
                    self._check_port(draft, target)

        if node.allocate:
            goal = self._try_resolve(node.allocate[0], draft.owner, node.span)
            target = self._try_resolve(node.allocate[1], draft.owner, node.span)
            if goal is not None and target is not None:
                draft.allocate = (goal, target)

    def _check_port(self, draft: _Draft, endpoint: int) -> None:
        found = self.drafts[endpoint]
        if found.kind != ElementKind.PORT:
            self._report(
                Severity.ERROR,
                "KindMismatch",
                f"connection '{self.label(draft.id)}' endpoint '{self.label(endpoint)}' "
                f"is a {found.kind.value}, expected Port",
                draft.node.span,
            )

    def _freeze(self, draft: _Draft) -> Element:
        node = draft.node
        return Element(
            id=draft.id,
            kind=draft.kind,
            name=node.name,
            effective_name=draft.effective_name,
            owner=draft.owner,
            members=tuple(draft.members),
            specializes=tuple(draft.specializes),
            redefines=draft.redefines,
            doc=node.doc,
            connect=draft.connect,
            allocate=draft.allocate,
            multiplicity=node.multiplicity,
            conflict_explanation=node.doc if draft.kind == ElementKind.CONFLICT else None,
            type_ref=draft.type_ref,
            construct=node.construct,
            keyword=node.hash_keyword,
            is_definition=node.construct in DEFINITIONS,
            span=node.span,
        )


def build_model(tree: SourceTree) -> SemanticModel:
    """Resolve a source tree into a semantic model.

    Problems never raise; they are collected as the model's diagnostics
    (UnresolvedName, AmbiguousName, DuplicateName, KindMismatch,
    UnknownKeyword).
    """
    return ModelBuilder(tree).build()
