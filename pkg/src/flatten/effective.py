"""Effective (flattened) models.

Flattening closes every ``:>`` and ``:>>`` chain: each effective element
lists the source elements it was assembled from, and relationship
endpoints are rewritten from source ids to effective paths.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Iterator, Optional

import networkx as nx

from src.diagnostics import DartwinError
from src.model.elements import SemanticModel, specialization_graph
from src.model.kinds import DARTWIN_KINDS, RELATIONSHIP_KINDS, ElementKind
from src.syntax.tree import Construct, Multiplicity

logger = logging.getLogger("dartwin")

EffectivePath = tuple[str, ...]


def dotted(path: EffectivePath) -> str:
    return ".".join(path)


def undotted(text: str) -> EffectivePath:
    return tuple(text.split(".")) if text else ()


class Contribution(str, Enum):
    OWN = "own"
    INHERITED = "inherited"
    REDEFINED = "redefined"


class FlattenError(DartwinError):
    """Raised when a model cannot be flattened."""


class SpecializationCycle(FlattenError):
    code = "SpecializationCycle"

    def __init__(self, cycle: list[int], labels: list[str]):
        self.cycle = cycle
        super().__init__(f"specialization cycle: {' :> '.join(labels)}")


class DanglingEndpoint(FlattenError):
    code = "DanglingEndpoint"


class AmbiguousMember(FlattenError):
    code = "AmbiguousName"


@dataclass(frozen=True)
class EffectiveMember:
    """One entry of an effective member map.

    ``sources`` starts with the winning element followed by the elements it
    replaces. An ambiguous entry keeps every competing chain in
    ``alternatives``.
    """

    name: str
    sources: tuple[int, ...]
    contribution: Contribution
    alternatives: tuple[tuple[int, ...], ...] = ()

    @property
    def primary(self) -> int:
        return self.sources[0]

    @property
    def ambiguous(self) -> bool:
        return len(self.alternatives) > 1

    @property
    def chains(self) -> tuple[tuple[int, ...], ...]:
        return self.alternatives or (self.sources,)

    @property
    def all_sources(self) -> tuple[int, ...]:
        ordered: list[int] = []
        for chain in self.chains:
            ordered.extend(s for s in chain if s not in ordered)
        return tuple(ordered)

    @property
    def provenance(self) -> tuple[tuple[int, Contribution], ...]:
        return ((self.primary, self.contribution),) + tuple(
            (s, Contribution.REDEFINED) for s in self.sources[1:]
        )


@dataclass(frozen=True)
class EffectiveElement:
    path: EffectivePath
    name: Optional[str]
    kind: ElementKind
    provenance: tuple[tuple[int, Contribution], ...]
    construct: Construct = Construct.PART
    keyword: Optional[str] = None
    doc: Optional[str] = None
    multiplicity: Optional[Multiplicity] = None
    connect: Optional[tuple[EffectivePath, EffectivePath]] = None
    allocate: Optional[tuple[EffectivePath, EffectivePath]] = None
    explanation: Optional[str] = None

    @property
    def dotted(self) -> str:
        return dotted(self.path)

    @property
    def parent(self) -> EffectivePath:
        return self.path[:-1]

    @property
    def source(self) -> int:
        return self.provenance[0][0]

    @property
    def endpoints(self) -> Optional[tuple[EffectivePath, EffectivePath]]:
        return self.connect or self.allocate


@dataclass(frozen=True)
class EffectiveModel:
    """A flattened DarTwin: the root plus every effective member by path."""

    root: EffectiveElement
    elements: dict
    _children: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        children: dict[EffectivePath, list[EffectivePath]] = defaultdict(list)
        for path in self.elements:
            children[path[:-1]].append(path)
        object.__setattr__(self, "_children", dict(children))

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, path: EffectivePath) -> bool:
        return path in self.elements

    def get(self, path: EffectivePath) -> Optional[EffectiveElement]:
        if path == ():
            return self.root
        return self.elements.get(path)

    def children(self, path: EffectivePath = ()) -> list[EffectiveElement]:
        return [self.elements[p] for p in self._children.get(path, [])]

    def walk(self, path: EffectivePath = ()) -> Iterator[EffectiveElement]:
        """Yield members below ``path`` in pre-order."""
        for child in self.children(path):
            yield child
            yield from self.walk(child.path)

    def descendants(self, path: EffectivePath) -> list[EffectivePath]:
        return [e.path for e in self.walk(path)]

    def paths(self) -> frozenset:
        return frozenset(dotted(p) for p in self.elements)

    def signature(self) -> frozenset:
        """Structural identity: paths, kinds and relationship endpoints."""
        return frozenset(
            (
                e.dotted,
                e.kind.value,
                tuple(dotted(p) for p in e.endpoints) if e.endpoints else None,
            )
            for e in self.elements.values()
        )

    def without(self, paths: Iterable[EffectivePath]) -> "EffectiveModel":
        """Copy without the given elements and everything they contain."""
        doomed = set(paths)
        kept = {
            path: element
            for path, element in self.elements.items()
            if not any(path[: len(d)] == d for d in doomed)
        }
        return EffectiveModel(self.root, kept)

    def with_elements(self, additions: Iterable[EffectiveElement]) -> "EffectiveModel":
        elements = dict(self.elements)
        for element in additions:
            elements[element.path] = element
        return EffectiveModel(self.root, elements)

    def union(self, other: "EffectiveModel") -> "EffectiveModel":
        """Overlay ``other`` on this model; shared paths take ``other``'s element."""
        return self.with_elements(other.elements.values())


class Flattener:
    """Computes effective member maps and flattened models for one model."""

    def __init__(self, model: SemanticModel):
        self.model = model
        self._graph: Optional[nx.DiGraph] = None
        self._cache: dict[int, dict[str, EffectiveMember]] = {}
        self._stack: list[int] = []

    # Cycle checks

    def _label(self, eid: int) -> str:
        return self.model.qualified_name(eid)

    def check_acyclic(self, eid: int) -> None:
        """Raise SpecializationCycle if a cycle is reachable from ``eid``."""
        if self._graph is None:
            self._graph = specialization_graph(self.model)
        reach = self._graph.copy()
        for element in self.model.elements:
            for member in element.members:
                reach.add_edge(element.id, member)
        reachable = nx.descendants(reach, eid) | {eid}
        try:
            cycle = nx.find_cycle(self._graph.subgraph(reachable))
        except nx.NetworkXNoCycle:
            return
        ids = [u for u, _ in cycle]
        raise SpecializationCycle(ids, [self._label(i) for i in ids + ids[:1]])

    # Member maps

    def _combine(self, existing: EffectiveMember, incoming: EffectiveMember) -> EffectiveMember:
        """Merge two inherited entries of the same name."""
        chains: list[tuple[int, ...]] = list(existing.chains)
        for chain in incoming.chains:
            for i, known in enumerate(chains):
                if known[0] == chain[0]:
                    chains[i] = known + tuple(s for s in chain if s not in known)
                    break
            else:
                chains.append(chain)

        survivors = [
            a
            for a in chains
            if not any(b[0] != a[0] and a[0] in b for b in chains)
        ]
        if len(survivors) == 1:
            return EffectiveMember(existing.name, survivors[0], Contribution.INHERITED)
        return EffectiveMember(
            existing.name, survivors[0], Contribution.INHERITED, tuple(survivors)
        )

    def members_of_element(self, eid: int) -> dict[str, EffectiveMember]:
        """Effective members of a single element (may hold ambiguous entries)."""
        if eid in self._cache:
            return self._cache[eid]
        if eid in self._stack:
            cycle = self._stack[self._stack.index(eid):]
            raise SpecializationCycle(cycle, [self._label(i) for i in cycle + [eid]])

        self._stack.append(eid)
        try:
            element = self.model.element(eid)
            result: dict[str, EffectiveMember] = {}
            for base in element.bases:
                for name, member in self.members_of_element(base).items():
                    inherited = replace(member, contribution=Contribution.INHERITED)
                    if name in result:
                        result[name] = self._combine(result[name], inherited)
                    else:
                        result[name] = inherited

            for child_id in element.members:
                child = self.model.element(child_id)
                name = child.effective_name or f"${child.id}"
                match = None
                if child.redefines is not None:
                    match = next(
                        (k for k, m in result.items() if child.redefines in m.all_sources),
                        None,
                    )
                if match is None and name in result:
                    match = name

                if match is None:
                    sources = (child.id,)
                    if child.redefines is not None:
                        sources += (child.redefines,)
                    result[name] = EffectiveMember(name, sources, Contribution.OWN)
                    continue

                replaced = result[match]
                sources = (child.id,) + tuple(
                    s for s in replaced.all_sources if s != child.id
                )
                if name != match and name in result:
                    sources += tuple(s for s in result[name].all_sources if s not in sources)
                    del result[name]
                entry = EffectiveMember(name, sources, Contribution.OWN)
                result = {
                    (name if k == match else k): (entry if k == match else v)
                    for k, v in result.items()
                }
        finally:
            self._stack.pop()

        self._cache[eid] = result
        return result

    def members_of_chain(self, sources: tuple[int, ...]) -> dict[str, EffectiveMember]:
        """Effective members of an element assembled from several sources.

        Layers are overlaid from the most general source to the most
        specific; the specific layer wins on shared names.
        """
        if len(sources) == 1:
            return self.members_of_element(sources[0])

        result: dict[str, EffectiveMember] = {}
        for source in reversed(sources):
            specific = source == sources[0]
            for name, member in self.members_of_element(source).items():
                contribution = member.contribution if specific else Contribution.INHERITED
                if name in result:
                    previous = result[name]
                    merged = member.all_sources + tuple(
                        s for s in previous.all_sources if s not in member.all_sources
                    )
                    alternatives = member.alternatives if member.ambiguous else ()
                    result[name] = EffectiveMember(name, merged, contribution, alternatives)
                else:
                    result[name] = replace(member, contribution=contribution)
        return result

    def effective_members(self, eid: int) -> dict[str, EffectiveMember]:
        """Ordered effective members of ``eid``.

        Raises:
            SpecializationCycle: When a base chain loops
            AmbiguousMember: When distinct inherited members share a name
        """
        self.check_acyclic(eid)
        members = self.members_of_element(eid)
        self._raise_ambiguous(members, eid)
        return members

    def _raise_ambiguous(self, members: dict[str, EffectiveMember], eid: int) -> None:
        for name, member in members.items():
            if member.ambiguous:
                origins = ", ".join(self._label(chain[0]) for chain in member.alternatives)
                raise AmbiguousMember(
                    f"ambiguous member '{name}' of '{self._label(eid)}': inherited from {origins}",
                    self.model.element(eid).span,
                )

    # Flattening

    def flatten(self, eid: int) -> EffectiveModel:
        """Flatten a dartwin-like element into an effective model.

        Raises:
            FlattenError: When the element is not a dartwin
            SpecializationCycle: When a base chain loops
            AmbiguousMember: When distinct inherited members share a name
            DanglingEndpoint: When a relationship endpoint is not in the result
        """
        element = self.model.element(eid)
        if element.kind not in DARTWIN_KINDS:
            raise FlattenError(
                f"cannot flatten {element.kind.value} '{self._label(eid)}'", element.span
            )
        self.check_acyclic(eid)

        root = EffectiveElement(
            path=(),
            name=element.effective_name,
            kind=element.kind,
            provenance=((eid, Contribution.OWN),),
            construct=element.construct,
            keyword=element.keyword,
            doc=element.doc,
        )
        elements: dict[EffectivePath, EffectiveElement] = {}
        index: dict[int, list[EffectivePath]] = defaultdict(list)
        index[eid].append(())
        relationships: list[tuple[EffectivePath, tuple[int, ...]]] = []

        self._expand((eid,), (), elements, index, relationships, frozenset({eid}))

        for path, sources in relationships:
            elements[path] = self._rewrite_endpoints(elements[path], sources, index)

        logger.debug(f"Flattened {self._label(eid)}: {len(elements)} effective elements")
        return EffectiveModel(root, elements)

    def _expand(
        self,
        chain: tuple[int, ...],
        path: EffectivePath,
        elements: dict,
        index: dict,
        relationships: list,
        active: frozenset,
    ) -> None:
        members = self.members_of_chain(chain)
        self._raise_ambiguous(members, chain[0])
        for name, member in members.items():
            child_path = path + (name,)
            sources = member.all_sources
            looping = [s for s in sources if s in active]
            if looping:
                raise SpecializationCycle(
                    looping, [self._label(s) for s in looping + looping[:1]]
                )

            origin = [self.model.element(s) for s in sources]
            primary = origin[0]
            elements[child_path] = EffectiveElement(
                path=child_path,
                name=primary.effective_name,
                kind=primary.kind,
                provenance=member.provenance,
                construct=primary.construct,
                keyword=primary.keyword,
                doc=next((e.doc for e in origin if e.doc is not None), None),
                multiplicity=next(
                    (e.multiplicity for e in origin if e.multiplicity is not None), None
                ),
                explanation=next(
                    (e.conflict_explanation for e in origin if e.conflict_explanation), None
                ),
            )
            for source in sources:
                index[source].append(child_path)
            if primary.kind in RELATIONSHIP_KINDS:
                relationships.append((child_path, sources))

            self._expand(sources, child_path, elements, index, relationships, active | set(sources))

    def _rewrite_endpoints(
        self, element: EffectiveElement, sources: tuple[int, ...], index: dict
    ) -> EffectiveElement:
        for source in sources:
            origin = self.model.element(source)
            if origin.connect is not None:
                return replace(element, connect=self._locate_pair(origin.connect, element, index))
            if origin.allocate is not None:
                return replace(element, allocate=self._locate_pair(origin.allocate, element, index))
        return element

    def _locate_pair(self, pair, element: EffectiveElement, index: dict):
        return tuple(self._locate(endpoint, element, index) for endpoint in pair)

    def _locate(self, endpoint: int, element: EffectiveElement, index: dict) -> EffectivePath:
        candidates = index.get(endpoint, [])
        if not candidates:
            raise DanglingEndpoint(
                f"endpoint '{self._label(endpoint)}' of '{element.dotted}' "
                f"is not part of the flattened model"
            )
        owner = element.parent

        def shared_prefix(path: EffectivePath) -> int:
            count = 0
            for a, b in zip(path, owner):
                if a != b:
                    break
                count += 1
            return count

        return max(candidates, key=shared_prefix)


def effective_members(eid: int, model: SemanticModel) -> dict[str, EffectiveMember]:
    """Ordered effective member map of an element."""
    return Flattener(model).effective_members(eid)


def flatten(eid: int, model: SemanticModel) -> EffectiveModel:
    """Flatten a DarTwin, core, before or after element."""
    return Flattener(model).flatten(eid)
