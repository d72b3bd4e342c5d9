"""Name resolution over scopes, inheritance and ownership."""

import logging
from typing import Mapping, Optional, Sequence, Union

from src.diagnostics import DartwinError, Span
from src.model.elements import SemanticModel

logger = logging.getLogger("dartwin")

PathLike = Union[str, Sequence[str]]


class ResolutionError(DartwinError):
    """Base class for name resolution failures."""


class UnresolvedName(ResolutionError):
    code = "UnresolvedName"

    def __init__(self, segment: str, scope: str, span: Optional[Span] = None):
        self.segment = segment
        self.scope = scope
        super().__init__(f"unresolved name '{segment}' in scope '{scope}'", span)


class AmbiguousName(ResolutionError):
    code = "AmbiguousName"

    def __init__(self, name: str, candidates: list[str], span: Optional[Span] = None):
        self.name = name
        self.candidates = candidates
        super().__init__(
            f"ambiguous name '{name}': inherited from {', '.join(candidates)}", span
        )


class NameResolver:
    """Lookup rules shared by model construction and built models.

    Subclasses supply the raw graph: symbol tables, bases and owners.
    """

    def own_table(self, eid: int) -> Mapping[str, int]:
        raise NotImplementedError

    def root_table(self) -> Mapping[str, int]:
        raise NotImplementedError

    def bases(self, eid: int) -> tuple[int, ...]:
        raise NotImplementedError

    def owner(self, eid: int) -> Optional[int]:
        raise NotImplementedError

    def redefines(self, eid: int) -> Optional[int]:
        raise NotImplementedError

    def label(self, eid: Optional[int]) -> str:
        raise NotImplementedError

    def ancestors(self, eid: int) -> set[int]:
        """All elements reachable through base edges, excluding ``eid``."""
        seen: set[int] = set()
        stack = list(self.bases(eid))
        while stack:
            current = stack.pop()
            if current in seen:
                continue
            seen.add(current)
            stack.extend(self.bases(current))
        seen.discard(eid)
        return seen

    def overrides(self, specific: int, general: int) -> bool:
        """Check whether ``specific`` replaces ``general`` in an inherited view."""
        seen: set[int] = set()
        current = self.redefines(specific)
        while current is not None and current not in seen:
            if current == general:
                return True
            seen.add(current)
            current = self.redefines(current)

        specific_owner = self.owner(specific)
        general_owner = self.owner(general)
        if specific_owner is None or general_owner is None:
            return False
        return general_owner in self.ancestors(specific_owner)

    def lookup_member(
        self,
        eid: int,
        name: str,
        exclude: frozenset = frozenset(),
        chain: frozenset = frozenset(),
    ) -> Optional[int]:
        """Find ``name`` among the own, then inherited, members of ``eid``."""
        own = self.own_table(eid).get(name)
        if own is not None and own not in exclude:
            return own
        return self.lookup_inherited(eid, name, exclude, chain)

    def lookup_inherited(
        self,
        eid: int,
        name: str,
        exclude: frozenset = frozenset(),
        chain: frozenset = frozenset(),
    ) -> Optional[int]:
        if eid in chain:
            return None
        chain = chain | {eid}

        found: list[int] = []
        for base in self.bases(eid):
            hit = self.lookup_member(base, name, exclude, chain)
            if hit is not None and hit not in found:
                found.append(hit)

        if not found:
            return None
        if len(found) == 1:
            return found[0]

        winners = [
            c for c in found if all(o == c or self.overrides(c, o) for o in found)
        ]
        if len(winners) == 1:
            return winners[0]
        raise AmbiguousName(name, [self.label(c) for c in found])

    def resolve(
        self, path: PathLike, scope: Optional[int], exclude: frozenset = frozenset()
    ) -> int:
        """Resolve a dotted path from ``scope``.

        The first segment is looked up in the scope's own members, then its
        inherited members, then in each enclosing owner the same way, then
        among the top-level elements. Later segments are looked up in the
        members of the previous result.

        Raises:
            UnresolvedName: When a segment has no match
            AmbiguousName: When inheritance supplies competing matches
        """
        segments = path.split(".") if isinstance(path, str) else list(path)
        first = segments[0]

        hit: Optional[int] = None
        current = scope
        while current is not None:
            hit = self.lookup_member(current, first, exclude)
            if hit is not None:
                break
            current = self.owner(current)

        if hit is None:
            candidate = self.root_table().get(first)
            if candidate is not None and candidate not in exclude:
                hit = candidate
        if hit is None:
            raise UnresolvedName(first, self.label(scope))

        for segment in segments[1:]:
            nxt = self.lookup_member(hit, segment)
            if nxt is None:
                raise UnresolvedName(segment, self.label(hit))
            hit = nxt
        return hit


class ModelResolver(NameResolver):
    """Resolver over a built semantic model."""

    def __init__(self, model: SemanticModel):
        self.model = model

    def own_table(self, eid: int) -> Mapping[str, int]:
        return self.model.names.get(eid, {})

    def root_table(self) -> Mapping[str, int]:
        return self.model.names.get(None, {})

    def bases(self, eid: int) -> tuple[int, ...]:
        return self.model.element(eid).bases

    def owner(self, eid: int) -> Optional[int]:
        return self.model.element(eid).owner

    def redefines(self, eid: int) -> Optional[int]:
        return self.model.element(eid).redefines

    def label(self, eid: Optional[int]) -> str:
        if eid is None:
            return "<global>"
        return self.model.qualified_name(eid)


def resolve(path: PathLike, scope: Optional[int], model: SemanticModel) -> int:
    """Resolve a dotted name path from ``scope`` in a built model."""
    return ModelResolver(model).resolve(path, scope)
