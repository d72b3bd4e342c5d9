"""Element kinds and how declarations map onto them."""

from enum import Enum
from typing import Optional

from src.syntax.tree import Construct, Node


class ElementKind(str, Enum):
    DARTWIN = "DarTwin"
    TWIN_SYSTEM = "TwinSystem"
    DIGITAL_TWIN = "DigitalTwin"
    GOAL = "Goal"
    ARBITER = "Arbiter"
    CONFLICT = "Conflict"
    DARTRANS = "DarTrans"
    DARTWIN_CORE = "DartwinCore"
    DARTWIN_BEFORE = "DartwinBefore"
    DARTWIN_AFTER = "DartwinAfter"
    PART = "Part"
    PORT = "Port"
    CONNECTION = "Connection"
    ALLOCATION = "Allocation"
    PACKAGE = "Package"
    METADATA = "Metadata"


# The closed DarTwin keyword set and its metadata definitions
KEYWORD_KINDS = {
    "dartwin": ElementKind.DARTWIN,
    "twinsystem": ElementKind.TWIN_SYSTEM,
    "digitaltwin": ElementKind.DIGITAL_TWIN,
    "goal": ElementKind.GOAL,
    "arbiter": ElementKind.ARBITER,
    "vs": ElementKind.CONFLICT,
    "dartrans": ElementKind.DARTRANS,
    "dartwin_core": ElementKind.DARTWIN_CORE,
    "dartwin_before": ElementKind.DARTWIN_BEFORE,
    "dartwin_after": ElementKind.DARTWIN_AFTER,
}

KIND_KEYWORDS = {kind: keyword for keyword, kind in KEYWORD_KINDS.items()}

_CONSTRUCT_KINDS = {
    Construct.PACKAGE: ElementKind.PACKAGE,
    Construct.LIBRARY_PACKAGE: ElementKind.PACKAGE,
    Construct.PART: ElementKind.PART,
    Construct.PART_DEF: ElementKind.PART,
    Construct.PORT: ElementKind.PORT,
    Construct.CONNECTION: ElementKind.CONNECTION,
    Construct.CONNECTION_DEF: ElementKind.CONNECTION,
    Construct.ALLOCATION: ElementKind.ALLOCATION,
    Construct.REQUIREMENT: ElementKind.GOAL,
    Construct.REQUIREMENT_DEF: ElementKind.GOAL,
    Construct.METADATA_DEF: ElementKind.METADATA,
}

DARTWIN_KINDS = frozenset(
    {
        ElementKind.DARTWIN,
        ElementKind.DARTWIN_CORE,
        ElementKind.DARTWIN_BEFORE,
        ElementKind.DARTWIN_AFTER,
    }
)

RELATIONSHIP_KINDS = frozenset(
    {ElementKind.CONNECTION, ElementKind.ALLOCATION, ElementKind.CONFLICT}
)

PART_LIKE_KINDS = frozenset(
    {
        ElementKind.PART,
        ElementKind.TWIN_SYSTEM,
        ElementKind.DIGITAL_TWIN,
        ElementKind.ARBITER,
    }
)

ALLOCATION_TARGET_KINDS = frozenset({ElementKind.DIGITAL_TWIN, ElementKind.TWIN_SYSTEM})


def kind_for(node: Node) -> Optional[ElementKind]:
    """Derive the element kind of a declaration.

    Returns:
        The kind, or None for an unknown ``#keyword`` usage
    """
    if node.construct == Construct.KEYWORD_USAGE:
        return KEYWORD_KINDS.get(node.hash_keyword)

    typed_as = node.type_name[-1] if node.type_name else None
    if node.construct == Construct.PART and typed_as == "Arbiter":
        return ElementKind.ARBITER
    if node.construct == Construct.CONNECTION and typed_as == "Conflict":
        return ElementKind.CONFLICT
    return _CONSTRUCT_KINDS[node.construct]
