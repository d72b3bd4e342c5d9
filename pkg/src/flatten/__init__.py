"""Flattening of specialization chains and dartrans change sets."""

from src.flatten.changes import (
    ChangeSet,
    DartransParts,
    DartransStructureError,
    dartrans_parts,
    diff,
)
from src.flatten.effective import (
    AmbiguousMember,
    Contribution,
    DanglingEndpoint,
    EffectiveElement,
    EffectiveMember,
    EffectiveModel,
    EffectivePath,
    FlattenError,
    Flattener,
    SpecializationCycle,
    dotted,
    effective_members,
    flatten,
    undotted,
)
from src.flatten.source import effective_to_tree

__all__ = [
    "AmbiguousMember",
    "ChangeSet",
    "Contribution",
    "DanglingEndpoint",
    "DartransParts",
    "DartransStructureError",
    "EffectiveElement",
    "EffectiveMember",
    "EffectiveModel",
    "EffectivePath",
    "FlattenError",
    "Flattener",
    "SpecializationCycle",
    "dartrans_parts",
    "diff",
    "dotted",
    "effective_members",
    "effective_to_tree",
    "flatten",
    "undotted",
]
