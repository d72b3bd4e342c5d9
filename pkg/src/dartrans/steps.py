"""Intermediate step files of a transformation.

Each step is the target written as a standalone dartwin whose elements
specialize the pattern elements they are matched with, so every stage of
the procedure can be read and checked on its own.
"""

from src.dartrans.procedure import TransformationResult
from src.flatten.effective import undotted
from src.flatten.source import effective_to_tree
from src.syntax.tree import QualifiedName, SourceTree


def _qualified(result: TransformationResult, eid: int) -> QualifiedName:
    return undotted(result.context.model.qualified_name(eid))


def specialized_before(result: TransformationResult) -> SourceTree:
    """Step 2: the untouched target, matched against the before."""
    base = _qualified(result, result.context.parts.before)
    specializations = {
        undotted(image): base + undotted(path)
        for path, image in result.context.binding.mapping.items()
    }
    return effective_to_tree(result.context.target, specializations, base)


def reduced_core(result: TransformationResult) -> SourceTree:
    """Step 3: what is left of the target once the before's extras are gone."""
    ctx = result.context
    base = _qualified(result, ctx.parts.core)
    specializations = {
        undotted(image): base + undotted(path)
        for path, image in ctx.binding.mapping.items()
        if path in ctx.changes.kept
    }
    return effective_to_tree(result.reduced, specializations, base)


def extended_after(result: TransformationResult) -> SourceTree:
    """Step 4: the reduced target grown by the after's additions."""
    ctx = result.context
    base = _qualified(result, ctx.parts.after)
    specializations = {
        undotted(image): base + undotted(path)
        for path, image in ctx.binding.mapping.items()
        if path in ctx.changes.kept
    }
    for pattern_path, placed in result.placements.items():
        specializations[placed] = base + pattern_path
    return effective_to_tree(result.extended, specializations, base)


def step_trees(result: TransformationResult) -> dict[str, SourceTree]:
    """Step trees keyed by the suffix of the file they are written to."""
    return {
        "step2": specialized_before(result),
        "step3": reduced_core(result),
        "step4": extended_after(result),
    }
