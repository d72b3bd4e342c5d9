"""The five-step procedure for applying a dartrans pattern to a dartwin.

1. specialize the target's elements by the pattern's before (the binding)
2. check that the pattern can be applied
3. reduce the target to the pattern's core
4. extend the reduced target with the pattern's after
5. finalize by dropping every reference to the pattern
"""

import logging
from dataclasses import dataclass, replace
from typing import Optional

from src.dartrans.applicability import (
    ApplicabilityReport,
    TransformationContext,
    check_applicability,
    plan_additions,
    prepare,
)
from src.dartrans.binding import Binding
from src.diagnostics import DartwinError
from src.flatten.changes import ChangeSet
from src.flatten.effective import (
    DanglingEndpoint,
    EffectiveElement,
    EffectiveModel,
    EffectivePath,
    dotted,
)
from src.flatten.source import effective_to_tree
from src.model.elements import SemanticModel
from src.syntax.tree import SourceTree

logger = logging.getLogger("dartwin")


class NotApplicable(DartwinError):
    code = "NotApplicable"

    def __init__(self, report: ApplicabilityReport):
        self.report = report
        shown = "; ".join(str(v) for v in report.violations[:5])
        more = len(report.violations) - 5
        if more > 0:
            shown += f"; and {more} more"
        super().__init__(f"pattern cannot be applied: {shown}")


class TransformationInvariantError(DartwinError):
    """A step produced a model with relationships pointing nowhere."""

    code = "TransformationInvariant"


def _audit(model: EffectiveModel, step: str) -> None:
    for element in model.elements.values():
        if element.endpoints is None:
            continue
        for endpoint in element.endpoints:
            if endpoint and endpoint not in model.elements:
                raise TransformationInvariantError(
                    f"{step}: '{element.dotted}' refers to missing '{dotted(endpoint)}'"
                )


def _context(
    pattern: int,
    target: Optional[int],
    binding: Binding,
    model: SemanticModel,
    context: Optional[TransformationContext],
) -> TransformationContext:
    return context if context is not None else prepare(pattern, target, binding, model)


def reduce_to_core(
    target: int,
    pattern: int,
    binding: Binding,
    model: SemanticModel,
    context: Optional[TransformationContext] = None,
) -> EffectiveModel:
    """Step 3: remove the images of everything the before adds to the core.

    Raises:
        TransformationInvariantError: If a remaining relationship lost an endpoint
    """
    ctx = _context(pattern, target, binding, model, context)
    roots = ctx.removal_roots()
    reduced = ctx.target.without(roots)
    _audit(reduced, "reduction")
    logger.debug(
        f"Reduced {ctx.target.root.name} to core: "
        f"{len(ctx.target) - len(reduced)} elements removed"
    )
    return reduced


def _rewrite(
    endpoint: EffectivePath,
    owner: EffectiveElement,
    ctx: TransformationContext,
    placements: dict,
) -> EffectivePath:
    if endpoint in placements:
        return placements[endpoint]
    if dotted(endpoint) in ctx.changes.kept:
        image = ctx.bound(endpoint)
        if image is not None:
            return image
    raise DanglingEndpoint(
        f"endpoint '{dotted(endpoint)}' of '{owner.dotted}' is neither kept nor added"
    )


def extend_with_after(
    intermediate: EffectiveModel,
    pattern: int,
    binding: Binding,
    model: SemanticModel,
    context: Optional[TransformationContext] = None,
) -> EffectiveModel:
    """Step 4: copy the after's additions into their bound containers.

    Raises:
        DanglingEndpoint: If an added relationship refers to nothing kept or added
        TransformationInvariantError: If the result has unresolved endpoints
    """
    ctx = _context(pattern, None, binding, model, context)
    placements, _ = plan_additions(ctx)

    additions = []
    for element in ctx.after.walk():
        placed = placements.get(element.path)
        if placed is None:
            continue
        copy = replace(
            element,
            path=placed,
            name=placed[-1] if element.name is not None else None,
        )
        if element.connect:
            copy = replace(
                copy, connect=tuple(_rewrite(p, element, ctx, placements) for p in element.connect)
            )
        if element.allocate:
            copy = replace(
                copy, allocate=tuple(_rewrite(p, element, ctx, placements) for p in element.allocate)
            )
        additions.append(copy)

    extended = intermediate.with_elements(additions)
    _audit(extended, "extension")
    logger.debug(f"Extended {intermediate.root.name} with {len(additions)} elements")
    return extended


def finalize(extended: EffectiveModel) -> SourceTree:
    """Step 5: a standalone dartwin with no reference to the pattern."""
    return effective_to_tree(extended)


@dataclass(frozen=True)
class TransformationResult:
    """Every intermediate of one application, for auditing."""

    context: TransformationContext
    report: ApplicabilityReport
    reduced: EffectiveModel
    extended: EffectiveModel
    placements: dict
    tree: SourceTree
    changes: ChangeSet


def run_transformation(
    pattern: int, target: int, binding: Binding, model: SemanticModel
) -> TransformationResult:
    """Run all five steps, keeping the intermediates.

    Raises:
        NotApplicable: If the applicability check reports violations
    """
    ctx = prepare(pattern, target, binding, model)
    report = check_applicability(pattern, target, binding, model, context=ctx)
    if not report.ok:
        raise NotApplicable(report)

    reduced = reduce_to_core(target, pattern, binding, model, context=ctx)
    extended = extend_with_after(reduced, pattern, binding, model, context=ctx)
    placements, _ = plan_additions(ctx)

    original = ctx.target.paths()
    remaining = reduced.paths()
    removed = original - remaining
    added = extended.paths() - remaining
    changes = ChangeSet(
        kept=frozenset(original - removed),
        removed=frozenset(removed),
        added=frozenset(added),
    )
    logger.info(
        f"Applied {model.qualified_name(pattern)} to {ctx.target.root.name}: "
        f"{len(removed)} removed, {len(added)} added"
    )
    return TransformationResult(
        context=ctx,
        report=report,
        reduced=reduced,
        extended=extended,
        placements=placements,
        tree=finalize(extended),
        changes=changes,
    )


def apply_transformation(
    pattern: int, target: int, binding: Binding, model: SemanticModel
) -> tuple[SourceTree, ChangeSet]:
    """Apply a dartrans pattern to a dartwin.

    Returns:
        The finalized dartwin tree and the change set in target terms
    """
    result = run_transformation(pattern, target, binding, model)
    return result.tree, result.changes
