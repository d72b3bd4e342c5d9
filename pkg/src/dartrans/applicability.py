"""Can a pattern be applied to a target under a binding?"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from src.dartrans.binding import Binding
from src.flatten.changes import ChangeSet, DartransParts, changes_between, dartrans_parts
from src.flatten.effective import (
    EffectiveModel,
    EffectivePath,
    Flattener,
    dotted,
    undotted,
)
from src.model.elements import SemanticModel
from src.model.kinds import PART_LIKE_KINDS, RELATIONSHIP_KINDS, ElementKind

logger = logging.getLogger("dartwin")


class Reason(str, Enum):
    UNBOUND = "unbound"
    KIND_MISMATCH = "kind-mismatch"
    CONTAINMENT_BROKEN = "containment-broken"
    ENDPOINT_INCONSISTENT = "endpoint-inconsistent"
    NAME_COLLISION = "name-collision"
    NON_INJECTIVE = "non-injective"


@dataclass(frozen=True)
class Violation:
    path: str
    reason: Reason
    detail: str = ""

    def __str__(self) -> str:
        return f"{self.path}: {self.reason.value}" + (f" ({self.detail})" if self.detail else "")


@dataclass(frozen=True)
class ApplicabilityReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def reasons_for(self, path: str) -> set[Reason]:
        return {v.reason for v in self.violations if v.path == path}


@dataclass(frozen=True)
class TransformationContext:
    """Everything the procedure needs, flattened once."""

    model: SemanticModel
    parts: DartransParts
    target_id: Optional[int]
    binding: Binding
    core: EffectiveModel
    before: EffectiveModel
    after: EffectiveModel
    target: Optional[EffectiveModel]
    changes: ChangeSet

    def bound(self, pattern_path: EffectivePath) -> Optional[EffectivePath]:
        value = self.binding.mapping.get(dotted(pattern_path))
        return undotted(value) if value is not None else None

    def removal_roots(self) -> list[EffectivePath]:
        """Target images of the elements the pattern removes."""
        roots = []
        for path in sorted(self.changes.removed):
            image = self.binding.mapping.get(path)
            if image is not None and undotted(image) in self.target:
                roots.append(undotted(image))
        return roots

    def removal_closure(self) -> set[EffectivePath]:
        closure: set[EffectivePath] = set()
        for root in self.removal_roots():
            closure.add(root)
            closure.update(self.target.descendants(root))
        return closure


def prepare(
    pattern: int, target: Optional[int], binding: Binding, model: SemanticModel
) -> TransformationContext:
    """Flatten the pattern triple and, when given, the target."""
    parts = dartrans_parts(pattern, model)
    flattener = Flattener(model)
    core = flattener.flatten(parts.core)
    before = flattener.flatten(parts.before)
    after = flattener.flatten(parts.after)
    return TransformationContext(
        model=model,
        parts=parts,
        target_id=target,
        binding=binding,
        core=core,
        before=before,
        after=after,
        target=flattener.flatten(target) if target is not None else None,
        changes=changes_between(model, parts, core, before, after),
    )


def _kinds_compatible(pattern: ElementKind, target: ElementKind) -> bool:
    if pattern == target:
        return True
    return pattern == ElementKind.PART and target in PART_LIKE_KINDS


def plan_additions(
    ctx: TransformationContext,
) -> tuple[dict[EffectivePath, EffectivePath], list[Violation]]:
    """Decide where each added pattern element lands in the target.

    Modified elements replace their bound target element in place and keep
    its name; other additions land in the image of their pattern container
    under their pattern name. The rename map overrides either name.
    """
    placements: dict[EffectivePath, EffectivePath] = {}
    violations: list[Violation] = []
    added = ctx.changes.added

    for element in ctx.after.walk():
        key = element.dotted
        if key not in added:
            continue
        parent = element.parent

        if key in ctx.changes.removed:
            image = ctx.bound(element.path)
            if image is None:
                violations.append(Violation(key, Reason.UNBOUND, "modified element is not bound"))
                continue
            container, default_name = image[:-1], image[-1]
        elif parent in placements:
            container, default_name = placements[parent], element.path[-1]
        elif parent == ():
            container, default_name = (), element.path[-1]
        else:
            image = ctx.bound(parent)
            if image is None:
                violations.append(
                    Violation(key, Reason.UNBOUND, f"container '{dotted(parent)}' is not bound")
                )
                continue
            container, default_name = image, element.path[-1]

        placements[element.path] = container + (ctx.binding.renames.get(key, default_name),)

    return placements, violations


def _check_collisions(
    ctx: TransformationContext,
    placements: dict[EffectivePath, EffectivePath],
    removed: set[EffectivePath],
) -> list[Violation]:
    violations = []
    surviving = {p for p in ctx.target.elements if p not in removed}
    landed: dict[EffectivePath, str] = {}

    for pattern_path, placed in placements.items():
        key = dotted(pattern_path)
        name = placed[-1]
        if placed in landed:
            violations.append(
                Violation(key, Reason.NAME_COLLISION, f"'{name}' is also added by '{landed[placed]}'")
            )
            continue
        landed[placed] = key

        scope = placed[:-1]
        while True:
            if scope + (name,) in surviving:
                violations.append(
                    Violation(
                        key,
                        Reason.NAME_COLLISION,
                        f"'{name}' clashes with surviving '{dotted(scope + (name,))}'",
                    )
                )
                break
            if not scope:
                break
            scope = scope[:-1]
    return violations


def check_applicability(
    pattern: int,
    target: int,
    binding: Binding,
    model: SemanticModel,
    context: Optional[TransformationContext] = None,
) -> ApplicabilityReport:
    """Verify a binding against the pattern's before and the target.

    Failures never raise; they are returned as violations.
    """
    ctx = context or prepare(pattern, target, binding, model)
    mapping = binding.mapping
    violations: list[Violation] = []

    before_paths = {e.dotted: e for e in ctx.before.walk()}
    for key in sorted(set(mapping) - set(before_paths)):
        violations.append(Violation(key, Reason.UNBOUND, "not an element of the pattern's before"))

    images: dict[str, str] = {}
    for key, element in before_paths.items():
        if key not in mapping:
            violations.append(Violation(key, Reason.UNBOUND, "no target element bound"))
            continue
        image_key = mapping[key]
        image = ctx.target.get(undotted(image_key))
        if image is None:
            violations.append(
                Violation(key, Reason.UNBOUND, f"target element '{image_key}' does not exist")
            )
            continue
        if image_key in images:
            violations.append(
                Violation(key, Reason.NON_INJECTIVE, f"'{image_key}' is also bound to '{images[image_key]}'")
            )
        images[image_key] = key

        if not _kinds_compatible(element.kind, image.kind):
            violations.append(
                Violation(
                    key,
                    Reason.KIND_MISMATCH,
                    f"{element.kind.value} bound to {image.kind.value} '{image_key}'",
                )
            )
            continue

        if element.kind in RELATIONSHIP_KINDS:
            if element.endpoints is None:
                continue
            expected = tuple(mapping.get(dotted(p)) for p in element.endpoints)
            if None in expected:
                continue
            actual = tuple(dotted(p) for p in image.endpoints) if image.endpoints else None
            if actual != expected:
                violations.append(
                    Violation(
                        key,
                        Reason.ENDPOINT_INCONSISTENT,
                        f"'{image_key}' relates {actual}, expected {expected}",
                    )
                )
        else:
            parent_image = () if element.parent == () else ctx.bound(element.parent)
            if parent_image is not None and image.parent != parent_image:
                violations.append(
                    Violation(
                        key,
                        Reason.CONTAINMENT_BROKEN,
                        f"'{image_key}' is not owned by '{dotted(parent_image)}'",
                    )
                )

    removed = ctx.removal_closure()
    image_paths = {undotted(v) for v in mapping.values()}
    for element in ctx.target.walk():
        if element.path in removed or element.path in image_paths or element.endpoints is None:
            continue
        touched = [dotted(p) for p in element.endpoints if p in removed]
        if touched:
            violations.append(
                Violation(
                    element.dotted,
                    Reason.ENDPOINT_INCONSISTENT,
                    f"target relationship outside the binding would lose {', '.join(touched)}",
                )
            )

    added = ctx.changes.added
    for key in sorted(binding.renames):
        if key not in added:
            violations.append(Violation(key, Reason.UNBOUND, "renamed path is not added by the pattern"))

    placements, placement_violations = plan_additions(ctx)
    violations.extend(placement_violations)
    violations.extend(_check_collisions(ctx, placements, removed))

    logger.debug(f"Applicability check: {len(violations)} violations")
    return ApplicabilityReport(tuple(violations))
