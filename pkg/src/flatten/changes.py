"""Change sets induced by a dartrans."""

import json
import logging
from dataclasses import dataclass
from typing import Optional

from src.diagnostics import DartwinError, Diagnostic, Severity
from src.flatten.effective import EffectiveModel, Flattener
from src.model.elements import SemanticModel
from src.model.kinds import ElementKind

logger = logging.getLogger("dartwin")


class DartransStructureError(DartwinError):
    code = "DartransStructure"


@dataclass(frozen=True)
class DartransParts:
    """The core/before/after triple of a dartrans.

    ``before`` and ``after`` fall back to the core when absent.
    """

    dartrans: int
    core: int
    before: int
    after: int
    base: Optional[int] = None


def dartrans_parts(eid: int, model: SemanticModel) -> DartransParts:
    element = model.element(eid)
    if element.kind != ElementKind.DARTRANS:
        raise DartransStructureError(
            f"'{model.qualified_name(eid)}' is a {element.kind.value}, not a dartrans",
            element.span,
        )
    cores = model.members_of_kind(eid, ElementKind.DARTWIN_CORE)
    if not cores:
        raise DartransStructureError(
            f"dartrans '{model.qualified_name(eid)}' has no #dartwin_core", element.span
        )
    core = cores[0]
    befores = model.members_of_kind(eid, ElementKind.DARTWIN_BEFORE)
    afters = model.members_of_kind(eid, ElementKind.DARTWIN_AFTER)
    return DartransParts(
        dartrans=eid,
        core=core.id,
        before=befores[0].id if befores else core.id,
        after=afters[0].id if afters else core.id,
        base=core.specializes[0] if core.specializes else None,
    )


@dataclass(frozen=True)
class ChangeSet:
    """Kept/removed/added partition of effective paths."""

    kept: frozenset = frozenset()
    removed: frozenset = frozenset()
    added: frozenset = frozenset()
    diagnostics: tuple[Diagnostic, ...] = ()

    @property
    def modified(self) -> frozenset:
        return self.removed & self.added

    def status(self, path: str) -> str:
        if path in self.removed and path in self.added:
            return "modified"
        if path in self.added:
            return "added"
        if path in self.removed:
            return "removed"
        return "kept"

    def to_json(self) -> str:
        payload = {
            "kept": sorted(self.kept),
            "removed": sorted(self.removed),
            "added": sorted(self.added),
            "modified": sorted(self.modified),
        }
        return json.dumps(payload, indent=2) + "\n"

    def to_table(self) -> str:
        rows = []
        for path in sorted(self.kept | self.removed | self.added):
            rows.append(f"{self.status(path)}\t{path}")
        return "\n".join(rows) + ("\n" if rows else "")


def _coverage_diagnostic(
    model: SemanticModel, part: int, missing: frozenset
) -> Diagnostic:
    element = model.element(part)
    shown = ", ".join(sorted(missing)[:5])
    return Diagnostic(
        Severity.ERROR,
        "CoreNotSpecialized",
        f"'{element.effective_name}' lacks core elements ({shown}); "
        f"diff proceeds against the core",
        element.span,
    )


def diff(eid: int, model: SemanticModel) -> ChangeSet:
    """Compute the change set of a dartrans.

    kept is the core's effective paths; removed and added are what the
    before and after contribute beyond it; modified paths are in both.
    """
    parts = dartrans_parts(eid, model)
    flattener = Flattener(model)
    core = flattener.flatten(parts.core)
    before = flattener.flatten(parts.before)
    after = flattener.flatten(parts.after)
    return changes_between(model, parts, core, before, after)


def changes_between(
    model: SemanticModel,
    parts: DartransParts,
    core: EffectiveModel,
    before: EffectiveModel,
    after: EffectiveModel,
) -> ChangeSet:
    kept = core.paths()
    diagnostics = []
    for part, flattened in ((parts.before, before), (parts.after, after)):
        missing = kept - flattened.paths()
        if missing:
            diagnostics.append(_coverage_diagnostic(model, part, missing))

    removed = before.paths() - kept
    added = after.paths() - kept
    logger.debug(
        f"Diff of {model.qualified_name(parts.dartrans)}: "
        f"{len(kept)} kept, {len(removed)} removed, {len(added)} added"
    )
    return ChangeSet(kept, frozenset(removed), frozenset(added), tuple(diagnostics))
