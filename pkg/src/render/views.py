"""Rendering entry points for dartwins and dartrans patterns."""

import logging
from typing import Optional

from src.flatten.changes import changes_between, dartrans_parts
from src.flatten.effective import Flattener
from src.model.elements import SemanticModel
from src.model.kinds import ElementKind
from src.render.layout import layout
from src.render.style import Style
from src.render.svg import emit_svg

logger = logging.getLogger("dartwin")


def render_dartwin(eid: int, model: SemanticModel, style: Optional[Style] = None) -> str:
    """Plain view: every element drawn unchanged."""
    element = model.element(eid)
    effective = Flattener(model).flatten(eid)
    keyword = "dartwin" if element.kind == ElementKind.DARTWIN else element.keyword or "dartwin"
    diagram = layout(effective, None, style, keyword, effective.root.name or "")
    return emit_svg(diagram, style)


def render_dartrans(eid: int, model: SemanticModel, style: Optional[Style] = None) -> str:
    """Change-set view of a dartrans.

    Before and after are overlaid so that removed elements are drawn
    dashed and added elements solid in the highlight color.
    """
    parts = dartrans_parts(eid, model)
    flattener = Flattener(model)
    core = flattener.flatten(parts.core)
    before = flattener.flatten(parts.before)
    after = flattener.flatten(parts.after)
    changes = changes_between(model, parts, core, before, after)
    for diagnostic in changes.diagnostics:
        logger.warning(diagnostic.format())

    name = model.element(eid).effective_name or ""
    label = name
    if parts.base is not None:
        label = f"{name} :> {model.element(parts.base).effective_name}"

    diagram = layout(before.union(after), changes, style, "dartrans", label)
    logger.debug(f"Rendered dartrans {name}: {len(diagram.drawables())} drawables")
    return emit_svg(diagram, style)
