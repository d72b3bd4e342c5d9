"""Layout and SVG rendering of the DarTwin graphical notation."""

from src.render.layout import (
    Diagram,
    DiagramBuilder,
    Edge,
    Frame,
    GoalBox,
    LayoutOverflow,
    PortGlyph,
    Rect,
    SystemBox,
    TwinBox,
    layout,
    wrap_text,
)
from src.render.style import Status, Style, StyleError, load_style
from src.render.svg import emit_svg
from src.render.views import render_dartrans, render_dartwin

__all__ = [
    "Diagram",
    "DiagramBuilder",
    "Edge",
    "Frame",
    "GoalBox",
    "LayoutOverflow",
    "PortGlyph",
    "Rect",
    "Status",
    "Style",
    "StyleError",
    "SystemBox",
    "TwinBox",
    "emit_svg",
    "layout",
    "load_style",
    "render_dartrans",
    "render_dartwin",
    "wrap_text",
]
