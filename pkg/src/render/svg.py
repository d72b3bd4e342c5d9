"""SVG emission for laid-out diagrams."""

import re
import xml.etree.ElementTree as ET
from typing import Optional

from src.render.layout import Diagram, GoalBox, PortGlyph, Rect
from src.render.style import Status, Style

SVG_NS = "http://www.w3.org/2000/svg"
ET.register_namespace("", SVG_NS)


def _q(tag: str) -> str:
    return f"{{{SVG_NS}}}{tag}"


# Characters XML 1.0 does not allow in character data, even escaped
_XML_ILLEGAL = re.compile("[^\x09\x0A\x0D\x20-\uD7FF\uE000-\uFFFD\U00010000-\U0010FFFF]")


def _clean(text: str) -> str:
    return _XML_ILLEGAL.sub("", text)


def _fmt(value: float) -> str:
    text = f"{value:.2f}".rstrip("0").rstrip(".")
    return "0" if text == "-0" else text


def _points(points) -> str:
    return " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in points)


class SvgWriter:
    """Appends drawables to an SVG tree in a fixed order."""

    def __init__(self, diagram: Diagram, style: Style):
        self.diagram = diagram
        self.style = style
        self.root = ET.Element(
            _q("svg"),
            {
                "version": "1.1",
                "width": _fmt(diagram.width),
                "height": _fmt(diagram.height),
                "viewBox": f"0 0 {_fmt(diagram.width)} {_fmt(diagram.height)}",
            },
        )

    def _group(self, name: str) -> ET.Element:
        return ET.SubElement(self.root, _q("g"), {"id": name})

    def _stroked(
        self,
        parent: ET.Element,
        tag: str,
        cls: str,
        status: Status,
        attrs: dict,
        path: Optional[str] = None,
    ) -> ET.Element:
        stroke = self.style.stroke(status)
        attributes = {"class": cls}
        if path is not None:
            attributes["data-path"] = path
        attributes.update(attrs)
        attributes["stroke"] = stroke.color
        attributes["stroke-width"] = _fmt(self.style.stroke_width)
        if stroke.dash:
            attributes["stroke-dasharray"] = stroke.dash
        return ET.SubElement(parent, _q(tag), attributes)

    def _rect(
        self,
        parent: ET.Element,
        cls: str,
        rect: Rect,
        status: Status,
        path: Optional[str] = None,
        rounded: bool = False,
        fill: str = "none",
    ) -> None:
        attrs = {
            "x": _fmt(rect.x),
            "y": _fmt(rect.y),
            "width": _fmt(rect.width),
            "height": _fmt(rect.height),
            "fill": fill,
        }
        if rounded:
            attrs["rx"] = _fmt(self.style.corner_radius)
        self._stroked(parent, "rect", cls, status, attrs, path)
        if status == Status.MODIFIED:
            self._halo(parent, rect, rounded)

    def _halo(self, parent: ET.Element, rect: Rect, rounded: bool) -> None:
        offset = self.style.stroke_width * 3
        attrs = {
            "x": _fmt(rect.x - offset),
            "y": _fmt(rect.y - offset),
            "width": _fmt(rect.width + 2 * offset),
            "height": _fmt(rect.height + 2 * offset),
            "fill": "none",
        }
        if rounded:
            attrs["rx"] = _fmt(self.style.corner_radius + offset)
        self._stroked(parent, "rect", "halo", Status.REMOVED, attrs)

    def _text(
        self,
        parent: ET.Element,
        x: float,
        y: float,
        text: str,
        size: Optional[float] = None,
        anchor: str = "start",
    ) -> ET.Element:
        node = ET.SubElement(
            parent,
            _q("text"),
            {
                "class": "label",
                "x": _fmt(x),
                "y": _fmt(y),
                "font-family": self.style.font_family,
                "font-size": _fmt(size or self.style.font_size),
                "text-anchor": anchor,
                "fill": self.style.unchanged_color,
            },
        )
        node.text = _clean(text)
        return node

    def _arrow(self, parent: ET.Element, glyph: PortGlyph) -> None:
        cx, cy = glyph.center
        r = self.style.port_size * 0.3
        tips = {
            "up": ((cx, cy - r), (cx - r, cy + r), (cx + r, cy + r)),
            "down": ((cx, cy + r), (cx - r, cy - r), (cx + r, cy - r)),
            "left": ((cx - r, cy), (cx + r, cy - r), (cx + r, cy + r)),
            "right": ((cx + r, cy), (cx - r, cy - r), (cx - r, cy + r)),
        }[glyph.direction]
        ET.SubElement(
            parent,
            _q("polygon"),
            {
                "class": "arrow",
                "points": _points(tips),
                "fill": self.style.stroke(glyph.status).color,
            },
        )

    # Sections in emission order

    def frame(self) -> None:
        group = self._group("frame")
        self._rect(group, "frame", self.diagram.frame.rect, Status.UNCHANGED)

    def separator(self) -> None:
        group = self._group("separator")
        frame = self.diagram.frame.rect
        y = _fmt(self.diagram.separator_y)
        self._stroked(
            group,
            "line",
            "separator",
            Status.UNCHANGED,
            {"x1": _fmt(frame.x), "y1": y, "x2": _fmt(frame.right), "y2": y},
        )

    def system(self) -> None:
        group = self._group("system")
        system = self.diagram.system
        if system is not None:
            self._rect(group, "system", system.rect, system.status, system.path, fill=self.style.fill_color)

    def twins(self) -> None:
        group = self._group("twins")
        for twin in self.diagram.twins:
            self._rect(group, twin.kind, twin.rect, twin.status, twin.path, fill=self.style.fill_color)

    def ports(self) -> None:
        group = self._group("ports")
        for glyph in self.diagram.ports:
            self._rect(group, "port", glyph.rect, glyph.status, glyph.path, fill=self.style.fill_color)
            self._arrow(group, glyph)

    def edges(self) -> None:
        group = self._group("edges")
        for edge in self.diagram.edges:
            attrs = {"points": _points(edge.points), "fill": "none"}
            self._stroked(group, "polyline", edge.kind, edge.status, attrs, edge.path)
            if edge.status == Status.MODIFIED:
                self._stroked(
                    group,
                    "polyline",
                    "halo",
                    Status.REMOVED,
                    {
                        "points": _points(edge.points),
                        "fill": "none",
                        "stroke-opacity": "0.5",
                        "transform": "translate(3,3)",
                    },
                )

    def goals(self) -> None:
        group = self._group("goals")
        for goal in self.diagram.goals:
            self._rect(
                group, "goal", goal.rect, goal.status, goal.path,
                rounded=True, fill=self.style.fill_color,
            )

    def labels(self) -> None:
        group = self._group("labels")
        style = self.style
        diagram = self.diagram
        pad = style.padding

        frame = diagram.frame
        title = self._text(group, frame.rect.x + pad, frame.rect.y + style.line_height, "")
        keyword = ET.SubElement(title, _q("tspan"), {"font-weight": "bold"})
        keyword.text = frame.keyword
        keyword.tail = _clean(f" {frame.label}") if frame.label else None

        if diagram.system is not None:
            rect = diagram.system.rect
            self._text(group, rect.x + pad, rect.y + style.line_height, diagram.system.label)

        for twin in diagram.twins:
            cx, cy = twin.rect.center
            self._text(group, cx, cy + twin.font_size / 3, twin.label, twin.font_size, "middle")

        small = style.font_size * 0.8
        for glyph in diagram.ports:
            if not glyph.label:
                continue
            cx, cy = glyph.center
            offset = style.port_size / 2 + 2
            if glyph.side == "top":
                self._text(group, cx, cy - offset - 2, glyph.label, small, "middle")
            elif glyph.side == "bottom":
                self._text(group, cx, cy + offset + small, glyph.label, small, "middle")
            elif glyph.side == "left":
                self._text(group, cx - offset, cy - offset, glyph.label, small, "end")
            else:
                self._text(group, cx + offset, cy - offset, glyph.label, small, "start")

        for edge in diagram.edges:
            if edge.label and len(edge.points) >= 2:
                (x0, y0), (x1, y1) = edge.points[1], edge.points[-2]
                self._text(group, (x0 + x1) / 2, min(y0, y1) - 4, edge.label, small, "middle")

        for goal in diagram.goals:
            self._goal_text(group, goal)

    def _goal_text(self, group: ET.Element, goal: GoalBox) -> None:
        style = self.style
        cx = goal.rect.center[0]
        y = goal.rect.y + style.padding + style.line_height * 0.8
        self._text(group, cx, y, goal.title, goal.font_size, "middle")
        for line in goal.doc_lines:
            y += style.line_height
            self._text(group, goal.rect.x + style.padding, y, line)

    def write(self) -> str:
        self.frame()
        self.separator()
        self.system()
        self.twins()
        self.ports()
        self.edges()
        self.goals()
        self.labels()
        ET.indent(self.root, space="  ")
        body = ET.tostring(self.root, encoding="unicode")
        return '<?xml version="1.0" encoding="UTF-8" standalone="no"?>\n' + body + "\n"


def emit_svg(diagram: Diagram, style: Optional[Style] = None) -> str:
    """Serialize a diagram as a standalone SVG 1.1 document."""
    return SvgWriter(diagram, style or Style()).write()
