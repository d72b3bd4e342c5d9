"""Layered layout of the DarTwin notation.

Goals sit in a row at the top, a horizontal bar separates them from the
twin system, whose digital twins form a row inside the system box. Actual
twin ports sit on the bottom edge of the system box. Edges are routed
orthogonally.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

from src.diagnostics import DartwinError
from src.flatten.changes import ChangeSet
from src.flatten.effective import EffectiveElement, EffectiveModel, EffectivePath, dotted
from src.model.kinds import ElementKind
from src.render.style import Status, Style

logger = logging.getLogger("dartwin")

Point = tuple[float, float]

_TWIN_KINDS = (ElementKind.DIGITAL_TWIN, ElementKind.ARBITER, ElementKind.PART)

_OUTWARD = {"top": "up", "bottom": "down", "left": "left", "right": "right"}
_INWARD = {"top": "down", "bottom": "up", "left": "right", "right": "left"}
_STEP = {"up": (0.0, -1.0), "down": (0.0, 1.0), "left": (-1.0, 0.0), "right": (1.0, 0.0)}


class LayoutOverflow(DartwinError):
    code = "LayoutOverflow"


@dataclass(frozen=True)
class Rect:
    x: float
    y: float
    width: float
    height: float

    @property
    def right(self) -> float:
        return self.x + self.width

    @property
    def bottom(self) -> float:
        return self.y + self.height

    @property
    def center(self) -> Point:
        return (self.x + self.width / 2, self.y + self.height / 2)

    def overlaps(self, other: "Rect", gap: float = 0.0) -> bool:
        return not (
            self.right + gap <= other.x
            or other.right + gap <= self.x
            or self.bottom + gap <= other.y
            or other.bottom + gap <= self.y
        )

    def on_boundary(self, point: Point) -> bool:
        x, y = point
        inside_x = self.x <= x <= self.right
        inside_y = self.y <= y <= self.bottom
        return (inside_y and x in (self.x, self.right)) or (inside_x and y in (self.y, self.bottom))


@dataclass(frozen=True)
class Frame:
    keyword: str
    label: str
    rect: Rect


@dataclass(frozen=True)
class GoalBox:
    path: str
    rect: Rect
    title: str
    doc_lines: tuple[str, ...]
    status: Status
    font_size: float


@dataclass(frozen=True)
class SystemBox:
    path: str
    label: str
    rect: Rect
    status: Status


@dataclass(frozen=True)
class TwinBox:
    path: str
    label: str
    kind: str
    rect: Rect
    status: Status
    font_size: float


@dataclass(frozen=True)
class PortGlyph:
    path: str
    owner: str
    rect: Rect
    side: str
    direction: str
    label: Optional[str]
    status: Status

    @property
    def center(self) -> Point:
        return self.rect.center


@dataclass(frozen=True)
class Edge:
    path: str
    kind: str
    points: tuple[Point, ...]
    status: Status
    label: Optional[str] = None


@dataclass(frozen=True)
class Diagram:
    """Positioned drawables; origin top-left, y grows downwards."""

    width: float
    height: float
    frame: Frame
    separator_y: float
    goals: tuple[GoalBox, ...] = ()
    system: Optional[SystemBox] = None
    twins: tuple[TwinBox, ...] = ()
    ports: tuple[PortGlyph, ...] = ()
    edges: tuple[Edge, ...] = ()

    def drawables(self) -> list:
        """Everything that carries a status, in emission order."""
        items: list = []
        if self.system:
            items.append(self.system)
        items.extend(self.twins)
        items.extend(self.ports)
        items.extend(self.edges)
        items.extend(self.goals)
        return items


def wrap_text(text: str, max_chars: int) -> list[str]:
    """Split text into lines of at most ``max_chars`` characters.

    Priority: paragraph breaks > newlines > spaces > hard split.
    """
    if not text:
        return []

    lines: list[str] = []
    remaining = text.strip()

    while remaining:
        head = remaining[: max_chars + 1]

        para_break = head.find("\n\n")
        if 0 <= para_break <= max_chars:
            lines.append(remaining[:para_break].strip())
            remaining = remaining[para_break + 2 :].strip()
            continue

        newline_break = head.find("\n")
        if 0 <= newline_break <= max_chars:
            lines.append(remaining[:newline_break].strip())
            remaining = remaining[newline_break + 1 :].strip()
            continue

        if len(remaining) <= max_chars:
            lines.append(remaining)
            break

        space_break = head.rfind(" ")
        if space_break > 0:
            lines.append(remaining[:space_break].rstrip())
            remaining = remaining[space_break + 1 :].lstrip()
            continue

        lines.append(remaining[:max_chars])
        remaining = remaining[max_chars:]

    return [line for line in lines if line]


def _status(changes: Optional[ChangeSet], path: str) -> Status:
    if changes is None:
        return Status.UNCHANGED
    return {
        "kept": Status.UNCHANGED,
        "added": Status.ADDED,
        "removed": Status.REMOVED,
        "modified": Status.MODIFIED,
    }[changes.status(path)]


@dataclass
class _Flows:
    """Connection roles and peers per port path."""

    role: dict = field(default_factory=dict)
    peer: dict = field(default_factory=dict)

    @classmethod
    def of(cls, connections: list[EffectiveElement]) -> "_Flows":
        flows = cls()
        for element in connections:
            source, target = element.connect
            flows.role.setdefault(source, "source")
            flows.role.setdefault(target, "target")
            flows.peer.setdefault(source, target)
            flows.peer.setdefault(target, source)
        return flows


class DiagramBuilder:
    """Computes a Diagram for one effective model."""

    def __init__(self, effective: EffectiveModel, changes: Optional[ChangeSet], style: Style):
        self.model = effective
        self.changes = changes
        self.style = style

    # Sizing

    def fit_title(self, text: str) -> float:
        """Largest font size at which ``text`` fits the maximum box width.

        Raises:
            LayoutOverflow: If it does not fit even at the minimum font size
        """
        style = self.style
        limit = style.max_box_width - 2 * style.padding
        size = style.font_size
        while style.text_width(text, size) > limit:
            if size <= style.min_font_size:
                raise LayoutOverflow(
                    f"label '{text}' exceeds max_box_width={style.max_box_width} "
                    f"at min_font_size={style.min_font_size}"
                )
            size = max(size - 1.0, style.min_font_size)
        return size

    def _box_width(self, text: str, size: float, minimum: float) -> float:
        return max(minimum, self.style.text_width(text, size) + 2 * self.style.padding)

    # Rows

    def _goals(self, goals: list[EffectiveElement], top: float, left: float) -> list[GoalBox]:
        style = self.style
        boxes = []
        x = left
        for goal in goals:
            title = goal.name or goal.dotted
            size = self.fit_title(title)
            width = self._box_width(title, size, style.goal_min_width)
            if goal.doc:
                longest = max(len(line) for line in goal.doc.splitlines() or [""])
                doc_width = style.text_width("x" * longest) + 2 * style.padding
                width = max(width, min(style.max_box_width, doc_width))
            char_px = style.font_size * style.char_width
            max_chars = max(1, int((width - 2 * style.padding) / char_px))
            doc_lines = tuple(wrap_text(goal.doc or "", max_chars))
            height = 2 * style.padding + style.line_height * (1 + len(doc_lines))
            boxes.append(
                GoalBox(
                    path=goal.dotted,
                    rect=Rect(x, top, width, height),
                    title=title,
                    doc_lines=doc_lines,
                    status=_status(self.changes, goal.dotted),
                    font_size=size,
                )
            )
            x += width + style.gap
        return boxes

    def _port_side(
        self,
        port: EffectivePath,
        owner: EffectiveElement,
        twin_index: dict,
        at_ports: set,
        flows: _Flows,
    ) -> str:
        if owner.kind == ElementKind.ARBITER:
            role = flows.role.get(port)
            is_input = role == "target" or (role is None and port[-1].startswith("in"))
            return "top" if is_input else "bottom"
        peer = flows.peer.get(port)
        if peer is None:
            return "top"
        if peer in at_ports:
            return "bottom"
        peer_owner = peer[:-1]
        if peer_owner in twin_index and twin_index[peer_owner] < twin_index[owner.path]:
            return "left"
        return "right"

    def _place_on_side(self, rect: Rect, side: str, index: int, count: int) -> Point:
        fraction = (index + 1) / (count + 1)
        if side == "top":
            return (rect.x + rect.width * fraction, rect.y)
        if side == "bottom":
            return (rect.x + rect.width * fraction, rect.bottom)
        if side == "left":
            return (rect.x, rect.y + rect.height * fraction)
        return (rect.right, rect.y + rect.height * fraction)

    def _glyph(self, center: Point) -> Rect:
        half = self.style.port_size / 2
        return Rect(center[0] - half, center[1] - half, self.style.port_size, self.style.port_size)

    # Edges

    def _route(self, a: PortGlyph, b: PortGlyph, at_paths: set) -> tuple[Point, ...]:
        stub = self.style.gap / 2

        def exit_of(glyph: PortGlyph) -> tuple[str, Point]:
            heading = "up" if glyph.path in at_paths else _OUTWARD[glyph.side]
            dx, dy = _STEP[heading]
            cx, cy = glyph.center
            return heading, (cx + dx * stub, cy + dy * stub)

        heading_a, stub_a = exit_of(a)
        _, stub_b = exit_of(b)
        if heading_a in ("left", "right"):
            corner = (stub_b[0], stub_a[1])
        else:
            corner = (stub_a[0], stub_b[1])
        return _simplify((a.center, stub_a, corner, stub_b, b.center))

    # Entry point

    def build(self, keyword: str, label: str) -> Diagram:
        style = self.style
        model = self.model
        margin, pad, gap = style.frame_margin, style.padding, style.gap
        left = margin + pad
        top = margin + style.line_height + 2 * pad

        goals_src = [e for e in model.walk() if e.kind == ElementKind.GOAL]
        systems = [e for e in model.children() if e.kind == ElementKind.TWIN_SYSTEM]
        for skipped in systems[1:]:
            logger.warning(f"Only the first twin system is drawn; skipping {skipped.dotted}")
        system_src = systems[0] if systems else None

        goals = self._goals(goals_src, top, left)
        goal_by_path = {g.path: g for g in goals}
        goal_bottom = max((g.rect.bottom for g in goals), default=top)

        conflicts = [
            e
            for e in model.walk()
            if e.kind == ElementKind.CONFLICT
            and e.connect
            and all(dotted(p) in goal_by_path for p in e.connect)
        ]
        lane_y = goal_bottom + gap / 2 + style.line_height if conflicts else None
        separator_y = (lane_y if lane_y is not None else goal_bottom) + gap

        twins: list[TwinBox] = []
        ports: list[PortGlyph] = []
        edges: list[Edge] = []
        system: Optional[SystemBox] = None
        right_edge = max((g.rect.right for g in goals), default=left)
        bottom_edge = separator_y + gap

        if system_src is not None:
            system, twins, ports = self._system(system_src, separator_y + gap, left)
            right_edge = max(right_edge, system.rect.right)
            bottom_edge = system.rect.bottom + style.port_size / 2 + style.line_height + pad
        else:
            stray = [e for e in model.children() if e.kind == ElementKind.PART]
            if stray:
                logger.warning(f"No twin system to draw; skipping actual twin ports of {len(stray)} parts")

        port_by_path = {p.path: p for p in ports}
        at_paths = {p.path for p in ports if p.owner not in {t.path for t in twins}}
        twin_by_path = {t.path: t for t in twins}
        if system:
            twin_by_path[system.path] = system

        for element in model.walk():
            if element.kind == ElementKind.CONNECTION and element.connect:
                a, b = (dotted(p) for p in element.connect)
                if a in port_by_path and b in port_by_path:
                    edges.append(
                        Edge(
                            path=element.dotted,
                            kind="flow",
                            points=self._route(port_by_path[a], port_by_path[b], at_paths),
                            status=_status(self.changes, element.dotted),
                        )
                    )
                else:
                    logger.warning(f"Skipping connection {element.dotted}: endpoint is not drawn")

        for element in model.walk():
            if element.kind != ElementKind.ALLOCATION or not element.allocate:
                continue
            goal = goal_by_path.get(dotted(element.allocate[0]))
            target = twin_by_path.get(dotted(element.allocate[1]))
            if goal is None or target is None:
                logger.warning(f"Skipping allocation {element.dotted}: endpoint is not drawn")
                continue
            tx = target.rect.x + pad
            gx = goal.rect.center[0]
            points = (
                (tx, target.rect.y),
                (tx, separator_y),
                (gx, separator_y),
                (gx, goal.rect.bottom),
            )
            edges.append(
                Edge(element.dotted, "allocation", _simplify(points), _status(self.changes, element.dotted))
            )

        for element in conflicts:
            a, b = (goal_by_path[dotted(p)] for p in element.connect)
            ax = a.rect.x + a.rect.width / 4
            bx = b.rect.x + b.rect.width / 4
            points = ((ax, a.rect.bottom), (ax, lane_y), (bx, lane_y), (bx, b.rect.bottom))
            edges.append(
                Edge(
                    element.dotted,
                    "conflict",
                    _simplify(points),
                    _status(self.changes, element.dotted),
                    element.explanation or element.name,
                )
            )

        label_width = style.text_width(f"{keyword} {label}") + 2 * pad
        frame_width = max(right_edge + pad - margin, label_width)
        frame = Frame(keyword, label, Rect(margin, margin, frame_width, bottom_edge - margin))
        logger.debug(
            f"Layout: {len(goals)} goals, {len(twins)} twins, {len(ports)} ports, {len(edges)} edges"
        )
        return Diagram(
            width=frame.rect.right + margin,
            height=frame.rect.bottom + margin,
            frame=frame,
            separator_y=separator_y,
            goals=tuple(goals),
            system=system,
            twins=tuple(twins),
            ports=tuple(ports),
            edges=tuple(edges),
        )

    def _system(
        self, system_src: EffectiveElement, top: float, left: float
    ) -> tuple[SystemBox, list[TwinBox], list[PortGlyph]]:
        style = self.style
        model = self.model
        pad, gap, port = style.padding, style.gap, style.port_size

        twin_src = [e for e in model.children(system_src.path) if e.kind in _TWIN_KINDS]
        twin_index = {t.path: i for i, t in enumerate(twin_src)}
        actual = [e for e in model.children() if e.kind == ElementKind.PART]
        at_src = [p for a in actual for p in model.children(a.path) if p.kind == ElementKind.PORT]
        at_ports = {p.path for p in at_src}
        flows = _Flows.of(
            [e for e in model.walk() if e.kind == ElementKind.CONNECTION and e.connect]
        )

        sides: dict[EffectivePath, dict[str, list[EffectiveElement]]] = {}
        for twin in twin_src:
            by_side: dict[str, list[EffectiveElement]] = {s: [] for s in ("top", "bottom", "left", "right")}
            for child in model.children(twin.path):
                if child.kind == ElementKind.PORT:
                    by_side[self._port_side(child.path, twin, twin_index, at_ports, flows)].append(child)
            sides[twin.path] = by_side

        row_top = top + pad + style.line_height + gap
        x = left + gap
        twins: list[TwinBox] = []
        for twin in twin_src:
            title = twin.name or twin.dotted
            size = self.fit_title(title)
            by_side = sides[twin.path]
            across = max(len(by_side["top"]), len(by_side["bottom"]))
            down = max(len(by_side["left"]), len(by_side["right"]))
            width = max(self._box_width(title, size, style.dt_min_width), across * (port + 2 * pad) + pad)
            height = max(style.dt_height, down * (port + pad) + pad)
            twins.append(
                TwinBox(
                    path=twin.dotted,
                    label=title,
                    kind="arbiter" if twin.kind == ElementKind.ARBITER else "digital-twin",
                    rect=Rect(x, row_top, width, height),
                    status=_status(self.changes, twin.dotted),
                    font_size=size,
                )
            )
            x += width + gap

        row_bottom = max((t.rect.bottom for t in twins), default=row_top)
        label = system_src.name or system_src.dotted
        width = max(
            x - left,
            len(at_src) * (port + gap) + gap,
            self._box_width(label, self.fit_title(label), style.dt_min_width),
        )
        rect = Rect(left, top, width, row_bottom + 2 * gap - top)
        system = SystemBox(system_src.dotted, label, rect, _status(self.changes, system_src.dotted))

        glyphs: list[PortGlyph] = []
        for twin_box, twin in zip(twins, twin_src):
            for side, members in sides[twin.path].items():
                for i, member in enumerate(members):
                    role = flows.role.get(member.path)
                    direction = _INWARD[side] if role == "target" else _OUTWARD[side]
                    glyphs.append(
                        PortGlyph(
                            path=member.dotted,
                            owner=twin_box.path,
                            rect=self._glyph(self._place_on_side(twin_box.rect, side, i, len(members))),
                            side=side,
                            direction=direction,
                            label=member.name,
                            status=_status(self.changes, member.dotted),
                        )
                    )

        for i, member in enumerate(at_src):
            role = flows.role.get(member.path)
            glyphs.append(
                PortGlyph(
                    path=member.dotted,
                    owner=dotted(member.parent),
                    rect=self._glyph(self._place_on_side(rect, "bottom", i, len(at_src))),
                    side="bottom",
                    direction="down" if role == "target" else "up",
                    label=member.name,
                    status=_status(self.changes, member.dotted),
                )
            )
        return system, twins, glyphs


def _simplify(points: tuple[Point, ...]) -> tuple[Point, ...]:
    """Drop repeated and collinear interior points."""
    kept: list[Point] = []
    for point in points:
        if kept and kept[-1] == point:
            continue
        if len(kept) >= 2:
            (x0, y0), (x1, y1) = kept[-2], kept[-1]
            if (x0 == x1 == point[0]) or (y0 == y1 == point[1]):
                kept[-1] = point
                continue
        kept.append(point)
    return tuple(kept)


def layout(
    effective: EffectiveModel,
    changes: Optional[ChangeSet] = None,
    style: Optional[Style] = None,
    keyword: str = "dartwin",
    label: Optional[str] = None,
) -> Diagram:
    """Lay out a flattened model in the DarTwin notation.

    Args:
        effective: Flattened dartwin
        changes: Statuses to draw; everything is unchanged when None
        style: Sizes and colors; defaults when None
        keyword: Bold frame prefix
        label: Frame label; the root name when None

    Raises:
        LayoutOverflow: If a title does not fit at the minimum font size
    """
    builder = DiagramBuilder(effective, changes, style or Style())
    return builder.build(keyword, label if label is not None else (effective.root.name or ""))
