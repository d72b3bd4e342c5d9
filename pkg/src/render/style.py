"""Drawing style of the DarTwin notation."""

import logging
import re
from dataclasses import dataclass, fields, replace
from enum import Enum
from pathlib import Path
from typing import Optional

from dotenv import dotenv_values

from src.diagnostics import DartwinError

logger = logging.getLogger("dartwin")

_COLOR = re.compile(r"^#[0-9A-Fa-f]{6}$")
_DASH = re.compile(r"^\d+(\.\d+)?(,\d+(\.\d+)?)*$")


class StyleError(DartwinError):
    code = "StyleError"


class Status(str, Enum):
    UNCHANGED = "unchanged"
    ADDED = "added"
    REMOVED = "removed"
    MODIFIED = "modified"


@dataclass(frozen=True)
class Stroke:
    color: str
    dash: Optional[str] = None


@dataclass(frozen=True)
class Style:
    """Colors, fonts and spacing in abstract pixels.

    Unchanged elements are solid black, additions solid orange and
    deletions dashed orange.
    """

    unchanged_color: str = "#000000"
    highlight_color: str = "#E07B00"
    dash_pattern: str = "6,4"
    fill_color: str = "#FFFFFF"
    font_family: str = "Helvetica, Arial, sans-serif"
    font_size: float = 14.0
    min_font_size: float = 9.0
    char_width: float = 0.6
    padding: float = 10.0
    gap: float = 30.0
    frame_margin: float = 20.0
    port_size: float = 12.0
    goal_min_width: float = 120.0
    dt_min_width: float = 120.0
    dt_height: float = 70.0
    max_box_width: float = 260.0
    stroke_width: float = 1.5
    corner_radius: float = 10.0

    def stroke(self, status: Status) -> Stroke:
        if status == Status.UNCHANGED:
            return Stroke(self.unchanged_color)
        if status == Status.REMOVED:
            return Stroke(self.highlight_color, self.dash_pattern)
        return Stroke(self.highlight_color)

    def text_width(self, text: str, font_size: Optional[float] = None) -> float:
        return len(text) * (font_size or self.font_size) * self.char_width

    @property
    def line_height(self) -> float:
        return self.font_size * 1.25


def _coerce(name: str, raw: str, default) -> object:
    if isinstance(default, float):
        try:
            value = float(raw)
        except ValueError:
            raise StyleError(f"style key '{name}' expects a number, got '{raw}'")
        if value <= 0:
            raise StyleError(f"style key '{name}' must be positive, got '{raw}'")
        return value
    if name.endswith("_color") and not _COLOR.match(raw):
        raise StyleError(f"style key '{name}' expects a #RRGGBB color, got '{raw}'")
    if name == "dash_pattern" and not _DASH.match(raw):
        raise StyleError(f"style key '{name}' expects comma-separated lengths, got '{raw}'")
    return raw


def load_style(path: Optional[Path] = None) -> Style:
    """Load a ``key=value`` style override file.

    Args:
        path: Override file; defaults apply when None

    Raises:
        StyleError: On unknown keys or malformed values
    """
    style = Style()
    if path is None:
        return style
    if not Path(path).is_file():
        raise StyleError(f"style file not found: {path}")

    defaults = {f.name: getattr(style, f.name) for f in fields(Style)}
    overrides = {}
    for key, raw in dotenv_values(path).items():
        if key not in defaults:
            raise StyleError(f"unknown style key '{key}' in {path}")
        if raw is None:
            raise StyleError(f"style key '{key}' in {path} has no value")
        overrides[key] = _coerce(key, raw.strip(), defaults[key])

    style = replace(style, **overrides)
    if style.min_font_size > style.font_size:
        raise StyleError("min_font_size must not exceed font_size")
    logger.debug(f"Loaded style {path}: {sorted(overrides)}")
    return style
