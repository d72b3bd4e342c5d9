"""Binding files: which target elements a pattern's before is matched to.

Format, one entry per line::

    # comment
    TS.DT1 -> GantryCrane.TrajectoryLQR
    TS.DT2 => TrajectoryOCP
"""

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path

from src.diagnostics import DartwinError, Span

logger = logging.getLogger("dartwin")

_PATH = r"[A-Za-z_$][A-Za-z0-9_$]*(?:\.[A-Za-z_$][A-Za-z0-9_$]*)*"
_MAP_LINE = re.compile(rf"^({_PATH})\s*->\s*({_PATH})$")
_RENAME_LINE = re.compile(rf"^({_PATH})\s*=>\s*([A-Za-z_][A-Za-z0-9_]*)$")


class BindingError(DartwinError):
    code = "BindingError"


@dataclass(frozen=True)
class Binding:
    """Pattern-to-target map plus fresh names for added elements.

    Paths are dotted and relative to the pattern's before (or after, for
    renames) and to the target root.
    """

    mapping: dict = field(default_factory=dict)
    renames: dict = field(default_factory=dict)

    def without(self, *pattern_paths: str) -> "Binding":
        return Binding(
            {k: v for k, v in self.mapping.items() if k not in pattern_paths},
            dict(self.renames),
        )

    def with_renames(self, **renames: str) -> "Binding":
        merged = dict(self.renames)
        merged.update(renames)
        return Binding(dict(self.mapping), merged)


def parse_binding(text: str, file: str = "<binding>") -> Binding:
    """Parse binding file text.

    Raises:
        BindingError: On a malformed line or a key bound twice
    """
    mapping: dict[str, str] = {}
    renames: dict[str, str] = {}
    offset = 0

    for number, raw in enumerate(text.splitlines(keepends=True), start=1):
        span = Span(offset, offset + len(raw.rstrip("\n")), file, number, 1)
        offset += len(raw)
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue

        match = _MAP_LINE.match(line)
        if match:
            key, value = match.groups()
            if key in mapping:
                raise BindingError(f"'{key}' is bound twice", span)
            mapping[key] = value
            continue

        match = _RENAME_LINE.match(line)
        if match:
            key, value = match.groups()
            if key in renames:
                raise BindingError(f"'{key}' is renamed twice", span)
            renames[key] = value
            continue

        raise BindingError(
            f"expected 'pattern.path -> target.path' or 'pattern.path => Name', found '{line}'",
            span,
        )

    logger.debug(f"Loaded binding {file}: {len(mapping)} bindings, {len(renames)} renames")
    return Binding(mapping, renames)


def load_binding(path: Path) -> Binding:
    return parse_binding(path.read_text(encoding="utf-8"), str(path))
