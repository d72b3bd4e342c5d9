"""Loading of multi-file DarTwin projects."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

from src.config import SOURCE_SUFFIXES
from src.diagnostics import DartwinError, Diagnostic
from src.model.builder import build_model
from src.model.elements import SemanticModel
from src.model.kinds import ElementKind
from src.model.validate import validate
from src.syntax.parser import parse
from src.syntax.tree import SourceTree

logger = logging.getLogger("dartwin")


class WorkspaceError(DartwinError):
    code = "Workspace"


def sibling_sources(path: Path) -> list[Path]:
    """Source files next to ``path``, sorted by name."""
    return sorted(
        p for p in path.parent.iterdir() if p.is_file() and p.suffix in SOURCE_SUFFIXES
    )


@dataclass(frozen=True)
class Workspace:
    """Every source file of a project parsed into one namespace."""

    files: tuple[Path, ...]
    tree: SourceTree
    model: SemanticModel
    diagnostics: tuple[Diagnostic, ...]

    def roots_of(self, path: Path, *kinds: ElementKind) -> list[int]:
        """Top-level elements declared in ``path``, optionally of some kinds."""
        target = path.resolve()
        resolved: dict[str, Path] = {}
        found = []
        for eid in self.model.roots:
            element = self.model.element(eid)
            if element.span is None:
                continue
            if element.span.file not in resolved:
                resolved[element.span.file] = Path(element.span.file).resolve()
            if resolved[element.span.file] != target:
                continue
            if kinds and element.kind not in kinds:
                continue
            found.append(eid)
        return found

    def find(self, qualified: str) -> Optional[int]:
        return self.model.find(qualified)


def _read(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise WorkspaceError(f"{path} is not valid UTF-8: {e.reason}")


def load_workspace(inputs: Iterable[Path], extra_files: Iterable[Path] = ()) -> Workspace:
    """Parse the inputs with their sibling sources and build one model.

    Args:
        inputs: Files named on the command line
        extra_files: Further files to load (a pattern and its siblings)

    Raises:
        FileNotFoundError: If an input does not exist
        WorkspaceError: If a file is not valid UTF-8
    """
    ordered: list[Path] = []
    seen: set[Path] = set()

    def add(path: Path) -> None:
        key = path.resolve()
        if key not in seen:
            seen.add(key)
            ordered.append(path)

    for path in inputs:
        if not path.is_file():
            raise FileNotFoundError(f"input file not found: {path}")
        add(path)
        for sibling in sibling_sources(path):
            add(sibling)
    for path in extra_files:
        add(path)

    trees = [parse(_read(path), str(path)) for path in ordered]
    tree = SourceTree.merge(trees)
    model = build_model(tree)
    diagnostics = list(tree.diagnostics) + list(model.diagnostics) + validate(model)
    logger.debug(f"Loaded workspace of {len(ordered)} files, {len(diagnostics)} diagnostics")
    return Workspace(tuple(ordered), tree, model, tuple(diagnostics))
