"""Shared fixtures: listing texts, bundled patterns and model builders."""

from pathlib import Path

import pytest

from src.model.builder import build_model
from src.model.elements import SemanticModel
from src.syntax.parser import parse
from src.syntax.tree import SourceTree

ROOT = Path(__file__).parent.parent
LISTINGS = Path(__file__).parent / "fixtures" / "listings"
PATTERNS = ROOT / "patterns"
CRANE = ROOT / "samples" / "crane"

LISTING_NAMES = (
    "basic",
    "orthogonal_with_new_output",
    "replacement",
    "optimal_control",
    "optimal_control_step2",
    "optimal_control_step3",
    "optimal_control_step4",
    "optimal_control_evolved",
)


def read_listing(name: str) -> str:
    return (LISTINGS / f"{name}.dartwin").read_text(encoding="utf-8")


def build(*sources: str) -> SemanticModel:
    """Parse each source as its own file and build one model."""
    trees = [parse(text, f"source{i}.dartwin") for i, text in enumerate(sources)]
    return build_model(SourceTree.merge(trees))


@pytest.fixture
def listing():
    """Read a listing fixture by name."""
    return read_listing


@pytest.fixture
def basic_model():
    return build(read_listing("basic"))


@pytest.fixture
def orthogonal_model():
    return build(read_listing("basic"), read_listing("orthogonal_with_new_output"))


@pytest.fixture
def crane_model():
    """The gantry crane together with the replacement pattern."""
    return build(read_listing("replacement"), read_listing("optimal_control"))


@pytest.fixture
def crane_binding_text():
    return (CRANE / "crane.binding").read_text(encoding="utf-8")
