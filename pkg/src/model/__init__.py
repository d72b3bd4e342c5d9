"""Semantic model: element kinds, name resolution and validation."""

from src.model.builder import build_model
from src.model.elements import Element, ImportRecord, SemanticModel, specialization_graph
from src.model.export import model_to_json
from src.model.kinds import ElementKind
from src.model.resolution import AmbiguousName, ResolutionError, UnresolvedName, resolve
from src.model.validate import validate

__all__ = [
    "AmbiguousName",
    "Element",
    "ElementKind",
    "ImportRecord",
    "ResolutionError",
    "SemanticModel",
    "UnresolvedName",
    "build_model",
    "model_to_json",
    "resolve",
    "specialization_graph",
    "validate",
]
