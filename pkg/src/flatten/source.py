"""Turn effective models back into source trees."""

from typing import Optional

from src.flatten.effective import EffectiveElement, EffectiveModel, EffectivePath
from src.model.kinds import KIND_KEYWORDS, ElementKind
from src.syntax.tree import Construct, Node, QualifiedName, SourceTree

# Kinds that only survive a print/parse cycle as hash keywords
_KEYWORD_ONLY = (ElementKind.ARBITER, ElementKind.CONFLICT)


def _endpoint(model: EffectiveModel, owner: EffectivePath, path: EffectivePath) -> QualifiedName:
    """Root-relative path, prefixed with the root name when a nearer scope shadows it."""
    scope = owner
    while scope:
        if scope + (path[0],) in model.elements:
            return (model.root.name,) + path
        scope = scope[:-1]
    return path


def _node(
    model: EffectiveModel,
    element: EffectiveElement,
    specializations: dict,
) -> Node:
    construct = element.construct
    keyword = element.keyword if construct == Construct.KEYWORD_USAGE else None
    if element.kind in _KEYWORD_ONLY and construct != Construct.KEYWORD_USAGE:
        construct, keyword = Construct.KEYWORD_USAGE, KIND_KEYWORDS[element.kind]

    connect = allocate = None
    if element.connect:
        connect = tuple(_endpoint(model, element.parent, p) for p in element.connect)
    if element.allocate:
        allocate = tuple(_endpoint(model, element.parent, p) for p in element.allocate)

    base = specializations.get(element.path)
    return Node(
        construct=construct,
        name=element.name,
        hash_keyword=keyword,
        specializes=(base,) if base else (),
        multiplicity=element.multiplicity,
        connect=connect,
        allocate=allocate,
        doc=element.doc,
        children=tuple(
            _node(model, child, specializations) for child in model.children(element.path)
        ),
    )


def effective_to_tree(
    model: EffectiveModel,
    specializations: Optional[dict] = None,
    root_specializes: Optional[QualifiedName] = None,
) -> SourceTree:
    """Write a flattened model as a standalone ``#dartwin``.

    Args:
        model: Flattened model to print
        specializations: Optional ``:>`` target per effective path
        root_specializes: Optional ``:>`` target of the root

    Returns:
        Source tree with one root and no references other than the given ones
    """
    specializations = specializations or {}
    root = Node(
        construct=Construct.KEYWORD_USAGE,
        name=model.root.name,
        hash_keyword="dartwin",
        specializes=(root_specializes,) if root_specializes else (),
        doc=model.root.doc,
        children=tuple(_node(model, child, specializations) for child in model.children()),
    )
    return SourceTree((root,))
