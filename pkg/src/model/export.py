"""JSON export of semantic models."""

import json

from src.model.elements import Element, SemanticModel


def _element_json(element: Element) -> dict:
    return {
        "id": element.id,
        "kind": element.kind.value,
        "name": element.effective_name,
        "owner": element.owner,
        "members": list(element.members),
        "specializes": list(element.specializes),
        "redefines": element.redefines,
        "connect": list(element.connect) if element.connect else None,
        "allocate": list(element.allocate) if element.allocate else None,
        "doc": element.doc,
        "multiplicity": (
            [element.multiplicity.lower, element.multiplicity.upper]
            if element.multiplicity
            else None
        ),
        "conflict_explanation": element.conflict_explanation,
    }


def model_to_json(model: SemanticModel) -> str:
    """Serialize a model with a fixed field order and stable ids."""
    payload = {
        "roots": list(model.roots),
        "elements": [_element_json(e) for e in model.elements],
        "imports": [
            {
                "owner": record.owner,
                "path": "::".join(record.path),
                "wildcard": record.wildcard,
            }
            for record in model.imports
        ],
        "diagnostics": [d.to_json() for d in model.diagnostics],
    }
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
