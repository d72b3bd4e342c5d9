"""Well-formedness checks against the DarTwin metamodel."""

import logging
from typing import Optional

import networkx as nx

from src.diagnostics import Diagnostic, Severity
from src.model.elements import Element, SemanticModel, specialization_graph
from src.model.kinds import ALLOCATION_TARGET_KINDS, ElementKind

logger = logging.getLogger("dartwin")


def _error(code: str, message: str, element: Element) -> Diagnostic:
    return Diagnostic(Severity.ERROR, code, message, element.span)


def _warning(code: str, message: str, element: Element) -> Diagnostic:
    return Diagnostic(Severity.WARNING, code, message, element.span)


def _check_cycles(model: SemanticModel, graph: nx.DiGraph) -> list[Diagnostic]:
    diagnostics = []
    cycles = []
    for cycle in nx.simple_cycles(graph):
        pivot = cycle.index(min(cycle))
        cycles.append(cycle[pivot:] + cycle[:pivot])
    for cycle in sorted(cycles):
        names = " :> ".join(model.qualified_name(eid) for eid in cycle + cycle[:1])
        diagnostics.append(
            _error(
                "SpecializationCycle",
                f"specialization cycle: {names}",
                model.element(cycle[0]),
            )
        )
    return diagnostics


def _reaches(graph: nx.DiGraph, source: int, target: int) -> bool:
    return source == target or target in nx.descendants(graph, source)


def _check_dartrans(
    model: SemanticModel, dartrans: Element, graph: nx.DiGraph
) -> list[Diagnostic]:
    diagnostics = []
    name = model.qualified_name(dartrans.id)
    cores = model.members_of_kind(dartrans.id, ElementKind.DARTWIN_CORE)
    befores = model.members_of_kind(dartrans.id, ElementKind.DARTWIN_BEFORE)
    afters = model.members_of_kind(dartrans.id, ElementKind.DARTWIN_AFTER)

    if not cores:
        diagnostics.append(
            _error("DartransStructure", f"dartrans '{name}' has no #dartwin_core", dartrans)
        )
    for label, found in (("#dartwin_core", cores), ("#dartwin_before", befores), ("#dartwin_after", afters)):
        if len(found) > 1:
            diagnostics.append(
                _error(
                    "DartransStructure",
                    f"dartrans '{name}' has {len(found)} {label} members, expected at most one",
                    found[1],
                )
            )
    if not cores:
        return diagnostics

    core = cores[0]
    core_bases = nx.descendants(graph, core.id)
    for part in befores[:1] + afters[:1]:
        if _reaches(graph, part.id, core.id):
            continue
        shared = _first_shared_base(model, part, core_bases, graph)
        if shared is not None:
            diagnostics.append(
                _warning(
                    "CoreNotSpecialized",
                    f"'{part.effective_name}' specializes '{model.element(shared).effective_name}', "
                    f"not '{core.effective_name}'",
                    part,
                )
            )
        else:
            diagnostics.append(
                _error(
                    "CoreNotSpecialized",
                    f"'{part.effective_name}' does not specialize '{core.effective_name}'",
                    part,
                )
            )
    return diagnostics


def _first_shared_base(
    model: SemanticModel, part: Element, core_bases: set[int], graph: nx.DiGraph
) -> Optional[int]:
    shared = sorted(nx.descendants(graph, part.id) & core_bases)
    return shared[0] if shared else None


def _check_allocation(model: SemanticModel, allocation: Element) -> list[Diagnostic]:
    if allocation.allocate is None:
        return []
    goal, target = (model.element(eid) for eid in allocation.allocate)
    diagnostics = []
    if goal.kind != ElementKind.GOAL:
        diagnostics.append(
            _error(
                "KindMismatch",
                f"allocation '{model.qualified_name(allocation.id)}' allocates "
                f"{goal.kind.value} '{model.qualified_name(goal.id)}', expected Goal",
                allocation,
            )
        )
    if target.kind not in ALLOCATION_TARGET_KINDS:
        diagnostics.append(
            _warning(
                "KindMismatch",
                f"allocation '{model.qualified_name(allocation.id)}' targets "
                f"{target.kind.value} '{model.qualified_name(target.id)}', "
                f"expected DigitalTwin or TwinSystem",
                allocation,
            )
        )
    return diagnostics


def arbiter_port_counts(model: SemanticModel, arbiter: Element) -> tuple[int, int]:
    """Count an arbiter's inputs and outputs.

    A port is an input when its name starts with ``in`` or a connection
    targets it, otherwise an output when its name starts with ``out`` or a
    connection leaves it. Each port counts with its lower multiplicity.
    """
    ports = model.members_of_kind(arbiter.id, ElementKind.PORT)
    if arbiter.type_ref is not None:
        ports += model.members_of_kind(arbiter.type_ref, ElementKind.PORT)

    sources: set[int] = set()
    targets: set[int] = set()
    for element in model.elements:
        if element.kind == ElementKind.CONNECTION and element.connect:
            sources.add(element.connect[0])
            targets.add(element.connect[1])

    inputs = outputs = 0
    for port in ports:
        weight = port.multiplicity.lower if port.multiplicity else 1
        name = port.effective_name or ""
        if name.startswith("in") or port.id in targets:
            inputs += weight
        elif name.startswith("out") or port.id in sources:
            outputs += weight
    return inputs, outputs


def _check_arbiter(model: SemanticModel, arbiter: Element) -> list[Diagnostic]:
    inputs, outputs = arbiter_port_counts(model, arbiter)
    if inputs >= 2 and outputs == 1:
        return []
    return [
        _error(
            "ArbiterShape",
            f"arbiter '{model.qualified_name(arbiter.id)}' has {inputs} inputs and "
            f"{outputs} outputs, expected at least 2 inputs and exactly 1 output",
            arbiter,
        )
    ]


def _check_conflict(model: SemanticModel, conflict: Element) -> list[Diagnostic]:
    name = model.qualified_name(conflict.id)
    if conflict.connect is None:
        return [_error("ConflictShape", f"conflict '{name}' relates no goals", conflict)]
    first, second = (model.element(eid) for eid in conflict.connect)
    if first.kind != ElementKind.GOAL or second.kind != ElementKind.GOAL:
        return [
            _error(
                "ConflictShape",
                f"conflict '{name}' must relate two goals, found "
                f"{first.kind.value} and {second.kind.value}",
                conflict,
            )
        ]
    if first.id == second.id:
        return [_error("ConflictShape", f"conflict '{name}' relates a goal to itself", conflict)]
    return []


def validate(model: SemanticModel) -> list[Diagnostic]:
    """Check a built model against the metamodel's structural rules."""
    graph = specialization_graph(model)
    diagnostics = _check_cycles(model, graph)

    for element in model.elements:
        if element.kind == ElementKind.DARTRANS:
            diagnostics.extend(_check_dartrans(model, element, graph))
        elif element.kind == ElementKind.ALLOCATION:
            diagnostics.extend(_check_allocation(model, element))
        elif element.kind == ElementKind.ARBITER:
            diagnostics.extend(_check_arbiter(model, element))
        elif element.kind == ElementKind.CONFLICT:
            diagnostics.extend(_check_conflict(model, element))

    logger.debug(f"Validation produced {len(diagnostics)} diagnostics")
    return diagnostics
