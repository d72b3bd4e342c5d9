"""Canonical pretty-printer for source trees."""

from src.syntax.tree import Construct, Node, QualifiedName, SourceTree

INDENT = "    "

_HEADS = {
    Construct.PACKAGE: "package",
    Construct.LIBRARY_PACKAGE: "library package",
    Construct.PART: "part",
    Construct.PART_DEF: "part def",
    Construct.PORT: "port",
    Construct.CONNECTION: "connection",
    Construct.CONNECTION_DEF: "connection def",
    Construct.ALLOCATION: "allocation",
    Construct.REQUIREMENT: "requirement",
    Construct.REQUIREMENT_DEF: "requirement def",
    Construct.METADATA_DEF: "metadata def",
}


def format_path(path: QualifiedName, separator: str = ".") -> str:
    return separator.join(path)


def _head(node: Node) -> str:
    if node.construct == Construct.KEYWORD_USAGE:
        return f"#{node.hash_keyword}"
    if node.construct == Construct.METADATA_DEF and node.short_name:
        return f"metadata def <{node.short_name}>"
    return _HEADS[node.construct]


def _declaration(node: Node) -> str:
    if node.construct == Construct.IMPORT:
        text = f"import {format_path(node.import_path, '::')}"
        if node.wildcard:
            text += "::*"
        if node.visibility:
            text = f"{node.visibility} {text}"
        return text

    has_tail = bool(
        node.name
        or node.multiplicity
        or node.type_name
        or node.specializes
        or node.redefines
    )
    if node.allocate and node.construct == Construct.ALLOCATION and not has_tail:
        return f"allocate {format_path(node.allocate[0])} to {format_path(node.allocate[1])}"

    text = _head(node)
    if node.name:
        text += f" {node.name}"
    if node.multiplicity:
        text += str(node.multiplicity)
    if node.type_name:
        text += f" : {format_path(node.type_name)}"
    if node.specializes:
        text += " :> " + ", ".join(format_path(p) for p in node.specializes)
    if node.redefines:
        text += f" :>> {format_path(node.redefines)}"
    if node.connect:
        text += f" connect {format_path(node.connect[0])} to {format_path(node.connect[1])}"
    if node.allocate:
        text += f" allocate {format_path(node.allocate[0])} to {format_path(node.allocate[1])}"
    return text


def _print_node(node: Node, depth: int, lines: list[str]) -> None:
    pad = INDENT * depth
    text = _declaration(node)
    if not node.children and node.doc is None:
        lines.append(f"{pad}{text};")
        return

    lines.append(f"{pad}{text} {{")
    if node.doc is not None:
        lines.append(f"{pad}{INDENT}doc /* {node.doc} */")
    for child in node.children:
        _print_node(child, depth + 1, lines)
    lines.append(f"{pad}}}")


def print_tree(tree: SourceTree) -> str:
    """Format a tree canonically: one member per line, 4-space indent."""
    lines: list[str] = []
    for root in tree.roots:
        _print_node(root, 0, lines)
    if not lines:
        return ""
    return "\n".join(lines) + "\n"
