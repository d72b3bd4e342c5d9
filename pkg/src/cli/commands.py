"""Command-line surface: check, flatten, diff, apply, render, export-json."""

import argparse
import json
import logging
import os
import sys
import tempfile
from pathlib import Path
from typing import Optional, Sequence

from src import __version__
from src.config import DEFAULT_STYLE_PATH, PATTERN_DIR, validate_config
from src.dartrans.binding import load_binding
from src.dartrans.procedure import NotApplicable, TransformationInvariantError, run_transformation
from src.dartrans.steps import step_trees
from src.diagnostics import DartwinError, Diagnostic, Severity, has_errors
from src.flatten.changes import diff
from src.flatten.effective import EffectiveModel, Flattener, dotted
from src.flatten.source import effective_to_tree
from src.model.export import model_to_json
from src.model.kinds import ElementKind
from src.render.style import StyleError, load_style
from src.render.views import render_dartrans, render_dartwin
from src.syntax.printer import print_tree
from src.workspace import Workspace, load_workspace, sibling_sources

logger = logging.getLogger("dartwin")

EXIT_OK = 0
EXIT_ERRORS = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


class UsageError(Exception):
    """Bad arguments detected after parsing (unknown target, missing file)."""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dartwin",
        description="Parse, flatten, transform and render DarTwin models.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser("check", help="report diagnostics")
    check.add_argument("inputs", nargs="+", type=Path)

    flatten = commands.add_parser("flatten", help="print the flattened model")
    flatten.add_argument("inputs", nargs="+", type=Path)
    flatten.add_argument("--target", help="qualified name of the dartwin to flatten")
    flatten.add_argument("--json", action="store_true", help="print effective elements as JSON")
    flatten.add_argument("-o", "--output", type=Path)

    changes = commands.add_parser("diff", help="print the change set of a dartrans")
    changes.add_argument("inputs", nargs="+", type=Path)
    changes.add_argument("--target", help="qualified name of the dartrans")
    changes.add_argument("--json", action="store_true")
    changes.add_argument("-o", "--output", type=Path)

    apply = commands.add_parser("apply", help="apply a dartrans pattern to a dartwin")
    apply.add_argument("inputs", nargs="+", type=Path)
    apply.add_argument("--pattern", required=True, help="pattern file or name in the pattern library")
    apply.add_argument("--binding", required=True, type=Path)
    apply.add_argument("--target", help="qualified name of the dartwin to evolve")
    apply.add_argument("--emit-steps", action="store_true", help="also write the step 2-4 files")
    apply.add_argument("--json", action="store_true", help="print the change set as JSON")
    apply.add_argument("-o", "--output", type=Path)

    render = commands.add_parser("render", help="render a dartwin or dartrans as SVG")
    render.add_argument("inputs", nargs="+", type=Path)
    render.add_argument("--target", help="qualified name of the dartwin or dartrans")
    render.add_argument("--style", type=Path, help="key=value style override file")
    render.add_argument("-o", "--output", type=Path)

    export = commands.add_parser("export-json", help="print the semantic model as JSON")
    export.add_argument("inputs", nargs="+", type=Path)
    export.add_argument("-o", "--output", type=Path)

    return parser


def write_output(text: str, path: Optional[Path]) -> None:
    """Write to stdout, or atomically to ``path``."""
    if path is None:
        sys.stdout.write(text)
        return

    handle = tempfile.NamedTemporaryFile(
        "w", encoding="utf-8", dir=path.parent, prefix=f".{path.name}.", suffix=".tmp", delete=False
    )
    try:
        with handle:
            handle.write(text)
        os.replace(handle.name, path)
    except BaseException:
        Path(handle.name).unlink(missing_ok=True)
        raise
    logger.info(f"Wrote {path}")


def report(diagnostics: Sequence[Diagnostic]) -> None:
    for diagnostic in diagnostics:
        sys.stderr.write(diagnostic.format() + "\n")


def _pick_target(
    workspace: Workspace, name: Optional[str], kinds: tuple[ElementKind, ...], what: str
) -> int:
    if name:
        eid = workspace.find(name)
        if eid is None:
            raise UsageError(f"no element named '{name}'")
        if workspace.model.element(eid).kind not in kinds:
            raise UsageError(f"'{name}' is not a {what}")
        return eid

    first = workspace.files[0]
    candidates = workspace.roots_of(first, *kinds)
    if len(candidates) != 1:
        found = ", ".join(workspace.model.qualified_name(c) for c in candidates) or "none"
        raise UsageError(f"{first} must declare exactly one top-level {what} (found {found}); use --target")
    return candidates[0]


def _load(inputs: list[Path], extra: Sequence[Path] = ()) -> Optional[Workspace]:
    workspace = load_workspace(inputs, extra)
    report(workspace.diagnostics)
    if has_errors(workspace.diagnostics):
        return None
    return workspace


def _effective_json(effective: EffectiveModel) -> str:
    def entry(element) -> dict:
        return {
            "path": element.dotted,
            "kind": element.kind.value,
            "name": element.name,
            "connect": [dotted(p) for p in element.connect] if element.connect else None,
            "allocate": [dotted(p) for p in element.allocate] if element.allocate else None,
            "doc": element.doc,
            "multiplicity": str(element.multiplicity) if element.multiplicity else None,
            "provenance": [[source, how.value] for source, how in element.provenance],
        }

    payload = {
        "root": effective.root.name,
        "kind": effective.root.kind.value,
        "elements": [entry(e) for e in effective.walk()],
    }
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


# Commands


def cmd_check(args: argparse.Namespace) -> int:
    workspace = load_workspace(args.inputs)
    report(workspace.diagnostics)
    return EXIT_ERRORS if has_errors(workspace.diagnostics) else EXIT_OK


def cmd_flatten(args: argparse.Namespace) -> int:
    workspace = _load(args.inputs)
    if workspace is None:
        return EXIT_ERRORS
    kinds = (
        ElementKind.DARTWIN,
        ElementKind.DARTWIN_CORE,
        ElementKind.DARTWIN_BEFORE,
        ElementKind.DARTWIN_AFTER,
    )
    target = _pick_target(workspace, args.target, kinds, "dartwin")
    effective = Flattener(workspace.model).flatten(target)
    text = _effective_json(effective) if args.json else print_tree(effective_to_tree(effective))
    write_output(text, args.output)
    return EXIT_OK


def cmd_diff(args: argparse.Namespace) -> int:
    workspace = _load(args.inputs)
    if workspace is None:
        return EXIT_ERRORS
    target = _pick_target(workspace, args.target, (ElementKind.DARTRANS,), "dartrans")
    changes = diff(target, workspace.model)
    report(changes.diagnostics)
    write_output(changes.to_json() if args.json else changes.to_table(), args.output)
    return EXIT_ERRORS if has_errors(changes.diagnostics) else EXIT_OK


def _pattern_file(pattern: str) -> Path:
    path = Path(pattern)
    if path.is_file():
        return path
    library = PATTERN_DIR / f"{pattern}.dartwin"
    if library.is_file():
        return library
    raise UsageError(f"pattern '{pattern}' is neither a file nor in {PATTERN_DIR}")


def cmd_apply(args: argparse.Namespace) -> int:
    if args.emit_steps and args.output is None:
        raise UsageError("--emit-steps needs -o/--output")
    if not args.binding.is_file():
        raise UsageError(f"binding file not found: {args.binding}")
    pattern_file = _pattern_file(args.pattern)

    workspace = _load(args.inputs, [pattern_file, *sibling_sources(pattern_file)])
    if workspace is None:
        return EXIT_ERRORS
    patterns = workspace.roots_of(pattern_file, ElementKind.DARTRANS)
    if len(patterns) != 1:
        raise UsageError(f"{pattern_file} must declare exactly one top-level dartrans")
    target = _pick_target(workspace, args.target, (ElementKind.DARTWIN,), "dartwin")

    binding = load_binding(args.binding)
    try:
        result = run_transformation(patterns[0], target, binding, workspace.model)
    except NotApplicable as e:
        for violation in e.report.violations:
            sys.stderr.write(f"{args.binding}: not applicable: {violation}\n")
        return EXIT_ERRORS

    if args.emit_steps:
        for step, tree in step_trees(result).items():
            write_output(print_tree(tree), args.output.with_name(f"{args.output.stem}.{step}.dartwin"))
    write_output(print_tree(result.tree), args.output)
    if args.json:
        write_output(result.changes.to_json(), None)
    return EXIT_OK


def cmd_render(args: argparse.Namespace) -> int:
    style_path = args.style or (Path(DEFAULT_STYLE_PATH) if DEFAULT_STYLE_PATH else None)
    style = load_style(style_path)
    workspace = _load(args.inputs)
    if workspace is None:
        return EXIT_ERRORS
    kinds = (
        ElementKind.DARTWIN,
        ElementKind.DARTRANS,
        ElementKind.DARTWIN_CORE,
        ElementKind.DARTWIN_BEFORE,
        ElementKind.DARTWIN_AFTER,
    )
    target = _pick_target(workspace, args.target, kinds, "dartwin or dartrans")
    if workspace.model.element(target).kind == ElementKind.DARTRANS:
        svg = render_dartrans(target, workspace.model, style)
    else:
        svg = render_dartwin(target, workspace.model, style)
    write_output(svg, args.output)
    return EXIT_OK


def cmd_export_json(args: argparse.Namespace) -> int:
    workspace = _load(args.inputs)
    if workspace is None:
        return EXIT_ERRORS
    write_output(model_to_json(workspace.model), args.output)
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "flatten": cmd_flatten,
    "diff": cmd_diff,
    "apply": cmd_apply,
    "render": cmd_render,
    "export-json": cmd_export_json,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command and return its exit status.

    0 ok, 1 error diagnostics, 2 usage or configuration error,
    3 internal invariant failure or unexpected exception.
    """
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    try:
        validate_config()
        return COMMANDS[args.command](args)
    except (UsageError, ValueError, FileNotFoundError, StyleError) as e:
        message = e.message if isinstance(e, StyleError) else str(e)
        sys.stderr.write(f"dartwin {args.command}: error: {message}\n")
        return EXIT_USAGE
    except TransformationInvariantError as e:
        report([e.to_diagnostic()])
        logger.error(f"Internal invariant failure: {e.message}")
        return EXIT_INTERNAL
    except DartwinError as e:
        report([e.to_diagnostic(Severity.ERROR)])
        return EXIT_ERRORS
    except Exception as e:
        logger.error(f"Unexpected error in {args.command}: {e}", exc_info=True)
        sys.stderr.write(f"dartwin {args.command}: internal error: {e}\n")
        return EXIT_INTERNAL
