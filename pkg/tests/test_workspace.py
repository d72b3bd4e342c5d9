"""Tests for multi-file workspace loading."""

from pathlib import Path

import pytest

from src.model.kinds import ElementKind
from src.workspace import WorkspaceError, load_workspace, sibling_sources


@pytest.fixture
def project(tmp_path):
    (tmp_path / "a.dartwin").write_text("#dartwin A;\n", encoding="utf-8")
    (tmp_path / "b.dartwin").write_text("#dartwin B :> A;\n#goal G;\n", encoding="utf-8")
    (tmp_path / "notes.txt").write_text("not a source\n", encoding="utf-8")
    return tmp_path


class TestLoadWorkspace:
    def test_siblings_share_one_namespace(self, project):
        workspace = load_workspace([project / "b.dartwin"])
        assert [p.name for p in workspace.files] == ["b.dartwin", "a.dartwin"]
        assert workspace.diagnostics == ()
        b = workspace.model.element(workspace.find("B"))
        assert b.specializes == (workspace.find("A"),)

    def test_sibling_sources_skip_other_suffixes(self, project):
        assert [p.name for p in sibling_sources(project / "a.dartwin")] == [
            "a.dartwin",
            "b.dartwin",
        ]

    def test_files_are_loaded_once(self, project, monkeypatch):
        monkeypatch.chdir(project)
        workspace = load_workspace([project / "a.dartwin", Path("b.dartwin")])
        assert len(workspace.files) == 2

    def test_missing_input(self, project):
        with pytest.raises(FileNotFoundError):
            load_workspace([project / "absent.dartwin"])

    def test_invalid_utf8(self, project):
        (project / "c.dartwin").write_bytes(b"#dartwin C { doc /* \xff */ }\n")
        with pytest.raises(WorkspaceError):
            load_workspace([project / "c.dartwin"])


class TestRootsOf:
    def test_roots_by_kind(self, project):
        workspace = load_workspace([project / "b.dartwin"])
        roots = workspace.roots_of(project / "b.dartwin")
        assert roots == [workspace.find("B"), workspace.find("G")]
        assert workspace.roots_of(project / "b.dartwin", ElementKind.GOAL) == [workspace.find("G")]

    def test_relative_spelling_matches_absolute_load(self, project, monkeypatch):
        monkeypatch.chdir(project)
        workspace = load_workspace([project / "b.dartwin", Path("a.dartwin")])
        assert workspace.roots_of(Path("a.dartwin")) == [workspace.find("A")]
        assert workspace.roots_of(project / "a.dartwin") == [workspace.find("A")]
