"""Tests for bindings, applicability and the transformation procedure."""

import pytest

from src.dartrans.applicability import Reason, check_applicability
from src.dartrans.binding import Binding, BindingError, parse_binding
from src.dartrans.procedure import (
    NotApplicable,
    apply_transformation,
    reduce_to_core,
    run_transformation,
)
from src.dartrans.steps import step_trees
from src.flatten.effective import flatten
from src.syntax.parser import parse
from src.syntax.printer import print_tree
from tests.conftest import build, read_listing

PLANT = """
#dartwin Plant {
    #twinsystem Control {
        #digitaltwin Estimator {
            port rawIn;
            port cmdIn;
            port estOut;
        }
        connection feed connect Plant.Rig.s1 to Estimator.rawIn;
        connection cmd connect Plant.Rig.s2 to Estimator.cmdIn;
        connection est connect Estimator.estOut to Plant.Rig.s3;
    }
    part Rig {
        port s1;
        port s2;
        port s3;
    }
    #goal Accuracy {
        doc /* Estimate within tolerance */
    }
    allocation acc allocate Accuracy to Control.Estimator;
}
"""

PLANT_BINDING = """
TwinSystem -> Control
TwinSystem.DT1 -> Control.Estimator
TwinSystem.DT1.p11 -> Control.Estimator.rawIn
TwinSystem.DT1.p12 -> Control.Estimator.cmdIn
TwinSystem.DT1.p13 -> Control.Estimator.estOut
TwinSystem.c1 -> Control.feed
TwinSystem.c2 -> Control.cmd
TwinSystem.c3 -> Control.est
AT -> Rig
AT.ts1 -> Rig.s1
AT.ts2 -> Rig.s2
AT.ts3 -> Rig.s3
Goal1 -> Accuracy
a1 -> acc
"""

IDENTITY = """
#dartrans Identity {
    #dartwin_core keep {
        part AT {
            port p1;
        }
    }
    #dartwin_before prior :> keep;
    #dartwin_after later :> keep;
}
"""


def crane_ids(model):
    return model.find("Replacement"), model.find("OptimalControl")


def corrected_evolution():
    """The evolved crane with sensing wired from PhysCrane.sense."""
    return read_listing("optimal_control_evolved").replace(
        "connection sensing connect PhysCrane.actuate", "connection sensing connect PhysCrane.sense"
    )


def shape(tree):
    """(name path, last segment of the specialization target) per node."""
    edges = set()

    def visit(node, prefix):
        path = prefix + (node.name,)
        base = node.specializes[0][-1] if node.specializes else None
        edges.add((".".join(path[1:]), base))
        for child in node.children:
            visit(child, path)

    for root in tree.roots:
        visit(root, ())
    return edges


@pytest.fixture
def crane_binding(crane_binding_text):
    return parse_binding(crane_binding_text)


@pytest.fixture
def crane_result(crane_model, crane_binding):
    pattern, target = crane_ids(crane_model)
    return run_transformation(pattern, target, crane_binding, crane_model)


@pytest.fixture
def plant_model(listing):
    return build(listing("basic"), listing("orthogonal_with_new_output"), PLANT)


class TestBinding:
    def test_crane_binding(self, crane_binding):
        assert len(crane_binding.mapping) == 11
        assert crane_binding.mapping["TS.DT1"] == "GantryCrane.TrajectoryLQR"
        assert crane_binding.renames["TS.DT2"] == "TrajectoryOCP"
        assert len(crane_binding.renames) == 6

    def test_comments_and_blank_lines(self):
        binding = parse_binding("# header\n\nA -> B  # trailing\n  C.d=>Fresh\n")
        assert binding.mapping == {"A": "B"}
        assert binding.renames == {"C.d": "Fresh"}

    def test_duplicate_key(self):
        with pytest.raises(BindingError) as exc:
            parse_binding("A -> B\nA -> C\n", "dup.binding")
        assert exc.value.span.line == 2
        assert exc.value.span.file == "dup.binding"

    def test_malformed_line(self):
        with pytest.raises(BindingError) as exc:
            parse_binding("A -> B\nA to C\n")
        assert "found 'A to C'" in exc.value.message

    def test_without_and_renames(self, crane_binding):
        smaller = crane_binding.without("a1")
        assert "a1" not in smaller.mapping
        assert "a1" in crane_binding.mapping
        renamed = crane_binding.with_renames(**{"TS.DT2": "Other"})
        assert renamed.renames["TS.DT2"] == "Other"
        assert crane_binding.renames["TS.DT2"] == "TrajectoryOCP"


class TestApplicability:
    def test_crane_binding_applies(self, crane_model, crane_binding):
        pattern, target = crane_ids(crane_model)
        report = check_applicability(pattern, target, crane_binding, crane_model)
        assert report.ok, [str(v) for v in report.violations]

    def test_crosswise_ports_are_endpoint_inconsistent(self, crane_model, crane_binding):
        mapping = dict(crane_binding.mapping)
        mapping["TS.DT1.p1"] = "GantryCrane.TrajectoryLQR.sense"
        mapping["TS.DT1.p2"] = "GantryCrane.TrajectoryLQR.actuate"
        pattern, target = crane_ids(crane_model)
        report = check_applicability(
            pattern, target, Binding(mapping, crane_binding.renames), crane_model
        )
        assert report.reasons_for("TS.c1") == {Reason.ENDPOINT_INCONSISTENT}
        assert report.reasons_for("TS.c2") == {Reason.ENDPOINT_INCONSISTENT}

    def test_omitted_allocation(self, crane_model, crane_binding):
        pattern, target = crane_ids(crane_model)
        report = check_applicability(pattern, target, crane_binding.without("a1"), crane_model)
        assert Reason.UNBOUND in report.reasons_for("a1")
        assert Reason.ENDPOINT_INCONSISTENT in report.reasons_for("noSwinging")

    def test_kind_mismatch(self, crane_model, crane_binding):
        mapping = dict(crane_binding.mapping, goal1="GantryCrane")
        pattern, target = crane_ids(crane_model)
        report = check_applicability(
            pattern, target, Binding(mapping, crane_binding.renames), crane_model
        )
        assert Reason.KIND_MISMATCH in report.reasons_for("goal1")
        assert Reason.NON_INJECTIVE in report.reasons_for("goal1") | report.reasons_for("TS")

    def test_containment(self, crane_model, crane_binding):
        mapping = dict(crane_binding.mapping)
        mapping["TS.DT1.p1"] = "PhysCrane.actuate"
        pattern, target = crane_ids(crane_model)
        report = check_applicability(
            pattern, target, Binding(mapping, crane_binding.renames), crane_model
        )
        assert Reason.CONTAINMENT_BROKEN in report.reasons_for("TS.DT1.p1")

    def test_unknown_pattern_path(self, crane_model, crane_binding):
        mapping = dict(crane_binding.mapping, nowhere="PhysCrane")
        pattern, target = crane_ids(crane_model)
        report = check_applicability(
            pattern, target, Binding(mapping, crane_binding.renames), crane_model
        )
        assert report.reasons_for("nowhere") == {Reason.UNBOUND}

    def test_rename_collides_with_surviving_element(self, crane_model, crane_binding):
        pattern, target = crane_ids(crane_model)
        binding = crane_binding.with_renames(**{"TS.DT2": "PhysCrane"})
        report = check_applicability(pattern, target, binding, crane_model)
        assert report.reasons_for("TS.DT2") == {Reason.NAME_COLLISION}

    def test_rename_may_reuse_removed_name(self, crane_model, crane_binding):
        pattern, target = crane_ids(crane_model)
        binding = crane_binding.with_renames(**{"TS.DT2": "TrajectoryLQR"})
        assert check_applicability(pattern, target, binding, crane_model).ok

    def test_added_elements_must_not_share_a_name(self, crane_model, crane_binding):
        pattern, target = crane_ids(crane_model)
        binding = crane_binding.with_renames(**{"TS.DT2.p1": "sense"})
        report = check_applicability(pattern, target, binding, crane_model)
        assert Reason.NAME_COLLISION in report.reasons_for("TS.DT2.p2")

    def test_rename_of_unknown_path(self, crane_model, crane_binding):
        pattern, target = crane_ids(crane_model)
        binding = crane_binding.with_renames(**{"TS.DT9": "Ghost"})
        report = check_applicability(pattern, target, binding, crane_model)
        assert report.reasons_for("TS.DT9") == {Reason.UNBOUND}


class TestCraneTransformation:
    def test_change_set(self, crane_result):
        changes = crane_result.changes
        assert changes.removed == {
            "GantryCrane.TrajectoryLQR",
            "GantryCrane.TrajectoryLQR.sense",
            "GantryCrane.TrajectoryLQR.actuate",
            "actuation",
            "sensing",
            "noSwinging",
        }
        assert changes.added == {
            "GantryCrane.TrajectoryOCP",
            "GantryCrane.TrajectoryOCP.actuate",
            "GantryCrane.TrajectoryOCP.sense",
            "actuation",
            "sensing",
            "noSwinging",
        }
        assert changes.modified == {"actuation", "sensing", "noSwinging"}
        assert changes.kept == {
            "GantryCrane",
            "PhysCrane",
            "PhysCrane.actuate",
            "PhysCrane.sense",
            "NoSwing",
        }

    def test_matches_the_evolved_crane(self, crane_result):
        evolved = build(corrected_evolution())
        expected = flatten(evolved.find("OptimalControl"), evolved).signature()
        assert crane_result.extended.signature() == expected

    def test_printed_result_is_standalone(self, crane_result):
        text = print_tree(crane_result.tree)
        assert "Replacement" not in text
        assert "TrajectoryLQR" not in text

        rebuilt = build(text)
        assert rebuilt.diagnostics == ()
        evolved = build(corrected_evolution())
        assert (
            flatten(rebuilt.find("OptimalControl"), rebuilt).signature()
            == flatten(evolved.find("OptimalControl"), evolved).signature()
        )

    def test_reduction(self, crane_model, crane_binding):
        pattern, target = crane_ids(crane_model)
        reduced = reduce_to_core(target, pattern, crane_binding, crane_model)
        assert reduced.paths() == {
            "GantryCrane",
            "PhysCrane",
            "PhysCrane.actuate",
            "PhysCrane.sense",
            "NoSwing",
        }

    def test_apply_returns_tree_and_changes(self, crane_model, crane_binding):
        pattern, target = crane_ids(crane_model)
        tree, changes = apply_transformation(pattern, target, crane_binding, crane_model)
        assert tree.roots[0].name == "OptimalControl"
        assert tree.roots[0].hash_keyword == "dartwin"
        assert changes.modified == {"actuation", "sensing", "noSwinging"}

    def test_reapplication_is_rejected(self, listing, crane_binding):
        model = build(listing("replacement"), listing("optimal_control_evolved"))
        pattern, target = crane_ids(model)
        with pytest.raises(NotApplicable) as exc:
            run_transformation(pattern, target, crane_binding, model)
        assert Reason.UNBOUND in exc.value.report.reasons_for("TS.DT1")
        assert "pattern cannot be applied" in exc.value.message

    def test_deterministic(self, crane_model, crane_binding):
        pattern, target = crane_ids(crane_model)
        first = run_transformation(pattern, target, crane_binding, crane_model)
        second = run_transformation(pattern, target, crane_binding, crane_model)
        assert print_tree(first.tree) == print_tree(second.tree)


class TestSteps:
    def test_step2_shape(self, crane_result, listing):
        produced = shape(step_trees(crane_result)["step2"])
        written = shape(parse(listing("optimal_control_step2")))
        assert produced ^ written == {
            ("GantryCrane.TrajectoryLQR.sense", "p1"),
            ("GantryCrane.TrajectoryLQR.sense", "p2"),
            ("GantryCrane.TrajectoryLQR.actuate", "p1"),
            ("GantryCrane.TrajectoryLQR.actuate", "p2"),
        }

    def test_step3_shape(self, crane_result, listing):
        produced = shape(step_trees(crane_result)["step3"])
        assert produced == shape(parse(listing("optimal_control_step3")))

    def test_step4_shape(self, crane_result, listing):
        produced = shape(step_trees(crane_result)["step4"])
        written = shape(parse(listing("optimal_control_step4")))
        assert produced ^ written == {
            ("GantryCrane.TrajectoryOCP.sense", "p1"),
            ("GantryCrane.TrajectoryOCP.sense", "p2"),
            ("GantryCrane.TrajectoryOCP.actuate", "p1"),
            ("GantryCrane.TrajectoryOCP.actuate", "p2"),
        }

    @pytest.mark.parametrize("step", ["step2", "step3", "step4"])
    def test_steps_build_against_the_pattern(self, crane_result, listing, step):
        text = print_tree(step_trees(crane_result)[step])
        model = build(listing("replacement"), text)
        assert model.diagnostics == ()

    def test_root_specializes_pattern_part(self, crane_result):
        trees = step_trees(crane_result)
        assert trees["step2"].roots[0].specializes == (("Replacement", "dt_before"),)
        assert trees["step3"].roots[0].specializes == (("Replacement", "dt_core"),)
        assert trees["step4"].roots[0].specializes == (("Replacement", "dt_after"),)


class TestOtherPatterns:
    def test_orthogonal_extension_of_a_plant(self, plant_model):
        pattern = plant_model.find("OrthogonalWithNewOutput")
        target = plant_model.find("Plant")
        result = run_transformation(pattern, target, parse_binding(PLANT_BINDING), plant_model)

        assert result.changes.removed == frozenset()
        assert result.changes.added == {
            "Control.DT2",
            "Control.DT2.p21",
            "Control.DT2.p22",
            "Control.c4",
            "Control.c5",
            "Rig.ts4",
            "Goal2",
            "a2",
        }
        extended = result.extended
        c4 = extended.get(("Control", "c4"))
        assert c4.connect == (("Rig", "s1"), ("Control", "DT2", "p21"))
        a2 = extended.get(("a2",))
        assert a2.allocate == (("Goal2",), ("Control", "DT2"))

    def test_orthogonal_with_rename(self, plant_model):
        pattern = plant_model.find("OrthogonalWithNewOutput")
        target = plant_model.find("Plant")
        binding = parse_binding(PLANT_BINDING).with_renames(**{"TwinSystem.DT2": "Predictor"})
        result = run_transformation(pattern, target, binding, plant_model)
        assert "Control.Predictor.p21" in result.extended.paths()
        c5 = result.extended.get(("Control", "c5"))
        assert c5.connect == (("Control", "Predictor", "p22"), ("Rig", "ts4"))

    def test_orthogonal_result_rebuilds(self, plant_model):
        pattern = plant_model.find("OrthogonalWithNewOutput")
        target = plant_model.find("Plant")
        result = run_transformation(pattern, target, parse_binding(PLANT_BINDING), plant_model)
        rebuilt = build(print_tree(result.tree))
        assert rebuilt.diagnostics == ()
        assert flatten(rebuilt.find("Plant"), rebuilt).signature() == result.extended.signature()

    def test_identity_pattern(self):
        model = build(read_listing("optimal_control"), IDENTITY)
        binding = parse_binding("AT -> PhysCrane\nAT.p1 -> PhysCrane.actuate\n")
        pattern, target = model.find("Identity"), model.find("OptimalControl")
        result = run_transformation(pattern, target, binding, model)
        assert result.changes.removed == frozenset()
        assert result.changes.added == frozenset()
        assert result.extended.signature() == flatten(target, model).signature()
