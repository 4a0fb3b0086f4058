"""Tests for scenario loading, validation findings and round-tripping."""

import copy

import pytest
import yaml

from pta.errors import DanglingReference, GraphError, PtaError, SchemaError
from pta.scenario import (
    builtin_scenario_path,
    load_scenario,
    render_scenario,
    validate_scenario,
)


@pytest.fixture(scope="module")
def reference_doc():
    with open(builtin_scenario_path("vs_saga"), "r", encoding="utf-8") as fh:
        return yaml.safe_load(fh)


@pytest.fixture(scope="module")
def reference():
    return load_scenario(builtin_scenario_path("vs_saga"))


def mutate(doc, fn):
    changed = copy.deepcopy(doc)
    fn(changed)
    return changed


class TestReferenceScenario:
    def test_loads_with_three_scenes_and_full_catalog(self, reference):
        assert reference.scenes == ["knowledge-town", "laboratory", "tree"]
        names = reference.all_event_names()
        assert len(names) >= 16
        assert len(reference.events["Dialogue"]) >= 14
        assert "Teach success" in reference.events["TeachingFeedback"]
        assert "Doing nothing (Time-out)" in reference.events["Time"]

    def test_validates_clean(self):
        findings = validate_scenario(builtin_scenario_path("vs_saga"))
        assert [f for f in findings if f.level == "error"] == []
        assert findings == []  # shipped content carries no warnings either

    def test_round_trip_equality(self, reference):
        again = load_scenario(render_scenario(reference))
        assert again == reference

    def test_dialogue_graphs_reach_end_from_every_node(self, reference):
        for npc in reference.npcs:
            for node in npc.nodes:
                # BFS over choice targets: some path must terminate
                seen = set()
                frontier = [node.id]
                reaches_end = False
                while frontier:
                    node_id = frontier.pop()
                    if node_id in seen:
                        continue
                    seen.add(node_id)
                    for choice in npc.node(node_id).choices:
                        if choice.next == "end":
                            reaches_end = True
                        else:
                            frontier.append(choice.next)
                assert reaches_end, f"{npc.id}:{node.id} cannot reach end"

    def test_greeting_line_present(self, reference):
        greeter = reference.npc(reference.config.greeter_npc)
        assert greeter.node(greeter.start).line == "Hello ! Welcome to VS Saga !"


class TestLoadErrors:
    def test_empty_document_is_schema_error(self):
        with pytest.raises(SchemaError):
            load_scenario({})
        with pytest.raises(SchemaError):
            load_scenario("{}")

    def test_unknown_routing_event_is_dangling(self, reference_doc):
        doc = mutate(reference_doc,
                     lambda d: d["routing"].update({"Unknown Ev": "Persuasion"}))
        with pytest.raises(PtaError):
            load_scenario(doc)
        findings = validate_scenario(doc)
        assert any(f.level == "error" and "Unknown Ev" in f.path for f in findings)

    def test_leaf_binding_must_reference_catalog(self, reference_doc):
        doc = mutate(reference_doc,
                     lambda d: d["fcm"]["leaves"].update(
                         {"Ghost": {"factor": "RL", "weight": 0.1}}))
        with pytest.raises(DanglingReference):
            load_scenario(doc)

    def test_bad_probabilistic_weights_reported(self, reference_doc):
        def break_net(d):
            net = d["goal_nets"]["main"]
            net["states"].append({"id": "sx"})
            net["transitions"].append({
                "id": "t_bad", "kind": "probabilistic",
                "weights": [{"to": "sx", "p": 0.7},
                            {"to": "detect_event", "p": 0.4}],
            })
            net["arcs"] += ["event_interpreted -> t_bad", "t_bad -> sx",
                            "t_bad -> detect_event"]
        doc = mutate(reference_doc, break_net)
        findings = validate_scenario(doc)
        assert any(f.level == "error" and "probabilit" in f.message
                   for f in findings)
        with pytest.raises(GraphError):
            load_scenario(doc)

    def test_unknown_task_name_reported(self, reference_doc):
        doc = mutate(reference_doc,
                     lambda d: d["goal_nets"]["main"]["transitions"][0]
                     .update({"tasks": ["LaunchRocket"]}))
        findings = validate_scenario(doc)
        assert any("LaunchRocket" in f.message for f in findings)

    def test_distracter_emitting_learning_event_rejected(self, reference_doc):
        def corrupt(d):
            animal = next(n for n in d["npcs"] if n["id"] == "animal")
            animal["nodes"][0]["choices"][0]["event"] = "Learn diffusion"
        doc = mutate(reference_doc, corrupt)
        findings = validate_scenario(doc)
        assert any("distracter" in f.message.lower() for f in findings)

    def test_affect_animation_must_be_presentation_asset(self, reference_doc):
        def corrupt(d):
            d["cues"]["affects"][0]["animation"] = "backflip"
        doc = mutate(reference_doc, corrupt)
        findings = validate_scenario(doc)
        assert any("backflip" in f.message for f in findings)


class TestWarnings:
    def test_missing_affect_catalog_warns_when_persuasion_routable(
            self, reference_doc):
        doc = mutate(reference_doc, lambda d: d["cues"].update({"affects": []}))
        # removing the affect cues also orphans their cue_weights entries
        for cue_id in ("af_sad", "af_plead", "af_happy"):
            doc["fcm"]["cue_weights"].pop(cue_id)
        findings = validate_scenario(doc)
        warnings = [f for f in findings if f.level == "warning"]
        assert any("affect" in f.message for f in warnings)
        assert not any(f.level == "error" for f in findings)

    def test_unbound_factor_warns(self, reference_doc):
        def strip_rp(d):
            d["fcm"]["leaves"]["Teach success"] = {"factor": "NC", "weight": 0.1}
            d["fcm"]["leaves"]["Teach Failure"] = {"factor": "NC", "weight": 0.1}
        doc = mutate(reference_doc, strip_rp)
        findings = validate_scenario(doc)
        assert any("RP" in f.message for f in findings if f.level == "warning")

    def test_unrouted_event_warns(self, reference_doc):
        doc = mutate(reference_doc, lambda d: d["routing"].pop("Teach success"))
        findings = validate_scenario(doc)
        assert any(f.level == "warning" and "Teach success" in f.path
                   for f in findings)


def test_nonpositive_timers_rejected(reference_doc):
    doc = mutate(reference_doc,
                 lambda d: d["config"].update({"idle_timeout_ms": 0}))
    findings = validate_scenario(doc)
    assert any("idle_timeout_ms" in f.path for f in findings if f.level == "error")
