"""Tests for the HTTP session service."""

import itertools
import random

import pytest
from fastapi.testclient import TestClient

from pta.scenario import builtin_scenario_path, load_scenario
from pta.service import build_app

CORRECT = {
    "membrane": "Semi-Permeable Membrane",
    "diffusion_source": "High Concentration",
    "osmosis_target": "Low Solvent Concentration",
    "osmosis_name": "Osmosis",
}


@pytest.fixture(scope="module")
def scenario():
    return load_scenario(builtin_scenario_path("vs_saga"))


class FakeClock:
    def __init__(self):
        self.now = 1_000_000.0

    def __call__(self):
        return self.now


@pytest.fixture
def clock():
    return FakeClock()


@pytest.fixture
def client(scenario, clock, tmp_path):
    app = build_app({"vs_saga": scenario}, data_dir=str(tmp_path),
                    now_fn=clock, seed_fn=lambda: 7)
    return TestClient(app)


def create(client):
    response = client.post("/sessions", json={"scenario": "vs_saga"})
    assert response.status_code == 201
    body = response.json()
    return body["id"], body["view"]


def act(client, session_id, action, expect=200):
    response = client.post(f"/sessions/{session_id}/actions", json=action)
    assert response.status_code == expect, response.text
    return response.json()


def walk_to_tree_and_refuse(client, session_id, clock):
    clock.now += 5
    view = act(client, session_id,
               {"type": "dialogue_choice", "npc": "water_molecule", "choice": 1})
    assert view["scene"] == "tree"
    clock.now += 5
    return act(client, session_id,
               {"type": "dialogue_choice", "npc": "water_molecule_tree",
                "choice": 1})


def teach_at_tree(client, session_id, clock, assignments):
    clock.now += 5
    view = act(client, session_id,
               {"type": "dialogue_choice", "npc": "water_molecule", "choice": 1})
    assert view["scene"] == "tree"
    clock.now += 5
    view = act(client, session_id,
               {"type": "dialogue_choice", "npc": "water_molecule_tree",
                "choice": 0})
    assert "teach_request" in view["pending_prompts"]
    clock.now += 5
    return act(client, session_id,
               {"type": "teach_submit", "assignments": assignments})


class TestCreate:
    def test_create_returns_town_view_with_greeting(self, client):
        _, view = create(client)
        assert view["scene"] == "knowledge-town"
        npc_ids = {npc["id"] for npc in view["npcs"]}
        assert "water_molecule" in npc_ids
        assert {"madam_mah", "sharman", "madam_sammy", "mayor",
                "animal"} <= npc_ids
        assert view["agent"]["speech"] == "Hello ! Welcome to VS Saga !"
        assert view["status"] == "active"

    def test_unknown_scenario_404(self, client):
        response = client.post("/sessions", json={"scenario": "missing"})
        assert response.status_code == 404
        assert response.json()["code"] == "not_found"

    def test_sessions_are_isolated(self, client, clock):
        id1, _ = create(client)
        id2, _ = create(client)
        assert id1 != id2
        clock.now += 5
        act(client, id1, {"type": "dialogue_choice", "npc": "sharman", "choice": 0})
        log1 = client.get(f"/sessions/{id1}/log").text
        log2 = client.get(f"/sessions/{id2}/log").text
        assert "Learn diffusion" in log1
        assert "Learn diffusion" not in log2


class TestActions:
    def test_refusal_shows_cue_in_same_response(self, client, clock):
        session_id, _ = create(client)
        view = walk_to_tree_and_refuse(client, session_id, clock)
        # the rejection ran teachability, then persuasion: cue visible now
        assert view["agent"]["speech"] != "Hello ! Welcome to VS Saga !"
        log = client.get(f"/sessions/{session_id}/log").text
        assert "Rejection" in log
        assert "display_cue" in log

    def test_correct_teaching_completes_session(self, client, clock):
        session_id, _ = create(client)
        view = teach_at_tree(client, session_id, clock, CORRECT)
        assert view["status"] == "completed"
        assert view["agent"]["animation"] == "revival"
        # actions on a completed session are rejected with 410
        act(client, session_id, {"type": "tick"}, expect=410)

    def test_wrong_teaching_highlights_slots(self, client, clock):
        session_id, _ = create(client)
        wrong = dict(CORRECT, membrane="Osmosis",
                     osmosis_name="Semi-Permeable Membrane")
        view = teach_at_tree(client, session_id, clock, wrong)
        assert view["status"] == "active"
        assert view["concept_map"]["wrong_slots"] == ["membrane", "osmosis_name"]
        assert "teach me again" in view["agent"]["speech"]

    def test_heartbeat_after_idle_fires_timeout(self, client, clock):
        session_id, _ = create(client)
        clock.now += 301  # seconds: beyond the 5-minute idle window
        act(client, session_id, {"type": "tick"})
        log = client.get(f"/sessions/{session_id}/log").text
        assert "Doing nothing (Time-out)" in log

    def test_illegal_choice_409(self, client, clock):
        session_id, _ = create(client)
        act(client, session_id,
            {"type": "dialogue_choice", "npc": "water_molecule_tree", "choice": 0},
            expect=409)  # tree NPC not in the starting scene
        act(client, session_id,
            {"type": "dialogue_choice", "npc": "sharman", "choice": 99},
            expect=409)
        act(client, session_id, {"type": "teach_submit", "assignments": {}},
            expect=409)  # nothing requested yet

    def test_unknown_session_404(self, client):
        act(client, "deadbeef", {"type": "tick"}, expect=404)
        assert client.get("/sessions/deadbeef").status_code == 404
        assert client.get("/sessions/deadbeef/log").status_code == 404


class TestLogExport:
    def test_fresh_session_log_has_greeting_only(self, client):
        session_id, _ = create(client)
        lines = client.get(f"/sessions/{session_id}/log").text.splitlines()
        assert len(lines) == 1
        assert "dialogue_line" in lines[0]
        assert "Hello ! Welcome to VS Saga !" in lines[0]

    def test_completed_session_log_ends_with_success(self, client, clock):
        session_id, _ = create(client)
        teach_at_tree(client, session_id, clock, CORRECT)
        lines = client.get(f"/sessions/{session_id}/log").text.splitlines()
        tail = "\n".join(lines[-3:])
        assert "Teach success" in tail

    def test_csv_format(self, client):
        session_id, _ = create(client)
        text = client.get(f"/sessions/{session_id}/log?format=csv").text
        assert text.splitlines()[0] == "kind,id,at,category,name,status,detail"

    def test_bad_format_rejected(self, client):
        session_id, _ = create(client)
        assert client.get(f"/sessions/{session_id}/log?format=xml").status_code == 409


class TestViewConsistency:
    def test_repeated_reads_identical(self, client, clock):
        session_id, _ = create(client)
        views = [client.get(f"/sessions/{session_id}").json() for _ in range(3)]
        assert views[0] == views[1] == views[2]

    def test_recovery_replays_to_identical_view(self, scenario, clock, tmp_path):
        app = build_app({"vs_saga": scenario}, data_dir=str(tmp_path),
                        now_fn=clock, seed_fn=lambda: 13)
        client = TestClient(app)
        session_id, _ = create(client)
        clock.now += 5
        act(client, session_id,
            {"type": "dialogue_choice", "npc": "sharman", "choice": 0})
        clock.now += 5
        view_before = client.get(f"/sessions/{session_id}").json()
        log_before = client.get(f"/sessions/{session_id}/log").text

        # a fresh service over the same data dir replays the stored actions
        app2 = build_app({"vs_saga": scenario}, data_dir=str(tmp_path),
                         now_fn=clock, seed_fn=lambda: 13)
        client2 = TestClient(app2)
        assert client2.get(f"/sessions/{session_id}").json() == view_before
        assert client2.get(f"/sessions/{session_id}/log").text == log_before

    def test_session_expiry(self, client, clock):
        session_id, _ = create(client)
        clock.now += 3601  # past the one-hour expiry
        assert client.get(f"/sessions/{session_id}").json()["status"] == "expired"
        act(client, session_id, {"type": "tick"}, expect=410)


class TestInterleaving:
    def test_fuzzed_interleaving_never_cross_contaminates(self, client, clock):
        rng = random.Random(4)
        sessions = [create(client)[0] for _ in range(3)]
        choices = {
            0: ("sharman", 0),       # Learn diffusion
            1: ("madam_mah", 0),
            2: ("animal", 0),        # Chat with animal NPC
        }
        plan = {sid: choices[i] for i, sid in enumerate(sessions)}
        order = [sid for sid in sessions for _ in range(3)]
        rng.shuffle(order)
        for sid in order:
            npc, choice = plan[sid]
            clock.now += 2
            act(client, sid, {"type": "dialogue_choice", "npc": npc,
                              "choice": choice})
        log0 = client.get(f"/sessions/{sessions[0]}/log").text
        log2 = client.get(f"/sessions/{sessions[2]}/log").text
        assert "Learn diffusion" in log0 and "animal" not in log0
        assert "Chat with animal NPC" in log2 and "Learn diffusion" not in log2


class TestCompletedVsExpired:
    def test_completed_session_never_reads_as_expired(self, client, clock):
        session_id, _ = create(client)
        teach_at_tree(client, session_id, clock, CORRECT)
        clock.now += 7200  # far past the expiry window
        assert client.get(f"/sessions/{session_id}").json()["status"] == "completed"
