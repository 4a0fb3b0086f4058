"""Scripted-learner simulation, session metrics and FCM experiments.

Policies stand in for human participants. The built-in ones are data files
under data/policies/ so new archetypes can be authored without code.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

import yaml

from .errors import SchemaError, UnboundEvent
from .fcm import render_report
from .persuasion import LeafState, PersuasionAssessment, activate_leaf, evaluate
from .scenario import Scenario
from .session import GameSession

BUILTIN_POLICIES = ("diligent", "distracted", "refuser")


@dataclass(frozen=True)
class ScriptStep:
    at: int  # logical ms offset from session start
    action: dict[str, Any]


@dataclass
class LearnerPolicy:
    name: str
    steps: list[ScriptStep]

    def __post_init__(self):
        offsets = [s.at for s in self.steps]
        if offsets != sorted(offsets):
            raise SchemaError(f"policy {self.name!r}: step offsets must be nondecreasing")


def _policy_dir() -> str:
    return os.path.join(os.path.dirname(__file__), "data", "policies")


def load_policy(name_or_path: str) -> LearnerPolicy:
    """Load a built-in policy by name or any policy file by path."""
    path = name_or_path
    if not os.path.exists(path):
        path = os.path.join(_policy_dir(), f"{name_or_path}.yaml")
    if not os.path.exists(path):
        raise SchemaError(f"unknown policy {name_or_path!r}")
    with open(path, "r", encoding="utf-8") as fh:
        doc = yaml.safe_load(fh)
    if not isinstance(doc, Mapping) or "script" not in doc:
        raise SchemaError(f"policy file {path!r} must define 'script'")
    steps = []
    for i, raw in enumerate(doc["script"] or []):
        if "at" not in raw or "do" not in raw:
            raise SchemaError(f"policy step [{i}] needs 'at' and 'do'")
        do = raw["do"]
        if do == "dialogue":
            action = {"type": "dialogue_choice", "npc": str(raw["npc"]),
                      "choice": int(raw["choice"])}
        elif do == "teach":
            action = {"type": "teach_submit",
                      "assignments": {str(k): str(v)
                                      for k, v in (raw.get("assignments") or {}).items()}}
            if raw.get("template"):
                action["template"] = str(raw["template"])
        elif do == "idle":
            action = {"type": "tick"}
        else:
            raise SchemaError(f"policy step [{i}]: unknown action {do!r}")
        steps.append(ScriptStep(at=int(raw["at"]), action=action))
    return LearnerPolicy(name=str(doc.get("name", name_or_path)), steps=steps)


@dataclass
class SessionMetrics:
    cues_by_catalog: dict[str, int]
    teach_attempts: int
    first_success_tick: int | None
    events_by_category: dict[str, int]
    final_assessment: PersuasionAssessment | None

    def to_doc(self) -> dict:
        doc = {
            "cues_by_catalog": dict(self.cues_by_catalog),
            "teach_attempts": self.teach_attempts,
            "first_success_tick": self.first_success_tick,
            "events_by_category": dict(self.events_by_category),
        }
        if self.final_assessment is not None:
            doc["final_assessment"] = {
                "motivation": self.final_assessment.motivation,
                "ability": self.final_assessment.ability,
                "peripheral_cue": self.final_assessment.peripheral_cue,
                "motivation_low": self.final_assessment.motivation_low,
                "ability_low": self.final_assessment.ability_low,
            }
        else:
            doc["final_assessment"] = None
        return doc


@dataclass
class SimulationResult:
    session: GameSession
    metrics: SessionMetrics

    def export_log(self, fmt: str = "jsonl") -> str:
        return self.session.export_log(fmt)


def compute_metrics(session: GameSession) -> SessionMetrics:
    """Recompute metrics purely from the exported log, so the returned
    numbers are recomputable by anyone holding the export."""
    records = session.export_records()
    cues = {"EH": 0, "AS": 0, "AF": 0}
    teach_attempts = 0
    first_success = None
    by_category: dict[str, int] = {}
    submit_name = session.scenario.roles["teach_submit"]
    success_name = session.scenario.roles["teach_success"]
    for record in records:
        if record["kind"] == "action":
            if record["action"] == "display_cue":
                cue_set = record["payload"].get("cue_set", "")
                if cue_set in cues:
                    cues[cue_set] += 1
        else:
            by_category[record["category"]] = by_category.get(record["category"], 0) + 1
            if record["name"] == submit_name:
                teach_attempts += 1
            if record["name"] == success_name and first_success is None:
                first_success = record["at"]
    return SessionMetrics(
        cues_by_catalog=cues,
        teach_attempts=teach_attempts,
        first_success_tick=first_success,
        events_by_category=by_category,
        final_assessment=session.agent.last_assessment,
    )


def simulate(
    scenario: Scenario,
    policy: LearnerPolicy,
    seed: int = 0,
    max_ticks: int = 100,
    cycle_ms: int | None = None,
) -> SimulationResult:
    """Drive a fresh session with a scripted learner on the logical clock.

    One reasoning cycle per tick. Deterministic in (scenario, policy, seed).
    """
    cadence = cycle_ms or scenario.config.cycle_ms
    session = GameSession(scenario, seed=seed, greet=False)
    step_index = 0
    for tick in range(1, max_ticks + 1):
        now = tick * cadence
        # move the clock first so the learner's inputs carry this tick's time
        session.agent.log.advance_clock(now - session.agent.log.clock)
        while step_index < len(policy.steps) and policy.steps[step_index].at <= now:
            step = policy.steps[step_index]
            step_index += 1
            if step.action["type"] != "tick":
                session.apply_input(step.action)
        session.step_tick(now)
    return SimulationResult(session=session, metrics=compute_metrics(session))


@dataclass
class ExperimentTable:
    labels: list[str]
    concepts: list[str]  # row order
    columns: list[list[float]]  # one list of row values per label
    assessments: list[PersuasionAssessment]

    def row(self, concept: str) -> list[float]:
        index = self.concepts.index(concept)
        return [col[index] for col in self.columns]

    def render(self, fmt: str = "text", decimals: int = 7) -> str:
        from .fcm import ConceptState, FixedPointReport
        import numpy as np

        reports = []
        for label, col in zip(self.labels, self.columns):
            state = ConceptState(np.array(col))
            reports.append((label, FixedPointReport(
                concepts=list(self.concepts), final=state, iterations=0,
                converged=True, trajectory=[state.values])))
        return render_report(reports, decimals=decimals, fmt=fmt)


def fcm_experiment(
    scenario: Scenario,
    event_sets: Sequence[Iterable[str]],
    labels: Sequence[str] | None = None,
) -> ExperimentTable:
    """Evaluate the persuasion map over cumulative event sets, one column
    per set, rows ordered like the published comparison tables."""
    fcm = scenario.fcm
    if labels is None:
        labels = []
        for event_set in event_sets:
            names = list(event_set)
            labels.append(" + ".join(names) if names else "Steady State")
    columns = []
    assessments = []
    for event_set in event_sets:
        leaves = LeafState.for_model(fcm)
        for name in event_set:
            if name not in fcm.leaf_bindings:
                raise UnboundEvent(f"event {name!r} has no leaf binding")
            activate_leaf(leaves, name)
        assessment = evaluate(fcm, leaves)
        assessments.append(assessment)
        columns.append([assessment.peripheral_cue, assessment.motivation,
                        assessment.ability])
    return ExperimentTable(
        labels=list(labels),
        concepts=["Peripheral Cue", "Motivation", "Ability"],
        columns=columns,
        assessments=assessments,
    )
