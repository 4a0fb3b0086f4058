"""Game session: translates learner actions into events, runs agent cycles
and derives the client view.

One GameSession wraps one agent. The simulator steps it one cycle per tick;
the HTTP service drains cycles until the event log is quiescent so a single
request sees all of its consequences.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from typing import Any, Mapping

from .agent import AgentAction, PtaAgent, encode_assignments
from .errors import IllegalAction, SessionCompleted
from .events import EventCategory
from .scenario import NpcScript, Scenario

STATUS_ACTIVE = "active"
STATUS_COMPLETED = "completed"
STATUS_EXPIRED = "expired"

MAX_DRAIN_CYCLES = 32


@dataclass
class NpcView:
    id: str
    name: str
    node: str
    line: str
    choices: list[str]
    distracter: bool


@dataclass
class ConceptMapView:
    template: str
    prompt: str
    slots: list[dict[str, str]]
    labels: list[str]
    assignments: dict[str, str]
    wrong_slots: list[str]


@dataclass
class AgentPresentation:
    emotion: str
    animation: str
    speech: str


@dataclass
class ClientView:
    scene: str
    status: str
    clock_ms: int
    npcs: list[NpcView]
    agent: AgentPresentation
    concept_map: ConceptMapView | None
    pending_prompts: list[str]

    def to_doc(self) -> dict:
        return asdict(self)


class GameSession:
    """Single-learner session over one scenario."""

    def __init__(self, scenario: Scenario, seed: int = 0, greet: bool = True):
        self.scenario = scenario
        self.agent = PtaAgent(scenario, seed=seed)
        self.scene = scenario.start_scene
        self.status = STATUS_ACTIVE
        self.npc_nodes: dict[str, str] = {n.id: n.start for n in scenario.npcs}
        self.pending_prompts: list[str] = []
        self.presentation = AgentPresentation(
            emotion=scenario.config.default_emotion,
            animation=scenario.config.default_animation,
            speech="",
        )
        self.wrong_slots: list[str] = []
        self.last_assignments: dict[str, str] = {}
        if greet and scenario.config.greeter_npc:
            greeter = scenario.npc(scenario.config.greeter_npc)
            line = greeter.node(greeter.start).line
            action = AgentAction(kind="dialogue_line",
                                 payload={"speech": line, "npc": greeter.id},
                                 at=0, seq=self.agent.log.next_seq())
            self.agent.action_log.append(action)
            self._fold_action(action)

    # -- views ----------------------------------------------------------------

    def _scene_npcs(self) -> list[NpcScript]:
        return [n for n in self.scenario.npcs if n.scene == self.scene]

    def view(self) -> ClientView:
        npcs = []
        for npc in self._scene_npcs():
            node = npc.node(self.npc_nodes[npc.id])
            npcs.append(NpcView(
                id=npc.id, name=npc.name, node=node.id, line=node.line,
                choices=[c.text for c in node.choices], distracter=npc.distracter,
            ))
        concept_map = None
        if "teach_request" in self.pending_prompts or self.wrong_slots:
            template = self.scenario.concept_maps[self.scenario.default_concept_map]
            concept_map = ConceptMapView(
                template=template.id,
                prompt=template.prompt,
                slots=[{"id": s.id, "context": s.context} for s in template.slots],
                labels=list(template.labels),
                assignments=dict(self.last_assignments),
                wrong_slots=list(self.wrong_slots),
            )
        return ClientView(
            scene=self.scene,
            status=self.status,
            clock_ms=self.agent.log.clock,
            npcs=npcs,
            agent=AgentPresentation(**asdict(self.presentation)),
            concept_map=concept_map,
            pending_prompts=list(self.pending_prompts),
        )

    # -- learner actions ------------------------------------------------------

    def apply(self, action: Mapping[str, Any], advance_ms: int = 0) -> ClientView:
        """Apply one learner action, then run agent cycles to quiescence."""
        if self.status == STATUS_COMPLETED:
            raise SessionCompleted("session already completed")
        self.apply_input(action)
        self.run_cycles(self.agent.log.clock + max(0, advance_ms))
        return self.view()

    def apply_input(self, action: Mapping[str, Any]):
        """Translate one learner action into engine events, no cycles run."""
        kind = action.get("type")
        if kind == "dialogue_choice":
            self._apply_dialogue(action)
        elif kind == "teach_submit":
            self._apply_teach(action)
        elif kind == "tick":
            pass  # heartbeat: clock advance + cycles only
        else:
            raise IllegalAction(f"unknown action type {kind!r}")

    def _apply_dialogue(self, action: Mapping[str, Any]):
        npc_id = action.get("npc", "")
        try:
            npc = self.scenario.npc(npc_id)
        except KeyError:
            raise IllegalAction(f"unknown npc {npc_id!r}") from None
        if npc.scene != self.scene:
            raise IllegalAction(f"npc {npc_id!r} is not in scene {self.scene!r}")
        node = npc.node(self.npc_nodes[npc_id])
        index = action.get("choice", -1)
        if not isinstance(index, int) or not 0 <= index < len(node.choices):
            raise IllegalAction(
                f"npc {npc_id!r} node {node.id!r} has no choice {index!r}")
        choice = node.choices[index]
        if choice.event:
            self.agent.log.emit_event(
                EventCategory.DIALOGUE, choice.event,
                {"npc": npc_id, "choice": str(index)},
            )
        self.npc_nodes[npc_id] = npc.start if choice.next == "end" else choice.next
        if choice.goto:
            self.scene = choice.goto

    def _apply_teach(self, action: Mapping[str, Any]):
        if "teach_request" not in self.pending_prompts:
            raise IllegalAction("no teaching was requested")
        assignments = {
            str(k): str(v) for k, v in (action.get("assignments") or {}).items()
        }
        template_id = str(action.get("template")
                          or self.scenario.default_concept_map)
        self.last_assignments = assignments
        self.pending_prompts.remove("teach_request")
        self.wrong_slots = []
        self.agent.log.emit_event(
            EventCategory.DIALOGUE,
            self.scenario.roles["teach_submit"],
            encode_assignments(template_id, assignments),
        )

    # -- cycle driving ---------------------------------------------------------

    def step_tick(self, now: int) -> list[AgentAction]:
        """One reasoning cycle at `now` (simulator cadence)."""
        actions = self.agent.run_cycle(now)
        for action in actions:
            self._fold_action(action)
        return actions

    def run_cycles(self, now: int) -> list[AgentAction]:
        """Cycle until no pending events remain (interactive cadence)."""
        collected: list[AgentAction] = []
        collected.extend(self.step_tick(now))
        drained = 0
        while self.agent.log.pending() and drained < MAX_DRAIN_CYCLES:
            collected.extend(self.step_tick(self.agent.log.clock))
            drained += 1
        return collected

    def _fold_action(self, action: AgentAction):
        payload = action.payload
        if action.kind == "display_cue":
            self.presentation = AgentPresentation(
                emotion=payload.get("emotion", self.presentation.emotion),
                animation=payload.get("animation", self.presentation.animation),
                speech=payload.get("text", ""),
            )
        elif action.kind in ("request_teaching", "repeat_teaching_prompt"):
            if "teach_request" not in self.pending_prompts:
                self.pending_prompts.append("teach_request")
            self.wrong_slots = sorted(
                s for s in payload.get("wrong_slots", "").split(",") if s)
            self.presentation = AgentPresentation(
                emotion=self.presentation.emotion,
                animation=self.presentation.animation,
                speech=payload.get("speech", ""),
            )
        elif action.kind == "carry_out_solution":
            self.presentation = AgentPresentation(
                emotion="happy",
                animation=payload.get("animation",
                                      self.scenario.config.success_animation),
                speech=payload.get("speech", ""),
            )
            self.wrong_slots = []
            self.status = STATUS_COMPLETED
        elif action.kind == "dialogue_line":
            self.presentation = AgentPresentation(
                emotion=self.presentation.emotion,
                animation=self.presentation.animation,
                speech=payload.get("speech", ""),
            )

    # -- export ------------------------------------------------------------------

    def export_records(self) -> list[dict]:
        """Merged event + action stream in emission (causal) order."""
        events = [dict(kind="event", **r.to_doc()) for r in self.agent.log.records]
        actions = [
            {"kind": "action", "action": a.kind, "at": a.at, "seq": a.seq,
             "payload": dict(a.payload)}
            for a in self.agent.action_log
        ]
        merged = events + actions
        merged.sort(key=lambda r: (r["at"], r.get("id") or r["seq"]))
        return merged

    def export_log(self, fmt: str = "jsonl") -> str:
        return render_records(self.export_records(), fmt)


def render_records(records: list[dict], fmt: str = "jsonl") -> str:
    """Serialize a merged event/action stream as JSON-lines or CSV."""
    if fmt == "jsonl":
        return "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)
    if fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow(["kind", "id", "at", "category", "name", "status", "detail"])
        for r in records:
            if r["kind"] == "event":
                writer.writerow(["event", r["id"], r["at"], r["category"],
                                 r["name"], r["status"],
                                 json.dumps(r["payload"], sort_keys=True)])
            else:
                writer.writerow(["action", r["seq"], r["at"], "", r["action"], "",
                                 json.dumps(r["payload"], sort_keys=True)])
        return out.getvalue()
    raise ValueError(f"unknown export format {fmt!r}")
