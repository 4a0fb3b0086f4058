"""The agent orchestrator: task bindings, reasoning selection, cue planning.

One agent owns one interpreter frame over the scenario's goal nets, an
event log, a knowledge base and the persuasion leaf state. run_cycle()
drives exactly one reasoning pass: the main routine polls a batch,
interprets it, routes it to one of the three reasoning subnets and comes
back to its start state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from .errors import EmptyCatalog, UnroutedEvent
from .events import EventCategory, EventLog, EventRecord
from .goalnet import WAIT, Interpreter, TaskRegistry
from .knowledge import KnowledgeBase, TaughtMap, build_taught_map, evaluate_taught
from .persuasion import (
    LeafState,
    PersuasionAssessment,
    activate_leaf,
    consume_pulses,
    evaluate,
    pulse_cue,
)

if TYPE_CHECKING:
    from .scenario import Scenario

REASONING_PRIORITY = ("Practicability", "Teachability", "Persuasion")

ACTION_KINDS = (
    "display_cue",
    "request_teaching",
    "carry_out_solution",
    "repeat_teaching_prompt",
    "dialogue_line",
)

SLOT_PREFIX = "slot:"


@dataclass(frozen=True)
class AgentAction:
    kind: str
    payload: dict[str, str]
    at: int
    seq: int = 0  # emission order, shared counter with the event log

    def to_doc(self) -> dict:
        return {"kind": self.kind, "payload": dict(self.payload), "at": self.at,
                "seq": self.seq}


@dataclass(frozen=True)
class PersuasionCue:
    id: str
    cue_set: str  # EH | AS | AF
    text: str
    band: str  # low | moderate | high
    topic: str = ""
    persona: str = ""
    emotion: str = ""
    animation: str = ""

    def to_payload(self) -> dict[str, str]:
        payload = {"cue_id": self.id, "cue_set": self.cue_set,
                   "text": self.text, "band": self.band}
        if self.topic:
            payload["topic"] = self.topic
        if self.persona:
            payload["persona"] = self.persona
        if self.emotion:
            payload["emotion"] = self.emotion
        if self.animation:
            payload["animation"] = self.animation
        return payload


@dataclass
class TaskContext:
    """Mutable per-cycle state shared by the task functions."""

    agent: "PtaAgent"
    batch: list[EventRecord] = field(default_factory=list)
    actions: list[AgentAction] = field(default_factory=list)
    scratch: dict = field(default_factory=dict)
    polled: bool = False


def encode_assignments(template_id: str, assignments: dict[str, str]) -> dict[str, str]:
    """Flatten a teach submission into an event payload (str -> str)."""
    payload = {"template": template_id}
    for slot_id, label in assignments.items():
        payload[SLOT_PREFIX + slot_id] = label
    return payload


def decode_assignments(payload: dict[str, str]) -> dict[str, str]:
    return {
        key[len(SLOT_PREFIX):]: value
        for key, value in payload.items()
        if key.startswith(SLOT_PREFIX)
    }


# -- task functions (Table-9 names) -------------------------------------------
# All state flows through ctx.agent / ctx.scratch, so these are stateless
# and the registry built from them is safely shareable.

def _detect_event(ctx: TaskContext):
    if ctx.polled:
        return WAIT  # one reasoning pass per run_cycle
    batch = ctx.agent.log.peek_due(ctx.agent.batch_limit)
    if not batch:
        return WAIT
    ctx.polled = True
    ctx.batch = batch
    return None


def _interpret_event(ctx: TaskContext):
    # latch persuasion leaves for every event the learner produced;
    # unbound events are legitimate (pure routing signals)
    agent = ctx.agent
    for record in ctx.batch:
        if record.name in agent.fcm.leaf_bindings:
            activate_leaf(agent.leaves, record.name)


def _select_reasoning(ctx: TaskContext):
    agent = ctx.agent
    reasoning = agent.select_reasoning(ctx.batch)
    ctx.scratch["reasoning"] = reasoning
    consumed = [
        record for record in ctx.batch
        if agent.scenario.routing[record.name] in (reasoning, "none")
    ]
    agent.log.mark_processed(record.id for record in consumed)
    # events routed to a different reasoning stay pending for the next cycle
    ctx.batch = consumed


def _require_teaching(ctx: TaskContext):
    agent = ctx.agent
    names = {record.name for record in ctx.batch}
    if agent.role("teach_submit") in names or agent.role("teach_refuse") in names:
        return  # the learner already answered; nothing to request
    template = agent.kb.template(agent.scenario.default_concept_map)
    agent.emit(ctx, "request_teaching", {
        "template": template.id,
        "speech": template.prompt,
    })


def _check_response(ctx: TaskContext):
    agent = ctx.agent
    submission = next(
        (r for r in ctx.batch if r.name == agent.role("teach_submit")), None)
    if submission is not None:
        ctx.scratch["response"] = "accepted"
        ctx.scratch["submission"] = submission
    elif any(r.name == agent.role("teach_refuse") for r in ctx.batch):
        ctx.scratch["response"] = "rejected"
    else:
        ctx.scratch["response"] = None


def _initialize_teaching(ctx: TaskContext):
    agent = ctx.agent
    submission: EventRecord = ctx.scratch["submission"]
    template_id = submission.payload.get("template") or agent.scenario.default_concept_map
    ctx.scratch["template"] = agent.kb.template(template_id)


def _acquire_knowledge(ctx: TaskContext):
    agent = ctx.agent
    submission: EventRecord = ctx.scratch["submission"]
    template = ctx.scratch["template"]
    assignments = decode_assignments(submission.payload)
    ctx.scratch["taught"] = build_taught_map(template, assignments,
                                             taught_at=agent.log.clock)


def _save_knowledge(ctx: TaskContext):
    agent = ctx.agent
    template = ctx.scratch["template"]
    taught: TaughtMap = ctx.scratch["taught"]
    agent.kb.acquire_teaching(template, taught.assignments, taught_at=taught.taught_at)
    agent.log.emit_event(EventCategory.PRACTICABILITY, agent.role("practice"),
                         {"template": template.id})


def _generate_rejection_event(ctx: TaskContext):
    agent = ctx.agent
    agent.log.emit_event(EventCategory.TEACHING_FEEDBACK, agent.role("rejection"))


def _query_kb(ctx: TaskContext):
    agent = ctx.agent
    practice = next(
        (r for r in ctx.batch if r.name == agent.role("practice")), None)
    template_id = ""
    if practice is not None:
        template_id = practice.payload.get("template", "")
    template = agent.kb.template(template_id or agent.scenario.default_concept_map)
    ctx.scratch["template"] = template
    ctx.scratch["taught"] = agent.kb.query_learnt(template.id)


def _reasoning(ctx: TaskContext):
    agent = ctx.agent
    template = ctx.scratch["template"]
    taught = ctx.scratch["taught"]
    if taught is None:
        taught = TaughtMap(template_id=template.id, assignments={})
    grade = evaluate_taught(template, taught)
    ctx.scratch["grade"] = grade
    agent.last_grade = grade


def _carry_out_sol(ctx: TaskContext):
    agent = ctx.agent
    template = ctx.scratch["template"]
    agent.log.emit_event(EventCategory.TEACHING_FEEDBACK, agent.role("teach_success"),
                         {"template": template.id})
    agent.emit(ctx, "carry_out_solution", {
        "template": template.id,
        "animation": agent.scenario.config.success_animation,
        "speech": agent.scenario.config.success_speech,
    })


def _generate_wrong_sol_event(ctx: TaskContext):
    agent = ctx.agent
    template = ctx.scratch["template"]
    grade = ctx.scratch["grade"]
    wrong_slots = ",".join(sorted(grade.diff))
    agent.log.emit_event(EventCategory.TEACHING_FEEDBACK, agent.role("teach_failure"),
                         {"template": template.id, "wrong_slots": wrong_slots})
    agent.emit(ctx, "repeat_teaching_prompt", {
        "template": template.id,
        "speech": agent.scenario.config.retry_speech,
        "wrong_slots": wrong_slots,
    })


def _fcm_calculation(ctx: TaskContext):
    agent = ctx.agent
    assessment = evaluate(agent.fcm, agent.leaves)
    consume_pulses(agent.leaves)  # a cue pulse feeds exactly one calculation
    ctx.scratch["assessment"] = assessment
    agent.last_assessment = assessment


def _check_mot_abi(ctx: TaskContext):
    assessment: PersuasionAssessment = ctx.scratch["assessment"]
    ctx.scratch["persuasion_needed"] = (
        assessment.motivation_low or assessment.ability_low
    )


def _select_cue(ctx: TaskContext):
    ctx.scratch["cue"] = ctx.agent.select_cue(ctx.scratch["assessment"])


def _execute_cue(ctx: TaskContext):
    agent = ctx.agent
    cue: PersuasionCue | None = ctx.scratch.get("cue")
    if cue is None:
        return
    agent.emit(ctx, "display_cue", cue.to_payload())


def _finish(ctx: TaskContext):
    pass


def _pred_reasoning(which: str):
    return lambda ctx: ctx.scratch.get("reasoning") == which


def build_registry() -> TaskRegistry:
    return TaskRegistry(
        tasks={
            "DetectEvent": _detect_event,
            "InterpretEvent": _interpret_event,
            "SelectReasoning": _select_reasoning,
            "RequireTeaching": _require_teaching,
            "CheckResponse": _check_response,
            "InitializeTeaching": _initialize_teaching,
            "AcquireKnowledge": _acquire_knowledge,
            "SaveKnowledge": _save_knowledge,
            "GenerateRejectionEvent": _generate_rejection_event,
            "QueryKB": _query_kb,
            "Reasoning": _reasoning,
            "CarryOutSol": _carry_out_sol,
            "GenerateWrongSolEvent": _generate_wrong_sol_event,
            "FCMCalculation": _fcm_calculation,
            "CheckMotAbi": _check_mot_abi,
            "SelectCue": _select_cue,
            "ExecuteCue": _execute_cue,
            "Finish": _finish,
        },
        predicates={
            "reasoning_is_teachability": _pred_reasoning("Teachability"),
            "reasoning_is_practicability": _pred_reasoning("Practicability"),
            "reasoning_is_persuasion": _pred_reasoning("Persuasion"),
            "response_accepted": lambda ctx: ctx.scratch.get("response") == "accepted",
            "response_rejected": lambda ctx: ctx.scratch.get("response") == "rejected",
            "solution_correct": lambda ctx: ctx.scratch["grade"].correct,
            "persuasion_needed": lambda ctx: bool(ctx.scratch.get("persuasion_needed")),
        },
    )


REGISTRY = build_registry()


class PtaAgent:
    """One teachable agent bound to one scenario."""

    def __init__(self, scenario: "Scenario", seed: int = 0):
        self.scenario = scenario
        self.fcm = scenario.fcm
        self.leaves = LeafState.for_model(scenario.fcm)
        self.kb = KnowledgeBase(scenario.concept_maps)
        self.log = EventLog(
            catalog=scenario.events,
            idle_timeout_ms=scenario.config.idle_timeout_ms,
            timeout_event=scenario.roles["timeout"],
        )
        self.interpreter = Interpreter(scenario.goal_nets, REGISTRY,
                                       cycle_limit=scenario.config.cycle_limit)
        self.frame = self.interpreter.new_frame(seed)
        self.seed = seed
        self.batch_limit = scenario.config.batch_limit
        self.cue_history: list[str] = []
        self.action_log: list[AgentAction] = []
        self.last_assessment: PersuasionAssessment | None = None
        self.last_grade = None

    # -- small helpers ------------------------------------------------------

    def role(self, role_name: str) -> str:
        return self.scenario.roles[role_name]

    def emit(self, ctx: TaskContext, kind: str, payload: dict[str, str]):
        assert kind in ACTION_KINDS
        ctx.actions.append(AgentAction(kind=kind, payload=dict(payload),
                                       at=self.log.clock,
                                       seq=self.log.next_seq()))

    def intensity_band(self, peripheral_cue: float) -> str:
        config = self.scenario.config
        if peripheral_cue < config.band_moderate:
            return "low"
        if peripheral_cue < config.band_high:
            return "moderate"
        return "high"

    def current_topic(self) -> str:
        stages = self.scenario.learning_stages
        if not stages:
            return ""
        for stage in stages:
            if not all(self.leaves.activation.get(e, 0) for e in stage.done_when):
                return stage.topic
        return stages[-1].topic

    # -- spec operations ------------------------------------------------------

    def select_reasoning(self, batch: list[EventRecord]) -> str | None:
        """Route a polled batch to one reasoning, mixed batches resolved by
        Practicability > Teachability > Persuasion."""
        routes = set()
        for record in batch:
            target = self.scenario.routing.get(record.name)
            if target is None:
                raise UnroutedEvent(
                    f"event {record.name!r} missing from the routing table")
            routes.add(target)
        for candidate in REASONING_PRIORITY:
            if candidate in routes:
                return candidate
        return None

    def select_cue(self, assessment: PersuasionAssessment) -> PersuasionCue | None:
        """Pick a peripheral cue for a deficient assessment.

        Low ability wins when both flags are set (expert hints give the
        learner the means to act); low motivation alone gets affect in the
        high intensity band, an attractive source otherwise. Within the
        eligible pool the least recently issued cue rotates in.
        """
        if not (assessment.motivation_low or assessment.ability_low):
            return None
        band = self.intensity_band(assessment.peripheral_cue)
        catalogs = self.scenario.cues
        if assessment.ability_low:
            pool = list(catalogs.expert_hints)
            if not pool:
                raise EmptyCatalog("no expert hints authored")
            topic = self.current_topic()
            matching = [c for c in pool if c.topic == topic]
            candidates = matching or pool
            chosen = self._least_recently_issued(candidates)
            cue = PersuasionCue(id=chosen.id, cue_set="EH", text=chosen.text,
                                band=band, topic=chosen.topic)
        elif band == "high":
            pool = list(catalogs.affects)
            if not pool:
                raise EmptyCatalog("no affect cues authored")
            chosen = self._least_recently_issued(pool)
            cue = PersuasionCue(id=chosen.id, cue_set="AF", text=chosen.text,
                                band=band, emotion=chosen.emotion,
                                animation=chosen.animation)
        else:
            pool = list(catalogs.attractive_sources)
            if not pool:
                raise EmptyCatalog("no attractive-source cues authored")
            chosen = self._least_recently_issued(pool)
            cue = PersuasionCue(id=chosen.id, cue_set="AS", text=chosen.text,
                                band=band, persona=chosen.persona)
        self.cue_history.append(cue.id)
        pulse_cue(self.leaves, cue.id)
        return cue

    def _least_recently_issued(self, candidates):
        last_issued: dict[str, int] = {}
        for position, cue_id in enumerate(self.cue_history):
            last_issued[cue_id] = position
        return min(candidates, key=lambda c: last_issued.get(c.id, -1))

    def run_cycle(self, now: int) -> list[AgentAction]:
        """Advance the clock to `now` and run one reasoning pass.

        Actions commit only when the pass completes; an error from a task
        leaves the action log untouched.
        """
        if now < self.log.clock:
            raise ValueError("logical time must not go backwards")
        self.log.advance_clock(now - self.log.clock)
        ctx = TaskContext(agent=self)
        self.interpreter.advance(self.frame, ctx)
        self.action_log.extend(ctx.actions)
        return list(ctx.actions)
