"""Scenario documents: the authored content binding the engine together.

A scenario is one human-editable YAML document with an explicit schema
number: goal nets, persuasion model, event catalog, routing table, NPC
dialogue scripts, concept maps, cue catalogs and tuning knobs. Scenarios
are immutable after load and shareable across sessions.

load_scenario raises on the first error; validate_scenario returns every
finding (errors and warnings) so authors can fix a file in one pass.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

import numpy as np
import yaml

from .errors import DanglingReference, GraphError, PtaError, SchemaError
from .fcm import FcmModel, SquashSpec
from .goalnet import GoalNetLibrary, load_goal_net_library
from .knowledge import ConceptMapTemplate, Slot
from .persuasion import (
    CUE_SETS,
    FACTORS,
    STEM_CONCEPTS,
    LeafBinding,
    PersuasiveFcm,
)

SCHEMA_VERSION = 1

REASONINGS = ("Teachability", "Practicability", "Persuasion", "none")

REQUIRED_ROLES = (
    "teach_context",
    "teach_submit",
    "teach_refuse",
    "rejection",
    "teach_success",
    "teach_failure",
    "practice",
    "timeout",
)

# Task and guard names a scenario's goal nets may reference. The agent
# binds implementations for exactly these.
TASK_FUNCTIONS = frozenset({
    "DetectEvent", "InterpretEvent", "SelectReasoning", "Finish",
    "RequireTeaching", "CheckResponse", "InitializeTeaching",
    "AcquireKnowledge", "SaveKnowledge", "GenerateRejectionEvent",
    "QueryKB", "Reasoning", "CarryOutSol", "GenerateWrongSolEvent",
    "FCMCalculation", "CheckMotAbi", "SelectCue", "ExecuteCue",
})

GUARD_PREDICATES = frozenset({
    "reasoning_is_teachability", "reasoning_is_practicability",
    "reasoning_is_persuasion",
    "response_accepted", "response_rejected",
    "solution_correct",
    "persuasion_needed",
})


@dataclass(frozen=True)
class Finding:
    level: str  # "error" | "warning"
    path: str
    message: str

    def __str__(self):
        return f"{self.level}: {self.path}: {self.message}"


@dataclass(frozen=True)
class ExpertHint:
    id: str
    topic: str
    text: str


@dataclass(frozen=True)
class AttractiveSource:
    id: str
    persona: str
    text: str


@dataclass(frozen=True)
class Affect:
    id: str
    emotion: str
    animation: str
    text: str


@dataclass
class CueCatalogs:
    expert_hints: list[ExpertHint] = field(default_factory=list)
    attractive_sources: list[AttractiveSource] = field(default_factory=list)
    affects: list[Affect] = field(default_factory=list)

    def all_ids(self) -> list[str]:
        return (
            [c.id for c in self.expert_hints]
            + [c.id for c in self.attractive_sources]
            + [c.id for c in self.affects]
        )

    def by_set(self, cue_set: str):
        return {
            "EH": self.expert_hints,
            "AS": self.attractive_sources,
            "AF": self.affects,
        }[cue_set]


@dataclass(frozen=True)
class NpcChoice:
    text: str
    event: str | None = None
    next: str = "end"
    goto: str | None = None  # scene transition


@dataclass(frozen=True)
class NpcNode:
    id: str
    line: str
    choices: tuple[NpcChoice, ...] = ()


@dataclass
class NpcScript:
    id: str
    name: str
    scene: str
    start: str
    nodes: list[NpcNode]
    distracter: bool = False

    def node(self, node_id: str) -> NpcNode:
        for node in self.nodes:
            if node.id == node_id:
                return node
        raise KeyError(node_id)


@dataclass(frozen=True)
class LearningStage:
    topic: str
    done_when: tuple[str, ...]


@dataclass
class ScenarioConfig:
    idle_timeout_ms: int = 300_000
    batch_limit: int = 8
    cycle_ms: int = 5000
    cycle_limit: int = 10_000
    session_expiry_ms: int = 3_600_000
    theta_motivation: float = 0.5
    theta_ability: float = 0.5
    squash: SquashSpec = field(default_factory=SquashSpec)
    fixed_point_tol: float = 1e-6
    fixed_point_max_iter: int = 1000
    band_moderate: float = 0.5
    band_high: float = 0.75
    default_emotion: str = "neutral"
    default_animation: str = "idle"
    greeter_npc: str = ""
    success_animation: str = "revival"
    success_speech: str = "You taught me well!"
    retry_speech: str = "I understand it's not easy. But can you teach me again?"


@dataclass
class Scenario:
    name: str
    version: str
    config: ScenarioConfig
    events: dict[str, list[str]]  # category -> names
    roles: dict[str, str]
    routing: dict[str, str]  # event name -> reasoning | "none"
    fcm: PersuasiveFcm
    cues: CueCatalogs
    learning_stages: list[LearningStage]
    concept_maps: dict[str, ConceptMapTemplate]
    default_concept_map: str
    scenes: list[str]
    start_scene: str
    npcs: list[NpcScript]
    goal_nets: GoalNetLibrary
    presentation_assets: list[str]
    _net_docs: dict[str, Any] = field(default_factory=dict, repr=False)
    _root_net: str = "main"

    def event_category(self, name: str) -> str | None:
        for category, names in self.events.items():
            if name in names:
                return category
        return None

    def role(self, role_name: str) -> str:
        return self.roles[role_name]

    def npc(self, npc_id: str) -> NpcScript:
        for npc in self.npcs:
            if npc.id == npc_id:
                return npc
        raise KeyError(npc_id)

    def all_event_names(self) -> list[str]:
        return [name for names in self.events.values() for name in names]

    # -- canonical form -------------------------------------------------------

    def to_doc(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "meta": {"name": self.name, "version": self.version},
            "config": {
                "idle_timeout_ms": self.config.idle_timeout_ms,
                "batch_limit": self.config.batch_limit,
                "cycle_ms": self.config.cycle_ms,
                "cycle_limit": self.config.cycle_limit,
                "session_expiry_ms": self.config.session_expiry_ms,
                "theta_motivation": self.config.theta_motivation,
                "theta_ability": self.config.theta_ability,
                "squash": {
                    "kind": self.config.squash.kind,
                    "lam": self.config.squash.lam,
                    "threshold": self.config.squash.threshold,
                },
                "fixed_point": {
                    "tol": self.config.fixed_point_tol,
                    "max_iter": self.config.fixed_point_max_iter,
                },
                "intensity_bands": {
                    "moderate": self.config.band_moderate,
                    "high": self.config.band_high,
                },
                "default_presentation": {
                    "emotion": self.config.default_emotion,
                    "animation": self.config.default_animation,
                },
                "greeter_npc": self.config.greeter_npc,
                "success_animation": self.config.success_animation,
                "success_speech": self.config.success_speech,
                "retry_speech": self.config.retry_speech,
            },
            "presentation_assets": list(self.presentation_assets),
            "events": {k: list(v) for k, v in self.events.items()},
            "roles": dict(self.roles),
            "routing": dict(self.routing),
            "fcm": {
                "leaves": {
                    event: {"factor": b.factor, "weight": b.weight}
                    for event, b in self.fcm.leaf_bindings.items()
                },
                "cue_weights": dict(self.fcm.cue_weights),
                "stem": {"weights": [[float(w) for w in row]
                                     for row in self.fcm.stem.weights]},
            },
            "cues": {
                "expert_hints": [
                    {"id": c.id, "topic": c.topic, "text": c.text}
                    for c in self.cues.expert_hints
                ],
                "attractive_sources": [
                    {"id": c.id, "persona": c.persona, "text": c.text}
                    for c in self.cues.attractive_sources
                ],
                "affects": [
                    {"id": c.id, "emotion": c.emotion, "animation": c.animation,
                     "text": c.text}
                    for c in self.cues.affects
                ],
            },
            "learning_stages": [
                {"topic": s.topic, "done_when": list(s.done_when)}
                for s in self.learning_stages
            ],
            "concept_maps": [
                {
                    "id": t.id,
                    "prompt": t.prompt,
                    "slots": [{"id": s.id, "context": s.context} for s in t.slots],
                    "labels": list(t.labels),
                    "key": dict(t.key),
                }
                for t in self.concept_maps.values()
            ],
            "default_concept_map": self.default_concept_map,
            "scenes": list(self.scenes),
            "start_scene": self.start_scene,
            "npcs": [
                {
                    "id": n.id,
                    "name": n.name,
                    "scene": n.scene,
                    "distracter": n.distracter,
                    "start": n.start,
                    "nodes": [
                        {
                            "id": node.id,
                            "line": node.line,
                            "choices": [
                                {
                                    "text": c.text,
                                    "event": c.event,
                                    "next": c.next,
                                    "goto": c.goto,
                                }
                                for c in node.choices
                            ],
                        }
                        for node in n.nodes
                    ],
                }
                for n in self.npcs
            ],
            "goal_nets": self._net_docs,
            "root_net": self._root_net,
        }

    def __eq__(self, other):
        if not isinstance(other, Scenario):
            return NotImplemented
        return self.to_doc() == other.to_doc()


def render_scenario(scenario: Scenario) -> str:
    return yaml.safe_dump(scenario.to_doc(), sort_keys=False, allow_unicode=True)


# -- building ------------------------------------------------------------------


class _Collector:
    def __init__(self):
        self.findings: list[Finding] = []
        self.first_error_exc: PtaError | None = None

    def error(self, path: str, message: str, exc: PtaError | None = None):
        self.findings.append(Finding("error", path, message))
        if self.first_error_exc is None:
            self.first_error_exc = exc or DanglingReference(path, message)

    def warn(self, path: str, message: str):
        self.findings.append(Finding("warning", path, message))

    @property
    def has_errors(self) -> bool:
        return any(f.level == "error" for f in self.findings)


def _as_doc(source: Any) -> Any:
    """Accept a path, YAML text, or an already-parsed mapping."""
    if isinstance(source, Mapping):
        return source
    if isinstance(source, str) and (os.path.sep in source or source.endswith((".yaml", ".yml"))) \
            and os.path.exists(source):
        with open(source, "r", encoding="utf-8") as fh:
            return yaml.safe_load(fh)
    if isinstance(source, str):
        return yaml.safe_load(source)
    raise SchemaError(f"cannot read scenario from {type(source).__name__}")


def _build(doc: Any, col: _Collector) -> Scenario | None:
    if not isinstance(doc, Mapping) or not doc:
        col.error("$", "scenario document must be a non-empty mapping",
                  SchemaError("scenario document must be a non-empty mapping"))
        return None
    if doc.get("schema") != SCHEMA_VERSION:
        col.error("schema", f"expected schema {SCHEMA_VERSION}, got {doc.get('schema')!r}",
                  SchemaError(f"unsupported schema {doc.get('schema')!r}"))
        return None

    meta = doc.get("meta") or {}
    raw_config = doc.get("config") or {}

    try:
        squash_raw = raw_config.get("squash") or {}
        fixed_raw = raw_config.get("fixed_point") or {}
        bands_raw = raw_config.get("intensity_bands") or {}
        pres_raw = raw_config.get("default_presentation") or {}
        config = ScenarioConfig(
            idle_timeout_ms=int(raw_config.get("idle_timeout_ms", 300_000)),
            batch_limit=int(raw_config.get("batch_limit", 8)),
            cycle_ms=int(raw_config.get("cycle_ms", 5000)),
            cycle_limit=int(raw_config.get("cycle_limit", 10_000)),
            session_expiry_ms=int(raw_config.get("session_expiry_ms", 3_600_000)),
            theta_motivation=float(raw_config.get("theta_motivation", 0.5)),
            theta_ability=float(raw_config.get("theta_ability", 0.5)),
            squash=SquashSpec(
                kind=str(squash_raw.get("kind", "sigmoid")),
                lam=float(squash_raw.get("lam", 1.0)),
                threshold=float(squash_raw.get("threshold", 0.5)),
            ),
            fixed_point_tol=float(fixed_raw.get("tol", 1e-6)),
            fixed_point_max_iter=int(fixed_raw.get("max_iter", 1000)),
            band_moderate=float(bands_raw.get("moderate", 0.5)),
            band_high=float(bands_raw.get("high", 0.75)),
            default_emotion=str(pres_raw.get("emotion", "neutral")),
            default_animation=str(pres_raw.get("animation", "idle")),
            greeter_npc=str(raw_config.get("greeter_npc", "")),
            success_animation=str(raw_config.get("success_animation", "revival")),
            success_speech=str(raw_config.get("success_speech",
                                              "You taught me well!")),
            retry_speech=str(raw_config.get(
                "retry_speech",
                "I understand it's not easy. But can you teach me again?")),
        )
    except (TypeError, ValueError, SchemaError) as exc:
        col.error("config", str(exc), SchemaError(f"config: {exc}"))
        return None
    for field_name, value in (("idle_timeout_ms", config.idle_timeout_ms),
                              ("batch_limit", config.batch_limit),
                              ("cycle_ms", config.cycle_ms),
                              ("cycle_limit", config.cycle_limit)):
        if value <= 0:
            col.error(f"config.{field_name}", "must be positive",
                      SchemaError(f"config.{field_name} must be positive"))

    # -- event catalog
    events: dict[str, list[str]] = {}
    for category, names in (doc.get("events") or {}).items():
        events[str(category)] = [str(n) for n in (names or [])]
    all_names = [n for ns in events.values() for n in ns]
    if not all_names:
        col.error("events", "event catalog is empty",
                  SchemaError("event catalog is empty"))
    if len(set(all_names)) != len(all_names):
        dupes = sorted({n for n in all_names if all_names.count(n) > 1})
        col.error("events", f"event names must be unique across categories: {dupes}",
                  SchemaError(f"duplicate event names: {dupes}"))
    known_events = set(all_names)

    # -- roles
    roles = {str(k): str(v) for k, v in (doc.get("roles") or {}).items()}
    for role_name in REQUIRED_ROLES:
        if role_name not in roles:
            col.error(f"roles.{role_name}", "required role missing")
        elif roles[role_name] not in known_events:
            col.error(f"roles.{role_name}",
                      f"event {roles[role_name]!r} not in catalog")

    # -- routing
    routing = {str(k): str(v) for k, v in (doc.get("routing") or {}).items()}
    for event, target in routing.items():
        if event not in known_events:
            col.error(f"routing.{event}", "event not in catalog")
        if target not in REASONINGS:
            col.error(f"routing.{event}", f"unknown reasoning {target!r}")
    for event in all_names:
        if event not in routing:
            col.warn(f"routing.{event}",
                     "event has no routing entry; it will raise UnroutedEvent if polled")

    # -- cue catalogs
    cues = CueCatalogs()
    raw_cues = doc.get("cues") or {}
    for raw in raw_cues.get("expert_hints") or []:
        cues.expert_hints.append(ExpertHint(
            id=str(raw["id"]), topic=str(raw.get("topic", "")), text=str(raw["text"])))
    for raw in raw_cues.get("attractive_sources") or []:
        cues.attractive_sources.append(AttractiveSource(
            id=str(raw["id"]), persona=str(raw.get("persona", "")), text=str(raw["text"])))
    for raw in raw_cues.get("affects") or []:
        cues.affects.append(Affect(
            id=str(raw["id"]), emotion=str(raw["emotion"]),
            animation=str(raw["animation"]), text=str(raw["text"])))
    cue_ids = cues.all_ids()
    if len(set(cue_ids)) != len(cue_ids):
        col.error("cues", "cue ids must be unique across catalogs")

    presentation_assets = [str(a) for a in (doc.get("presentation_assets") or [])]
    for affect in cues.affects:
        if affect.animation not in presentation_assets:
            col.error(f"cues.affects.{affect.id}",
                      f"animation {affect.animation!r} not in presentation_assets")
    if config.default_animation not in presentation_assets:
        col.error("config.default_presentation",
                  f"animation {config.default_animation!r} not in presentation_assets")
    if config.success_animation not in presentation_assets:
        col.error("config.success_animation",
                  f"animation {config.success_animation!r} not in presentation_assets")

    # -- persuasion model
    raw_fcm = doc.get("fcm") or {}
    leaf_bindings: dict[str, LeafBinding] = {}
    for event, raw in (raw_fcm.get("leaves") or {}).items():
        event = str(event)
        if event not in known_events:
            col.error(f"fcm.leaves.{event}", "event not in catalog")
        try:
            leaf_bindings[event] = LeafBinding(
                factor=str(raw["factor"]), weight=float(raw["weight"]))
        except (KeyError, TypeError, ValueError) as exc:
            col.error(f"fcm.leaves.{event}", f"bad binding: {exc}",
                      SchemaError(f"fcm.leaves.{event}: {exc}"))
    cue_weights = {
        str(k): float(v) for k, v in (raw_fcm.get("cue_weights") or {}).items()
    }
    for cue_id in cue_weights:
        if cue_id not in set(cue_ids):
            col.error(f"fcm.cue_weights.{cue_id}", "cue id not in any catalog")

    fcm_model: PersuasiveFcm | None = None
    try:
        stem_weights = np.asarray((raw_fcm.get("stem") or {}).get("weights"), dtype=float)
        stem = FcmModel(concepts=list(STEM_CONCEPTS), weights=stem_weights,
                        squash=config.squash)
        fcm_model = PersuasiveFcm(
            leaf_bindings=leaf_bindings,
            cue_weights=cue_weights,
            stem=stem,
            theta_motivation=config.theta_motivation,
            theta_ability=config.theta_ability,
            tol=config.fixed_point_tol,
            max_iter=config.fixed_point_max_iter,
        )
    except (PtaError, TypeError, ValueError) as exc:
        wrapped = exc if isinstance(exc, PtaError) else SchemaError(f"fcm.stem: {exc}")
        col.error("fcm", str(exc), wrapped)
    else:
        bound_factors = {b.factor for b in leaf_bindings.values()}
        for factor in FACTORS:
            if factor not in bound_factors:
                col.warn("fcm.leaves", f"factor {factor} has no bound events")

    # -- learning stages
    learning_stages: list[LearningStage] = []
    for i, raw in enumerate(doc.get("learning_stages") or []):
        stage = LearningStage(topic=str(raw["topic"]),
                              done_when=tuple(str(e) for e in raw.get("done_when") or ()))
        for event in stage.done_when:
            if event not in known_events:
                col.error(f"learning_stages[{i}]", f"event {event!r} not in catalog")
        learning_stages.append(stage)

    # -- concept maps
    concept_maps: dict[str, ConceptMapTemplate] = {}
    for raw in doc.get("concept_maps") or []:
        try:
            template = ConceptMapTemplate(
                id=str(raw["id"]),
                prompt=str(raw.get("prompt", "")),
                slots=[Slot(id=str(s["id"]), context=str(s.get("context", "")))
                       for s in raw.get("slots") or []],
                labels=[str(l) for l in raw.get("labels") or []],
                key={str(k): str(v) for k, v in (raw.get("key") or {}).items()},
            )
            concept_maps[template.id] = template
        except (PtaError, KeyError, TypeError) as exc:
            wrapped = exc if isinstance(exc, PtaError) else SchemaError(str(exc))
            col.error(f"concept_maps.{raw.get('id')}", str(exc), wrapped)
    default_map = str(doc.get("default_concept_map") or "")
    if default_map and default_map not in concept_maps:
        col.error("default_concept_map", f"unknown template {default_map!r}")
    if not default_map and concept_maps:
        default_map = next(iter(concept_maps))

    # -- scenes and NPCs
    scenes = [str(s) for s in (doc.get("scenes") or [])]
    start_scene = str(doc.get("start_scene") or (scenes[0] if scenes else ""))
    if scenes and start_scene not in scenes:
        col.error("start_scene", f"{start_scene!r} not in scenes")

    npcs: list[NpcScript] = []
    dt_events = {e for e, b in leaf_bindings.items() if b.factor == "DT"}
    for raw in doc.get("npcs") or []:
        npc_id = str(raw.get("id"))
        path = f"npcs.{npc_id}"
        nodes: list[NpcNode] = []
        for raw_node in raw.get("nodes") or []:
            choices = tuple(
                NpcChoice(
                    text=str(c["text"]),
                    event=(str(c["event"]) if c.get("event") else None),
                    next=str(c.get("next", "end")),
                    goto=(str(c["goto"]) if c.get("goto") else None),
                )
                for c in raw_node.get("choices") or []
            )
            nodes.append(NpcNode(id=str(raw_node["id"]), line=str(raw_node.get("line", "")),
                                 choices=choices))
        npc = NpcScript(
            id=npc_id,
            name=str(raw.get("name", npc_id)),
            scene=str(raw.get("scene", "")),
            start=str(raw.get("start") or (nodes[0].id if nodes else "")),
            nodes=nodes,
            distracter=bool(raw.get("distracter", False)),
        )
        node_ids = {n.id for n in npc.nodes}
        if npc.scene not in scenes:
            col.error(path, f"scene {npc.scene!r} not declared")
        if npc.start not in node_ids:
            col.error(path, f"start node {npc.start!r} missing")
        reachable = set()
        frontier = [npc.start] if npc.start in node_ids else []
        while frontier:
            node_id = frontier.pop()
            if node_id in reachable:
                continue
            reachable.add(node_id)
            for choice in npc.node(node_id).choices:
                if choice.next != "end":
                    if choice.next not in node_ids:
                        col.error(path, f"choice target {choice.next!r} missing")
                    else:
                        frontier.append(choice.next)
        unreachable = sorted(node_ids - reachable)
        if unreachable:
            col.error(path, f"unreachable dialogue nodes: {unreachable}")
        for node in npc.nodes:
            for choice in node.choices:
                if choice.event and choice.event not in known_events:
                    col.error(path, f"choice event {choice.event!r} not in catalog")
                if choice.goto and choice.goto not in scenes:
                    col.error(path, f"choice goto {choice.goto!r} not a scene")
                if npc.distracter and choice.event and choice.event not in dt_events:
                    col.error(path,
                              f"distracter NPC emits non-distraction event {choice.event!r}")
        npcs.append(npc)
    if config.greeter_npc and config.greeter_npc not in {n.id for n in npcs}:
        col.error("config.greeter_npc", f"unknown npc {config.greeter_npc!r}")

    # -- goal nets
    net_docs = doc.get("goal_nets") or {}
    root_net = str(doc.get("root_net", "main"))
    library: GoalNetLibrary | None = None
    try:
        library = load_goal_net_library(net_docs, root_net)
    except (GraphError, SchemaError) as exc:
        col.error("goal_nets", str(exc), exc)
    if library is not None:
        for net in library.iter_nets():
            for t in net.transitions:
                for task in t.tasks:
                    if task not in TASK_FUNCTIONS:
                        col.error(f"goal_nets.{net.id}.{t.id}",
                                  f"unknown task function {task!r}")
                for guard in t.guards:
                    if guard.when not in GUARD_PREDICATES:
                        col.error(f"goal_nets.{net.id}.{t.id}",
                                  f"unknown guard predicate {guard.when!r}")

    # -- reachability-style cue warnings
    persuasion_routed = any(target == "Persuasion" for target in routing.values())
    if persuasion_routed:
        if not cues.affects:
            col.warn("cues.affects",
                     "persuasion is routable but the affect catalog is empty")
        if not cues.attractive_sources:
            col.warn("cues.attractive_sources",
                     "persuasion is routable but the attractive-source catalog is empty")
        if not cues.expert_hints:
            col.warn("cues.expert_hints",
                     "persuasion is routable but the expert-hint catalog is empty")

    if col.has_errors or fcm_model is None or library is None:
        return None

    return Scenario(
        name=str(meta.get("name", "")),
        version=str(meta.get("version", "")),
        config=config,
        events=events,
        roles=roles,
        routing=routing,
        fcm=fcm_model,
        cues=cues,
        learning_stages=learning_stages,
        concept_maps=concept_maps,
        default_concept_map=default_map,
        scenes=scenes,
        start_scene=start_scene,
        npcs=npcs,
        goal_nets=library,
        presentation_assets=presentation_assets,
        _net_docs={k: dict(v) for k, v in net_docs.items()},
        _root_net=root_net,
    )


def load_scenario(source: Any) -> Scenario:
    """Parse, build and fully validate a scenario document.

    Raises SchemaError for malformed documents, GraphError for broken goal
    nets and DanglingReference for unresolved cross-references.
    """
    doc = _as_doc(source)
    col = _Collector()
    scenario = _build(doc, col)
    if scenario is None:
        assert col.first_error_exc is not None
        raise col.first_error_exc
    return scenario


def validate_scenario(source: Any) -> list[Finding]:
    """Return every finding for a document (or an already-built scenario).

    An empty list means the scenario is clean; warnings do not block load.
    """
    if isinstance(source, Scenario):
        doc = source.to_doc()
    else:
        doc = _as_doc(source)
    col = _Collector()
    _build(doc, col)
    return col.findings


def builtin_scenario_path(name: str) -> str:
    """Path of a scenario shipped inside the package (e.g. 'vs_saga')."""
    here = os.path.dirname(__file__)
    return os.path.join(here, "data", f"{name}.yaml")
