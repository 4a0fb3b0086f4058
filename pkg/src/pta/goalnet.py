"""Hierarchical goal net model and interpreter.

A goal net is a bipartite graph of states and transitions. Transitions
carry ordered task lists executed through a registry when they fire.
Composite states call into subnets: entering one pushes a call-stack
entry and activates the subnet root; the composite's own outgoing
transitions only become enabled once its subnet has halted.

advance() is a run-to-quiescence microstep loop. A task returns WAIT to
signal "block until an external event arrives", which stops the loop
without moving any token.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Iterator, Mapping

from . import rng
from .errors import (
    CycleLimit,
    GraphError,
    GuardUnmatched,
    NotEnabled,
    SchemaError,
    UnknownTask,
)

TRANSITION_KINDS = ("direct", "conditional", "probabilistic")

PROBABILITY_TOL = 1e-9


class _Wait:
    def __repr__(self):
        return "WAIT"


#: Returned by a task function to park the interpreter until the next cycle.
WAIT = _Wait()


@dataclass(frozen=True)
class Arc:
    id: str
    src: str
    dst: str


@dataclass(frozen=True)
class GoalState:
    id: str
    kind: str = "atomic"  # atomic | composite
    label: str = ""
    subnet: str | None = None


@dataclass(frozen=True)
class Guard:
    when: str  # predicate name in the registry
    arc: str  # output arc id


@dataclass(frozen=True)
class Transition:
    id: str
    kind: str = "direct"
    tasks: tuple[str, ...] = ()
    guards: tuple[Guard, ...] = ()
    weights: tuple[tuple[str, float], ...] = ()  # (arc id, probability)
    default_arc: str | None = None
    fanout: bool = False


@dataclass
class GoalNet:
    """One validated net. Composition is resolved by GoalNetLibrary."""

    id: str
    root: str
    states: list[GoalState]
    arcs: list[Arc]
    transitions: list[Transition]

    def __post_init__(self):
        self._state_by_id = {s.id: s for s in self.states}
        self._trans_by_id = {t.id: t for t in self.transitions}
        self._inputs: dict[str, list[str]] = {t.id: [] for t in self.transitions}
        self._outputs: dict[str, list[Arc]] = {t.id: [] for t in self.transitions}
        for arc in self.arcs:
            if arc.src in self._trans_by_id:
                self._outputs[arc.src].append(arc)
            if arc.dst in self._trans_by_id:
                self._inputs[arc.dst].append(arc.src)
        self._terminals = {
            s.id
            for s in self.states
            if not any(a.src == s.id for a in self.arcs)
        }

    @property
    def subnets(self) -> dict[str, str]:
        """Map composite state id -> subnet net id."""
        return {s.id: s.subnet for s in self.states if s.kind == "composite"}

    def state(self, state_id: str) -> GoalState:
        return self._state_by_id[state_id]

    def transition(self, transition_id: str) -> Transition:
        return self._trans_by_id[transition_id]

    def inputs(self, transition_id: str) -> list[str]:
        return self._inputs[transition_id]

    def outputs(self, transition_id: str) -> list[Arc]:
        return self._outputs[transition_id]

    def is_terminal(self, state_id: str) -> bool:
        return state_id in self._terminals


def _require(cond: bool, message: str):
    if not cond:
        raise GraphError(message)


def _check_id(value: Any, where: str) -> str:
    if not isinstance(value, str) or not value or not value.isascii():
        raise SchemaError(f"{where}: ids must be non-empty ASCII strings, got {value!r}")
    return value


def _parse_arc(raw: Any, index: int) -> tuple[str, str]:
    if isinstance(raw, str):
        parts = [p.strip() for p in raw.split("->")]
        if len(parts) != 2 or not all(parts):
            raise SchemaError(f"arcs[{index}]: expected 'src -> dst', got {raw!r}")
        return parts[0], parts[1]
    if isinstance(raw, Mapping):
        try:
            return str(raw["from"]), str(raw["to"])
        except KeyError as exc:
            raise SchemaError(f"arcs[{index}]: missing {exc}") from None
    raise SchemaError(f"arcs[{index}]: expected string or mapping")


def load_goal_net(doc: Any, net_id: str = "") -> GoalNet:
    """Build and validate a single net from a parsed document fragment.

    Cross-net rules (subnet existence, acyclic composition) live in
    GoalNetLibrary; everything local to one net is enforced here.
    """
    if not isinstance(doc, Mapping):
        raise SchemaError("goal net document must be a mapping")
    net_id = _check_id(doc.get("id", net_id) or net_id, "net")
    if "states" not in doc or "root" not in doc:
        raise SchemaError(f"net {net_id!r}: 'states' and 'root' are required")

    states: list[GoalState] = []
    for i, raw in enumerate(doc.get("states") or []):
        if not isinstance(raw, Mapping):
            raise SchemaError(f"net {net_id!r}: states[{i}] must be a mapping")
        sid = _check_id(raw.get("id"), f"net {net_id!r} states[{i}]")
        subnet = raw.get("subnet")
        kind = raw.get("kind") or ("composite" if subnet else "atomic")
        if kind not in ("atomic", "composite"):
            raise SchemaError(f"state {sid!r}: unknown kind {kind!r}")
        if kind == "composite" and not subnet:
            raise GraphError(f"composite state {sid!r} has no subnet")
        if kind == "atomic" and subnet:
            raise GraphError(f"atomic state {sid!r} must not declare a subnet")
        states.append(GoalState(id=sid, kind=kind, label=str(raw.get("label", "")),
                                subnet=subnet))

    state_ids = [s.id for s in states]
    _require(len(set(state_ids)) == len(state_ids), f"net {net_id!r}: duplicate state ids")

    raw_transitions = doc.get("transitions") or []
    trans_ids = []
    for i, raw in enumerate(raw_transitions):
        if not isinstance(raw, Mapping):
            raise SchemaError(f"net {net_id!r}: transitions[{i}] must be a mapping")
        trans_ids.append(_check_id(raw.get("id"), f"net {net_id!r} transitions[{i}]"))
    _require(len(set(trans_ids)) == len(trans_ids), f"net {net_id!r}: duplicate transition ids")
    _require(not set(trans_ids) & set(state_ids), f"net {net_id!r}: state/transition id collision")

    known = set(state_ids) | set(trans_ids)
    arcs: list[Arc] = []
    seen_pairs = set()
    for i, raw in enumerate(doc.get("arcs") or []):
        src, dst = _parse_arc(raw, i)
        _require(src in known, f"net {net_id!r}: arc source {src!r} does not exist")
        _require(dst in known, f"net {net_id!r}: arc target {dst!r} does not exist")
        src_is_state = src in set(state_ids)
        dst_is_state = dst in set(state_ids)
        _require(src_is_state != dst_is_state,
                 f"net {net_id!r}: arc {src!r}->{dst!r} must connect a state and a transition")
        _require((src, dst) not in seen_pairs, f"net {net_id!r}: duplicate arc {src!r}->{dst!r}")
        seen_pairs.add((src, dst))
        arcs.append(Arc(id=f"{src}->{dst}", src=src, dst=dst))

    arcs_by_src: dict[str, list[Arc]] = {}
    for arc in arcs:
        arcs_by_src.setdefault(arc.src, []).append(arc)

    transitions: list[Transition] = []
    for raw in raw_transitions:
        tid = str(raw["id"])
        kind = raw.get("kind", "direct")
        if kind not in TRANSITION_KINDS:
            raise SchemaError(f"transition {tid!r}: unknown kind {kind!r}")
        outputs = arcs_by_src.get(tid, [])
        inputs = [a for a in arcs if a.dst == tid]
        _require(inputs, f"transition {tid!r} has no input arc")
        _require(outputs, f"transition {tid!r} has no output arc")
        out_by_target = {a.dst: a for a in outputs}

        tasks = tuple(str(t) for t in raw.get("tasks") or ())
        guards: tuple[Guard, ...] = ()
        weights: tuple[tuple[str, float], ...] = ()
        default_arc = None
        fanout = bool(raw.get("fanout", False))

        if kind == "direct":
            _require(not raw.get("guards") and not raw.get("weights"),
                     f"direct transition {tid!r} must not carry guards or weights")
            if fanout:
                _require(len(outputs) >= 1, f"fanout transition {tid!r} needs outputs")
            else:
                # An unguarded multi-output direct transition is ambiguous
                # (implicit choice); fan-out must be declared explicitly.
                _require(len(outputs) == 1,
                         f"direct transition {tid!r} must have exactly one output arc")
        elif kind == "conditional":
            raw_guards = raw.get("guards") or []
            _require(len(raw_guards) >= 1, f"conditional transition {tid!r} needs guards")
            seen_arcs = set()
            built = []
            for g in raw_guards:
                target = str(g["to"])
                _require(target in out_by_target,
                         f"transition {tid!r}: guard target {target!r} is not an output")
                arc_id = out_by_target[target].id
                _require(arc_id not in seen_arcs,
                         f"transition {tid!r}: guards must reference distinct arcs")
                seen_arcs.add(arc_id)
                built.append(Guard(when=str(g["when"]), arc=arc_id))
            guards = tuple(built)
            if raw.get("default") is not None:
                target = str(raw["default"])
                _require(target in out_by_target,
                         f"transition {tid!r}: default target {target!r} is not an output")
                default_arc = out_by_target[target].id
        else:  # probabilistic
            raw_weights = raw.get("weights") or []
            _require(raw_weights, f"probabilistic transition {tid!r} needs weights")
            built_w = []
            seen_arcs = set()
            for w in raw_weights:
                target = str(w["to"])
                p = float(w["p"])
                _require(p >= 0.0, f"transition {tid!r}: negative probability")
                _require(target in out_by_target,
                         f"transition {tid!r}: weight target {target!r} is not an output")
                arc_id = out_by_target[target].id
                _require(arc_id not in seen_arcs,
                         f"transition {tid!r}: weights must reference distinct arcs")
                seen_arcs.add(arc_id)
                built_w.append((arc_id, p))
            total = sum(p for _, p in built_w)
            _require(abs(total - 1.0) <= PROBABILITY_TOL,
                     f"transition {tid!r}: probabilities sum to {total}, expected 1")
            weights = tuple(built_w)

        transitions.append(Transition(id=tid, kind=kind, tasks=tasks, guards=guards,
                                      weights=weights, default_arc=default_arc,
                                      fanout=fanout))

    root = doc["root"]
    _require(root in set(state_ids), f"net {net_id!r}: root {root!r} is not a state")

    # every state must be reachable from the root
    reachable = {root}
    frontier = [root]
    succ: dict[str, list[str]] = {}
    for arc in arcs:
        succ.setdefault(arc.src, []).append(arc.dst)
    while frontier:
        node = frontier.pop()
        for nxt in succ.get(node, ()):
            if nxt not in reachable:
                reachable.add(nxt)
                frontier.append(nxt)
    unreachable = [s for s in state_ids if s not in reachable]
    _require(not unreachable,
             f"net {net_id!r}: states unreachable from root: {unreachable}")

    return GoalNet(id=net_id, root=root, states=states, arcs=arcs,
                   transitions=transitions)


class GoalNetLibrary:
    """A root net plus its subnets, validated as a whole.

    State and transition ids must be unique across the library so the
    interpreter can keep a single flat active set.
    """

    def __init__(self, nets: Mapping[str, GoalNet], root_net: str):
        self.nets: dict[str, GoalNet] = dict(nets)
        self.root_net = root_net
        _require(root_net in self.nets, f"root net {root_net!r} not in library")

        seen: dict[str, str] = {}
        for net in self.nets.values():
            for node_id in [s.id for s in net.states] + [t.id for t in net.transitions]:
                _require(node_id not in seen,
                         f"id {node_id!r} appears in both {seen.get(node_id)!r} and {net.id!r}")
                seen[node_id] = net.id

        used_by: dict[str, str] = {}
        for net in self.nets.values():
            for state in net.states:
                if state.kind != "composite":
                    continue
                _require(state.subnet in self.nets,
                         f"composite {state.id!r} references unknown subnet {state.subnet!r}")
                _require(state.subnet != root_net,
                         f"composite {state.id!r} must not call the root net")
                _require(state.subnet not in used_by,
                         f"subnet {state.subnet!r} used by both {used_by.get(state.subnet)!r} "
                         f"and {state.id!r}")
                used_by[state.subnet] = state.id

        # composition graph must be acyclic
        color: dict[str, int] = {}

        def visit(net_id: str, path: tuple[str, ...]):
            if color.get(net_id) == 1:
                raise GraphError(f"recursive composition: {' -> '.join(path + (net_id,))}")
            if color.get(net_id) == 2:
                return
            color[net_id] = 1
            for subnet in self.nets[net_id].subnets.values():
                visit(subnet, path + (net_id,))
            color[net_id] = 2

        visit(root_net, ())

        self._net_of: dict[str, str] = seen
        self._state_ids = {s.id for net in self.nets.values() for s in net.states}

    def net_of(self, node_id: str) -> GoalNet:
        return self.nets[self._net_of[node_id]]

    def transition(self, transition_id: str) -> Transition:
        return self.net_of(transition_id).transition(transition_id)

    def iter_nets(self) -> Iterator[GoalNet]:
        return iter(self.nets.values())


def load_goal_net_library(docs: Mapping[str, Any], root_net: str) -> GoalNetLibrary:
    nets = {nid: load_goal_net(doc, net_id=nid) for nid, doc in docs.items()}
    return GoalNetLibrary(nets, root_net)


class TaskRegistry:
    """Immutable name -> callable bindings for tasks and guard predicates."""

    def __init__(
        self,
        tasks: Mapping[str, Callable[[Any], Any]] | None = None,
        predicates: Mapping[str, Callable[[Any], bool]] | None = None,
    ):
        self._tasks = dict(tasks or {})
        self._predicates = dict(predicates or {})

    def task(self, name: str) -> Callable[[Any], Any]:
        try:
            return self._tasks[name]
        except KeyError:
            raise UnknownTask(f"task {name!r} is not bound") from None

    def predicate(self, name: str) -> Callable[[Any], bool]:
        try:
            return self._predicates[name]
        except KeyError:
            raise UnknownTask(f"predicate {name!r} is not bound") from None

    def task_names(self) -> frozenset[str]:
        return frozenset(self._tasks)

    def predicate_names(self) -> frozenset[str]:
        return frozenset(self._predicates)


@dataclass
class CallEntry:
    composite: str
    subnet: str


@dataclass
class InterpreterFrame:
    """Single-owner execution state over one library."""

    net: str
    active: set[str]
    call_stack: list[CallEntry]
    seed: int
    rng_state: int
    trace: list[str] = field(default_factory=list)
    completed: set[str] = field(default_factory=set)  # composites whose subnet halted
    waiting: bool = False

    def clone(self) -> "InterpreterFrame":
        return InterpreterFrame(
            net=self.net,
            active=set(self.active),
            call_stack=[CallEntry(e.composite, e.subnet) for e in self.call_stack],
            seed=self.seed,
            rng_state=self.rng_state,
            trace=list(self.trace),
            completed=set(self.completed),
            waiting=self.waiting,
        )


class Interpreter:
    """Executes frames over a fixed library and task registry.

    The library and registry are immutable after construction and safe to
    share; each frame must be driven by a single owner.
    """

    def __init__(self, library: GoalNetLibrary, registry: TaskRegistry,
                 cycle_limit: int = 10_000):
        self.library = library
        self.registry = registry
        self.cycle_limit = cycle_limit

    def new_frame(self, seed: int = 0) -> InterpreterFrame:
        root = self.library.nets[self.library.root_net]
        return InterpreterFrame(
            net=self.library.root_net,
            active={root.root},
            call_stack=[],
            seed=seed,
            rng_state=seed & ((1 << 64) - 1),
        )

    # -- hierarchy stepping ---------------------------------------------

    def _busy_composites(self, frame: InterpreterFrame) -> set[str]:
        return {entry.composite for entry in frame.call_stack}

    def _enter_composites(self, frame: InterpreterFrame) -> bool:
        progress = False
        busy = self._busy_composites(frame)
        for net in self.library.iter_nets():
            for state in net.states:
                if (state.kind == "composite" and state.id in frame.active
                        and state.id not in busy and state.id not in frame.completed):
                    subnet = self.library.nets[state.subnet]
                    frame.call_stack.append(CallEntry(state.id, subnet.id))
                    frame.active.add(subnet.root)
                    busy.add(state.id)
                    progress = True
        return progress

    def _return_composites(self, frame: InterpreterFrame) -> bool:
        progress = False
        for entry in list(reversed(frame.call_stack)):
            subnet = self.library.nets[entry.subnet]
            local = [s.id for s in subnet.states if s.id in frame.active]
            if local and all(subnet.is_terminal(s) for s in local):
                inner_busy = self._busy_composites(frame) & set(local)
                if inner_busy:
                    continue
                for sid in local:
                    frame.active.discard(sid)
                    frame.completed.discard(sid)
                frame.call_stack.remove(entry)
                frame.completed.add(entry.composite)
                progress = True
        return progress

    def _step_hierarchy(self, frame: InterpreterFrame) -> bool:
        entered = self._enter_composites(frame)
        returned = self._return_composites(frame)
        return entered or returned

    # -- enabling and firing ----------------------------------------------

    def is_enabled(self, frame: InterpreterFrame, transition_id: str) -> bool:
        net = self.library.net_of(transition_id)
        inputs = net.inputs(transition_id)
        for sid in inputs:
            if sid not in frame.active:
                return False
            if net.state(sid).kind == "composite" and sid not in frame.completed:
                return False
        return True

    def _first_enabled(self, frame: InterpreterFrame) -> Transition | None:
        for net in self.library.iter_nets():
            for t in net.transitions:
                if self.is_enabled(frame, t.id):
                    return t
        return None

    def _select_arcs(self, frame: InterpreterFrame, net: GoalNet,
                     transition: Transition, ctx: Any) -> list[Arc]:
        outputs = {a.id: a for a in net.outputs(transition.id)}
        if transition.kind == "direct":
            return list(net.outputs(transition.id))
        if transition.kind == "conditional":
            for guard in transition.guards:
                if self.registry.predicate(guard.when)(ctx):
                    return [outputs[guard.arc]]
            if transition.default_arc is not None:
                return [outputs[transition.default_arc]]
            raise GuardUnmatched(
                f"transition {transition.id!r}: no guard matched and no default arc"
            )
        # probabilistic: one seeded draw walks the cumulative weights
        frame.rng_state, u = rng.next_uniform(frame.rng_state)
        acc = 0.0
        chosen = transition.weights[-1][0]
        for arc_id, p in transition.weights:
            acc += p
            if u < acc:
                chosen = arc_id
                break
        return [outputs[chosen]]

    def fire_transition(self, frame: InterpreterFrame,
                        transition: Transition | str, ctx: Any) -> InterpreterFrame:
        tid = transition if isinstance(transition, str) else transition.id
        net = self.library.net_of(tid)
        t = net.transition(tid)
        if not self.is_enabled(frame, tid):
            raise NotEnabled(f"transition {tid!r}: an input state is not active")

        frame.waiting = False
        for name in t.tasks:
            if self.registry.task(name)(ctx) is WAIT:
                frame.waiting = True
                return frame

        selected = self._select_arcs(frame, net, t, ctx)
        for sid in net.inputs(tid):
            frame.active.discard(sid)
            frame.completed.discard(sid)
        for arc in selected:
            frame.active.add(arc.dst)
        frame.trace.append(tid)
        return frame

    # -- driving -----------------------------------------------------------

    def advance(self, frame: InterpreterFrame, ctx: Any) -> bool:
        """Fire enabled transitions until quiescence or a WAIT signal.

        Returns True when the root net's terminal state is the sole
        active state.
        """
        frame.waiting = False
        fired = 0
        while True:
            progress = self._step_hierarchy(frame)
            t = self._first_enabled(frame)
            if t is None:
                if progress:
                    continue
                break
            self.fire_transition(frame, t, ctx)
            if frame.waiting:
                break
            fired += 1
            if fired > self.cycle_limit:
                raise CycleLimit(
                    f"more than {self.cycle_limit} firings in one advance; "
                    f"model appears livelocked"
                )
        return self.is_halted(frame)

    def is_halted(self, frame: InterpreterFrame) -> bool:
        if frame.call_stack or len(frame.active) != 1:
            return False
        (sid,) = frame.active
        root = self.library.nets[self.library.root_net]
        return sid in {s.id for s in root.states} and root.is_terminal(sid)

    def replay(self, trace: list[str], seed: int, ctx: Any) -> InterpreterFrame:
        """Re-fire a recorded trace on a fresh frame.

        With the same seed and an equivalent ctx this reproduces the
        original active set exactly.
        """
        frame = self.new_frame(seed)
        for tid in trace:
            while self._step_hierarchy(frame):
                pass
            self.fire_transition(frame, tid, ctx)
        while self._step_hierarchy(frame):
            pass
        return frame
