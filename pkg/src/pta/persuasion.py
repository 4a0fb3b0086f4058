"""ELM-grounded persuasion map over motivation, ability and peripheral cue.

Environment events are leaf nodes latched to 1 once the learner takes part
in them. Each leaf is bound to exactly one factor: personal relevance (RL),
personal responsibility (RS) or need for cognition (NC) feed motivation;
prior knowledge (PK), distraction (DT) and repetition (RP) feed ability.
Executed persuasion cues pulse indicator nodes that feed the peripheral-cue
concept for one calculation.

Because the leaves stay latched, they inject their aggregate into the
three stem concepts on *every* iteration step:

    stem(t+1) = f(leaf_aggregate + stem(t) @ stem_weights)

The stem carries no additive self term; with one, the three-node map is a
contraction whose fixed point ignores the leaves entirely, which would
make the assessment blind to everything the learner does.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .errors import SchemaError, UnboundEvent
from .fcm import FcmModel

MOTIVATION_FACTORS = ("RL", "RS", "NC")
ABILITY_FACTORS = ("PK", "DT", "RP")
FACTORS = MOTIVATION_FACTORS + ABILITY_FACTORS

STEM_CONCEPTS = ["Motivation", "Ability", "PeripheralCue"]

CUE_SETS = ("EH", "AS", "AF")  # expert hints, attractive sources, affects


@dataclass(frozen=True)
class LeafBinding:
    factor: str
    weight: float


@dataclass
class PersuasiveFcm:
    """Authored persuasion model: bindings, cue weights, stem matrix, baselines."""

    leaf_bindings: dict[str, LeafBinding]
    cue_weights: dict[str, float]  # cue id -> indicator weight
    stem: FcmModel  # 3x3 over [Motivation, Ability, PeripheralCue]
    theta_motivation: float = 0.5
    theta_ability: float = 0.5
    tol: float = 1e-6
    max_iter: int = 1000

    def __post_init__(self):
        if self.stem.concepts != STEM_CONCEPTS:
            raise SchemaError(f"stem concepts must be {STEM_CONCEPTS}")
        for event, binding in self.leaf_bindings.items():
            if binding.factor not in FACTORS:
                raise SchemaError(f"leaf {event!r}: unknown factor {binding.factor!r}")
            if binding.factor == "DT":
                if binding.weight > 0:
                    raise SchemaError(f"leaf {event!r}: distracter weights must be <= 0")
            elif binding.weight < 0:
                raise SchemaError(f"leaf {event!r}: {binding.factor} weights must be >= 0")
        for cue_id, weight in self.cue_weights.items():
            if weight < 0:
                raise SchemaError(f"cue {cue_id!r}: indicator weight must be >= 0")

    def factor_events(self, factor: str) -> list[tuple[str, float]]:
        """Weight vector for one factor, in binding order."""
        return [
            (event, b.weight)
            for event, b in self.leaf_bindings.items()
            if b.factor == factor
        ]


@dataclass
class LeafState:
    """Latched event activations plus transient cue-indicator pulses."""

    activation: dict[str, int]
    pulsed_cues: set[str] = field(default_factory=set)

    @classmethod
    def for_model(cls, fcm: PersuasiveFcm) -> "LeafState":
        return cls(activation={event: 0 for event in fcm.leaf_bindings})

    def copy(self) -> "LeafState":
        return LeafState(activation=dict(self.activation),
                         pulsed_cues=set(self.pulsed_cues))


@dataclass(frozen=True)
class PersuasionAssessment:
    motivation: float
    ability: float
    peripheral_cue: float
    motivation_low: bool
    ability_low: bool
    converged: bool = True


def activate_leaf(state: LeafState, event: str) -> LeafState:
    """Latch an event on. Re-activation is a no-op; unbound events are a
    scenario-authoring bug and raise."""
    if event not in state.activation:
        raise UnboundEvent(f"event {event!r} has no leaf binding")
    state.activation[event] = 1
    return state


def pulse_cue(state: LeafState, cue_id: str):
    state.pulsed_cues.add(cue_id)


def consume_pulses(state: LeafState) -> set[str]:
    pulses = set(state.pulsed_cues)
    state.pulsed_cues.clear()
    return pulses


def aggregate_factors(fcm: PersuasiveFcm, leaves: LeafState) -> np.ndarray:
    """Raw stem inputs: per-factor dot products of activations and weights.

    Motivation sums RL/RS/NC, ability sums PK/DT/RP, the peripheral cue
    sums currently pulsed cue indicators.
    """
    unknown = set(leaves.activation) - set(fcm.leaf_bindings)
    if unknown:
        raise UnboundEvent(f"leaf state carries unbound events: {sorted(unknown)}")
    motivation = 0.0
    ability = 0.0
    for event, value in leaves.activation.items():
        if not value:
            continue
        binding = fcm.leaf_bindings[event]
        if binding.factor in MOTIVATION_FACTORS:
            motivation += binding.weight
        else:
            ability += binding.weight
    peripheral = sum(
        fcm.cue_weights.get(cue_id, 0.0) for cue_id in leaves.pulsed_cues
    )
    return np.array([motivation, ability, peripheral], dtype=float)


def evaluate(fcm: PersuasiveFcm, leaves: LeafState) -> PersuasionAssessment:
    """Run the stem map to a fixed point and classify against baselines.

    Pure: neither the model nor the leaf state is mutated. Hitting
    max_iter is reported through converged=False, not raised.
    """
    raw = aggregate_factors(fcm, leaves)
    squash = fcm.stem.squash.fn()
    weights = fcm.stem.weights
    state = squash(raw)
    converged = False
    for _ in range(fcm.max_iter):
        nxt = squash(raw + state @ weights)
        if float(np.max(np.abs(nxt - state))) < fcm.tol:
            state = nxt
            converged = True
            break
        state = nxt
    motivation, ability, peripheral = (float(x) for x in state)
    return PersuasionAssessment(
        motivation=motivation,
        ability=ability,
        peripheral_cue=peripheral,
        motivation_low=motivation < fcm.theta_motivation,
        ability_low=ability < fcm.theta_ability,
        converged=converged,
    )
