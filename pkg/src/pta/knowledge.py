"""Concept-map knowledge store: expert templates, taught maps, grading.

Labels form a closed drag-and-drop vocabulary, so grading is a normalized
exact text match per slot. Verdicts are binary but the per-slot diff is
kept for UI feedback.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .errors import SchemaError, TemplateMismatch, UnknownLabel, UnknownSlot


def normalize_label(text: str) -> str:
    return " ".join(text.split()).casefold()


@dataclass(frozen=True)
class Slot:
    id: str
    context: str = ""


@dataclass
class ConceptMapTemplate:
    id: str
    prompt: str
    slots: list[Slot]
    labels: list[str]
    key: dict[str, str]  # slot id -> correct label

    def __post_init__(self):
        slot_ids = [s.id for s in self.slots]
        if len(set(slot_ids)) != len(slot_ids):
            raise SchemaError(f"template {self.id!r}: duplicate slot ids")
        if set(self.key) != set(slot_ids):
            raise SchemaError(f"template {self.id!r}: key must cover every slot")
        vocabulary = {normalize_label(l) for l in self.labels}
        for slot_id, label in self.key.items():
            if normalize_label(label) not in vocabulary:
                raise SchemaError(
                    f"template {self.id!r}: key label {label!r} for slot "
                    f"{slot_id!r} is not offered"
                )

    def slot_ids(self) -> list[str]:
        return [s.id for s in self.slots]


@dataclass
class TaughtMap:
    template_id: str
    assignments: dict[str, str]  # slot id -> label ('' = left empty)
    taught_at: int = 0


@dataclass
class GradeResult:
    correct: bool
    diff: dict[str, tuple[str, str]] = field(default_factory=dict)  # slot -> (given, expected)


def build_taught_map(
    template: ConceptMapTemplate,
    assignments: Mapping[str, str],
    taught_at: int = 0,
) -> TaughtMap:
    """Validate assignments against the template without storing anything."""
    slot_ids = set(template.slot_ids())
    vocabulary = {normalize_label(l) for l in template.labels}
    cleaned: dict[str, str] = {}
    for slot_id, label in assignments.items():
        if slot_id not in slot_ids:
            raise UnknownSlot(f"template {template.id!r} has no slot {slot_id!r}")
        if label and normalize_label(label) not in vocabulary:
            raise UnknownLabel(f"label {label!r} is not offered by {template.id!r}")
        cleaned[slot_id] = label
    return TaughtMap(template_id=template.id, assignments=cleaned, taught_at=taught_at)


def evaluate_taught(template: ConceptMapTemplate, taught: TaughtMap) -> GradeResult:
    """Compare a taught map to the expert key, slot by slot.

    Matching is case-insensitive and whitespace-normalized. Empty and
    missing slots are graded as wrong with an empty 'given'.
    """
    if taught.template_id != template.id:
        raise TemplateMismatch(
            f"taught map belongs to {taught.template_id!r}, not {template.id!r}"
        )
    diff: dict[str, tuple[str, str]] = {}
    for slot_id in template.slot_ids():
        expected = template.key[slot_id]
        given = taught.assignments.get(slot_id, "")
        if normalize_label(given) != normalize_label(expected):
            diff[slot_id] = (given, expected)
    return GradeResult(correct=not diff, diff=diff)


class KnowledgeBase:
    """Per-session store: domain templates plus latest taught map per template."""

    def __init__(self, templates: Mapping[str, ConceptMapTemplate] | None = None):
        self.templates: dict[str, ConceptMapTemplate] = dict(templates or {})
        self._learnt: dict[str, TaughtMap] = {}

    def add_template(self, template: ConceptMapTemplate):
        self.templates[template.id] = template

    def template(self, template_id: str) -> ConceptMapTemplate:
        try:
            return self.templates[template_id]
        except KeyError:
            raise UnknownSlot(f"unknown template {template_id!r}") from None

    def acquire_teaching(
        self,
        template: ConceptMapTemplate,
        assignments: Mapping[str, str],
        taught_at: int = 0,
    ) -> TaughtMap:
        """Validate and store a teaching; the latest teaching wins."""
        taught = build_taught_map(template, assignments, taught_at)
        self._learnt[template.id] = taught
        return taught

    def query_learnt(self, template_id: str) -> TaughtMap | None:
        return self._learnt.get(template_id)

    def export_doc(self) -> dict:
        return {
            template_id: {
                "assignments": dict(t.assignments),
                "taught_at": t.taught_at,
            }
            for template_id, t in sorted(self._learnt.items())
        }
