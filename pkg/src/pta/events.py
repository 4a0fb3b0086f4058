"""Event lifecycle: creation, logging, prioritized polling and the idle timer.

The log owns a purely logical clock in milliseconds. Wall time never
enters the engine; callers map real time onto advance_clock, which is what
makes whole sessions replayable.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

from .errors import UnknownEventName

DEFAULT_IDLE_TIMEOUT_MS = 300_000  # learner inactive for five minutes


class EventCategory(str, Enum):
    DIALOGUE = "Dialogue"
    TIME = "Time"
    TEACHING_FEEDBACK = "TeachingFeedback"
    PRACTICABILITY = "Practicability"


#: Poll order: feedback drives the persuasion loop and must not starve
#: behind chatter; the practicability event gates the practice cycle.
CATEGORY_PRIORITY = {
    EventCategory.TEACHING_FEEDBACK: 0,
    EventCategory.PRACTICABILITY: 1,
    EventCategory.DIALOGUE: 2,
    EventCategory.TIME: 3,
}

PENDING = "pending"
PROCESSED = "processed"


@dataclass
class EventRecord:
    id: int
    category: EventCategory
    name: str
    at: int  # logical ms
    payload: dict[str, str] = field(default_factory=dict)
    status: str = PENDING

    def to_doc(self) -> dict:
        return {
            "id": self.id,
            "category": self.category.value,
            "name": self.name,
            "at": self.at,
            "payload": dict(self.payload),
            "status": self.status,
        }


class EventLog:
    """Append-only per-session event store with the session's clock."""

    def __init__(
        self,
        catalog: Mapping[EventCategory, Iterable[str]] | Mapping[str, Iterable[str]],
        idle_timeout_ms: int = DEFAULT_IDLE_TIMEOUT_MS,
        timeout_event: str = "Doing nothing (Time-out)",
    ):
        self.catalog: dict[EventCategory, list[str]] = {}
        for cat, names in catalog.items():
            self.catalog[EventCategory(cat)] = list(names)
        if idle_timeout_ms <= 0:
            raise ValueError("idle timeout must be positive")
        self.idle_timeout_ms = idle_timeout_ms
        self.timeout_event = timeout_event
        if timeout_event not in self.catalog.get(EventCategory.TIME, []):
            raise UnknownEventName(
                f"timeout event {timeout_event!r} missing from the Time catalog"
            )
        self.records: list[EventRecord] = []
        self.clock: int = 0
        self.idle_deadline: int | None = self.clock + idle_timeout_ms
        self._next_id = 1

    # -- emission ---------------------------------------------------------

    def next_seq(self) -> int:
        """Claim the next emission sequence number.

        Events use it as their id; the agent stamps its actions from the
        same counter so the merged export keeps causal order.
        """
        seq = self._next_id
        self._next_id += 1
        return seq

    def emit_event(
        self,
        category: EventCategory | str,
        name: str,
        payload: Mapping[str, str] | None = None,
    ) -> EventRecord:
        category = EventCategory(category)
        if name not in self.catalog.get(category, []):
            raise UnknownEventName(f"{name!r} is not a {category.value} event")
        record = EventRecord(
            id=self.next_seq(),
            category=category,
            name=name,
            at=self.clock,
            payload={str(k): str(v) for k, v in (payload or {}).items()},
        )
        self.records.append(record)
        if category is EventCategory.DIALOGUE:
            # dialogue counts as engagement: the idle timer restarts
            self.idle_deadline = record.at + self.idle_timeout_ms
        return record

    def advance_clock(self, delta_ms: int) -> list[EventRecord]:
        """Move the clock forward, auto-emitting one timeout event per
        idle window crossed. The timer re-arms from each emission."""
        if delta_ms < 0:
            raise ValueError("clock must be nondecreasing")
        target = self.clock + delta_ms
        emitted: list[EventRecord] = []
        while self.idle_deadline is not None and self.idle_deadline <= target:
            self.clock = self.idle_deadline
            emitted.append(self.emit_event(EventCategory.TIME, self.timeout_event))
            self.idle_deadline = self.clock + self.idle_timeout_ms
        self.clock = target
        return emitted

    # -- polling ------------------------------------------------------------

    def _pending_sorted(self) -> list[EventRecord]:
        return sorted(
            (r for r in self.records if r.status == PENDING),
            key=lambda r: (CATEGORY_PRIORITY[r.category], r.id),
        )

    def peek_due(self, batch_limit: int) -> list[EventRecord]:
        """Like poll_due but leaves statuses untouched."""
        if batch_limit < 1:
            raise ValueError("batch limit must be >= 1")
        return self._pending_sorted()[:batch_limit]

    def poll_due(self, batch_limit: int) -> list[EventRecord]:
        """Return up to batch_limit pending records in (priority, id) order
        and mark them processed."""
        batch = self.peek_due(batch_limit)
        for record in batch:
            record.status = PROCESSED
        return batch

    def mark_processed(self, ids: Iterable[int]):
        wanted = set(ids)
        for record in self.records:
            if record.id in wanted and record.status == PENDING:
                record.status = PROCESSED

    def pending(self) -> list[EventRecord]:
        return [r for r in self.records if r.status == PENDING]

    # -- retention and export ------------------------------------------------

    def compact(self) -> int:
        """Drop processed records. Explicit only; nothing prunes automatically."""
        before = len(self.records)
        self.records = [r for r in self.records if r.status == PENDING]
        return before - len(self.records)

    def export_jsonl(self) -> str:
        return "".join(
            json.dumps(r.to_doc(), sort_keys=True) + "\n" for r in self.records
        )

    def export_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow(["id", "category", "name", "at", "status"])
        for r in self.records:
            writer.writerow([r.id, r.category.value, r.name, r.at, r.status])
        return out.getvalue()
