"""Tests for the event log, priorities and the idle timer."""

import json

import pytest

from pta.errors import UnknownEventName
from pta.events import EventCategory, EventLog

CATALOG = {
    "Dialogue": ["Teach the water molecule", "Chat with animal NPC"],
    "Time": ["Doing nothing (Time-out)"],
    "TeachingFeedback": ["Teach success", "Teach Failure"],
    "Practicability": ["Practice knowledge"],
}


def make_log(**kwargs):
    return EventLog(CATALOG, **kwargs)


class TestEmission:
    def test_dialogue_resets_idle_deadline(self):
        log = make_log()
        log.advance_clock(100_000)
        record = log.emit_event("Dialogue", "Teach the water molecule")
        assert record.status == "pending"
        assert record.at == 100_000
        assert log.idle_deadline == 100_000 + 300_000

    def test_feedback_leaves_idle_deadline_alone(self):
        log = make_log()
        before = log.idle_deadline
        log.emit_event("TeachingFeedback", "Teach success")
        assert log.idle_deadline == before

    def test_unknown_name_rejected(self):
        log = make_log()
        with pytest.raises(UnknownEventName):
            log.emit_event("Dialogue", "Dance party")

    def test_wrong_category_rejected(self):
        log = make_log()
        with pytest.raises(UnknownEventName):
            log.emit_event("Time", "Teach success")

    def test_ids_strictly_increase(self):
        log = make_log()
        ids = [log.emit_event("Dialogue", "Chat with animal NPC").id
               for _ in range(5)]
        assert ids == sorted(ids)
        assert len(set(ids)) == 5


class TestClock:
    def test_zero_delta_no_events(self):
        log = make_log()
        assert log.advance_clock(0) == []

    def test_negative_delta_rejected(self):
        log = make_log()
        with pytest.raises(ValueError):
            log.advance_clock(-1)

    def test_single_timeout_fires_once(self):
        log = make_log()
        emitted = log.advance_clock(300_001)
        assert [e.name for e in emitted] == ["Doing nothing (Time-out)"]
        assert emitted[0].category is EventCategory.TIME
        assert emitted[0].at == 300_000
        assert log.clock == 300_001

    def test_two_windows_two_timeouts(self):
        log = make_log()
        emitted = log.advance_clock(600_002)
        assert len(emitted) == 2
        assert [e.at for e in emitted] == [300_000, 600_000]

    def test_timeout_at_or_after_deadline(self):
        log = make_log()
        log.emit_event("Dialogue", "Chat with animal NPC")  # deadline 300000
        emitted = log.advance_clock(1_000_000)
        for record in emitted:
            assert record.at >= 300_000

    def test_dialogue_mid_window_postpones_timeout(self):
        log = make_log()
        log.advance_clock(200_000)
        log.emit_event("Dialogue", "Chat with animal NPC")
        assert log.advance_clock(200_000) == []  # deadline moved to 500000
        emitted = log.advance_clock(100_000)
        assert len(emitted) == 1 and emitted[0].at == 500_000


class TestPolling:
    def test_priority_order_feedback_first(self):
        log = make_log()
        dialogue = log.emit_event("Dialogue", "Teach the water molecule")
        feedback = log.emit_event("TeachingFeedback", "Teach success")
        batch = log.poll_due(2)
        assert [r.id for r in batch] == [feedback.id, dialogue.id]

    def test_no_pending_empty(self):
        assert make_log().poll_due(3) == []

    def test_batch_limit_leaves_rest_pending(self):
        log = make_log()
        for _ in range(5):
            log.emit_event("Dialogue", "Chat with animal NPC")
        batch = log.poll_due(2)
        assert len(batch) == 2
        assert len(log.pending()) == 3

    def test_no_record_returned_twice(self):
        log = make_log()
        for _ in range(7):
            log.emit_event("Dialogue", "Chat with animal NPC")
        seen = []
        while True:
            batch = log.poll_due(3)
            if not batch:
                break
            seen.extend(r.id for r in batch)
        assert len(seen) == len(set(seen)) == 7

    def test_equal_priority_resolved_by_id(self):
        log = make_log()
        first = log.emit_event("Dialogue", "Chat with animal NPC")
        second = log.emit_event("Dialogue", "Teach the water molecule")
        assert [r.id for r in log.poll_due(5)] == [first.id, second.id]

    def test_peek_does_not_mark(self):
        log = make_log()
        log.emit_event("Dialogue", "Chat with animal NPC")
        assert len(log.peek_due(5)) == 1
        assert len(log.pending()) == 1

    def test_bad_limit_rejected(self):
        with pytest.raises(ValueError):
            make_log().poll_due(0)


class TestRetentionAndExport:
    def test_processed_records_retained_until_compaction(self):
        log = make_log()
        log.emit_event("Dialogue", "Chat with animal NPC")
        log.poll_due(1)
        assert len(log.records) == 1
        assert log.compact() == 1
        assert log.records == []

    def test_compact_keeps_pending(self):
        log = make_log()
        log.emit_event("Dialogue", "Chat with animal NPC")
        assert log.compact() == 0
        assert len(log.records) == 1

    def test_jsonl_round_trip_fields(self):
        log = make_log()
        log.emit_event("Dialogue", "Teach the water molecule", {"npc": "x"})
        (line,) = log.export_jsonl().splitlines()
        doc = json.loads(line)
        assert doc == {
            "id": 1, "category": "Dialogue", "name": "Teach the water molecule",
            "at": 0, "payload": {"npc": "x"}, "status": "pending",
        }

    def test_csv_summary(self):
        log = make_log()
        log.emit_event("TeachingFeedback", "Teach Failure")
        lines = log.export_csv().splitlines()
        assert lines[0] == "id,category,name,at,status"
        assert lines[1] == "1,TeachingFeedback,Teach Failure,0,pending"


def test_nonpositive_idle_timeout_rejected():
    with pytest.raises(ValueError):
        make_log(idle_timeout_ms=0)
