import pytest

from camtrap.errors import QueueFull
from camtrap.ingest.mail import IngestEvent
from camtrap.ingest.queue import DurableQueue
from camtrap.models import new_id, utcnow


def event(payload: bytes = b"img") -> IngestEvent:
    now = utcnow()
    return IngestEvent(
        event_id=new_id("evt"),
        camera_id="camA",
        image_bytes=payload,
        declared_filename="a.jpg",
        message_id="<m@cam>",
        trigger_time=now,
        receipt_time=now,
    )


def test_put_claim_done(tmp_path):
    q = DurableQueue(tmp_path)
    e = event(b"\x00\x01binary\xff")
    q.put(e)
    assert q.depth() == 1
    path, got = q.claim()
    assert got.event_id == e.event_id
    assert got.image_bytes == e.image_bytes
    assert got.trigger_time == e.trigger_time
    q.done(path)
    assert q.depth() == 0
    assert q.claim() is None


def test_fifo_order(tmp_path):
    q = DurableQueue(tmp_path)
    events = [event(bytes([i])) for i in range(5)]
    for e in events:
        q.put(e)
    claimed = []
    while (item := q.claim()) is not None:
        claimed.append(item[1].event_id)
        q.done(item[0])
    assert claimed == [e.event_id for e in events]


def test_claim_does_not_hand_out_twice(tmp_path):
    q = DurableQueue(tmp_path)
    q.put(event())
    first = q.claim()
    assert first is not None
    assert q.claim() is None  # claimed but not done
    q.release(first[0])
    assert q.claim() is not None  # available again after release


def test_events_survive_reopen(tmp_path):
    q = DurableQueue(tmp_path)
    e = event(b"persisted")
    q.put(e)
    # same directory seen by a fresh instance (simulates restart)
    q2 = DurableQueue(tmp_path)
    path, got = q2.claim()
    assert got.event_id == e.event_id
    assert got.image_bytes == b"persisted"


def test_capacity(tmp_path):
    q = DurableQueue(tmp_path, capacity=2)
    q.put(event())
    q.put(event())
    with pytest.raises(QueueFull):
        q.put(event())


def test_done_is_idempotent(tmp_path):
    q = DurableQueue(tmp_path)
    q.put(event())
    path, _ = q.claim()
    q.done(path)
    q.done(path)  # second delete is a no-op
