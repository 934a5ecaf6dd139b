"""Session store contract: TTL boundaries, atomic single-use take, namespace
isolation, purging."""

from __future__ import annotations

import threading

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vcbridge.clock import ManualClock
from vcbridge.store import Namespace, SessionStore, session_key


@pytest.fixture
def store(clock):
    return SessionStore(clock)


def test_put_get_roundtrip_within_ttl(store, clock):
    store.put(Namespace.SESSION, "k", {"v": 1}, ttl=30 * 60)
    clock.advance(29 * 60)
    assert store.get(Namespace.SESSION, "k") == {"v": 1}


def test_entry_absent_after_ttl(store, clock):
    store.put(Namespace.AUTH_CODE, "k", "v", ttl=10 * 60)
    clock.advance(11 * 60)
    assert store.get(Namespace.AUTH_CODE, "k") is None


def test_expiry_boundary_is_exclusive(store, clock):
    """Readable strictly before expires_at; the boundary read misses."""
    store.put(Namespace.SESSION, "k", "v", ttl=100)
    clock.advance(99.999)
    assert store.get(Namespace.SESSION, "k") == "v"
    clock.advance(0.001)
    assert store.get(Namespace.SESSION, "k") is None


def test_overwrite_replaces_value_and_ttl(store, clock):
    store.put(Namespace.SESSION, "k", "old", ttl=10)
    store.put(Namespace.SESSION, "k", "new", ttl=100)
    clock.advance(50)
    assert store.get(Namespace.SESSION, "k") == "new"


def test_get_of_never_written_key(store):
    assert store.get(Namespace.SESSION, "nope") is None


def test_take_consumes(store):
    store.put(Namespace.AUTH_CODE, "k", "v", ttl=60)
    assert store.take(Namespace.AUTH_CODE, "k") == "v"
    assert store.take(Namespace.AUTH_CODE, "k") is None
    assert store.get(Namespace.AUTH_CODE, "k") is None


def test_take_of_expired_key(store, clock):
    store.put(Namespace.AUTH_CODE, "k", "v", ttl=5)
    clock.advance(5)
    assert store.take(Namespace.AUTH_CODE, "k") is None


def test_ttl_must_be_positive(store):
    with pytest.raises(ValueError):
        store.put(Namespace.SESSION, "k", "v", ttl=0)


def test_concurrent_takes_exactly_one_winner(store):
    store.put(Namespace.AUTH_CODE, "contested", "prize", ttl=60)
    barrier = threading.Barrier(16)
    results = []

    def contender():
        barrier.wait()
        results.append(store.take(Namespace.AUTH_CODE, "contested"))

    threads = [threading.Thread(target=contender) for _ in range(16)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert results.count("prize") == 1
    assert results.count(None) == 15


def test_purge_expired_counts_and_spares_live(store, clock):
    for i in range(3):
        store.put(Namespace.SESSION, f"dead-{i}", i, ttl=10)
    for i in range(2):
        store.put(Namespace.SESSION, f"live-{i}", i, ttl=1000)
    clock.advance(10)
    assert store.purge_expired() == 3
    assert store.get(Namespace.SESSION, "live-0") == 0
    assert store.get(Namespace.SESSION, "live-1") == 1


def test_purge_empty_store(store):
    assert store.purge_expired() == 0


def test_purge_all_expired(store, clock):
    for i in range(7):
        store.put(Namespace.CHALLENGE, f"k{i}", i, ttl=1)
    clock.advance(1)
    assert store.purge_expired() == 7
    assert store.size() == 0


def test_namespace_isolation(store):
    store.put(Namespace.SESSION, "same-key", "session-value", ttl=60)
    store.put(Namespace.AUTH_CODE, "same-key", "code-value", ttl=60)
    assert store.get(Namespace.SESSION, "same-key") == "session-value"
    assert store.take(Namespace.AUTH_CODE, "same-key") == "code-value"
    # Consuming in one namespace leaves the other untouched.
    assert store.get(Namespace.SESSION, "same-key") == "session-value"


def test_expired_key_never_returns_without_new_put(store, clock):
    store.put(Namespace.SESSION, "k", "v", ttl=10)
    clock.advance(10)
    assert store.get(Namespace.SESSION, "k") is None
    clock.advance(-5)  # even a clock rollback cannot resurrect it
    assert store.get(Namespace.SESSION, "k") is None


def test_session_key_format():
    assert session_key("client-1", "sess-1") == "client-1:sess-1"


@settings(max_examples=60, deadline=None)
@given(
    ops=st.lists(
        st.tuples(
            st.sampled_from(list(Namespace)),
            st.sampled_from(["a", "b", "c"]),
            st.integers(min_value=0, max_value=999),
            st.integers(min_value=1, max_value=50),
        ),
        max_size=30,
    )
)
def test_property_single_use_per_put(ops):
    """Over any op sequence, successful takes per key never exceed puts."""
    clock = ManualClock()
    store = SessionStore(clock)
    puts: dict = {}
    takes: dict = {}
    for namespace, key, value, ttl in ops:
        store.put(namespace, key, value, ttl)
        puts[(namespace, key)] = puts.get((namespace, key), 0) + 1
        if value % 3 == 0:
            if store.take(namespace, key) is not None:
                takes[(namespace, key)] = takes.get((namespace, key), 0) + 1
        if value % 7 == 0:
            clock.advance(ttl)
    for full_key, count in takes.items():
        assert count <= puts[full_key]
