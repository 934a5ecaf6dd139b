"""Namespaced, TTL-enforced ephemeral key-value store.

Backs every piece of cross-request protocol state: OIDC sessions,
authentication-token records, authorization codes, and challenge nonces.
The contract is small and strict:

* entries become unreadable the instant ``now >= expires_at`` (exclusive
  validity; the boundary read misses),
* ``take`` is an atomic read-and-delete, so a key yields its value to at
  most one caller per put no matter how many race for it,
* namespaces never interact: the same key text in two namespaces addresses
  two entries.

The in-memory implementation is the reference; an external store can be
swapped in behind the same interface.
"""

from __future__ import annotations

import enum
import json
import threading
from dataclasses import dataclass
from typing import Any

from vcbridge.clock import Clock


class Namespace(enum.Enum):
    SESSION = "SESSION"
    AUTH_TOKEN = "AUTH_TOKEN"
    AUTH_CODE = "AUTH_CODE"
    CHALLENGE = "CHALLENGE"


def session_key(client_id: str, session_id: str) -> str:
    """Composite key for SESSION entries: full form SESSION:{clientId}:{sessionId}."""
    return f"{client_id}:{session_id}"


@dataclass
class StoreEntry:
    namespace: Namespace
    scope_key: str
    value: str            # serialized record, opaque to the store
    expires_at: float


class SessionStore:
    """In-memory reference implementation. All operations are thread-safe;
    ``take`` holds the lock across read-and-delete, which is what makes the
    single-use guarantee hold under concurrent callers."""

    def __init__(self, clock: Clock):
        self._clock = clock
        self._lock = threading.Lock()
        self._entries: dict[tuple[Namespace, str], StoreEntry] = {}

    def put(self, namespace: Namespace, key: str, value: Any, ttl: float) -> None:
        """Store ``value`` (JSON-serializable) for ``ttl`` seconds.

        Overwrite is allowed and replaces both value and TTL.
        """
        if ttl <= 0:
            raise ValueError("ttl must be positive")
        entry = StoreEntry(
            namespace=namespace,
            scope_key=key,
            value=json.dumps(value),
            expires_at=self._clock.now() + ttl,
        )
        with self._lock:
            self._entries[(namespace, key)] = entry

    def _live_entry(self, namespace: Namespace, key: str) -> StoreEntry | None:
        # Caller must hold the lock. Lazily drops expired entries.
        entry = self._entries.get((namespace, key))
        if entry is None:
            return None
        if self._clock.now() >= entry.expires_at:
            del self._entries[(namespace, key)]
            return None
        return entry

    def get(self, namespace: Namespace, key: str) -> Any | None:
        """Non-destructive read; expired or missing keys read as None."""
        with self._lock:
            entry = self._live_entry(namespace, key)
            return None if entry is None else json.loads(entry.value)

    def take(self, namespace: Namespace, key: str) -> Any | None:
        """Atomic read-and-delete. Exactly one concurrent caller wins."""
        with self._lock:
            entry = self._live_entry(namespace, key)
            if entry is None:
                return None
            del self._entries[(namespace, key)]
            return json.loads(entry.value)

    def expires_at(self, namespace: Namespace, key: str) -> float | None:
        """Expiry timestamp of a live entry; None if absent/expired."""
        with self._lock:
            entry = self._live_entry(namespace, key)
            return None if entry is None else entry.expires_at

    def purge_expired(self) -> int:
        """Eagerly remove everything past its expiry; returns removal count."""
        now = self._clock.now()
        with self._lock:
            dead = [k for k, e in self._entries.items() if now >= e.expires_at]
            for k in dead:
                del self._entries[k]
            return len(dead)

    def size(self) -> int:
        with self._lock:
            return len(self._entries)
