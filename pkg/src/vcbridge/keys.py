"""Signing key lifecycle: one active RSA key, rotation, JWKS publication.

Retired keys stay in the published JWKS for a grace window at least as long
as the longest-lived token they may have signed, so rotation never strands a
token before its own expiry.
"""

from __future__ import annotations

import secrets
import threading
from dataclasses import dataclass, field

from cryptography.hazmat.primitives.asymmetric import rsa

from vcbridge.clock import Clock
from vcbridge.errors import InternalError
from vcbridge.jws import rsa_public_jwk

DEFAULT_ROTATION_PERIOD = 90 * 24 * 3600
# Max ID token lifetime is 1h; rounded up to a day for clock skew.
DEFAULT_RETIRED_GRACE = 24 * 3600


@dataclass
class SigningKey:
    kid: str
    private_key: rsa.RSAPrivateKey = field(repr=False)
    created_at: float
    state: str = "active"          # active | retired
    retired_at: float | None = None

    @property
    def public_key(self) -> rsa.RSAPublicKey:
        return self.private_key.public_key()


class KeyRing:
    """Holds every key this issuer has ever used, exactly one of them active."""

    def __init__(self, clock: Clock, key_size: int = 2048,
                 rotation_period: float = DEFAULT_ROTATION_PERIOD,
                 retired_grace: float = DEFAULT_RETIRED_GRACE):
        self._clock = clock
        self._key_size = key_size
        self.rotation_period = rotation_period
        self.retired_grace = retired_grace
        self._lock = threading.Lock()
        self._keys: dict[str, SigningKey] = {}
        self._active_kid: str | None = None
        self.rotate()

    def _generate(self) -> SigningKey:
        private = rsa.generate_private_key(public_exponent=65537,
                                           key_size=self._key_size)
        return SigningKey(kid=secrets.token_hex(8), private_key=private,
                          created_at=self._clock.now())

    def active(self) -> SigningKey:
        with self._lock:
            key = self._keys.get(self._active_kid or "")
            if key is None or key.state != "active":
                raise InternalError("no active signing key")
            return key

    def rotate(self, now: float | None = None) -> str:
        """Retire the active key, activate a fresh one, return its kid."""
        now = self._clock.now() if now is None else now
        fresh = self._generate()
        fresh.created_at = now
        with self._lock:
            if self._active_kid is not None:
                old = self._keys[self._active_kid]
                old.state = "retired"
                old.retired_at = now
            self._keys[fresh.kid] = fresh
            self._active_kid = fresh.kid
            return fresh.kid

    def due_for_rotation(self, now: float | None = None) -> bool:
        now = self._clock.now() if now is None else now
        return now - self.active().created_at >= self.rotation_period

    def published_keys(self) -> list[SigningKey]:
        """Active key plus retired keys still inside the grace window."""
        now = self._clock.now()
        with self._lock:
            out = []
            for key in self._keys.values():
                if key.state == "active":
                    out.append(key)
                elif key.retired_at is not None and now < key.retired_at + self.retired_grace:
                    out.append(key)
            return out

    def jwks(self) -> dict:
        return {"keys": [rsa_public_jwk(k.public_key, k.kid)
                         for k in self.published_keys()]}

    def public_key_for(self, kid: str) -> rsa.RSAPublicKey | None:
        """Resolve a kid, honoring the same publication window as jwks()."""
        for key in self.published_keys():
            if key.kid == kid:
                return key.public_key
        return None
