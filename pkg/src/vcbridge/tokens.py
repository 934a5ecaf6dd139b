"""Secure random material and salted credential hashing.

Bearer tokens come from ``secrets`` (CSPRNG) with at least 128 bits of
randomness; the default is 256 bits. Passwords are hashed with scrypt
(memory-hard, per-credential salt); parameters travel inside the stored
string so they can be tuned without breaking verification.
"""

from __future__ import annotations

import base64
import hashlib
import hmac
import secrets
from dataclasses import dataclass


def generate_token(nbytes: int = 32) -> str:
    """URL-safe bearer token with nbytes*8 bits of entropy (min 16 bytes)."""
    if nbytes < 16:
        raise ValueError("tokens must carry at least 128 bits of entropy")
    return secrets.token_urlsafe(nbytes)


@dataclass(frozen=True)
class ScryptParams:
    # Deliberately light defaults: this registry is exercised thousands of
    # times per test run. Production deployments raise log2_n.
    log2_n: int = 12
    r: int = 8
    p: int = 1


def hash_secret(secret: str, params: ScryptParams = ScryptParams()) -> str:
    salt = secrets.token_bytes(16)
    digest = hashlib.scrypt(
        secret.encode("utf-8"), salt=salt,
        n=1 << params.log2_n, r=params.r, p=params.p,
    )
    return "$".join((
        "scrypt",
        str(params.log2_n),
        str(params.r),
        str(params.p),
        base64.b64encode(salt).decode("ascii"),
        base64.b64encode(digest).decode("ascii"),
    ))


def verify_secret(secret: str, stored: str) -> bool:
    """Constant-time comparison against a stored scrypt hash."""
    try:
        scheme, log2_n, r, p, salt_b64, digest_b64 = stored.split("$")
        if scheme != "scrypt":
            return False
        salt = base64.b64decode(salt_b64)
        expected = base64.b64decode(digest_b64)
        actual = hashlib.scrypt(
            secret.encode("utf-8"), salt=salt,
            n=1 << int(log2_n), r=int(r), p=int(p),
        )
    except (ValueError, TypeError):
        return False
    return hmac.compare_digest(actual, expected)
