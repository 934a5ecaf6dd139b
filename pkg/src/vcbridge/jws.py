"""Compact JWS (RS256) encoding, verification, and JWK export.

Only the profile this provider actually emits is implemented: RS256 over
RSA keys, compact serialization, JSON payloads. Expiry is NOT checked here;
callers decide which clock governs ``exp``.
"""

from __future__ import annotations

import base64
import json

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives.asymmetric import padding, rsa
from cryptography.hazmat.primitives.hashes import SHA256


class JwsError(Exception):
    """Malformed token or failed signature check."""


def b64url_encode(data: bytes) -> str:
    return base64.urlsafe_b64encode(data).rstrip(b"=").decode("ascii")


def b64url_decode(segment: str) -> bytes:
    padded = segment + "=" * (-len(segment) % 4)
    try:
        return base64.urlsafe_b64decode(padded.encode("ascii"))
    except (ValueError, UnicodeEncodeError) as exc:
        raise JwsError(f"invalid base64url segment: {exc}") from exc


def sign_compact(payload: dict, private_key: rsa.RSAPrivateKey, kid: str) -> str:
    header = {"alg": "RS256", "typ": "JWT", "kid": kid}
    signing_input = ".".join((
        b64url_encode(json.dumps(header, separators=(",", ":")).encode()),
        b64url_encode(json.dumps(payload, separators=(",", ":")).encode()),
    ))
    signature = private_key.sign(
        signing_input.encode("ascii"), padding.PKCS1v15(), SHA256()
    )
    return f"{signing_input}.{b64url_encode(signature)}"


def decode_unverified(token: str) -> tuple[dict, dict]:
    """Split a compact JWS into (header, payload) without any verification."""
    parts = token.split(".")
    if len(parts) != 3:
        raise JwsError("compact JWS must have exactly three segments")
    try:
        header = json.loads(b64url_decode(parts[0]))
        payload = json.loads(b64url_decode(parts[1]))
    except (json.JSONDecodeError, JwsError) as exc:
        raise JwsError(f"undecodable JWS segment: {exc}") from exc
    if not isinstance(header, dict) or not isinstance(payload, dict):
        raise JwsError("JWS header and payload must be JSON objects")
    return header, payload


def verify_compact(token: str, public_key: rsa.RSAPublicKey) -> dict:
    """Verify signature and return the payload. Raises JwsError otherwise."""
    header, payload = decode_unverified(token)
    if header.get("alg") != "RS256":
        raise JwsError(f"unsupported alg {header.get('alg')!r}")
    signing_input, _, signature_seg = token.rpartition(".")
    try:
        public_key.verify(
            b64url_decode(signature_seg),
            signing_input.encode("ascii"),
            padding.PKCS1v15(),
            SHA256(),
        )
    except InvalidSignature as exc:
        raise JwsError("signature verification failed") from exc
    return payload


def _uint_to_b64url(value: int) -> str:
    raw = value.to_bytes((value.bit_length() + 7) // 8, "big")
    return b64url_encode(raw)


def rsa_public_jwk(public_key: rsa.RSAPublicKey, kid: str) -> dict:
    """Public JWK for one RSA key. Contains no private material."""
    numbers = public_key.public_numbers()
    return {
        "kty": "RSA",
        "use": "sig",
        "alg": "RS256",
        "kid": kid,
        "n": _uint_to_b64url(numbers.n),
        "e": _uint_to_b64url(numbers.e),
    }
