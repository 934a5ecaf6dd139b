"""Minimal OIDC relying party.

Everything an application needs to log in against the bridge (or any
standards-compliant provider): PKCE generation, authorize URL construction,
code exchange, and JWKS-based ID token validation. Plain OIDC client code,
standard libraries only, no knowledge of what sits behind the provider.
"""

from __future__ import annotations

import base64
import hashlib
import json
import secrets
import time
from dataclasses import dataclass
from urllib.parse import urlencode

import httpx
from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives.asymmetric import padding, rsa
from cryptography.hazmat.primitives.hashes import SHA256


class RpError(Exception):
    code = "rp_error"

    def __init__(self, description: str):
        self.description = description
        super().__init__(f"{self.code}: {description}")


class DiscoveryError(RpError):
    code = "discovery_error"


class CsrfDetected(RpError):
    code = "csrf_detected"


class TokenInvalid(RpError):
    code = "token_invalid"


@dataclass(frozen=True)
class RpConfig:
    issuer_url: str
    client_id: str
    redirect_uri: str
    scopes: tuple[str, ...] = ("openid",)
    client_secret: str | None = None


@dataclass(frozen=True)
class PendingLogin:
    state: str
    nonce: str
    code_verifier: str
    created_at: float


def _b64url(data: bytes) -> str:
    return base64.urlsafe_b64encode(data).rstrip(b"=").decode("ascii")


def _b64url_decode(segment: str) -> bytes:
    return base64.urlsafe_b64decode(segment + "=" * (-len(segment) % 4))


def code_challenge_s256(code_verifier: str) -> str:
    return _b64url(hashlib.sha256(code_verifier.encode("ascii")).digest())


def discover(config: RpConfig, http: httpx.Client) -> dict:
    url = config.issuer_url.rstrip("/") + "/.well-known/openid-configuration"
    try:
        response = http.get(url)
        response.raise_for_status()
        return response.json()
    except (httpx.HTTPError, ValueError) as exc:
        raise DiscoveryError(f"cannot fetch provider metadata: {exc}") from exc


def begin_login(config: RpConfig, http: httpx.Client) -> tuple[str, PendingLogin]:
    """Start a login: returns the authorize URL and the per-login secrets."""
    metadata = discover(config, http)
    pending = PendingLogin(
        state=secrets.token_urlsafe(16),
        nonce=secrets.token_urlsafe(16),
        code_verifier=secrets.token_urlsafe(32),   # 43 chars, 256-bit entropy
        created_at=time.time(),
    )
    params = {
        "response_type": "code",
        "client_id": config.client_id,
        "redirect_uri": config.redirect_uri,
        "scope": " ".join(config.scopes),
        "state": pending.state,
        "nonce": pending.nonce,
        "code_challenge": code_challenge_s256(pending.code_verifier),
        "code_challenge_method": "S256",
    }
    return f"{metadata['authorization_endpoint']}?{urlencode(params)}", pending


def _jwk_to_rsa_key(jwk: dict) -> rsa.RSAPublicKey:
    n = int.from_bytes(_b64url_decode(jwk["n"]), "big")
    e = int.from_bytes(_b64url_decode(jwk["e"]), "big")
    return rsa.RSAPublicNumbers(e, n).public_key()


def validate_id_token(id_token: str, jwks: dict, issuer: str, client_id: str,
                      nonce: str, now: float | None = None) -> dict:
    """Check signature (via JWKS), iss, aud, exp, and nonce; return claims."""
    now = time.time() if now is None else now
    parts = id_token.split(".")
    if len(parts) != 3:
        raise TokenInvalid("ID token is not a compact JWS")
    try:
        header = json.loads(_b64url_decode(parts[0]))
        claims = json.loads(_b64url_decode(parts[1]))
        signature = _b64url_decode(parts[2])
    except (ValueError, json.JSONDecodeError) as exc:
        raise TokenInvalid(f"undecodable ID token: {exc}") from exc
    if header.get("alg") != "RS256":
        raise TokenInvalid(f"unexpected signing algorithm {header.get('alg')!r}")
    keys = [k for k in jwks.get("keys", []) if k.get("kid") == header.get("kid")]
    if not keys:
        raise TokenInvalid("signing key not found in JWKS")
    try:
        _jwk_to_rsa_key(keys[0]).verify(
            signature, f"{parts[0]}.{parts[1]}".encode("ascii"),
            padding.PKCS1v15(), SHA256())
    except InvalidSignature as exc:
        raise TokenInvalid("signature verification failed") from exc
    if claims.get("iss") != issuer:
        raise TokenInvalid(f"issuer mismatch: {claims.get('iss')!r}")
    if claims.get("aud") != client_id:
        raise TokenInvalid(f"audience mismatch: {claims.get('aud')!r}")
    if not isinstance(claims.get("exp"), (int, float)) or claims["exp"] <= now:
        raise TokenInvalid("token expired")
    if claims.get("nonce") != nonce:
        raise TokenInvalid("nonce mismatch")
    return claims


def finish_login(config: RpConfig, callback_params: dict, pending: PendingLogin,
                 http: httpx.Client, now: float | None = None) -> dict:
    """Complete a login from the provider callback; returns validated claims.

    The state check runs before anything touches the network.
    """
    if callback_params.get("state") != pending.state:
        raise CsrfDetected("callback state does not match this login")
    if "error" in callback_params:
        raise TokenInvalid(
            f"provider returned {callback_params['error']}: "
            f"{callback_params.get('error_description', '')}")
    code = callback_params.get("code")
    if not code:
        raise TokenInvalid("callback carries no authorization code")

    metadata = discover(config, http)
    form = {
        "grant_type": "authorization_code",
        "code": code,
        "code_verifier": pending.code_verifier,
        "client_id": config.client_id,
        "redirect_uri": config.redirect_uri,
    }
    if config.client_secret is not None:
        form["client_secret"] = config.client_secret
    response = http.post(metadata["token_endpoint"], data=form)
    if response.status_code != 200:
        try:
            body = response.json()
        except ValueError:
            body = {}
        raise TokenInvalid(
            f"token endpoint rejected the exchange: "
            f"{body.get('error', response.status_code)}")
    token_response = response.json()
    id_token = token_response.get("id_token")
    if not id_token:
        raise TokenInvalid("token response carries no id_token")

    jwks_response = http.get(metadata["jwks_uri"])
    if jwks_response.status_code != 200:
        raise TokenInvalid("cannot fetch JWKS for signature validation")
    return validate_id_token(id_token, jwks_response.json(),
                             issuer=metadata["issuer"],
                             client_id=config.client_id,
                             nonce=pending.nonce, now=now)
