"""The OpenID Provider core: authorization endpoint semantics, token endpoint
with mandatory S256 PKCE, discovery/JWKS, ID token issuance, and the session
orchestration that stitches the OIDC flow to credential verification.

All cross-request state lives in the session store under fixed namespaces:

* ``SESSION``    — OIDC sessions, key ``{client_id}:{session_id}``, 30 min
* ``AUTH_TOKEN`` — ``corr:{correlation_id}`` (authentication-token record,
  5 min) and ``ui:{session_id}`` (status-poll routing entry, session TTL)
* ``AUTH_CODE``  — ``{code}`` single-use records, 10 min, consumed via take()
* ``CHALLENGE``  — adapter-owned presentation state

Handlers themselves are stateless, so concurrent exchanges of one code are
serialized entirely by the store's atomic take.
"""

from __future__ import annotations

import base64
import hashlib
import uuid
from dataclasses import dataclass
from typing import Union

from vcbridge.adapters import AdapterHub, VerificationResult
from vcbridge.clock import Clock
from vcbridge.errors import (
    ClaimsUnsatisfied,
    CorrelationNotFound,
    InvalidClient,
    InvalidGrant,
    InvalidState,
    SessionNotFound,
    Unauthorized,
    UnsupportedGrantType,
)
from vcbridge.faults import NO_FAULTS, FaultInjection
from vcbridge.iam import IamRegistry
from vcbridge.jws import JwsError, decode_unverified, sign_compact, verify_compact
from vcbridge.keys import KeyRing
from vcbridge.store import Namespace, SessionStore, session_key
from vcbridge.templates import TemplateEngine
from vcbridge.tokens import generate_token

SESSION_TTL = 30 * 60
CODE_TTL = 10 * 60
AUTH_TOKEN_TTL = 5 * 60
ID_TOKEN_TTL = 60 * 60
ACCESS_TOKEN_TTL = 60 * 60


@dataclass(frozen=True)
class BridgeConfig:
    issuer: str = "https://bridge.example"
    auth_ui_url: str = "https://bridge.example/auth"
    # Cookie policy applied by the serving layer for the auth UI session.
    cookie_samesite: str = "Lax"     # Lax | None (cross-site deployments)
    cookie_secure: bool = True


# handle_authorize outcomes; the HTTP layer maps these 1:1 onto responses.

@dataclass
class AuthRedirect:
    """302 to the authentication frontend, auth token in hand."""
    url: str
    session_id: str


@dataclass
class ErrorRedirect:
    """302 back to the RP's registered redirect_uri with error + state."""
    url: str
    error: str
    description: str


@dataclass
class ErrorPage:
    """Direct error, never a redirect: the redirect target is untrusted."""
    error: str
    description: str


AuthorizeOutcome = Union[AuthRedirect, ErrorRedirect, ErrorPage]


@dataclass
class OidcSession:
    session_id: str
    client_id: str
    tenant_id: str
    redirect_uri: str
    requested_scopes: list[str]
    template_id: str
    state: str
    nonce: str
    code_challenge: str
    code_challenge_method: str
    correlation_id: str
    status: str = "pending"          # pending -> verified | failed, once
    verified_sub: str | None = None
    verified_claims: dict | None = None
    failure_reason: str | None = None
    auth_code: str | None = None
    expires_at: float = 0.0

    def to_dict(self) -> dict:
        return dict(self.__dict__)

    @classmethod
    def from_dict(cls, data: dict) -> "OidcSession":
        return cls(**data)


def compute_code_challenge(code_verifier: str) -> str:
    """S256: base64url(sha256(ascii(verifier))) without padding."""
    digest = hashlib.sha256(code_verifier.encode("ascii")).digest()
    return base64.urlsafe_b64encode(digest).rstrip(b"=").decode("ascii")


def _urlencode(params: dict) -> str:
    from urllib.parse import urlencode
    return urlencode(params)


class OidcBridge:
    def __init__(self, iam: IamRegistry, templates: TemplateEngine,
                 store: SessionStore, keyring: KeyRing, adapters: AdapterHub,
                 clock: Clock, config: BridgeConfig = BridgeConfig(),
                 faults: FaultInjection = NO_FAULTS):
        self.iam = iam
        self.templates = templates
        self.store = store
        self.keyring = keyring
        self.adapters = adapters
        self.clock = clock
        self.config = config
        self.faults = faults

    # -- authorization endpoint ---------------------------------------------

    def handle_authorize(self, query: dict) -> AuthorizeOutcome:
        """Validate an authorization request and park a pending session.

        Error routing is two-tier: until the client and its registered
        redirect_uri check out (exact string match), errors render directly;
        afterwards they redirect to the RP with the request's state echoed.
        """
        client_id = query.get("client_id")
        redirect_uri = query.get("redirect_uri")
        if not client_id:
            return ErrorPage("invalid_request", "client_id is required")
        client = self.iam.get_client(client_id)
        if client is None or client.kind != "oidc":
            return ErrorPage("invalid_client", "unknown client")
        if not redirect_uri or redirect_uri not in client.redirect_uris:
            # Byte-exact comparison against registration; no normalization.
            return ErrorPage("invalid_request", "redirect_uri not registered")

        state = query.get("state")

        def fail(error: str, description: str) -> ErrorRedirect:
            params = {"error": error, "error_description": description}
            if state is not None:
                params["state"] = state
            return ErrorRedirect(f"{redirect_uri}?{_urlencode(params)}",
                                 error, description)

        if query.get("response_type") != "code":
            return fail("unsupported_response_type",
                        "only the authorization code flow is supported")
        if not state:
            return fail("invalid_request", "state is required")
        if not query.get("nonce"):
            return fail("invalid_request", "nonce is required")
        code_challenge = query.get("code_challenge")
        if not code_challenge:
            return fail("invalid_request", "code_challenge is required (PKCE)")
        if query.get("code_challenge_method") != "S256":
            return fail("invalid_request",
                        "code_challenge_method must be S256")

        scopes = (query.get("scope") or "").split()
        try:
            template = self.templates.resolve_scopes(client, scopes)
        except Exception as exc:
            code = getattr(exc, "code", "invalid_scope")
            return fail(code, getattr(exc, "description", str(exc)))

        now = self.clock.now()
        session = OidcSession(
            session_id=str(uuid.uuid4()),
            client_id=client.client_id,
            tenant_id=client.tenant_id,
            redirect_uri=redirect_uri,
            requested_scopes=scopes,
            template_id=template.template_id,
            state=state,
            nonce=query["nonce"],
            code_challenge=code_challenge,
            code_challenge_method="S256",
            correlation_id=str(uuid.uuid4()),
            expires_at=now + SESSION_TTL,
        )
        self._save_session(session)
        self.store.put(Namespace.AUTH_TOKEN, f"ui:{session.session_id}",
                       {"client_id": session.client_id}, SESSION_TTL)
        self.store.put(
            Namespace.AUTH_TOKEN, f"corr:{session.correlation_id}",
            {"session_id": session.session_id, "client_id": session.client_id,
             "template_id": session.template_id, "tenant_id": session.tenant_id},
            AUTH_TOKEN_TTL)

        auth_token = sign_compact(
            {
                "template_id": session.template_id,
                "correlation_id": session.correlation_id,
                "session_id": session.session_id,
                "exp": int(now) + AUTH_TOKEN_TTL,
            },
            self.keyring.active().private_key,
            self.keyring.active().kid,
        )
        url = f"{self.config.auth_ui_url}?{_urlencode({'token': auth_token})}"
        return AuthRedirect(url=url, session_id=session.session_id)

    # -- session plumbing -----------------------------------------------------

    def _save_session(self, session: OidcSession) -> None:
        # Preserve the absolute deadline: updates re-put with remaining TTL.
        remaining = session.expires_at - self.clock.now()
        if remaining <= 0:
            return
        self.store.put(Namespace.SESSION,
                       session_key(session.client_id, session.session_id),
                       session.to_dict(), remaining)

    def _load_session(self, client_id: str, session_id: str) -> OidcSession | None:
        data = self.store.get(Namespace.SESSION, session_key(client_id, session_id))
        return None if data is None else OidcSession.from_dict(data)

    def _session_by_id(self, session_id: str) -> OidcSession | None:
        routing = self.store.get(Namespace.AUTH_TOKEN, f"ui:{session_id}")
        if routing is None:
            return None
        return self._load_session(routing["client_id"], session_id)

    # -- auth UI support ------------------------------------------------------

    def auth_context(self, auth_token: str) -> dict:
        """Resolve a signed authentication token for the frontend.

        Returns the template summary (name + supported ecosystems) the UI
        needs to render wallet choices, plus the ids it polls with.
        """
        payload = self._decode_auth_token(auth_token)
        session = self._session_by_id(payload["session_id"])
        if session is None:
            raise SessionNotFound("session expired or unknown")
        template = self.templates.get_template(session.tenant_id,
                                               payload["template_id"])
        if template is None:
            raise SessionNotFound("template no longer available")
        return {
            "session_id": session.session_id,
            "correlation_id": session.correlation_id,
            "template": {
                "name": template.name,
                "ecosystems": sorted(template.ecosystem_configs),
            },
            "expires_at": payload["exp"],
        }

    def _decode_auth_token(self, auth_token: str) -> dict:
        try:
            header, _ = decode_unverified(auth_token)
            header_kid = header.get("kid")
        except JwsError as exc:
            raise Unauthorized(f"malformed authentication token: {exc}") from exc
        public_key = self.keyring.public_key_for(header_kid or "")
        if public_key is None:
            raise Unauthorized("authentication token signed by unknown key")
        try:
            payload = verify_compact(auth_token, public_key)
        except JwsError as exc:
            raise Unauthorized("authentication token signature invalid") from exc
        if self.clock.now() >= payload.get("exp", 0):
            raise Unauthorized("authentication token expired")
        return payload

    def verification_status(self, session_id: str) -> dict:
        """Poll surface for the auth UI; includes the RP callback payload
        once verification lands."""
        session = self._session_by_id(session_id)
        if session is None:
            raise SessionNotFound("session expired or unknown")
        out: dict = {"status": session.status}
        if session.status == "verified":
            out["redirect"] = {
                "redirect_uri": session.redirect_uri,
                "code": session.auth_code,
                "state": session.state,
            }
        elif session.status == "failed":
            out["reason"] = session.failure_reason
        return out

    # -- verification result intake -------------------------------------------

    def complete_verification(self, service_token: str, correlation_id: str,
                              result: VerificationResult) -> None:
        """Accept a verifier outcome. Only authenticated services may call;
        only pending sessions transition, and only once."""
        self.iam.validate_service_token(service_token)
        record = self.store.get(Namespace.AUTH_TOKEN, f"corr:{correlation_id}")
        if record is None:
            raise CorrelationNotFound("unknown or expired correlation id")
        session = self._load_session(record["client_id"], record["session_id"])
        if session is None:
            raise CorrelationNotFound("session expired")
        if session.status != "pending":
            raise InvalidState(f"session already {session.status}")

        if result.verified:
            template = self.templates.get_template(session.tenant_id,
                                                   session.template_id)
            if template is None:
                raise CorrelationNotFound("template no longer available")
            try:
                sub, claims = self.templates.map_claims(template, result)
            except ClaimsUnsatisfied as exc:
                session.status = "failed"
                session.failure_reason = exc.code
                self._save_session(session)
                return
            code = generate_token()
            self.store.put(Namespace.AUTH_CODE, code,
                           {"session_id": session.session_id,
                            "client_id": session.client_id},
                           CODE_TTL)
            session.status = "verified"
            session.verified_sub = sub
            session.verified_claims = claims
            session.auth_code = code
        else:
            session.status = "failed"
            session.failure_reason = result.failure_reason or "verification_failed"
        self._save_session(session)

    # -- token endpoint ---------------------------------------------------------

    def handle_token(self, form: dict) -> dict:
        """Exchange a single-use authorization code for tokens.

        The code is consumed (atomic take) before PKCE runs, so a failed
        exchange burns the code: interception without the verifier is
        unrecoverable, and retry is impossible by design.
        """
        if form.get("grant_type") != "authorization_code":
            raise UnsupportedGrantType(
                f"grant_type {form.get('grant_type')!r} is not supported")
        client = self.iam.validate_client(form.get("client_id") or "",
                                          form.get("client_secret"))
        code = form.get("code") or ""
        record = self.store.take(Namespace.AUTH_CODE, code)
        if record is None:
            raise InvalidGrant("authorization code is invalid, expired, or used")
        if record["client_id"] != client.client_id:
            raise InvalidClient("authorization code was issued to another client")
        session = self._load_session(record["client_id"], record["session_id"])
        if session is None or session.status != "verified":
            raise InvalidGrant("no verified session for this code")

        verifier = form.get("code_verifier") or ""
        if not self.faults.skip_pkce_check:
            if compute_code_challenge(verifier) != session.code_challenge:
                raise InvalidGrant("PKCE verification failed")
        if form.get("redirect_uri") != session.redirect_uri:
            raise InvalidGrant("redirect_uri does not match the authorization request")

        return {
            "id_token": self.issue_id_token(session),
            "access_token": generate_token(32),
            "token_type": "Bearer",
            "expires_in": ACCESS_TOKEN_TTL,
        }

    def issue_id_token(self, session: OidcSession) -> str:
        if session.status != "verified":
            raise InvalidGrant("session is not verified")
        key = self.keyring.active()
        iat = int(self.clock.now())
        claims = dict(session.verified_claims or {})
        claims.update({
            "iss": self.config.issuer,
            "sub": session.verified_sub,
            "aud": session.client_id,
            "exp": iat + ID_TOKEN_TTL,
            "iat": iat,
            "nonce": session.nonce,
        })
        return sign_compact(claims, key.private_key, key.kid)

    # -- metadata ---------------------------------------------------------------

    def discovery_document(self) -> dict:
        issuer = self.config.issuer
        # Deliberately no userinfo_endpoint: every claim ships in the ID
        # token and nothing identity-bearing is retained to serve later.
        return {
            "issuer": issuer,
            "authorization_endpoint": f"{issuer}/authorize",
            "token_endpoint": f"{issuer}/token",
            "jwks_uri": f"{issuer}/.well-known/jwks.json",
            "response_types_supported": ["code"],
            "grant_types_supported": ["authorization_code"],
            "subject_types_supported": ["public"],
            "id_token_signing_alg_values_supported": ["RS256"],
            "code_challenge_methods_supported": ["S256"],
            "token_endpoint_auth_methods_supported": ["client_secret_post", "none"],
            "scopes_supported": ["openid"],
        }

    def jwks(self) -> dict:
        return self.keyring.jwks()

    def rotate_keys(self, now: float | None = None) -> str:
        return self.keyring.rotate(now)
