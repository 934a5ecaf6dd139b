"""Embedded tenant and client registry.

Provides admin authentication, OAuth client credential validation, and the
tenant-scoped authorization context every other module leans on. Runs fully
in-process so the whole system is hermetic; the contracts mirror what a
dedicated IAM product would expose.

Isolation rule enforced here and relied on everywhere: a token scoped to
tenant A can never read, list, or mutate a record owned by tenant B.
"""

from __future__ import annotations

import hmac
import threading
import uuid
from dataclasses import dataclass, field
from typing import Callable
from urllib.parse import urlsplit

from vcbridge.clock import Clock
from vcbridge.errors import (
    InvalidClient,
    InvalidScope,
    RegistrationConflict,
    Unauthorized,
    ValidationError,
)
from vcbridge.tokens import ScryptParams, generate_token, hash_secret, verify_secret

MIN_PASSWORD_LENGTH = 12
ADMIN_SESSION_TTL = 30 * 60
SERVICE_TOKEN_TTL = 5 * 60

# Single message for every credential failure: no account enumeration.
_BAD_CREDENTIALS = "invalid credentials"


@dataclass
class Tenant:
    tenant_id: str
    display_name: str
    admin_credential_hash: str = field(repr=False)
    created_at: float


@dataclass
class ClientRecord:
    client_id: str
    client_type: str                 # confidential | public
    client_secret_hash: str | None   # present iff confidential
    tenant_id: str
    kind: str                        # oidc | api
    redirect_uris: list[str]
    allowed_scopes: list[str]
    created_at: float


@dataclass
class AdminToken:
    token: str = field(repr=False)
    subject_tenant_id: str
    expires_at: float


@dataclass
class ServiceToken:
    token: str = field(repr=False)
    service_name: str
    expires_at: float


def _is_absolute_uri(uri: str) -> bool:
    parts = urlsplit(uri)
    return bool(parts.scheme) and bool(parts.netloc)


class IamRegistry:
    """Tenants, clients, and the bearer tokens that authorize them.

    ``scope_exists`` is injected by the composition root so client
    registration can check that every allowed scope resolves to a proof
    template owned by the registering tenant (checked again at use by the
    template engine).
    """

    def __init__(self, clock: Clock,
                 scope_exists: Callable[[str, str], bool] | None = None,
                 hash_params: ScryptParams = ScryptParams(),
                 admin_session_ttl: float = ADMIN_SESSION_TTL,
                 service_token_ttl: float = SERVICE_TOKEN_TTL):
        self._clock = clock
        self._scope_exists = scope_exists
        self._hash_params = hash_params
        self._admin_session_ttl = admin_session_ttl
        self._service_token_ttl = service_token_ttl
        self._lock = threading.Lock()
        self._tenants: dict[str, Tenant] = {}
        self._tenants_by_name: dict[str, str] = {}
        self._clients: dict[str, ClientRecord] = {}
        self._admin_tokens: dict[str, AdminToken] = {}
        self._service_tokens: dict[str, ServiceToken] = {}
        # Dummy hash keeps unknown-tenant logins on the same code path as
        # wrong-password logins.
        self._decoy_hash = hash_secret(generate_token(), hash_params)

    def bind_scope_lookup(self, scope_exists: Callable[[str, str], bool]) -> None:
        self._scope_exists = scope_exists

    # -- tenants -----------------------------------------------------------

    def register_tenant(self, display_name: str, admin_password: str) -> Tenant:
        if not display_name.strip():
            raise ValidationError("display_name must be non-empty")
        if len(admin_password) < MIN_PASSWORD_LENGTH:
            raise ValidationError(
                f"admin password must be at least {MIN_PASSWORD_LENGTH} characters")
        credential_hash = hash_secret(admin_password, self._hash_params)
        with self._lock:
            if display_name in self._tenants_by_name:
                raise RegistrationConflict(
                    f"tenant {display_name!r} already registered")
            tenant = Tenant(
                tenant_id=f"tnt_{uuid.uuid4().hex}",
                display_name=display_name,
                admin_credential_hash=credential_hash,
                created_at=self._clock.now(),
            )
            self._tenants[tenant.tenant_id] = tenant
            self._tenants_by_name[display_name] = tenant.tenant_id
            return tenant

    def admin_login(self, display_name: str, admin_password: str) -> AdminToken:
        with self._lock:
            tenant_id = self._tenants_by_name.get(display_name)
            stored = (self._tenants[tenant_id].admin_credential_hash
                      if tenant_id else self._decoy_hash)
        ok = verify_secret(admin_password, stored)
        if tenant_id is None or not ok:
            raise Unauthorized(_BAD_CREDENTIALS)
        token = AdminToken(
            token=generate_token(),
            subject_tenant_id=tenant_id,
            expires_at=self._clock.now() + self._admin_session_ttl,
        )
        with self._lock:
            self._admin_tokens[token.token] = token
        return token

    def validate_admin_token(self, token: str | None) -> str:
        """Returns the subject tenant_id or raises Unauthorized."""
        if not token:
            raise Unauthorized("missing bearer token")
        with self._lock:
            record = self._admin_tokens.get(token)
        if record is None or self._clock.now() >= record.expires_at:
            raise Unauthorized("invalid or expired token")
        return record.subject_tenant_id

    def get_tenant(self, tenant_id: str) -> Tenant | None:
        with self._lock:
            return self._tenants.get(tenant_id)

    # -- clients -----------------------------------------------------------

    def register_client(self, token: str, kind: str, client_type: str,
                        redirect_uris: list[str] | None = None,
                        allowed_scopes: list[str] | None = None,
                        ) -> tuple[ClientRecord, str | None]:
        """Register an OIDC or direct-API client for the token's tenant.

        Returns the record plus the plaintext secret for confidential
        clients. The secret is shown exactly once; only its hash is kept.
        """
        tenant_id = self.validate_admin_token(token)
        redirect_uris = list(redirect_uris or [])
        allowed_scopes = list(allowed_scopes or [])

        if kind not in ("oidc", "api"):
            raise ValidationError(f"unknown client kind {kind!r}")
        if client_type not in ("confidential", "public"):
            raise ValidationError(f"unknown client type {client_type!r}")
        if kind == "oidc":
            if not redirect_uris:
                raise ValidationError("oidc clients need at least one redirect_uri")
            for uri in redirect_uris:
                if not _is_absolute_uri(uri):
                    raise ValidationError(f"redirect_uri {uri!r} is not absolute")
        elif redirect_uris:
            raise ValidationError("api clients must not declare redirect_uris")

        for scope in allowed_scopes:
            if self._scope_exists is None or not self._scope_exists(tenant_id, scope):
                raise InvalidScope(
                    f"scope {scope!r} does not resolve to a proof template "
                    "owned by this tenant")

        plaintext_secret = generate_token() if client_type == "confidential" else None
        record = ClientRecord(
            client_id=f"cli_{uuid.uuid4().hex}",
            client_type=client_type,
            client_secret_hash=(hash_secret(plaintext_secret, self._hash_params)
                                if plaintext_secret else None),
            tenant_id=tenant_id,
            kind=kind,
            redirect_uris=redirect_uris,
            allowed_scopes=allowed_scopes,
            created_at=self._clock.now(),
        )
        with self._lock:
            self._clients[record.client_id] = record
        return record, plaintext_secret

    def list_clients(self, token: str) -> list[ClientRecord]:
        tenant_id = self.validate_admin_token(token)
        with self._lock:
            return [c for c in self._clients.values() if c.tenant_id == tenant_id]

    def get_client(self, client_id: str) -> ClientRecord | None:
        """Unauthenticated lookup for protocol-internal use only."""
        with self._lock:
            return self._clients.get(client_id)

    def validate_client(self, client_id: str,
                        presented_secret: str | None = None) -> ClientRecord:
        """OAuth client authentication.

        One error code for every failure mode (unknown id, wrong secret,
        secret presented to a public client) so callers learn nothing about
        which part was wrong.
        """
        with self._lock:
            record = self._clients.get(client_id)
        if record is None:
            # Burn a comparison anyway to keep timing flat.
            hmac.compare_digest("x", "y")
            raise InvalidClient("client authentication failed")
        if record.client_type == "public":
            if presented_secret is not None:
                raise InvalidClient("client authentication failed")
            return record
        if presented_secret is None or not verify_secret(
                presented_secret, record.client_secret_hash or ""):
            raise InvalidClient("client authentication failed")
        return record

    # -- service tokens ------------------------------------------------------

    def issue_service_token(self, service_name: str) -> ServiceToken:
        token = ServiceToken(
            token=generate_token(),
            service_name=service_name,
            expires_at=self._clock.now() + self._service_token_ttl,
        )
        with self._lock:
            self._service_tokens[token.token] = token
        return token

    def validate_service_token(self, token: str | None) -> str:
        if not token:
            raise Unauthorized("missing service token")
        with self._lock:
            record = self._service_tokens.get(token)
        if record is None or self._clock.now() >= record.expires_at:
            raise Unauthorized("invalid or expired service token")
        return record.service_name
