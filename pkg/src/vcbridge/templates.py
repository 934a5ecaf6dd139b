"""Tenant-owned proof templates, scope resolution, and claim mapping.

A proof template says what a tenant wants verified (per ecosystem) and how
verified attributes become OIDC claims. Templates bind to custom OIDC scopes;
an authorization request's scopes resolve to exactly one template.

Every read path carries the owner condition. Lookups are keyed by
(tenant_id, ...) structurally, never by concatenating untrusted input into
key strings.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field

from vcbridge.clock import Clock
from vcbridge.errors import (
    ClaimsUnsatisfied,
    InvalidScope,
    ScopeConflict,
    Unauthorized,
    ValidationError,
)
from vcbridge.faults import NO_FAULTS, FaultInjection
from vcbridge.iam import ClientRecord, IamRegistry

ECOSYSTEMS = ("aries", "ebsi", "eudi")
RESERVED_CLAIMS = {"iss", "aud", "exp", "iat", "nonce"}
STANDARD_SCOPE = "openid"


@dataclass
class ClaimMapping:
    source_attribute: str
    target_claim: str
    required: bool = True


@dataclass
class EcosystemConfig:
    ecosystem: str
    requested_attributes: list[str]
    trusted_issuers: list[str]
    credential_type: str


@dataclass
class ProofTemplate:
    template_id: str
    tenant_id: str
    name: str
    scopes: list[str]
    is_auth_only: bool
    subject_claim: str
    claim_mappings: list[ClaimMapping]
    ecosystem_configs: dict[str, EcosystemConfig]
    created_at: float


@dataclass
class TemplateSpec:
    """Validated input for create_template (tenant_id comes from the token)."""
    name: str
    scopes: list[str]
    subject_claim: str
    is_auth_only: bool = False
    claim_mappings: list[ClaimMapping] = field(default_factory=list)
    ecosystem_configs: dict[str, EcosystemConfig] = field(default_factory=dict)


@dataclass
class TemplatePage:
    items: list[ProofTemplate]
    page: int
    limit: int
    total: int


def _validate_spec(spec: TemplateSpec) -> None:
    if not spec.name.strip():
        raise ValidationError("template name must be non-empty")
    if not spec.scopes:
        raise ValidationError("template must bind at least one scope")
    if STANDARD_SCOPE in spec.scopes:
        raise ValidationError(f"{STANDARD_SCOPE!r} cannot be bound to a template")
    if len(set(spec.scopes)) != len(spec.scopes):
        raise ValidationError("duplicate scope within template")
    if not spec.ecosystem_configs:
        raise ValidationError("template needs at least one ecosystem config")
    if not spec.subject_claim:
        raise ValidationError("subject_claim is required")

    seen_targets: set[str] = set()
    for mapping in spec.claim_mappings:
        if mapping.target_claim in RESERVED_CLAIMS:
            raise ValidationError(
                f"target claim {mapping.target_claim!r} collides with a reserved claim")
        if mapping.target_claim in seen_targets:
            raise ValidationError(
                f"duplicate target claim {mapping.target_claim!r}")
        seen_targets.add(mapping.target_claim)

    required_sources = {m.source_attribute for m in spec.claim_mappings if m.required}
    for name, config in spec.ecosystem_configs.items():
        if name not in ECOSYSTEMS:
            raise ValidationError(f"unknown ecosystem {name!r}")
        if config.ecosystem != name:
            raise ValidationError("ecosystem config key and field disagree")
        missing = required_sources - set(config.requested_attributes)
        if missing:
            raise ValidationError(
                f"{name} config must request required attributes: {sorted(missing)}")
        if spec.is_auth_only and spec.subject_claim not in config.requested_attributes:
            raise ValidationError(
                f"auth-only template must request subject claim "
                f"{spec.subject_claim!r} in every ecosystem config")


class TemplateEngine:
    """In-memory document store for templates, owner-filtered end to end."""

    def __init__(self, iam: IamRegistry, clock: Clock,
                 faults: FaultInjection = NO_FAULTS):
        self._iam = iam
        self._clock = clock
        self._faults = faults
        self._lock = threading.Lock()
        self._templates: dict[str, ProofTemplate] = {}
        # (tenant_id, scope) -> template_id; the only scope resolution index.
        self._scope_index: dict[tuple[str, str], str] = {}

    def create_template(self, token: str, spec: TemplateSpec) -> ProofTemplate:
        tenant_id = self._iam.validate_admin_token(token)
        _validate_spec(spec)
        with self._lock:
            # Collision check and insert are one atomic step.
            for scope in spec.scopes:
                if (tenant_id, scope) in self._scope_index:
                    raise ScopeConflict(
                        f"scope {scope!r} already bound within this tenant")
            template = ProofTemplate(
                template_id=f"tpl_{uuid.uuid4().hex}",
                tenant_id=tenant_id,
                name=spec.name,
                scopes=list(spec.scopes),
                is_auth_only=spec.is_auth_only,
                subject_claim=spec.subject_claim,
                claim_mappings=list(spec.claim_mappings),
                ecosystem_configs=dict(spec.ecosystem_configs),
                created_at=self._clock.now(),
            )
            self._templates[template.template_id] = template
            for scope in spec.scopes:
                self._scope_index[(tenant_id, scope)] = template.template_id
            return template

    def list_templates(self, token: str, sort_by: str = "created_at",
                       order: str = "asc", limit: int = 20,
                       page: int = 1) -> TemplatePage:
        """Page through the calling tenant's templates, and nobody else's."""
        tenant_id = self._iam.validate_admin_token(token)
        if sort_by not in ("created_at", "name"):
            raise ValidationError(f"cannot sort by {sort_by!r}")
        if order not in ("asc", "desc"):
            raise ValidationError("order must be 'asc' or 'desc'")
        if limit < 1 or page < 1:
            raise ValidationError("limit and page are 1-based positive integers")
        with self._lock:
            if self._faults.skip_tenant_filter:
                owned = list(self._templates.values())
            else:
                owned = [t for t in self._templates.values()
                         if t.tenant_id == tenant_id]
        owned.sort(key=lambda t: getattr(t, sort_by), reverse=(order == "desc"))
        start = (page - 1) * limit
        return TemplatePage(items=owned[start:start + limit], page=page,
                            limit=limit, total=len(owned))

    def get_template(self, tenant_id: str, template_id: str) -> ProofTemplate | None:
        """Owner-conditioned fetch; a foreign template_id reads as absent."""
        with self._lock:
            template = self._templates.get(template_id)
        if template is None:
            return None
        if not self._faults.skip_tenant_filter and template.tenant_id != tenant_id:
            return None
        return template

    def has_scope(self, tenant_id: str, scope: str) -> bool:
        with self._lock:
            return (tenant_id, scope) in self._scope_index

    def resolve_scopes(self, client: ClientRecord,
                       requested_scopes: list[str]) -> ProofTemplate:
        """Translate the request's custom scopes into one proof template.

        The standard 'openid' scope is ignored. Every remaining scope must be
        allowed for the client and owned by the client's tenant, and all of
        them must land on the same template.
        """
        custom = [s for s in requested_scopes if s != STANDARD_SCOPE]
        if not custom:
            raise InvalidScope("no verification scope requested")
        resolved_ids = set()
        for scope in custom:
            if scope not in client.allowed_scopes:
                raise InvalidScope(f"scope {scope!r} not allowed for this client")
            with self._lock:
                template_id = self._scope_index.get((client.tenant_id, scope))
            if template_id is None:
                raise InvalidScope(f"scope {scope!r} does not resolve to a template")
            resolved_ids.add(template_id)
        if len(resolved_ids) != 1:
            raise InvalidScope("requested scopes resolve to more than one template")
        template = self.get_template(client.tenant_id, resolved_ids.pop())
        if template is None:
            raise InvalidScope("scope resolution failed")
        return template

    @staticmethod
    def map_claims(template: ProofTemplate, result) -> tuple[str, dict]:
        """Derive (sub, custom_claims) from a verified result.

        Only attributes named by a mapping survive; everything else is
        dropped. The subject claim must be present, as must the source of
        every required mapping.
        """
        if not result.verified:
            raise ValueError("map_claims requires a verified result")
        attributes = result.attributes or {}
        if template.subject_claim not in attributes:
            raise ClaimsUnsatisfied(
                f"subject attribute {template.subject_claim!r} missing from result")
        custom_claims: dict = {}
        for mapping in template.claim_mappings:
            if mapping.source_attribute in attributes:
                custom_claims[mapping.target_claim] = attributes[mapping.source_attribute]
            elif mapping.required:
                raise ClaimsUnsatisfied(
                    f"required attribute {mapping.source_attribute!r} missing")
        return attributes[template.subject_claim], custom_claims
