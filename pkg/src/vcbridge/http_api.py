"""HTTP surface of the bridge.

Admin API (bearer AdminToken), OIDC protocol endpoints, the auth UI's
polling endpoints, the internal verification-result intake (bearer
ServiceToken), and the southbound verify endpoints consumed by wallets.
Errors serialize as ``{"error", "error_description"}`` with OAuth 2.0 codes
on the token endpoint.
"""

from __future__ import annotations

import base64
import html

from fastapi import FastAPI, Header, Query, Request
from fastapi.responses import HTMLResponse, JSONResponse, RedirectResponse
from pydantic import BaseModel, Field

from vcbridge.adapters import Presentation, PresentationRequest, VerificationResult
from vcbridge.errors import (
    BridgeError,
    CorrelationNotFound,
    InvalidState,
    Unauthorized,
    ValidationError,
)
from vcbridge.oidc import AUTH_TOKEN_TTL, AuthRedirect, ErrorPage, ErrorRedirect
from vcbridge.store import Namespace
from vcbridge.system import BridgeSystem
from vcbridge.templates import ClaimMapping, EcosystemConfig, TemplateSpec


def _bearer(authorization: str | None) -> str | None:
    if not authorization or not authorization.startswith("Bearer "):
        return None
    return authorization[len("Bearer "):]


class TenantIn(BaseModel):
    display_name: str
    admin_password: str


class LoginIn(BaseModel):
    display_name: str
    admin_password: str


class ClientIn(BaseModel):
    kind: str = "oidc"
    client_type: str = "confidential"
    redirect_uris: list[str] = Field(default_factory=list)
    allowed_scopes: list[str] = Field(default_factory=list)


class ClaimMappingIn(BaseModel):
    source_attribute: str
    target_claim: str
    required: bool = True


class EcosystemConfigIn(BaseModel):
    requested_attributes: list[str]
    trusted_issuers: list[str]
    credential_type: str


class TemplateIn(BaseModel):
    name: str
    scopes: list[str]
    subject_claim: str
    is_auth_only: bool = False
    claim_mappings: list[ClaimMappingIn] = Field(default_factory=list)
    ecosystem_configs: dict[str, EcosystemConfigIn] = Field(default_factory=dict)


class PresentationIn(BaseModel):
    ecosystem: str
    credential_type: str
    issuer_id: str
    attributes: dict
    challenge_nonce_echo: str
    holder_signature: str          # base64
    credential_expires_at: float
    credential_id: str


class VerificationResultIn(BaseModel):
    correlation_id: str
    verified: bool
    attributes: dict | None = None
    issuer_id: str | None = None
    failure_reason: str | None = None


def _client_out(record, secret: str | None = None) -> dict:
    out = {
        "client_id": record.client_id,
        "client_type": record.client_type,
        "kind": record.kind,
        "tenant_id": record.tenant_id,
        "redirect_uris": record.redirect_uris,
        "allowed_scopes": record.allowed_scopes,
        "created_at": record.created_at,
    }
    if secret is not None:
        out["client_secret"] = secret
    return out


def _template_out(template) -> dict:
    return {
        "template_id": template.template_id,
        "tenant_id": template.tenant_id,
        "name": template.name,
        "scopes": template.scopes,
        "is_auth_only": template.is_auth_only,
        "subject_claim": template.subject_claim,
        "claim_mappings": [vars(m) for m in template.claim_mappings],
        "ecosystem_configs": {k: vars(v) for k, v in template.ecosystem_configs.items()},
        "created_at": template.created_at,
    }


def create_app(system: BridgeSystem, frontend_dir: str | None = None) -> FastAPI:
    """Mount the API; optionally serve the browser frontend under /app."""
    app = FastAPI(title="vcbridge", docs_url=None, redoc_url=None)
    bridge = system.bridge

    if frontend_dir is not None:
        from fastapi.staticfiles import StaticFiles
        app.mount("/app", StaticFiles(directory=frontend_dir, html=True),
                  name="frontend")

    @app.exception_handler(BridgeError)
    def bridge_error_handler(_request: Request, exc: BridgeError):
        return JSONResponse(status_code=exc.http_status, content=exc.body())

    # -- admin: tenants and clients ------------------------------------------

    @app.post("/admin/tenants", status_code=201)
    def register_tenant(body: TenantIn):
        tenant = system.iam.register_tenant(body.display_name, body.admin_password)
        return {"tenant_id": tenant.tenant_id, "display_name": tenant.display_name,
                "created_at": tenant.created_at}

    @app.post("/admin/login")
    def admin_login(body: LoginIn):
        token = system.iam.admin_login(body.display_name, body.admin_password)
        return {"token": token.token, "tenant_id": token.subject_tenant_id,
                "expires_at": token.expires_at}

    @app.post("/admin/clients", status_code=201)
    def register_client(body: ClientIn, authorization: str | None = Header(None)):
        record, secret = system.iam.register_client(
            _bearer(authorization) or "", body.kind, body.client_type,
            body.redirect_uris, body.allowed_scopes)
        return _client_out(record, secret)

    @app.get("/admin/clients")
    def list_clients(authorization: str | None = Header(None)):
        records = system.iam.list_clients(_bearer(authorization) or "")
        return {"clients": [_client_out(r) for r in records]}

    # -- admin: proof templates ------------------------------------------------

    @app.post("/admin/templates", status_code=201)
    def create_template(body: TemplateIn, authorization: str | None = Header(None)):
        spec = TemplateSpec(
            name=body.name,
            scopes=body.scopes,
            subject_claim=body.subject_claim,
            is_auth_only=body.is_auth_only,
            claim_mappings=[ClaimMapping(**m.model_dump()) for m in body.claim_mappings],
            ecosystem_configs={
                name: EcosystemConfig(ecosystem=name, **cfg.model_dump())
                for name, cfg in body.ecosystem_configs.items()
            },
        )
        template = system.templates.create_template(_bearer(authorization) or "", spec)
        return _template_out(template)

    @app.get("/admin/templates")
    def list_templates(authorization: str | None = Header(None),
                       sortBy: str = Query("created_at"),
                       order: str = Query("asc"),
                       limit: int = Query(20), page: int = Query(1)):
        result = system.templates.list_templates(
            _bearer(authorization) or "", sort_by=sortBy, order=order,
            limit=limit, page=page)
        return {"templates": [_template_out(t) for t in result.items],
                "page": result.page, "limit": result.limit, "total": result.total}

    # -- OIDC protocol -----------------------------------------------------------

    @app.get("/authorize")
    def authorize(request: Request):
        outcome = bridge.handle_authorize(dict(request.query_params))
        if isinstance(outcome, AuthRedirect):
            response = RedirectResponse(outcome.url, status_code=302)
            # Defense-in-depth binding of the browser to its session; the
            # signed auth token remains the load-bearing credential.
            response.set_cookie(
                "bridge_auth_session", outcome.session_id,
                max_age=30 * 60, httponly=True,
                secure=bridge.config.cookie_secure,
                samesite=bridge.config.cookie_samesite.lower())
            return response
        if isinstance(outcome, ErrorRedirect):
            return RedirectResponse(outcome.url, status_code=302)
        assert isinstance(outcome, ErrorPage)
        body = (f"<html><body><h1>Authorization error</h1>"
                f"<p>{html.escape(outcome.error)}: "
                f"{html.escape(outcome.description)}</p></body></html>")
        return HTMLResponse(body, status_code=400)

    @app.post("/token")
    async def token(request: Request):
        form = await request.form()
        return bridge.handle_token({k: v for k, v in form.items()})

    @app.get("/.well-known/openid-configuration")
    def discovery():
        return bridge.discovery_document()

    @app.get("/.well-known/jwks.json")
    def jwks():
        return bridge.jwks()

    # -- auth UI support ----------------------------------------------------------

    @app.get("/auth/context")
    def auth_context(token: str = Query(...)):
        return bridge.auth_context(token)

    @app.get("/auth/status/{session_id}")
    def auth_status(session_id: str):
        return bridge.verification_status(session_id)

    # -- internal northbound result intake ------------------------------------------

    @app.post("/internal/verification-result")
    def verification_result(body: VerificationResultIn,
                            authorization: str | None = Header(None)):
        service_token = _bearer(authorization)
        if service_token is None:
            raise Unauthorized("service token required")
        bridge.complete_verification(
            service_token, body.correlation_id,
            VerificationResult(
                correlation_id=body.correlation_id, verified=body.verified,
                attributes=body.attributes, issuer_id=body.issuer_id,
                failure_reason=body.failure_reason))
        return {"accepted": True}

    # -- southbound verify endpoints (wallets / auth UI) ------------------------------

    @app.get("/verify/request/{correlation_id}")
    def verify_request(correlation_id: str,
                       ecosystem: str = Query(...)):
        record = system.store.get(Namespace.AUTH_TOKEN, f"corr:{correlation_id}")
        if record is None:
            raise CorrelationNotFound("unknown or expired correlation id")
        template = system.templates.get_template(record["tenant_id"],
                                                 record["template_id"])
        if template is None:
            raise CorrelationNotFound("template no longer available")
        request_obj = system.adapters.build_request(template, ecosystem,
                                                    correlation_id)
        system.store.put(Namespace.CHALLENGE, f"request:{correlation_id}",
                         request_obj.to_dict(), AUTH_TOKEN_TTL)
        out = request_obj.to_dict()
        out["deep_link"] = system.adapters.deep_link(request_obj)
        return out

    @app.post("/verify/present/{correlation_id}")
    def verify_present(correlation_id: str, body: PresentationIn):
        stored = system.store.get(Namespace.CHALLENGE, f"request:{correlation_id}")
        if stored is None:
            raise CorrelationNotFound("no active presentation request")
        request_obj = PresentationRequest.from_dict(stored)
        if body.ecosystem != request_obj.ecosystem:
            raise ValidationError("presentation ecosystem does not match the request")
        try:
            signature = base64.b64decode(body.holder_signature, validate=True)
        except Exception:
            raise ValidationError("holder_signature must be base64") from None
        presentation = Presentation(
            ecosystem=body.ecosystem,
            credential_type=body.credential_type,
            issuer_id=body.issuer_id,
            attributes=body.attributes,
            challenge_nonce_echo=body.challenge_nonce_echo,
            holder_signature=signature,
            credential_expires_at=body.credential_expires_at,
            credential_id=body.credential_id,
        )
        result = system.adapters.verify_presentation(request_obj, presentation)
        service = system.iam.issue_service_token("verifier-adapter")
        try:
            bridge.complete_verification(service.token, correlation_id, result)
        except InvalidState:
            # The session already settled; report the presentation outcome
            # without disturbing it (replays land here).
            pass
        return {
            "correlation_id": result.correlation_id,
            "verified": result.verified,
            "attributes": result.attributes,
            "issuer_id": result.issuer_id,
            "failure_reason": result.failure_reason,
        }

    @app.get("/healthz")
    def healthz():
        return {"ok": True}

    return app
