"""Shared fixtures: a fresh system per test with a manual clock, the mounted
HTTP surface, and a seeded tenant/template/client/wallet arrangement."""

from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from vcbridge.clock import ManualClock
from vcbridge.http_api import create_app
from vcbridge.system import build_system
from vcbridge.wallet import SimWallet, create_issuer, issue_credential

ISSUER = "https://bridge.example"
REDIRECT_URI = "https://rp.example/cb"
PASSWORD = "correct-horse-battery-staple"

# RFC 7636 appendix vector, confirmed against hashlib before the bridge
# existed; tests for the S256 computation freeze both halves.
PKCE_VERIFIER = "dBjftJeZ4CVP-mB92K27uhbUJU1p1r_wW1gFWFOEjXk"
PKCE_CHALLENGE = "E9Melhoa2OwvFrEMTJguCHaoeK1t8URWbuGJSstw-cM"


@pytest.fixture
def clock():
    return ManualClock()


@pytest.fixture
def system(clock):
    return build_system(clock=clock)


@pytest.fixture
def app(system):
    return create_app(system)


@pytest.fixture
def http(app):
    with TestClient(app, base_url=ISSUER) as client:
        yield client


def make_spec(scope="government_identity", subject="documentNumber",
              mappings=None, is_auth_only=True, ecosystems=("eudi",),
              requested=None, name=None):
    """Engine-level template spec used by the non-HTTP tests."""
    from vcbridge.templates import ClaimMapping, EcosystemConfig, TemplateSpec

    if mappings is None:
        mappings = [ClaimMapping("documentNumber", "document_number")]
    requested = requested or [subject, "givenName"]
    return TemplateSpec(
        name=name or f"{scope} template",
        scopes=[scope],
        subject_claim=subject,
        is_auth_only=is_auth_only,
        claim_mappings=mappings,
        ecosystem_configs={
            eco: EcosystemConfig(ecosystem=eco,
                                 requested_attributes=list(requested),
                                 trusted_issuers=["did:sim:gov"],
                                 credential_type="PID")
            for eco in ecosystems
        },
    )


def make_template_body(scope="government_identity", subject="documentNumber",
                       ecosystems=("eudi",), trusted=("did:sim:gov",),
                       credential_type="PID", extra_attrs=("givenName",)):
    return {
        "name": f"{scope} check",
        "scopes": [scope],
        "subject_claim": subject,
        "is_auth_only": True,
        "claim_mappings": [
            {"source_attribute": subject, "target_claim": "document_number"},
        ],
        "ecosystem_configs": {
            eco: {
                "requested_attributes": [subject, *extra_attrs],
                "trusted_issuers": list(trusted),
                "credential_type": credential_type,
            }
            for eco in ecosystems
        },
    }


def register_tenant(http, name, scope="government_identity", **template_kwargs):
    """Admin walkthrough over the HTTP API: tenant, login, template, client."""
    http.post("/admin/tenants",
              json={"display_name": name, "admin_password": PASSWORD}
              ).raise_for_status()
    token = http.post("/admin/login", json={
        "display_name": name, "admin_password": PASSWORD}).json()["token"]
    headers = {"Authorization": f"Bearer {token}"}
    template = http.post("/admin/templates", headers=headers,
                         json=make_template_body(scope=scope, **template_kwargs))
    template.raise_for_status()
    client = http.post("/admin/clients", headers=headers, json={
        "kind": "oidc", "client_type": "confidential",
        "redirect_uris": [REDIRECT_URI], "allowed_scopes": [scope]})
    client.raise_for_status()
    return {
        "name": name,
        "admin_token": token,
        "headers": headers,
        "template": template.json(),
        "client": client.json(),
        "scope": scope,
    }


def start_authorize(system, seeded, verifier=None, scope="openid government_identity",
                    state=None, nonce=None, redirect_uri=REDIRECT_URI, **overrides):
    """Drive handle_authorize directly; returns the outcome plus the secrets
    and ids a client would hold at this point."""
    from vcbridge.jws import decode_unverified
    from vcbridge.oidc import AuthRedirect, compute_code_challenge
    from vcbridge.tokens import generate_token

    verifier = verifier or generate_token(32)
    state = generate_token(16) if state is None else state
    nonce = generate_token(16) if nonce is None else nonce
    query = {
        "response_type": "code",
        "client_id": seeded["client"]["client_id"],
        "redirect_uri": redirect_uri,
        "scope": scope,
        "state": state,
        "nonce": nonce,
        "code_challenge": compute_code_challenge(verifier),
        "code_challenge_method": "S256",
    }
    query.update(overrides)
    outcome = system.bridge.handle_authorize(query)
    flow = {"outcome": outcome, "verifier": verifier, "state": state,
            "nonce": nonce}
    if isinstance(outcome, AuthRedirect):
        from urllib.parse import parse_qsl, urlsplit
        params = dict(parse_qsl(urlsplit(outcome.url).query))
        _, payload = decode_unverified(params["token"])
        flow.update(auth_token=params["token"],
                    session_id=payload["session_id"],
                    correlation_id=payload["correlation_id"])
    return flow


def complete_verified(system, correlation_id,
                      attributes=None, issuer_id="did:sim:gov"):
    """Deliver a verified result through the authenticated service path."""
    from vcbridge.adapters import VerificationResult

    service = system.iam.issue_service_token("verifier-adapter")
    system.bridge.complete_verification(
        service.token, correlation_id,
        VerificationResult(
            correlation_id=correlation_id, verified=True,
            attributes=attributes or {"documentNumber": "X123", "givenName": "Ada"},
            issuer_id=issuer_id))


def token_form(seeded, flow, code, **overrides):
    form = {
        "grant_type": "authorization_code",
        "code": code,
        "code_verifier": flow["verifier"],
        "client_id": seeded["client"]["client_id"],
        "client_secret": seeded["client"]["client_secret"],
        "redirect_uri": REDIRECT_URI,
    }
    form.update(overrides)
    return form


@pytest.fixture
def seeded(system, http, clock):
    """One tenant with a eudi template and a confidential client, plus a
    wallet holding a matching trusted credential."""
    tenant = register_tenant(http, "Acme Bank")
    issuer = create_issuer(system.issuers, "did:sim:gov")
    wallet = SimWallet(holder_id="holder-1")
    credential = issue_credential(
        issuer, wallet, "eudi", "PID",
        {"documentNumber": "X123", "givenName": "Ada"},
        validity=3600, clock=clock)
    return {**tenant, "issuer": issuer, "wallet": wallet,
            "credential": credential}
