"""The wire surface: admin API, protocol endpoints, verify endpoints, error
body shape, and bearer handling."""

from __future__ import annotations

from urllib.parse import parse_qsl, urlsplit

import pytest

from vcbridge.oidc import compute_code_challenge
from vcbridge.tokens import generate_token
from vcbridge.wallet import present_over_http, replay_over_http

from conftest import ISSUER, PASSWORD, REDIRECT_URI, make_template_body, register_tenant


def authorize_params(seeded, verifier, **overrides):
    params = {
        "response_type": "code",
        "client_id": seeded["client"]["client_id"],
        "redirect_uri": REDIRECT_URI,
        "scope": "openid government_identity",
        "state": generate_token(16),
        "nonce": generate_token(16),
        "code_challenge": compute_code_challenge(verifier),
        "code_challenge_method": "S256",
    }
    params.update(overrides)
    return params


def run_to_verified(http, seeded, verifier):
    response = http.get("/authorize", params=authorize_params(seeded, verifier),
                        follow_redirects=False)
    assert response.status_code == 302
    token = dict(parse_qsl(urlsplit(response.headers["location"]).query))["token"]
    context = http.get("/auth/context", params={"token": token}).json()
    present_over_http(seeded["wallet"], http, ISSUER,
                      context["correlation_id"], "eudi")
    return http.get(f"/auth/status/{context['session_id']}").json(), context


class TestAdminApi:
    def test_tenant_then_login_then_clients(self, http):
        created = http.post("/admin/tenants", json={
            "display_name": "Org", "admin_password": PASSWORD})
        assert created.status_code == 201
        login = http.post("/admin/login", json={
            "display_name": "Org", "admin_password": PASSWORD})
        assert login.status_code == 200
        headers = {"Authorization": f"Bearer {login.json()['token']}"}
        listing = http.get("/admin/clients", headers=headers)
        assert listing.status_code == 200 and listing.json() == {"clients": []}

    def test_error_body_shape(self, http):
        response = http.post("/admin/tenants", json={
            "display_name": "", "admin_password": PASSWORD})
        assert response.status_code == 400
        body = response.json()
        assert set(body) == {"error", "error_description"}
        assert body["error"] == "validation_error"

    def test_duplicate_tenant_conflict(self, http):
        body = {"display_name": "Org", "admin_password": PASSWORD}
        assert http.post("/admin/tenants", json=body).status_code == 201
        second = http.post("/admin/tenants", json=body)
        assert second.status_code == 409
        assert second.json()["error"] == "registration_conflict"

    def test_login_failures_byte_identical(self, http):
        http.post("/admin/tenants", json={
            "display_name": "Org", "admin_password": PASSWORD})
        wrong_password = http.post("/admin/login", json={
            "display_name": "Org", "admin_password": "wrong-password-x"})
        unknown_tenant = http.post("/admin/login", json={
            "display_name": "Ghost", "admin_password": "wrong-password-x"})
        assert wrong_password.status_code == unknown_tenant.status_code == 401
        assert wrong_password.content == unknown_tenant.content

    def test_client_secret_shown_exactly_once(self, http):
        tenant = register_tenant(http, "Org")
        secret = tenant["client"]["client_secret"]
        assert secret
        listing = http.get("/admin/clients", headers=tenant["headers"])
        assert secret not in listing.text
        assert "client_secret" not in listing.json()["clients"][0]

    def test_templates_pagination_params(self, http):
        tenant = register_tenant(http, "Org")
        for i in range(3):
            http.post("/admin/templates", headers=tenant["headers"],
                      json=make_template_body(scope=f"scope_{i}")
                      ).raise_for_status()
        page = http.get("/admin/templates", headers=tenant["headers"],
                        params={"sortBy": "name", "order": "desc",
                                "limit": 2, "page": 1})
        assert page.status_code == 200
        assert page.json()["total"] == 4   # 3 + the fixture template
        assert len(page.json()["templates"]) == 2

    def test_templates_require_bearer(self, http):
        response = http.get("/admin/templates")
        assert response.status_code == 401
        assert response.json()["error"] == "unauthorized"

    def test_cross_tenant_scope_rejected_at_registration(self, http):
        register_tenant(http, "Org A", scope="scope_a")
        tenant_b = register_tenant(http, "Org B", scope="scope_b")
        response = http.post("/admin/clients", headers=tenant_b["headers"], json={
            "kind": "oidc", "client_type": "public",
            "redirect_uris": [REDIRECT_URI], "allowed_scopes": ["scope_a"]})
        assert response.status_code == 400
        assert response.json()["error"] == "invalid_scope"


class TestProtocolEndpoints:
    def test_discovery_and_jwks(self, http):
        document = http.get("/.well-known/openid-configuration").json()
        assert document["issuer"] == ISSUER
        assert "userinfo_endpoint" not in document
        jwks = http.get("/.well-known/jwks.json").json()
        assert len(jwks["keys"]) == 1

    def test_authorize_invalid_redirect_is_error_page_not_redirect(self, http, seeded):
        params = authorize_params(seeded, generate_token(32),
                                  redirect_uri=REDIRECT_URI + "/")
        response = http.get("/authorize", params=params, follow_redirects=False)
        assert response.status_code == 400
        assert "location" not in response.headers
        assert "text/html" in response.headers["content-type"]

    def test_authorize_error_redirect_carries_state(self, http, seeded):
        params = authorize_params(seeded, generate_token(32),
                                  scope="openid not_yours")
        response = http.get("/authorize", params=params, follow_redirects=False)
        assert response.status_code == 302
        sent = dict(parse_qsl(urlsplit(response.headers["location"]).query))
        assert sent["error"] == "invalid_scope"
        assert sent["state"] == params["state"]

    def test_full_flow_over_http(self, http, seeded, system):
        verifier = generate_token(32)
        status, _ = run_to_verified(http, seeded, verifier)
        assert status["status"] == "verified"
        token = http.post("/token", data={
            "grant_type": "authorization_code",
            "code": status["redirect"]["code"],
            "code_verifier": verifier,
            "client_id": seeded["client"]["client_id"],
            "client_secret": seeded["client"]["client_secret"],
            "redirect_uri": REDIRECT_URI,
        })
        assert token.status_code == 200
        assert token.json()["token_type"] == "Bearer"

    def test_token_endpoint_oauth_error_codes(self, http, seeded):
        response = http.post("/token", data={"grant_type": "client_credentials"})
        assert response.status_code == 400
        assert response.json()["error"] == "unsupported_grant_type"
        response = http.post("/token", data={
            "grant_type": "authorization_code", "code": "nope",
            "code_verifier": "x", "client_id": "ghost",
            "redirect_uri": REDIRECT_URI})
        assert response.status_code == 401
        assert response.json()["error"] == "invalid_client"

    def test_authorize_sets_hardened_session_cookie(self, http, seeded):
        response = http.get("/authorize",
                            params=authorize_params(seeded, generate_token(32)),
                            follow_redirects=False)
        cookie = response.headers["set-cookie"]
        assert cookie.startswith("bridge_auth_session=")
        assert "HttpOnly" in cookie
        assert "Secure" in cookie
        assert "SameSite=lax" in cookie.replace("SameSite=Lax", "SameSite=lax")

    @pytest.mark.parametrize("ecosystem", ["eudi", "aries", "ebsi"])
    def test_honest_wallet_completes_flow_in_every_ecosystem(
            self, system, http, clock, ecosystem):
        """Honest completeness: a matching credential always reaches a token."""
        from vcbridge.wallet import SimWallet, create_issuer, issue_credential

        tenant = register_tenant(http, f"Org {ecosystem}",
                                 ecosystems=(ecosystem,),
                                 credential_type="GenericID")
        issuer = create_issuer(system.issuers, "did:sim:gov")
        wallet = SimWallet(holder_id=f"holder-{ecosystem}")
        issue_credential(issuer, wallet, ecosystem, "GenericID",
                         {"documentNumber": "N1", "givenName": "Ada"},
                         validity=3600, clock=clock)
        seeded = {**tenant, "wallet": wallet}

        verifier = generate_token(32)
        response = http.get("/authorize",
                            params=authorize_params(seeded, verifier),
                            follow_redirects=False)
        token_param = dict(parse_qsl(
            urlsplit(response.headers["location"]).query))["token"]
        context = http.get("/auth/context", params={"token": token_param}).json()
        assert context["template"]["ecosystems"] == [ecosystem]
        result = present_over_http(wallet, http, ISSUER,
                                   context["correlation_id"], ecosystem)
        assert result["verified"] is True
        status = http.get(f"/auth/status/{context['session_id']}").json()
        tokens = http.post("/token", data={
            "grant_type": "authorization_code",
            "code": status["redirect"]["code"],
            "code_verifier": verifier,
            "client_id": seeded["client"]["client_id"],
            "client_secret": seeded["client"]["client_secret"],
            "redirect_uri": REDIRECT_URI,
        })
        assert tokens.status_code == 200
        assert "id_token" in tokens.json()

    def test_status_endpoint_lifecycle(self, http, seeded, clock):
        verifier = generate_token(32)
        response = http.get("/authorize",
                            params=authorize_params(seeded, verifier),
                            follow_redirects=False)
        token = dict(parse_qsl(urlsplit(response.headers["location"]).query))["token"]
        context = http.get("/auth/context", params={"token": token}).json()
        assert http.get(f"/auth/status/{context['session_id']}").json() == {
            "status": "pending"}
        clock.advance(30 * 60)
        expired = http.get(f"/auth/status/{context['session_id']}")
        assert expired.status_code == 404
        assert expired.json()["error"] == "session_not_found"


class TestFrontendMount:
    def test_frontend_served_when_mounted(self, system):
        from pathlib import Path

        from fastapi.testclient import TestClient

        from vcbridge.http_api import create_app

        frontend = Path(__file__).resolve().parents[1] / "frontend"
        app = create_app(system, frontend_dir=str(frontend))
        with TestClient(app, base_url=ISSUER) as client:
            page = client.get("/app/index.html")
            assert page.status_code == 200
            assert "app" in page.text
            admin = client.get("/app/admin.html")
            assert admin.status_code == 200
            # API endpoints still work alongside the mount.
            assert client.get("/.well-known/openid-configuration").status_code == 200


class TestVerifyEndpoints:
    def test_request_requires_known_correlation(self, http):
        response = http.get("/verify/request/ghost", params={"ecosystem": "eudi"})
        assert response.status_code == 404
        assert response.json()["error"] == "correlation_not_found"

    def test_request_returns_presentation_request_with_deep_link(self, http, seeded):
        verifier = generate_token(32)
        response = http.get("/authorize",
                            params=authorize_params(seeded, verifier),
                            follow_redirects=False)
        token = dict(parse_qsl(urlsplit(response.headers["location"]).query))["token"]
        context = http.get("/auth/context", params={"token": token}).json()
        request = http.get(f"/verify/request/{context['correlation_id']}",
                           params={"ecosystem": "eudi"}).json()
        assert request["correlation_id"] == context["correlation_id"]
        assert request["credential_type"] == "PID"
        assert request["deep_link"].startswith("eudi-openid4vp://")

    def test_present_replay_reports_nonce_replayed(self, http, seeded):
        verifier = generate_token(32)
        response = http.get("/authorize",
                            params=authorize_params(seeded, verifier),
                            follow_redirects=False)
        token = dict(parse_qsl(urlsplit(response.headers["location"]).query))["token"]
        context = http.get("/auth/context", params={"token": token}).json()
        first = present_over_http(seeded["wallet"], http, ISSUER,
                                  context["correlation_id"], "eudi")
        assert first["verified"] is True
        replay = replay_over_http(seeded["wallet"], http, ISSUER,
                                  context["correlation_id"])
        assert replay["verified"] is False
        assert replay["failure_reason"] == "nonce_replayed"
        # Session outcome unchanged by the replay.
        status = http.get(f"/auth/status/{context['session_id']}").json()
        assert status["status"] == "verified"

    def test_internal_result_requires_service_token(self, http, seeded, system):
        verifier = generate_token(32)
        response = http.get("/authorize",
                            params=authorize_params(seeded, verifier),
                            follow_redirects=False)
        token = dict(parse_qsl(urlsplit(response.headers["location"]).query))["token"]
        context = http.get("/auth/context", params={"token": token}).json()
        body = {"correlation_id": context["correlation_id"], "verified": True,
                "attributes": {"documentNumber": "FORGED"}}
        assert http.post("/internal/verification-result", json=body).status_code == 401
        service = system.iam.issue_service_token("verifier-adapter")
        accepted = http.post(
            "/internal/verification-result", json=body,
            headers={"Authorization": f"Bearer {service.token}"})
        assert accepted.status_code == 200
