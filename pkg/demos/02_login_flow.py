"""The complete bridged login, narrated step by step: a relying party starts
a PKCE code flow, a simulated wallet presents a credential, and the RP ends
up with a validated RS256 ID token carrying mapped claims.

    python demos/02_login_flow.py
"""

import json
from urllib.parse import parse_qsl, urlsplit

from fastapi.testclient import TestClient

from vcbridge import build_system
from vcbridge.http_api import create_app
from vcbridge.rp.client import RpConfig, begin_login, finish_login
from vcbridge.wallet import SimWallet, create_issuer, issue_credential, present_over_http

ISSUER = "https://bridge.example"


def seed(system, http):
    http.post("/admin/tenants", json={
        "display_name": "Acme Bank",
        "admin_password": "correct-horse-battery-staple"})
    token = http.post("/admin/login", json={
        "display_name": "Acme Bank",
        "admin_password": "correct-horse-battery-staple"}).json()["token"]
    headers = {"Authorization": f"Bearer {token}"}
    http.post("/admin/templates", headers=headers, json={
        "name": "Government identity check",
        "scopes": ["government_identity"],
        "subject_claim": "documentNumber",
        "is_auth_only": True,
        "claim_mappings": [{"source_attribute": "documentNumber",
                            "target_claim": "document_number"}],
        "ecosystem_configs": {"eudi": {
            "requested_attributes": ["documentNumber", "givenName"],
            "trusted_issuers": ["did:sim:gov"],
            "credential_type": "PID"}},
    })
    client = http.post("/admin/clients", headers=headers, json={
        "kind": "oidc", "client_type": "confidential",
        "redirect_uris": ["https://rp.example/cb"],
        "allowed_scopes": ["government_identity"]}).json()

    issuer = create_issuer(system.issuers, "did:sim:gov")
    wallet = SimWallet(holder_id="ada")
    issue_credential(issuer, wallet, "eudi", "PID",
                     {"documentNumber": "X123", "givenName": "Ada"},
                     validity=3600, clock=system.clock)
    return client, wallet


def main():
    system = build_system()
    http = TestClient(create_app(system), base_url=ISSUER)
    client, wallet = seed(system, http)

    config = RpConfig(issuer_url=ISSUER, client_id=client["client_id"],
                      client_secret=client["client_secret"],
                      redirect_uri="https://rp.example/cb",
                      scopes=("openid", "government_identity"))

    print("=> RP: discovery + PKCE authorize URL")
    authorize_url, pending = begin_login(config, http)
    print("   state:", pending.state)
    print("   verifier:", pending.code_verifier)

    print("=> user agent follows the authorize redirect")
    response = http.get(authorize_url, follow_redirects=False)
    ui = dict(parse_qsl(urlsplit(response.headers["location"]).query))
    context = http.get("/auth/context", params={"token": ui["token"]}).json()
    print("   template offered:", context["template"])

    print("=> wallet fetches the presentation request and presents")
    result = present_over_http(wallet, http, ISSUER,
                               context["correlation_id"], "eudi")
    print("   verifier outcome:", result["verified"])

    print("=> auth UI polls status and finds the RP callback payload")
    status = http.get(f"/auth/status/{context['session_id']}").json()
    print("   status:", status["status"])

    print("=> RP finishes the login: code exchange + JWKS validation")
    claims = finish_login(config, {"code": status["redirect"]["code"],
                                   "state": status["redirect"]["state"]},
                          pending, http, now=system.clock.now())
    print(json.dumps(claims, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
