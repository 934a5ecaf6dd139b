"""Admin walkthrough: register a tenant, log in, create a proof template
bound to an OIDC scope, and register an OIDC client.

Runs fully in process against the real HTTP surface; no server needed.

    python demos/01_admin_walkthrough.py
"""

from fastapi.testclient import TestClient

from vcbridge import build_system
from vcbridge.http_api import create_app


def main():
    system = build_system()
    http = TestClient(create_app(system), base_url=system.config.issuer)

    print("=> registering tenant 'Acme Bank'")
    tenant = http.post("/admin/tenants", json={
        "display_name": "Acme Bank",
        "admin_password": "correct-horse-battery-staple",
    }).json()
    print("   tenant_id:", tenant["tenant_id"])

    print("=> logging in as the tenant admin")
    login = http.post("/admin/login", json={
        "display_name": "Acme Bank",
        "admin_password": "correct-horse-battery-staple",
    }).json()
    headers = {"Authorization": f"Bearer {login['token']}"}
    print("   token expires_at:", login["expires_at"])

    print("=> creating a proof template bound to scope 'government_identity'")
    template = http.post("/admin/templates", headers=headers, json={
        "name": "Government identity check",
        "scopes": ["government_identity"],
        "subject_claim": "documentNumber",
        "is_auth_only": True,
        "claim_mappings": [
            {"source_attribute": "documentNumber",
             "target_claim": "document_number"},
            {"source_attribute": "givenName",
             "target_claim": "given_name", "required": False},
        ],
        "ecosystem_configs": {
            "eudi": {
                "requested_attributes": ["documentNumber", "givenName"],
                "trusted_issuers": ["did:sim:gov"],
                "credential_type": "PID",
            },
            "aries": {
                "requested_attributes": ["documentNumber", "givenName"],
                "trusted_issuers": ["did:sim:gov"],
                "credential_type": "GovernmentID",
            },
        },
    }).json()
    print("   template_id:", template["template_id"],
          "ecosystems:", sorted(template["ecosystem_configs"]))

    print("=> registering a confidential OIDC client")
    client = http.post("/admin/clients", headers=headers, json={
        "kind": "oidc",
        "client_type": "confidential",
        "redirect_uris": ["https://rp.example/cb"],
        "allowed_scopes": ["government_identity"],
    }).json()
    print("   client_id:", client["client_id"])
    print("   client_secret (shown exactly once):", client["client_secret"])

    listing = http.get("/admin/clients", headers=headers).json()
    print("=> client listing never repeats the secret:",
          "client_secret" not in listing["clients"][0])

    print("=> a second template on the same scope conflicts:")
    conflict = http.post("/admin/templates", headers=headers, json={
        "name": "Duplicate", "scopes": ["government_identity"],
        "subject_claim": "documentNumber",
        "ecosystem_configs": {
            "eudi": {"requested_attributes": ["documentNumber"],
                     "trusted_issuers": ["did:sim:gov"],
                     "credential_type": "PID"}},
    })
    print("  ", conflict.status_code, conflict.json())


if __name__ == "__main__":
    main()
