"""Serve the bridge on localhost with a seeded demo tenant and wallet data,
then log in against it with the rp CLI from another terminal.

    python demos/04_serve.py [port]

The script prints ready-to-paste rp CLI and curl commands. A background
thread purges expired session entries and rotates signing keys when due.
"""

import sys
import threading
import time
from pathlib import Path

import uvicorn

from vcbridge import SystemConfig, build_system
from vcbridge.http_api import create_app
from vcbridge.wallet import SimWallet, create_issuer, issue_credential

FRONTEND_DIR = Path(__file__).resolve().parents[1] / "frontend"

PASSWORD = "correct-horse-battery-staple"


def seed(system):
    iam, templates = system.iam, system.templates
    iam.register_tenant("Acme Bank", PASSWORD)
    token = iam.admin_login("Acme Bank", PASSWORD).token
    from vcbridge.templates import ClaimMapping, EcosystemConfig, TemplateSpec
    templates.create_template(token, TemplateSpec(
        name="Government identity check",
        scopes=["government_identity"],
        subject_claim="documentNumber",
        is_auth_only=True,
        claim_mappings=[ClaimMapping("documentNumber", "document_number")],
        ecosystem_configs={"eudi": EcosystemConfig(
            ecosystem="eudi",
            requested_attributes=["documentNumber", "givenName"],
            trusted_issuers=["did:sim:gov"],
            credential_type="PID")},
    ))
    client, secret = iam.register_client(
        token, "oidc", "confidential",
        redirect_uris=["http://127.0.0.1:8912/cb"],
        allowed_scopes=["government_identity"])

    issuer = create_issuer(system.issuers, "did:sim:gov")
    wallet = SimWallet(holder_id="ada")
    issue_credential(issuer, wallet, "eudi", "PID",
                     {"documentNumber": "X123", "givenName": "Ada"},
                     validity=30 * 24 * 3600, clock=system.clock)
    return client, secret, wallet


def housekeeping(system):
    while True:
        time.sleep(60)
        removed = system.store.purge_expired()
        if removed:
            print(f"[housekeeping] purged {removed} expired entries")
        if system.keyring.due_for_rotation():
            kid = system.keyring.rotate()
            print(f"[housekeeping] rotated signing key, new kid {kid}")


def main():
    port = int(sys.argv[1]) if len(sys.argv) > 1 else 8400
    base = f"http://127.0.0.1:{port}"
    frontend_built = (FRONTEND_DIR / "dist").is_dir()
    auth_ui = f"{base}/app/index.html" if frontend_built else f"{base}/auth"
    system = build_system(SystemConfig(issuer=base, auth_ui_url=auth_ui))
    client, secret, wallet = seed(system)
    threading.Thread(target=housekeeping, args=(system,), daemon=True).start()

    print(f"bridge listening on {base}")
    if frontend_built:
        print(f"auth page:     {auth_ui}")
        print(f"admin console: {base}/app/admin.html")
    else:
        print("frontend not built (cd frontend && npm install && npm run build)")
    print()
    print("log in from another terminal:")
    print(f"  rp login --issuer {base} \\")
    print(f"      --client-id {client.client_id} \\")
    print(f"      --client-secret {secret} \\")
    print("      --scopes openid,government_identity")
    print()
    print("the demo wallet holds one eudi PID credential "
          "(documentNumber=X123); drive it via the browser page or:")
    print(f"  curl '{base}/auth/context?token=<token from the authorize redirect>'")
    print()

    app = create_app(system,
                     frontend_dir=str(FRONTEND_DIR) if frontend_built else None)
    uvicorn.run(app, host="127.0.0.1", port=port, log_level="info")


if __name__ == "__main__":
    main()
