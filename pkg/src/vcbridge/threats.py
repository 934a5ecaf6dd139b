"""Executable threat model: one scripted attack per identified threat.

Each scenario stands up a fresh system, mounts the real HTTP surface, runs
the attack end to end, and reports whether the documented control blocked
it. ``run_all`` renders the traceability matrix with a pass/fail column; the
suite is green only when all eleven scenarios are blocked.

Fault-injection switches let the suite prove it can detect regressions: a
build with the PKCE check disabled must un-block AT1.
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass, field
from urllib.parse import parse_qsl, urlsplit

from fastapi.testclient import TestClient

from vcbridge.clock import ManualClock
from vcbridge.errors import UnknownScenario
from vcbridge.faults import NO_FAULTS, FaultInjection
from vcbridge.http_api import create_app
from vcbridge.jws import b64url_decode, b64url_encode
from vcbridge.oidc import compute_code_challenge
from vcbridge.rp.client import CsrfDetected, TokenInvalid, finish_login, validate_id_token
from vcbridge.system import build_system
from vcbridge.tokens import generate_token
from vcbridge.wallet import (
    SimWallet,
    Tamper,
    create_issuer,
    issue_credential,
    present_over_http,
    replay_over_http,
)

CONTROLS = {
    "IS1": "PKCE binding of authorization requests to the token exchange",
    "IS2": "Cryptographic binding parameters (state, nonce, challenge nonce)",
    "IS3": "Cryptographic validation (RS256 signatures, strict audience)",
    "IS4": "Server-side template enforcement with mandatory owner filters",
    "IS5": "Secure session management (UUIDv4 ids, TTL expiry, cookie policy)",
    "IS6": "Tenant-scoped authorization in the client/tenant registry",
    "IS7": "Namespace isolation in the session store",
    "IS8": "Input validation and exact redirect URI matching",
    "IS9": "Deployment hygiene and aggressive credential expiry",
}


@dataclass(frozen=True)
class AttackScenario:
    id: str
    description: str
    primary_control: str
    supporting_controls: tuple[str, ...]


THREAT_MATRIX: tuple[AttackScenario, ...] = (
    AttackScenario("AT1", "Authorization code interception", "IS1", ("IS2", "IS5")),
    AttackScenario("AT2", "Cross-site request forgery", "IS2", ("IS5", "IS8")),
    AttackScenario("AT3", "ID token replay and theft", "IS2", ("IS3", "IS5")),
    AttackScenario("AT4", "Session hijacking", "IS5", ("IS2", "IS9")),
    AttackScenario("AT5", "Proof request manipulation", "IS4", ("IS3", "IS8")),
    AttackScenario("AT6", "Verification result spoofing", "IS3", ("IS6",)),
    AttackScenario("AT7", "Credential presentation replay", "IS2", ("IS3", "IS9")),
    AttackScenario("AT8", "Client credential isolation", "IS6", ("IS4", "IS7")),
    AttackScenario("AT9", "Session data isolation", "IS7", ("IS6",)),
    AttackScenario("AT10", "Proof template isolation", "IS4", ("IS6", "IS7")),
    AttackScenario("AT11", "Token audience misuse", "IS3", ("IS6",)),
)

SCENARIOS_BY_ID = {s.id: s for s in THREAT_MATRIX}


@dataclass
class ScenarioOutcome:
    id: str
    blocked: bool
    observed_error: str
    detail: str = ""


@dataclass
class ThreatReport:
    outcomes: list[ScenarioOutcome] = field(default_factory=list)

    @property
    def all_blocked(self) -> bool:
        return all(o.blocked for o in self.outcomes)

    def to_markdown(self) -> str:
        lines = [
            "| ID | Threat | Primary control | Supporting | Result | Observed |",
            "|----|--------|-----------------|------------|--------|----------|",
        ]
        for outcome in self.outcomes:
            scenario = SCENARIOS_BY_ID[outcome.id]
            result = "blocked" if outcome.blocked else "NOT BLOCKED"
            lines.append(
                f"| {scenario.id} | {scenario.description} "
                f"| {scenario.primary_control} "
                f"| {', '.join(scenario.supporting_controls)} "
                f"| {result} | {outcome.observed_error} |")
        blocked = sum(1 for o in self.outcomes if o.blocked)
        lines.append("")
        lines.append(f"{blocked}/{len(self.outcomes)} threats blocked.")
        return "\n".join(lines)


class _Fixture:
    """One disposable system per scenario: two tenants, a template and an
    OIDC client each, one wallet holding a matching credential."""

    ISSUER = "https://bridge.example"
    REDIRECT_URI = "https://rp.example/cb"
    SCOPE = "government_identity"
    SUBJECT = "documentNumber"

    def __init__(self, faults: FaultInjection = NO_FAULTS):
        self.clock = ManualClock()
        self.system = build_system(clock=self.clock, faults=faults)
        self.app = create_app(self.system)
        self.http = TestClient(self.app, base_url=self.ISSUER)
        self._seed()

    def _admin(self, name: str, scope: str) -> dict:
        password = generate_token()
        self.http.post("/admin/tenants", json={
            "display_name": name, "admin_password": password}).raise_for_status()
        token = self.http.post("/admin/login", json={
            "display_name": name, "admin_password": password}).json()["token"]
        template = self.http.post("/admin/templates", headers=self._auth(token), json={
            "name": f"{name} identity check",
            "scopes": [scope],
            "subject_claim": self.SUBJECT,
            "is_auth_only": True,
            "claim_mappings": [
                {"source_attribute": self.SUBJECT, "target_claim": "document_number"},
            ],
            "ecosystem_configs": {
                "eudi": {
                    "requested_attributes": [self.SUBJECT, "givenName"],
                    "trusted_issuers": ["did:sim:gov"],
                    "credential_type": "PID",
                },
            },
        }).json()
        client = self.http.post("/admin/clients", headers=self._auth(token), json={
            "kind": "oidc", "client_type": "confidential",
            "redirect_uris": [self.REDIRECT_URI],
            "allowed_scopes": [scope],
        }).json()
        return {"token": token, "template": template, "client": client,
                "scope": scope}

    @staticmethod
    def _auth(token: str) -> dict:
        return {"Authorization": f"Bearer {token}"}

    def _seed(self) -> None:
        self.tenant_a = self._admin(f"tenant-a-{uuid.uuid4().hex[:8]}", self.SCOPE)
        self.tenant_b = self._admin(f"tenant-b-{uuid.uuid4().hex[:8]}", "employee_badge")
        issuer = create_issuer(self.system.issuers, "did:sim:gov")
        self.wallet = SimWallet(holder_id="holder-1")
        issue_credential(issuer, self.wallet, "eudi", "PID",
                         {self.SUBJECT: "X4242", "givenName": "Ada"},
                         validity=3600, clock=self.clock)

    # -- protocol steps -------------------------------------------------------

    def authorize(self, tenant: dict | None = None, scope: str | None = None,
                  verifier: str | None = None) -> dict:
        tenant = tenant or self.tenant_a
        verifier = verifier or generate_token(32)
        state = generate_token(16)
        nonce = generate_token(16)
        response = self.http.get("/authorize", params={
            "response_type": "code",
            "client_id": tenant["client"]["client_id"],
            "redirect_uri": self.REDIRECT_URI,
            "scope": f"openid {scope or tenant['scope']}",
            "state": state,
            "nonce": nonce,
            "code_challenge": compute_code_challenge(verifier),
            "code_challenge_method": "S256",
        }, follow_redirects=False)
        out = {"response": response, "state": state, "nonce": nonce,
               "verifier": verifier}
        if response.status_code == 302:
            location = response.headers["location"]
            params = dict(parse_qsl(urlsplit(location).query))
            out["location"] = location
            out["params"] = params
            if "token" in params:
                context = self.http.get("/auth/context",
                                        params={"token": params["token"]})
                out["auth_token"] = params["token"]
                if context.status_code == 200:
                    out["context"] = context.json()
        return out

    def present(self, correlation_id: str, tamper: Tamper = Tamper.NONE) -> dict:
        return present_over_http(self.wallet, self.http, self.ISSUER,
                                 correlation_id, "eudi", tamper)

    def verified_code(self, flow: dict) -> str:
        self.present(flow["context"]["correlation_id"])
        status = self.http.get(
            f"/auth/status/{flow['context']['session_id']}").json()
        return status["redirect"]["code"]

    def exchange(self, tenant: dict, code: str, verifier: str,
                 redirect_uri: str | None = None):
        return self.http.post("/token", data={
            "grant_type": "authorization_code",
            "code": code,
            "code_verifier": verifier,
            "client_id": tenant["client"]["client_id"],
            "client_secret": tenant["client"]["client_secret"],
            "redirect_uri": redirect_uri or self.REDIRECT_URI,
        })


class ThreatHarness:
    def __init__(self, faults: FaultInjection = NO_FAULTS):
        self.faults = faults

    def run_scenario(self, scenario_id: str) -> ScenarioOutcome:
        normalized = scenario_id.replace(".", "").upper()
        if normalized not in SCENARIOS_BY_ID:
            raise UnknownScenario(f"no scenario named {scenario_id!r}")
        runner = getattr(self, f"_run_{normalized.lower()}")
        return runner(_Fixture(self.faults))

    def run_all(self) -> ThreatReport:
        report = ThreatReport()
        for scenario in THREAT_MATRIX:
            report.outcomes.append(self.run_scenario(scenario.id))
        return report

    # -- scenario implementations ---------------------------------------------

    def _run_at1(self, fx: _Fixture) -> ScenarioOutcome:
        # Stolen authorization code exchanged without the code verifier.
        flow = fx.authorize()
        code = fx.verified_code(flow)
        response = fx.exchange(fx.tenant_a, code, generate_token(32))
        blocked = (response.status_code == 400
                   and response.json().get("error") == "invalid_grant"
                   and "id_token" not in response.json())
        return ScenarioOutcome("AT1", blocked,
                               response.json().get("error", str(response.status_code)),
                               "exchange with wrong verifier")

    def _run_at2(self, fx: _Fixture) -> ScenarioOutcome:
        # Forged callback carrying a foreign state value.
        from vcbridge.rp.client import PendingLogin, RpConfig
        config = RpConfig(issuer_url=fx.ISSUER,
                          client_id=fx.tenant_a["client"]["client_id"],
                          client_secret=fx.tenant_a["client"]["client_secret"],
                          redirect_uri=fx.REDIRECT_URI,
                          scopes=("openid", fx.SCOPE))
        pending = PendingLogin(state=generate_token(16), nonce=generate_token(16),
                               code_verifier=generate_token(32), created_at=0.0)
        forged = {"code": "attacker-code", "state": "attacker-state"}
        try:
            finish_login(config, forged, pending, fx.http)
            return ScenarioOutcome("AT2", False, "accepted", "forged state accepted")
        except CsrfDetected as exc:
            return ScenarioOutcome("AT2", True, exc.code, "state comparison failed closed")

    def _run_at3(self, fx: _Fixture) -> ScenarioOutcome:
        # Token from session 1 replayed against session 2's nonce.
        flow1 = fx.authorize()
        code = fx.verified_code(flow1)
        token_response = fx.exchange(fx.tenant_a, code, flow1["verifier"]).json()
        flow2 = fx.authorize()
        jwks = fx.http.get("/.well-known/jwks.json").json()
        try:
            validate_id_token(token_response["id_token"], jwks, fx.ISSUER,
                              fx.tenant_a["client"]["client_id"],
                              nonce=flow2["nonce"], now=fx.clock.now())
            return ScenarioOutcome("AT3", False, "accepted", "nonce replay accepted")
        except TokenInvalid as exc:
            return ScenarioOutcome("AT3", True, exc.code, exc.description)

    def _run_at4(self, fx: _Fixture) -> ScenarioOutcome:
        # Guessed session id, then a real session after its TTL.
        guessed = fx.http.get(f"/auth/status/{uuid.uuid4()}")
        flow = fx.authorize()
        fx.clock.advance(30 * 60)
        expired = fx.http.get(f"/auth/status/{flow['context']['session_id']}")
        blocked = (guessed.status_code == 404 and expired.status_code == 404)
        observed = guessed.json().get("error", "")
        return ScenarioOutcome("AT4", blocked, observed,
                               "guessed and expired session ids both miss")

    def _run_at5(self, fx: _Fixture) -> ScenarioOutcome:
        # Authentication token with a swapped template id: signature must die.
        import json as _json
        flow = fx.authorize()
        head, payload, sig = flow["auth_token"].split(".")
        claims = _json.loads(b64url_decode(payload))
        claims["template_id"] = fx.tenant_b["template"]["template_id"]
        tampered = ".".join((
            head,
            b64url_encode(_json.dumps(claims, separators=(",", ":")).encode()),
            sig,
        ))
        response = fx.http.get("/auth/context", params={"token": tampered})
        blocked = response.status_code == 401
        return ScenarioOutcome("AT5", blocked,
                               response.json().get("error", str(response.status_code)),
                               "template id mutation invalidates the signature")

    def _run_at6(self, fx: _Fixture) -> ScenarioOutcome:
        # Verification result injected without a service token.
        flow = fx.authorize()
        body = {"correlation_id": flow["context"]["correlation_id"],
                "verified": True,
                "attributes": {fx.SUBJECT: "FORGED", "givenName": "Mallory"}}
        bare = fx.http.post("/internal/verification-result", json=body)
        forged = fx.http.post("/internal/verification-result", json=body,
                              headers={"Authorization": "Bearer not-a-token"})
        status = fx.http.get(f"/auth/status/{flow['context']['session_id']}").json()
        blocked = (bare.status_code == 401 and forged.status_code == 401
                   and status["status"] == "pending")
        return ScenarioOutcome("AT6", blocked,
                               bare.json().get("error", str(bare.status_code)),
                               "unauthenticated result rejected, session untouched")

    def _run_at7(self, fx: _Fixture) -> ScenarioOutcome:
        # Identical presentation submitted twice.
        flow = fx.authorize()
        first = fx.present(flow["context"]["correlation_id"])
        replay = replay_over_http(fx.wallet, fx.http, fx.ISSUER,
                                  flow["context"]["correlation_id"])
        status = fx.http.get(f"/auth/status/{flow['context']['session_id']}").json()
        blocked = (first["verified"] is True
                   and replay["verified"] is False
                   and replay["failure_reason"] == "nonce_replayed"
                   and status["status"] == "verified")
        return ScenarioOutcome("AT7", blocked, replay.get("failure_reason") or "",
                               "second presentation of one nonce rejected")

    def _run_at8(self, fx: _Fixture) -> ScenarioOutcome:
        # Tenant A's client requests tenant B's scope.
        flow = fx.authorize(tenant=fx.tenant_a, scope=fx.tenant_b["scope"])
        params = flow.get("params", {})
        register = fx.http.post(
            "/admin/clients", headers=fx._auth(fx.tenant_a["token"]),
            json={"kind": "oidc", "client_type": "public",
                  "redirect_uris": [fx.REDIRECT_URI],
                  "allowed_scopes": [fx.tenant_b["scope"]]})
        blocked = (params.get("error") == "invalid_scope"
                   and register.status_code == 400
                   and register.json().get("error") == "invalid_scope")
        return ScenarioOutcome("AT8", blocked, params.get("error", ""),
                               "cross-tenant scope refused at authorize and register")

    def _run_at9(self, fx: _Fixture) -> ScenarioOutcome:
        # Tenant B exchanges a code minted for tenant A's session.
        flow = fx.authorize()
        code = fx.verified_code(flow)
        response = fx.exchange(fx.tenant_b, code, flow["verifier"])
        blocked = (response.status_code == 401
                   and response.json().get("error") == "invalid_client")
        return ScenarioOutcome("AT9", blocked,
                               response.json().get("error", str(response.status_code)),
                               "session lookup is client-prefixed")

    def _run_at10(self, fx: _Fixture) -> ScenarioOutcome:
        # Cross-tenant template reads.
        listing = fx.http.get("/admin/templates",
                              headers=fx._auth(fx.tenant_b["token"])).json()
        foreign = {t["template_id"] for t in listing["templates"]}
        anonymous = fx.http.get("/admin/templates")
        blocked = (fx.tenant_a["template"]["template_id"] not in foreign
                   and anonymous.status_code == 401)
        return ScenarioOutcome("AT10", blocked,
                               anonymous.json().get("error", ""),
                               "owner filter plus bearer requirement")

    def _run_at11(self, fx: _Fixture) -> ScenarioOutcome:
        # ID token minted for client A validated under client B's audience.
        flow = fx.authorize()
        code = fx.verified_code(flow)
        token_response = fx.exchange(fx.tenant_a, code, flow["verifier"]).json()
        jwks = fx.http.get("/.well-known/jwks.json").json()
        try:
            validate_id_token(token_response["id_token"], jwks, fx.ISSUER,
                              fx.tenant_b["client"]["client_id"],
                              nonce=flow["nonce"], now=fx.clock.now())
            return ScenarioOutcome("AT11", False, "accepted", "audience ignored")
        except TokenInvalid as exc:
            return ScenarioOutcome("AT11", True, exc.code, exc.description)


def run_scenario(scenario_id: str,
                 faults: FaultInjection = NO_FAULTS) -> ScenarioOutcome:
    return ThreatHarness(faults).run_scenario(scenario_id)


def run_all(faults: FaultInjection = NO_FAULTS) -> ThreatReport:
    return ThreatHarness(faults).run_all()
