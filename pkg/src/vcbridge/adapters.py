"""Ecosystem verifier adapters behind one common interface.

Each adapter turns a proof template into an ecosystem-flavored presentation
request, verifies presentations (signature, challenge nonce, issuer trust,
expiry, revocation, attribute completeness), and reports the outcome in its
own vendor dialect, which ``normalize_result`` folds back into one
``VerificationResult`` shape. That round-trip is deliberate: callers above
this layer never see ecosystem-specific JSON.

The cryptography is simulated at desk scale: issuers hold Ed25519 keypairs
registered here, and a presentation is "holder-signed" over a canonical
sorted-key JSON serialization of its binding fields.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass
from urllib.parse import quote

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives.asymmetric import ed25519

from vcbridge.clock import Clock
from vcbridge.errors import EcosystemUnsupported, NormalizationError
from vcbridge.store import Namespace, SessionStore
from vcbridge.templates import ProofTemplate

CHALLENGE_TTL = 5 * 60   # matches the authentication-token lifetime

DEEP_LINK_SCHEMES = {
    "eudi": "eudi-openid4vp",
    "aries": "didcomm",
    "ebsi": "openid4vp",
}

FAILURE_REASONS = (
    "bad_signature",
    "nonce_mismatch",
    "nonce_replayed",
    "untrusted_issuer",
    "expired_credential",
    "revoked",
    "missing_attribute",
)


@dataclass
class PresentationRequest:
    correlation_id: str
    ecosystem: str
    challenge_nonce: str
    requested_attributes: list[str]
    trusted_issuers: list[str]
    credential_type: str
    expires_at: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)

    @classmethod
    def from_dict(cls, data: dict) -> "PresentationRequest":
        return cls(**data)


@dataclass
class Presentation:
    ecosystem: str
    credential_type: str
    issuer_id: str
    attributes: dict
    challenge_nonce_echo: str
    holder_signature: bytes
    credential_expires_at: float
    credential_id: str   # revocation lookup key in the issuer registry


@dataclass
class VerificationResult:
    correlation_id: str
    verified: bool
    attributes: dict | None = None
    issuer_id: str | None = None
    failure_reason: str | None = None


class IssuerRegistry:
    """Public keys, trust flags, and revocation flags for simulated issuers."""

    def __init__(self):
        self._lock = threading.Lock()
        self._keys: dict[str, ed25519.Ed25519PublicKey] = {}
        self._revoked: set[str] = set()

    def register_issuer(self, issuer_id: str,
                        public_key: ed25519.Ed25519PublicKey) -> None:
        with self._lock:
            self._keys[issuer_id] = public_key

    def public_key(self, issuer_id: str) -> ed25519.Ed25519PublicKey | None:
        with self._lock:
            return self._keys.get(issuer_id)

    def set_revoked(self, credential_id: str, revoked: bool = True) -> None:
        with self._lock:
            if revoked:
                self._revoked.add(credential_id)
            else:
                self._revoked.discard(credential_id)

    def is_revoked(self, credential_id: str) -> bool:
        with self._lock:
            return credential_id in self._revoked


def presentation_signing_payload(attributes: dict, challenge_nonce_echo: str,
                                 issuer_id: str, credential_type: str) -> bytes:
    """Canonical bytes a presentation signature covers (sorted-key JSON)."""
    return json.dumps(
        {
            "attributes": attributes,
            "challenge_nonce_echo": challenge_nonce_echo,
            "credential_type": credential_type,
            "issuer_id": issuer_id,
        },
        sort_keys=True,
        separators=(",", ":"),
    ).encode("utf-8")


def _nonce_key(nonce: str) -> str:
    return f"nonce:{nonce}"


@dataclass
class _CheckOutcome:
    ok: bool
    reason: str | None = None


class VerifierAdapter:
    """Common behavior; subclasses only differ in their vendor dialect."""

    ecosystem = ""

    def __init__(self, store: SessionStore, registry: IssuerRegistry, clock: Clock):
        self._store = store
        self._registry = registry
        self._clock = clock

    # -- southbound request ------------------------------------------------

    def build_request(self, template: ProofTemplate,
                      correlation_id: str) -> PresentationRequest:
        config = template.ecosystem_configs.get(self.ecosystem)
        if config is None:
            raise EcosystemUnsupported(
                f"template {template.template_id} has no {self.ecosystem} config")
        nonce = str(uuid.uuid4())
        self._store.put(Namespace.CHALLENGE, _nonce_key(nonce),
                        {"correlation_id": correlation_id}, CHALLENGE_TTL)
        return PresentationRequest(
            correlation_id=correlation_id,
            ecosystem=self.ecosystem,
            challenge_nonce=nonce,
            requested_attributes=list(config.requested_attributes),
            trusted_issuers=list(config.trusted_issuers),
            credential_type=config.credential_type,
            expires_at=self._clock.now() + CHALLENGE_TTL,
        )

    # -- verification ------------------------------------------------------

    def _run_checks(self, request: PresentationRequest,
                    presentation: Presentation) -> _CheckOutcome:
        # Check order is part of the contract; the first failure wins.
        key = self._registry.public_key(presentation.issuer_id)
        payload = presentation_signing_payload(
            presentation.attributes, presentation.challenge_nonce_echo,
            presentation.issuer_id, presentation.credential_type)
        if key is None:
            return _CheckOutcome(False, "bad_signature")
        try:
            key.verify(presentation.holder_signature, payload)
        except InvalidSignature:
            return _CheckOutcome(False, "bad_signature")

        if presentation.challenge_nonce_echo != request.challenge_nonce:
            return _CheckOutcome(False, "nonce_mismatch")
        # take() is what makes each presentation count exactly once.
        if self._store.take(Namespace.CHALLENGE,
                            _nonce_key(presentation.challenge_nonce_echo)) is None:
            return _CheckOutcome(False, "nonce_replayed")

        if presentation.issuer_id not in request.trusted_issuers:
            return _CheckOutcome(False, "untrusted_issuer")
        if self._clock.now() >= presentation.credential_expires_at:
            return _CheckOutcome(False, "expired_credential")
        if self._registry.is_revoked(presentation.credential_id):
            return _CheckOutcome(False, "revoked")
        missing = set(request.requested_attributes) - set(presentation.attributes)
        if missing:
            return _CheckOutcome(False, "missing_attribute")
        return _CheckOutcome(True)

    def verify_presentation(self, request: PresentationRequest,
                            presentation: Presentation) -> VerificationResult:
        """Verify and normalize. Failures are in-band results, not errors."""
        outcome = self._run_checks(request, presentation)
        payload = self._vendor_payload(outcome, presentation)
        return normalize_result(payload, self.ecosystem,
                                correlation_id=request.correlation_id)

    def _vendor_payload(self, outcome: _CheckOutcome,
                        presentation: Presentation) -> dict:
        raise NotImplementedError

    # -- wallet invocation ---------------------------------------------------

    def deep_link(self, request: PresentationRequest, fetch_url: str) -> str:
        scheme = DEEP_LINK_SCHEMES[self.ecosystem]
        return (f"{scheme}://present?correlation_id={request.correlation_id}"
                f"&request_uri={quote(fetch_url, safe='')}")


class AriesAdapter(VerifierAdapter):
    ecosystem = "aries"

    def _vendor_payload(self, outcome, presentation):
        payload = {"verified": outcome.ok, "issuer_did": presentation.issuer_id}
        if outcome.ok:
            payload["revealed_attrs"] = dict(presentation.attributes)
        else:
            payload["error"] = outcome.reason
        return payload


class EbsiAdapter(VerifierAdapter):
    ecosystem = "ebsi"

    def _vendor_payload(self, outcome, presentation):
        payload = {"valid": outcome.ok, "issuer": presentation.issuer_id}
        if outcome.ok:
            payload["credentialSubject"] = dict(presentation.attributes)
        else:
            payload["errorDescription"] = outcome.reason
        return payload


class EudiAdapter(VerifierAdapter):
    ecosystem = "eudi"

    def _vendor_payload(self, outcome, presentation):
        status = {"status": "valid" if outcome.ok else "invalid"}
        if not outcome.ok:
            status["reason"] = outcome.reason
        return {
            "proof_status": status,
            "issuer_id": presentation.issuer_id,
            "disclosed_attributes": dict(presentation.attributes) if outcome.ok else {},
        }


def normalize_result(vendor_payload: dict, ecosystem: str,
                     correlation_id: str | None = None) -> VerificationResult:
    """Fold a vendor-dialect payload into the one result shape.

    Dialects (simulated, mirroring real-world divergence): aries signals with
    a ``verified`` boolean and ``revealed_attrs``; ebsi with ``valid`` and
    ``credentialSubject``; eudi with a nested ``proof_status`` object and
    ``disclosed_attributes``.
    """
    if not isinstance(vendor_payload, dict):
        raise NormalizationError("vendor payload must be a JSON object")
    try:
        if ecosystem == "aries":
            verified = vendor_payload["verified"]
            attributes = vendor_payload.get("revealed_attrs")
            issuer = vendor_payload.get("issuer_did")
            reason = vendor_payload.get("error")
        elif ecosystem == "ebsi":
            verified = vendor_payload["valid"]
            attributes = vendor_payload.get("credentialSubject")
            issuer = vendor_payload.get("issuer")
            reason = vendor_payload.get("errorDescription")
        elif ecosystem == "eudi":
            status = vendor_payload["proof_status"]
            verified = status["status"] == "valid"
            attributes = vendor_payload.get("disclosed_attributes")
            issuer = vendor_payload.get("issuer_id")
            reason = status.get("reason")
        else:
            raise NormalizationError(f"unknown ecosystem dialect {ecosystem!r}")
    except (KeyError, TypeError) as exc:
        raise NormalizationError(f"unrecognized {ecosystem} payload: {exc}") from exc
    if not isinstance(verified, bool):
        raise NormalizationError("verification flag must be a boolean")
    if reason is not None and reason not in FAILURE_REASONS:
        raise NormalizationError(f"unknown failure reason {reason!r}")
    return VerificationResult(
        correlation_id=correlation_id or "",
        verified=verified,
        attributes=dict(attributes) if verified and attributes else None,
        issuer_id=issuer,
        failure_reason=None if verified else reason,
    )


class AdapterHub:
    """The three ecosystem adapters behind one dispatch surface."""

    def __init__(self, store: SessionStore, registry: IssuerRegistry,
                 clock: Clock, base_url: str = "http://localhost:8400"):
        self.registry = registry
        self.base_url = base_url.rstrip("/")
        self._adapters: dict[str, VerifierAdapter] = {
            adapter.ecosystem: adapter
            for adapter in (
                AriesAdapter(store, registry, clock),
                EbsiAdapter(store, registry, clock),
                EudiAdapter(store, registry, clock),
            )
        }

    def adapter(self, ecosystem: str) -> VerifierAdapter:
        try:
            return self._adapters[ecosystem]
        except KeyError:
            raise EcosystemUnsupported(f"no adapter for {ecosystem!r}") from None

    def build_request(self, template: ProofTemplate, ecosystem: str,
                      correlation_id: str) -> PresentationRequest:
        return self.adapter(ecosystem).build_request(template, correlation_id)

    def verify_presentation(self, request: PresentationRequest,
                            presentation: Presentation) -> VerificationResult:
        return self.adapter(request.ecosystem).verify_presentation(request, presentation)

    def request_fetch_url(self, correlation_id: str, ecosystem: str) -> str:
        return (f"{self.base_url}/verify/request/{correlation_id}"
                f"?ecosystem={ecosystem}")

    def deep_link(self, request: PresentationRequest) -> str:
        fetch = self.request_fetch_url(request.correlation_id, request.ecosystem)
        return self.adapter(request.ecosystem).deep_link(request, fetch)
