"""Simulated identity-holder wallets and credential issuers.

Test actors for the southbound side of the bridge: issuers mint signed
credentials into wallets, wallets answer presentation requests either
honestly or with one deliberate defect per tamper mode. Each tamper mode
trips exactly one verifier check, which is what the adversarial suites rely
on.
"""

from __future__ import annotations

import enum
import uuid
from dataclasses import dataclass, field

from cryptography.hazmat.primitives.asymmetric import ed25519

from vcbridge.adapters import (
    IssuerRegistry,
    Presentation,
    PresentationRequest,
    presentation_signing_payload,
)
from vcbridge.clock import Clock
from vcbridge.errors import NoMatchingCredential


class Tamper(enum.Enum):
    NONE = "none"
    WRONG_NONCE = "wrong_nonce"
    FORGED_SIGNATURE = "forged_signature"
    OMIT_ATTRIBUTE = "omit_attribute"
    REUSE_PREVIOUS_NONCE = "reuse_previous_nonce"


@dataclass
class SimIssuer:
    issuer_id: str
    signing_key: ed25519.Ed25519PrivateKey = field(repr=False)
    trusted: bool = True


@dataclass
class SimCredential:
    credential_id: str
    ecosystem: str
    issuer_id: str
    credential_type: str
    attributes: dict
    expires_at: float
    revoked: bool = False
    signing_key: ed25519.Ed25519PrivateKey | None = field(repr=False, default=None)


@dataclass
class SimWallet:
    holder_id: str
    credentials: list[SimCredential] = field(default_factory=list)
    last_nonce_echoed: str | None = None
    last_wire: dict | None = None   # most recent HTTP presentation body


def create_issuer(registry: IssuerRegistry, issuer_id: str,
                  trusted: bool = True) -> SimIssuer:
    key = ed25519.Ed25519PrivateKey.generate()
    registry.register_issuer(issuer_id, key.public_key())
    return SimIssuer(issuer_id=issuer_id, signing_key=key, trusted=trusted)


def issue_credential(issuer: SimIssuer, wallet: SimWallet, ecosystem: str,
                     credential_type: str, attributes: dict,
                     validity: float, clock: Clock) -> SimCredential:
    """Mint a credential into the wallet; validity 0 expires it immediately."""
    credential = SimCredential(
        credential_id=f"crd_{uuid.uuid4().hex}",
        ecosystem=ecosystem,
        issuer_id=issuer.issuer_id,
        credential_type=credential_type,
        attributes=dict(attributes),
        expires_at=clock.now() + validity,
        signing_key=issuer.signing_key,
    )
    wallet.credentials.append(credential)
    return credential


def _pick_credential(wallet: SimWallet, request: PresentationRequest,
                     tamper: Tamper) -> SimCredential:
    needed = set(request.requested_attributes)
    for credential in wallet.credentials:
        if credential.ecosystem != request.ecosystem:
            continue
        if credential.credential_type != request.credential_type:
            continue
        if tamper is not Tamper.OMIT_ATTRIBUTE and not needed <= set(credential.attributes):
            continue
        return credential
    raise NoMatchingCredential(
        f"wallet {wallet.holder_id} has no {request.ecosystem} "
        f"{request.credential_type!r} credential with the requested attributes")


def respond(wallet: SimWallet, request: PresentationRequest,
            tamper: Tamper = Tamper.NONE) -> Presentation:
    """Answer a presentation request, honestly or with one planted defect."""
    credential = _pick_credential(wallet, request, tamper)

    attributes = {a: credential.attributes[a]
                  for a in request.requested_attributes
                  if a in credential.attributes}
    if tamper is Tamper.OMIT_ATTRIBUTE and attributes:
        attributes.pop(sorted(attributes)[0])

    if tamper is Tamper.WRONG_NONCE:
        nonce_echo = str(uuid.uuid4())
    elif tamper is Tamper.REUSE_PREVIOUS_NONCE:
        nonce_echo = wallet.last_nonce_echoed or request.challenge_nonce
    else:
        nonce_echo = request.challenge_nonce

    signing_key = credential.signing_key
    if tamper is Tamper.FORGED_SIGNATURE:
        signing_key = ed25519.Ed25519PrivateKey.generate()
    signature = signing_key.sign(presentation_signing_payload(
        attributes, nonce_echo, credential.issuer_id, credential.credential_type))

    wallet.last_nonce_echoed = nonce_echo
    return Presentation(
        ecosystem=credential.ecosystem,
        credential_type=credential.credential_type,
        issuer_id=credential.issuer_id,
        attributes=attributes,
        challenge_nonce_echo=nonce_echo,
        holder_signature=signature,
        credential_expires_at=credential.expires_at,
        credential_id=credential.credential_id,
    )


def present_over_http(wallet: SimWallet, http, base_url: str,
                      correlation_id: str, ecosystem: str,
                      tamper: Tamper = Tamper.NONE) -> dict:
    """HTTP client mode: fetch the request and post the presentation back.

    ``http`` is any httpx-compatible client; the base_url points at the
    bridge's verify endpoints.
    """
    import base64

    resp = http.get(f"{base_url}/verify/request/{correlation_id}",
                    params={"ecosystem": ecosystem})
    resp.raise_for_status()
    body = resp.json()
    request = PresentationRequest.from_dict(
        {k: body[k] for k in ("correlation_id", "ecosystem", "challenge_nonce",
                              "requested_attributes", "trusted_issuers",
                              "credential_type", "expires_at")})
    presentation = respond(wallet, request, tamper)
    wire = {
        "ecosystem": presentation.ecosystem,
        "credential_type": presentation.credential_type,
        "issuer_id": presentation.issuer_id,
        "attributes": presentation.attributes,
        "challenge_nonce_echo": presentation.challenge_nonce_echo,
        "holder_signature": base64.b64encode(presentation.holder_signature).decode(),
        "credential_expires_at": presentation.credential_expires_at,
        "credential_id": presentation.credential_id,
    }
    wallet.last_wire = wire
    resp = http.post(f"{base_url}/verify/present/{correlation_id}", json=wire)
    resp.raise_for_status()
    return resp.json()


def replay_over_http(wallet: SimWallet, http, base_url: str,
                     correlation_id: str) -> dict:
    """Resubmit the wallet's previous presentation byte for byte."""
    if wallet.last_wire is None:
        raise ValueError("wallet has not presented anything yet")
    resp = http.post(f"{base_url}/verify/present/{correlation_id}",
                     json=wallet.last_wire)
    resp.raise_for_status()
    return resp.json()
