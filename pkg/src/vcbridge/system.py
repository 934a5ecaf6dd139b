"""Composition root: wires the registry, store, template engine, keyring,
adapters, and OIDC core into one runnable system."""

from __future__ import annotations

from dataclasses import dataclass

from vcbridge.adapters import AdapterHub, IssuerRegistry
from vcbridge.clock import Clock
from vcbridge.faults import NO_FAULTS, FaultInjection
from vcbridge.iam import IamRegistry
from vcbridge.keys import DEFAULT_RETIRED_GRACE, DEFAULT_ROTATION_PERIOD, KeyRing
from vcbridge.oidc import BridgeConfig, OidcBridge
from vcbridge.store import SessionStore
from vcbridge.templates import TemplateEngine


@dataclass(frozen=True)
class SystemConfig:
    issuer: str = "https://bridge.example"
    auth_ui_url: str = "https://bridge.example/auth"
    rotation_period: float = DEFAULT_ROTATION_PERIOD
    retired_grace: float = DEFAULT_RETIRED_GRACE


@dataclass
class BridgeSystem:
    clock: Clock
    store: SessionStore
    iam: IamRegistry
    templates: TemplateEngine
    keyring: KeyRing
    issuers: IssuerRegistry
    adapters: AdapterHub
    bridge: OidcBridge
    config: SystemConfig


def build_system(config: SystemConfig | None = None, clock: Clock | None = None,
                 faults: FaultInjection = NO_FAULTS) -> BridgeSystem:
    config = config or SystemConfig()
    clock = clock or Clock()
    store = SessionStore(clock)
    iam = IamRegistry(clock)
    templates = TemplateEngine(iam, clock, faults=faults)
    iam.bind_scope_lookup(templates.has_scope)
    keyring = KeyRing(clock, rotation_period=config.rotation_period,
                      retired_grace=config.retired_grace)
    issuers = IssuerRegistry()
    adapters = AdapterHub(store, issuers, clock, base_url=config.issuer)
    bridge = OidcBridge(
        iam, templates, store, keyring, adapters, clock,
        config=BridgeConfig(issuer=config.issuer, auth_ui_url=config.auth_ui_url),
        faults=faults,
    )
    return BridgeSystem(clock=clock, store=store, iam=iam, templates=templates,
                        keyring=keyring, issuers=issuers, adapters=adapters,
                        bridge=bridge, config=config)
