"""Fault-injection switches for the threat harness.

These exist so the security test suite can prove it detects regressions:
flipping a switch must un-block the matching attack scenario. They are never
set in any runtime configuration path; only tests construct non-default
instances.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class FaultInjection:
    skip_pkce_check: bool = False
    skip_tenant_filter: bool = False


NO_FAULTS = FaultInjection()
