"""Multi-tenant OpenID Provider bridging OIDC code flow with PKCE to
credential verification across simulated SSI ecosystems."""

from vcbridge.system import BridgeSystem, SystemConfig, build_system

__all__ = ["BridgeSystem", "SystemConfig", "build_system"]
