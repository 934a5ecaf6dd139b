from vcbridge.rp.client import (
    CsrfDetected,
    DiscoveryError,
    PendingLogin,
    RpConfig,
    RpError,
    TokenInvalid,
    begin_login,
    finish_login,
)

__all__ = [
    "CsrfDetected",
    "DiscoveryError",
    "PendingLogin",
    "RpConfig",
    "RpError",
    "TokenInvalid",
    "begin_login",
    "finish_login",
]
