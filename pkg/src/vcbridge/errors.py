"""Error taxonomy shared by all modules.

Every failure that can cross a module or HTTP boundary is a BridgeError with
a stable machine-readable ``code``; the HTTP layer serializes it as
``{"error": code, "error_description": description}``. Token endpoint codes
follow OAuth 2.0 exactly.
"""

from __future__ import annotations


class BridgeError(Exception):
    code = "internal_error"
    http_status = 500

    def __init__(self, description: str = "", code: str | None = None,
                 http_status: int | None = None):
        if code is not None:
            self.code = code
        if http_status is not None:
            self.http_status = http_status
        self.description = description or self.code.replace("_", " ")
        super().__init__(f"{self.code}: {self.description}")

    def body(self) -> dict:
        return {"error": self.code, "error_description": self.description}


class ValidationError(BridgeError):
    code = "validation_error"
    http_status = 400


class RegistrationConflict(BridgeError):
    code = "registration_conflict"
    http_status = 409


class ScopeConflict(BridgeError):
    code = "scope_conflict"
    http_status = 409


class Unauthorized(BridgeError):
    code = "unauthorized"
    http_status = 401


class InvalidScope(BridgeError):
    code = "invalid_scope"
    http_status = 400


class InvalidClient(BridgeError):
    code = "invalid_client"
    http_status = 401


class InvalidRequest(BridgeError):
    code = "invalid_request"
    http_status = 400


class InvalidGrant(BridgeError):
    code = "invalid_grant"
    http_status = 400


class UnsupportedResponseType(BridgeError):
    code = "unsupported_response_type"
    http_status = 400


class UnsupportedGrantType(BridgeError):
    code = "unsupported_grant_type"
    http_status = 400


class SessionNotFound(BridgeError):
    code = "session_not_found"
    http_status = 404


class CorrelationNotFound(BridgeError):
    code = "correlation_not_found"
    http_status = 404


class InvalidState(BridgeError):
    code = "invalid_state"
    http_status = 409


class ClaimsUnsatisfied(BridgeError):
    code = "claims_unsatisfied"
    http_status = 422


class EcosystemUnsupported(BridgeError):
    code = "ecosystem_unsupported"
    http_status = 400


class NormalizationError(BridgeError):
    code = "normalization_error"
    http_status = 400


class NoMatchingCredential(BridgeError):
    code = "no_matching_credential"
    http_status = 404


class InternalError(BridgeError):
    code = "internal_error"
    http_status = 500


class UnknownScenario(BridgeError):
    code = "unknown_scenario"
    http_status = 404
