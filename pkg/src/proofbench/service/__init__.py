"""Web service: authentication, RBAC, endpoints, and the check pipeline."""

from .app import ROUTE_RULES, AppState, build_state, create_app
from .auth import (
    AuthError,
    IssuerConfig,
    Principal,
    TokenVerifier,
    fixture_issuer,
    issue_token,
)
from .config import ServiceConfig
from .orchestrator import CheckRequest, CheckService, CheckValidationError
from .registry import CourseRegistry, NotFound, RegistryError

__all__ = [
    "AppState",
    "AuthError",
    "CheckRequest",
    "CheckService",
    "CheckValidationError",
    "CourseRegistry",
    "IssuerConfig",
    "NotFound",
    "Principal",
    "ROUTE_RULES",
    "RegistryError",
    "ServiceConfig",
    "TokenVerifier",
    "build_state",
    "create_app",
    "fixture_issuer",
    "issue_token",
]
