"""Exception types shared across the package."""


class OctoksError(Exception):
    """Base class for all library errors."""


class DomainError(OctoksError, ValueError):
    """Mathematically undefined input, e.g. inverting the zero octonion."""


class SingularityError(DomainError):
    """Kernel or transform evaluated at a singular point."""


class MeshParseError(OctoksError, ValueError):
    """Malformed mesh file; message carries field or line diagnostics."""


class MeshValidationError(OctoksError, ValueError):
    """Mesh content violates a structural invariant (unit normals, weights)."""


class UsageError(OctoksError, ValueError):
    """Bad command-line or config-file input, rejected before any compute."""
