"""Exception hierarchy shared by the library, the CLI and the HTTP service."""


class PolyMeinardusError(Exception):
    """Base class; `exit_code` is what the CLI returns for it."""

    exit_code = 1
    http_status = 500


class ConfigError(PolyMeinardusError, ValueError):
    """Invalid run configuration or family description."""

    exit_code = 2
    http_status = 422


class DomainError(PolyMeinardusError, ValueError):
    """Argument outside the domain where a quantity is defined."""

    exit_code = 3
    http_status = 400


class PoleError(DomainError):
    """Evaluation too close to a pole."""


class BoundaryError(DomainError):
    """Point lies on a phase boundary; no leading-order estimate exists there."""


class ConvergenceError(DomainError):
    """A truncated series or quadrature could not reach its tolerance."""


class UnsupportedFamily(PolyMeinardusError):
    """The weight family cannot be handled by the requested method."""

    exit_code = 4
    http_status = 501
