"""Exception types shared across the package."""


class OrbentError(Exception):
    """Base class for all package-specific errors."""


class InsufficientSymmetryError(OrbentError):
    """The state lacks the symmetries required by any closed formula."""


class DegenerateSectorError(OrbentError):
    """A rank-deficient entangled sector; the closed formula does not apply."""


class DegenerateGroundStateError(OrbentError):
    """Ground state is degenerate; a single-vector reduced state is ill-defined."""


class NotDisentangledWithinCapError(OrbentError):
    """No disentangling distance was found below the configured cap."""


class OracleConvergenceError(OrbentError):
    """The brute-force minimizer failed to certify its solution."""
