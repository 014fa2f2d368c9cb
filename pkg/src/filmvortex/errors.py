"""Exception types shared across the package."""


class FilmVortexError(Exception):
    """Base class for all package errors."""


class ConfigurationError(FilmVortexError, ValueError):
    """Invalid mesh, grid, or parameter configuration."""


class DomainError(FilmVortexError, ValueError):
    """Evaluation point outside the admissible domain."""


class SingularConfigurationError(FilmVortexError, ValueError):
    """Vortex configuration with coincident points."""


class UnsupportedDegreeError(FilmVortexError, ValueError):
    """Vortex degree outside the supported set {+1, -1}."""


class DegenerateConfigurationError(FilmVortexError, ValueError):
    """Request whose answer is a continuum rather than a point."""


class PoleError(FilmVortexError, ValueError):
    """Evaluation exactly at a logarithmic pole."""


class DetectionFailedError(FilmVortexError, RuntimeError):
    """Vortex detection could not round the trace to integer plateaus."""


class ProjectionError(FilmVortexError, ValueError):
    """Unit-length projection failed; field too small at some node."""


class ResolutionError(FilmVortexError, RuntimeError):
    """Quadrature tail or resolution check exceeded its budget."""


class ConvergenceError(FilmVortexError, RuntimeError):
    """Iteration failed to converge; carries the last iterate."""

    def __init__(self, message, last_iterate=None, grad_norm=None):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.grad_norm = grad_norm
