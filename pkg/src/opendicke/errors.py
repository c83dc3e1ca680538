"""Exception hierarchy. ``exit_code`` is what the command line returns."""


class DickeError(Exception):
    exit_code = 1


class ConfigError(DickeError, ValueError):
    exit_code = 2


class DimensionError(DickeError, ValueError):
    """Requested matrix is larger than the configured dimension guard."""

    exit_code = 2


class SolverError(DickeError, RuntimeError):
    exit_code = 3


class SymmetryViolation(DickeError, RuntimeError):
    """A parity-forbidden matrix element is nonzero (construction bug)."""

    exit_code = 3


class DependencyError(DickeError, RuntimeError):
    exit_code = 4


class ProvenanceError(DickeError, ValueError):
    """Persisted artifact does not match the requested parameters or format."""

    exit_code = 4


class DegenerateFitError(DickeError, ValueError):
    exit_code = 3
