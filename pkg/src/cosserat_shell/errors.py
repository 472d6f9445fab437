"""Exception hierarchy shared by all modules."""


class CosseratShellError(Exception):
    """Base class for every error raised by the package."""


class DomainError(CosseratShellError, ValueError):
    """A parameter point lies outside the chart domain, or a rectangle is degenerate."""


class RegularityError(CosseratShellError, ValueError):
    """The parametrization is degenerate (vanishing area element or singular metric)."""


class ParameterError(CosseratShellError, ValueError):
    """Material parameters violate the positivity conditions."""


class ModelError(CosseratShellError, ValueError):
    """The requested model order is not valid for the given geometry."""


class PreconditionError(CosseratShellError, ValueError):
    """Required input data is missing."""


class AdmissibilityError(CosseratShellError):
    """Thickness/material hypotheses fail and no override was given."""


class SolverError(CosseratShellError):
    """Iterative solver did not reach the requested tolerance."""

    def __init__(self, message, residual=None, iterations=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class DefinitenessError(SolverError):
    """A direction of non-positive curvature was met during CG."""


class DiagnosticError(CosseratShellError):
    """A spectral diagnostic (eigen-solve) broke down."""


class ConfigError(CosseratShellError):
    """Invalid run configuration; carries a list of ``(line, message)`` pairs."""

    def __init__(self, errors):
        self.errors = list(errors)
        lines = []
        for lineno, msg in self.errors:
            lines.append(f"line {lineno}: {msg}" if lineno else msg)
        super().__init__("; ".join(lines))
