"""Exception types shared across the package."""


class DioapproxError(Exception):
    """Base class for all package errors."""


class PrecisionExhausted(DioapproxError):
    """A certified computation could not be decided at the precision cap."""


class EqualInputs(DioapproxError):
    """Two algebraic numbers required to be distinct are equal."""


class ExprSyntaxError(DioapproxError):
    def __init__(self, message, line=1, column=0):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class ArityError(DioapproxError):
    """Expression uses a variable beyond the declared arity."""


class DomainViolation(DioapproxError):
    """log/division/real power applied where the argument may be <= 0."""


class Diverged(DioapproxError):
    """Subdivision or refinement exceeded its configured depth."""


class DependentBasis(DioapproxError):
    """Lattice basis vectors are linearly dependent."""


class HypothesisViolated(DioapproxError):
    """Siegel height bound Q below the lemma's threshold."""


class SearchExhausted(DioapproxError):
    """Exact enumeration beyond the configured size cap."""


class DegenerateRow(DioapproxError):
    """A Taylor matrix row of raw coefficients is entirely zero."""


class SiegelFailed(DioapproxError):
    """The Siegel solver failed for a cube."""


class SupBoundUnverified(DioapproxError):
    """Interval evaluation could not certify the sup bound at max depth."""


class FeasibilityCap(DioapproxError):
    """Request beyond the documented feasibility cap (e.g. degree > 3)."""


class InsufficientData(DioapproxError):
    """Not enough records for a fit."""


class DegenerateSamples(DioapproxError):
    """All sampled function values were zero."""


class BudgetExceeded(DioapproxError):
    """Enumeration budget exceeded."""
