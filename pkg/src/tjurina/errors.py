"""Exception types shared across the package."""


class TjurinaError(Exception):
    """Base class for all package errors."""


class FieldError(TjurinaError):
    """Invalid field specification or mixing elements of different fields."""


class BadPrimeError(FieldError):
    """The chosen prime is unusable for this input (divides a denominator,
    collapses two lines of an arrangement, or distorts the lattice)."""


class DimensionMismatchError(TjurinaError):
    """Matrix/vector shapes do not line up."""


class PolySyntaxError(TjurinaError):
    """Polynomial text does not parse.  Carries the 0-based offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class NotHomogeneousError(TjurinaError):
    """Parsed polynomial mixes monomials of different degrees."""

    def __init__(self, degrees):
        self.degrees = sorted(set(degrees))
        super().__init__(f"polynomial is not homogeneous: monomial degrees {self.degrees}")


class NotDivisibleError(TjurinaError):
    """Exact polynomial division failed; the dividend is not a multiple."""


class NonReducedError(TjurinaError):
    """Input curve failed the squarefreeness check."""


class ConsistencyError(TjurinaError):
    """Two independent computations of the same invariant disagree, or a
    proven inequality fails.  Signals a bad prime or an internal bug."""


class StructureError(TjurinaError):
    """The computed resolution data violates its structural constraints
    (wrong relation count, failed Hilbert bookkeeping).  Signals a
    non-reduced input or an internal bug."""


class FreeCurveError(TjurinaError):
    """Operation is only defined for non-free curves (needs a rank-one
    quotient of the syzygy module)."""


class InternalError(TjurinaError):
    """Impossible state reached; always a bug."""
