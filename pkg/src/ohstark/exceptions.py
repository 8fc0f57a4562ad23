class OHStarkError(Exception):
    """Base class for errors raised by ohstark."""


class ParameterError(OHStarkError, ValueError):
    pass


class UnitError(OHStarkError, ValueError):
    pass


class ImaginaryResidue(OHStarkError, ArithmeticError):
    """A closed-form root kept an imaginary part beyond tolerance."""


class NegativeRoot(OHStarkError, ArithmeticError):
    """A lambda^2 root came out clearly negative (input is not a valid H_M)."""


class NotSymmetric(OHStarkError, ValueError):
    pass


class NoConvergence(OHStarkError, ArithmeticError):
    pass


class ConstructionMismatch(OHStarkError, AssertionError):
    """Two independent constructions of the same operator disagree."""


class InvalidDensityMatrix(OHStarkError, ValueError):
    pass


class MismatchAtPoint(OHStarkError, ArithmeticError):
    """Analytic and numerical spectra disagree at a sweep point."""

    def __init__(self, b, deviation, tol):
        self.b = b
        self.deviation = deviation
        self.tol = tol
        super().__init__(
            f"analytic/oracle mismatch at B={b!r} T: relative deviation {deviation:.3e} > {tol:.1e}"
        )


class ConfigError(OHStarkError, ValueError):
    pass


class RefineGridWarning(UserWarning):
    """Branch tracking could not match eigenvectors with overlap >= 0.9."""
