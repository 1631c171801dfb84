"""Exception and warning types raised by fracmap."""


class FracmapError(ValueError):
    """Base class for all invalid-input conditions."""


class ParabolicBoundaryError(FracmapError):
    """|U| = 2: the map is parabolic and excluded."""


class RegimeError(FracmapError):
    """Operation called with U in the wrong regime."""


class OutOfEllipticRangeError(RegimeError):
    """Operation requires 0 < |U| < 2."""


class NotHyperbolicError(RegimeError):
    """Operation requires |U| > 2."""


class AffineMapError(FracmapError):
    pass


class OrientationReversingError(FracmapError):
    pass


class InvalidPeriodError(FracmapError):
    pass


class AtDiscontinuityError(FracmapError):
    """Phase function evaluated exactly at its jump point."""


class PoleAtZeroError(FracmapError):
    pass


class NonIntegrableError(FracmapError):
    """Integrand does not decay fast enough for the circle quadrature."""


class InverseMismatchError(FracmapError):
    pass


class AtomicOrbitWarning(UserWarning):
    """Orbit is periodic (or U is resonant); the empirical density is atomic."""
