"""Transfer operator ``f(x) -> f(U - 1/x)/x**2`` and the map ``x -> 1/(U - x)``.

Submodules: :mod:`~fracmap.mobius` (projective iteration, conjugation, cycles),
:mod:`~fracmap.spectral` (eigenphase, phase function, eigenfunctions),
:mod:`~fracmap.expansion` (eigenfunction series), :mod:`~fracmap.attractor`
(orbit histograms and the invariant density), :mod:`~fracmap.cli`.
"""

from .errors import AtomicOrbitWarning, FracmapError
from .mobius import MapParams, MobiusMatrix, ProjectivePoint, Regime

__all__ = [
    "AtomicOrbitWarning",
    "FracmapError",
    "MapParams",
    "MobiusMatrix",
    "ProjectivePoint",
    "Regime",
]
__version__ = "0.1.0"
