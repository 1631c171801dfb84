"""Named test functions for expansions: ``gaussian``, ``lorentz-shifted``, ``bump``,
``quartic`` and ``sigma:<n>``."""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import FracmapError
from .mobius import MapParams
from .spectral import eval_eigenfunction, eval_lorentzian


def gaussian(x):
    x = np.asarray(x, dtype=float)
    return np.exp(-x * x)


def bump(x):
    """``exp(-1/(1 - x^2))`` on ``|x| < 1``, zero elsewhere."""
    x = np.asarray(x, dtype=float)
    inside = np.abs(x) < 1.0
    safe = np.where(inside, 1.0 - x * x, 1.0)
    return np.where(inside, np.exp(-1.0 / safe), 0.0)


def quartic(x):
    x = np.asarray(x, dtype=float)
    return 1.0 / (1.0 + x**4)


def lorentz_shifted(params: MapParams) -> Callable:
    """The invariant Lorentzian for ``U' = -U/2``, which is never the expansion's own ``U``."""
    other = MapParams(-params.u / 2.0)
    return lambda x: eval_lorentzian(other, x)


def sigma(params: MapParams, n: int) -> Callable:
    return lambda x: eval_eigenfunction(params, n, x)


BUILTIN_NAMES = ("gaussian", "lorentz-shifted", "bump", "quartic", "sigma:<n>")


def builtin_function(name: str, params: MapParams) -> Callable:
    if name == "gaussian":
        return gaussian
    if name == "bump":
        return bump
    if name == "quartic":
        return quartic
    if name == "lorentz-shifted":
        return lorentz_shifted(params)
    if name.startswith("sigma:"):
        try:
            n = int(name.split(":", 1)[1])
        except ValueError:
            raise FracmapError(f"bad harmonic in {name!r}") from None
        return sigma(params, n)
    raise FracmapError(f"unknown function {name!r}; choose from {', '.join(BUILTIN_NAMES)}")
