"""Linear-fractional maps on the real projective line.

The canonical forward map is ``S x = 1/(U - x)`` with matrix ``[[0, 1], [-1, U]]``
and its inverse ``T x = U - 1/x`` with matrix ``[[U, -1], [1, 0]]``.  Points are
kept in homogeneous coordinates so that orbits passing through (or near) the
pole at ``x = U`` stay well conditioned.
"""

from __future__ import annotations

import cmath
import enum
import functools
import math
from dataclasses import dataclass
from typing import Union

from .errors import (
    AffineMapError,
    FracmapError,
    InvalidPeriodError,
    OrientationReversingError,
    ParabolicBoundaryError,
)

TWO_PI = 2.0 * math.pi


class Regime(enum.Enum):
    ELLIPTIC = "elliptic"
    HYPERBOLIC = "hyperbolic"


@dataclass(frozen=True)
class MapParams:
    """The real parameter ``U`` of the map ``x -> 1/(U - x)``."""

    u: float

    def __post_init__(self):
        u = float(self.u)
        if not math.isfinite(u):
            raise FracmapError(f"U must be finite, got {self.u!r}")
        if u == 0.0:
            raise FracmapError("U = 0 is degenerate")
        if abs(u) == 2.0:
            raise ParabolicBoundaryError(f"|U| = 2 (parabolic) is not supported, got U={u}")
        object.__setattr__(self, "u", u)

    @property
    def regime(self) -> Regime:
        return Regime.ELLIPTIC if abs(self.u) < 2.0 else Regime.HYPERBOLIC

    @property
    def elliptic(self) -> bool:
        return self.regime is Regime.ELLIPTIC


@dataclass(frozen=True, eq=False)
class ProjectivePoint:
    """A point ``p/q`` of the real projective line; ``q == 0`` is infinity."""

    p: float
    q: float

    def __post_init__(self):
        p, q = float(self.p), float(self.q)
        if not (math.isfinite(p) and math.isfinite(q)):
            raise FracmapError("homogeneous coordinates must be finite")
        if p == 0.0 and q == 0.0:
            raise FracmapError("(0, 0) is not a projective point")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @classmethod
    def from_real(cls, x: float) -> "ProjectivePoint":
        if math.isinf(x):
            return cls(1.0, 0.0)
        return cls(x, 1.0)

    @property
    def value(self) -> float:
        if self.q == 0.0:
            return math.inf
        return self.p / self.q

    @property
    def is_infinite(self) -> bool:
        return self.q == 0.0

    def normalized(self) -> "ProjectivePoint":
        s = max(abs(self.p), abs(self.q))
        return ProjectivePoint(self.p / s, self.q / s)

    def distance(self, other: "ProjectivePoint") -> float:
        """Sine of the angle between representatives; a metric on the projective line."""
        cross = self.p * other.q - self.q * other.p
        return abs(cross) / (math.hypot(self.p, self.q) * math.hypot(other.p, other.q))

    def __eq__(self, other):
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        return self.p * other.q == self.q * other.p

    def __hash__(self):
        n = self.normalized()
        if n.p < 0 or (n.p == 0 and n.q < 0):
            n = ProjectivePoint(-n.p, -n.q)
        return hash((n.p, n.q))

    def __repr__(self):
        return f"ProjectivePoint({self.p!r}, {self.q!r})"


PointLike = Union[ProjectivePoint, float, int]


def as_point(x: PointLike) -> ProjectivePoint:
    if isinstance(x, ProjectivePoint):
        return x
    return ProjectivePoint.from_real(float(x))


@dataclass(frozen=True)
class MobiusMatrix:
    m11: float
    m12: float
    m21: float
    m22: float

    def __post_init__(self):
        for name in ("m11", "m12", "m21", "m22"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if self.det == 0.0:
            raise FracmapError("singular matrix does not define a linear-fractional map")

    @classmethod
    def _unchecked(cls, m11, m12, m21, m22) -> "MobiusMatrix":
        # products of strongly hyperbolic maps may round to det == 0
        m = object.__new__(cls)
        for name, v in zip(("m11", "m12", "m21", "m22"), (m11, m12, m21, m22)):
            object.__setattr__(m, name, float(v))
        return m

    @classmethod
    def forward(cls, params: MapParams) -> "MobiusMatrix":
        """Matrix of ``S x = 1/(U - x)``."""
        return cls(0.0, 1.0, -1.0, params.u)

    @classmethod
    def backward(cls, params: MapParams) -> "MobiusMatrix":
        """Matrix of ``T x = U - 1/x``, the inverse of :meth:`forward`."""
        return cls(params.u, -1.0, 1.0, 0.0)

    @classmethod
    def identity(cls) -> "MobiusMatrix":
        return cls(1.0, 0.0, 0.0, 1.0)

    @property
    def det(self) -> float:
        return self.m11 * self.m22 - self.m12 * self.m21

    @property
    def trace(self) -> float:
        return self.m11 + self.m22

    def __matmul__(self, other: "MobiusMatrix") -> "MobiusMatrix":
        return MobiusMatrix._unchecked(
            self.m11 * other.m11 + self.m12 * other.m21,
            self.m11 * other.m12 + self.m12 * other.m22,
            self.m21 * other.m11 + self.m22 * other.m21,
            self.m21 * other.m12 + self.m22 * other.m22,
        )

    def normalized(self) -> "MobiusMatrix":
        """Same map, scaled so the largest entry has magnitude one."""
        s = max(abs(self.m11), abs(self.m12), abs(self.m21), abs(self.m22))
        return MobiusMatrix._unchecked(self.m11 / s, self.m12 / s, self.m21 / s, self.m22 / s)

    def inverse(self) -> "MobiusMatrix":
        # adjugate; the scale is irrelevant projectively
        return MobiusMatrix._unchecked(self.m22, -self.m12, -self.m21, self.m11)

    def power(self, n: int) -> "MobiusMatrix":
        if n < 0:
            return self.inverse().power(-n)
        result = MobiusMatrix.identity()
        for _ in range(n):
            result = (self @ result).normalized()
        return result

    def is_scalar(self, tol: float = 1e-12) -> bool:
        m = self.normalized()
        return abs(m.m12) < tol and abs(m.m21) < tol and abs(m.m11 - m.m22) < tol

    def __call__(self, x: PointLike) -> ProjectivePoint:
        return apply(self, x)


def apply(m: MobiusMatrix, x: PointLike) -> ProjectivePoint:
    x = as_point(x)
    p = m.m11 * x.p + m.m12 * x.q
    q = m.m21 * x.p + m.m22 * x.q
    s = max(abs(p), abs(q))
    return ProjectivePoint(p / s, q / s)


def iterate_direct(params: MapParams, x0: PointLike, n: int) -> ProjectivePoint:
    """Apply ``S`` to ``x0`` ``n`` times, renormalizing at every step."""
    if n < 0:
        raise FracmapError(f"n must be non-negative, got {n}")
    u = params.u
    x0 = as_point(x0)
    p, q = x0.p, x0.q
    for _ in range(n):
        p, q = q, u * q - p
        s = abs(p) if abs(p) > abs(q) else abs(q)
        p /= s
        q /= s
    return ProjectivePoint(p, q)


@dataclass(frozen=True)
class ConjugationData:
    """Fixed points ``mu_plus``, ``mu_minus`` of ``x -> U - 1/x`` and multiplier ``kappa``.

    In the coordinate ``y = (1 - mu_plus x)/(mu_minus x - 1)`` the forward map
    is ``y -> kappa * y``.  ``kappa`` is also stored in polar form so that its
    powers can be formed without accumulating modulus drift.
    """

    mu_plus: complex
    mu_minus: complex
    kappa: complex
    kappa_log_abs: float
    kappa_angle: float

    def kappa_power(self, n: int) -> complex:
        angle = math.fmod(n * self.kappa_angle, TWO_PI)
        return math.exp(n * self.kappa_log_abs) * cmath.exp(1j * angle)


def conjugation_data(params: MapParams) -> ConjugationData:
    u = params.u
    disc = u * u - 4.0
    if disc == 0.0:
        raise ParabolicBoundaryError("|U| = 2 has a single fixed point")
    if disc < 0.0:
        root = 1j * math.sqrt(-disc)
        mu_plus = (u + root) / 2
        mu_minus = (u - root) / 2
        # |mu_plus| = 1, kappa = conj(mu_plus)/mu_plus
        return ConjugationData(
            mu_plus=mu_plus,
            mu_minus=mu_minus,
            kappa=mu_minus / mu_plus,
            kappa_log_abs=0.0,
            kappa_angle=-2.0 * math.atan2(math.sqrt(-disc), u),
        )
    root = math.sqrt(disc)
    mu_plus = (u + root) / 2
    mu_minus = (u - root) / 2
    kappa = mu_minus / mu_plus
    return ConjugationData(
        mu_plus=complex(mu_plus),
        mu_minus=complex(mu_minus),
        kappa=complex(kappa),
        kappa_log_abs=math.log(abs(kappa)),
        kappa_angle=0.0 if kappa > 0 else math.pi,
    )


def conjugate_coordinate(params: MapParams, x: PointLike) -> complex:
    """``y(x) = (1 - mu_plus x)/(mu_minus x - 1)``; the forward map multiplies it by kappa."""
    cd = conjugation_data(params)
    x = as_point(x)
    num = x.q - cd.mu_plus * x.p
    den = cd.mu_minus * x.p - x.q
    if den == 0:
        return complex(math.inf, 0.0)
    return num / den


def iterate_closed_form(params: MapParams, x0: PointLike, n: int) -> ProjectivePoint:
    """n-th iterate of ``S`` from the rotation (or dilation) in the conjugate coordinate."""
    if n < 0:
        raise FracmapError(f"n must be non-negative, got {n}")
    cd = conjugation_data(params)
    x0 = as_point(x0).normalized()
    if cd.mu_plus.imag == 0.0 and x0 == ProjectivePoint(cd.mu_plus.real, 1.0):
        return x0
    # y0 = a/b in homogeneous form; b = 0 only at the fixed point mu_plus
    a = x0.q - cd.mu_plus * x0.p
    b = cd.mu_minus * x0.p - x0.q
    if b == 0:
        return x0
    if cd.kappa_log_abs > 0.0:
        # |kappa| > 1: divide through by kappa^n instead of overflowing
        s = cd.kappa_power(-n)
        num = s * b + a
        den = cd.mu_plus * s * b + cd.mu_minus * a
    else:
        k = cd.kappa_power(n)
        num = b + k * a
        den = cd.mu_plus * b + cd.mu_minus * k * a
    scale = num if abs(num) >= abs(den) else den
    rot = scale.conjugate() / abs(scale)
    num *= rot
    den *= rot
    if max(abs(num.imag), abs(den.imag)) > 1e-9:
        raise ArithmeticError(
            f"closed-form iterate left the real line (imag parts {num.imag:.3g}, {den.imag:.3g})"
        )
    return ProjectivePoint(num.real, den.real).normalized()


def normalize(m: MobiusMatrix) -> tuple[MapParams, tuple[float, float]]:
    """Reduce ``x -> (m11 x + m12)/(m21 x + m22)`` to the canonical form ``y -> 1/(U - y)``.

    Returns ``U`` and ``(k1, k2)`` such that ``y = k1 x + k2`` conjugates ``m`` to the
    canonical map.  ``U`` is the similarity invariant ``trace/sqrt(det)``.
    """
    if m.m21 == 0.0:
        raise AffineMapError("m21 = 0: the map is affine and has no canonical form")
    det = m.det
    if det <= 0.0:
        raise OrientationReversingError(f"det = {det} <= 0: U would not be real")
    s = math.sqrt(det)
    a, c = m.m11 / s, m.m21 / s
    params = MapParams(m.trace / s)
    return params, (-c, a)


def cycle_parameter(n: int) -> MapParams:
    """Positive ``U`` for which every orbit has period ``n``.

    ``U = 2 cos(pi/n)``, the same value as ``sqrt(4/(tan(pi/n)**2 + 1))``.
    """
    if n < 3:
        raise InvalidPeriodError(f"period must be >= 3, got {n}")
    return MapParams(2.0 * math.cos(math.pi / n))


@functools.lru_cache(maxsize=8)
def resonant_parameters(max_period: int = 64) -> tuple[tuple[float, int], ...]:
    """All ``(U, period)`` with a rational rotation of period ``<= max_period``.

    ``U = 2 cos(pi m/n)`` gives period ``n/gcd(m, n)``; U = 0 is skipped.
    """
    out = {}
    for n in range(3, max_period + 1):
        for m in range(1, n):
            if math.gcd(m, n) != 1 or 2 * m == n:
                continue
            u = 2.0 * math.cos(math.pi * m / n)
            out[u] = n
    return tuple(sorted(out.items()))


def nearest_resonance(params: MapParams, max_period: int = 64) -> tuple[float, int, float]:
    """Closest resonant ``U`` to ``params.u``: returns ``(U_res, period, distance)``."""
    best = min(resonant_parameters(max_period), key=lambda item: abs(item[0] - params.u))
    return best[0], best[1], abs(best[0] - params.u)

