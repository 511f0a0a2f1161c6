"""Branch-aware complex powers.

Two tools live here.  ``principal_pow`` evaluates ``z**alpha`` with the
branch cut placed along an arbitrary ray from the origin, which is what the
continuation formulas need (``(-z)**a`` patterns, ``(1+z**2)**-q`` with a
cut along the positive imaginary axis, ...).  ``SurfacePoint`` lives on the
Riemann surface of the logarithm, where ``z**alpha`` is single valued
because the argument is never reduced.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import CutContact

TWO_PI = 2.0 * math.pi
CUT_TOL = 1e-12


@dataclass(frozen=True)
class SurfacePoint:
    """Point ``r e^{i theta}`` with an unreduced argument."""

    r: float
    theta: float

    def __post_init__(self):
        if not (self.r > 0 and math.isfinite(self.r)):
            raise ValueError(f"SurfacePoint needs r > 0, got {self.r}")
        if not math.isfinite(self.theta):
            raise ValueError("SurfacePoint needs a finite argument")

    @property
    def sheet(self) -> int:
        return math.floor(self.theta / TWO_PI)

    @classmethod
    def from_complex(cls, z: complex, sheet: int = 0) -> "SurfacePoint":
        """Lift ``z`` to the given sheet, argument in [2 pi n, 2 pi (n+1))."""
        z = complex(z)
        if z == 0:
            raise ValueError("0 is not on the surface")
        a = math.atan2(z.imag, z.real) % TWO_PI
        return cls(abs(z), a + TWO_PI * sheet)


@dataclass(frozen=True)
class SectorSpec:
    """Sector ``{theta_lo < arg z < theta_hi, 0 < |z| < radius}`` on the surface."""

    theta_lo: float
    theta_hi: float
    radius: float = math.inf

    def __post_init__(self):
        if not self.theta_lo < self.theta_hi:
            raise ValueError("SectorSpec needs theta_lo < theta_hi")
        if not self.radius > 0:
            raise ValueError("SectorSpec needs a positive radius")

    def contains(self, z: SurfacePoint) -> bool:
        return self.theta_lo < z.theta < self.theta_hi and z.r < self.radius


@dataclass(frozen=True)
class ConeSpec:
    """Truncated cone ``{Im z > m, |Re z| < lam * Im z}``."""

    lam: float = 1.0
    m: float = 1.0

    def __post_init__(self):
        if not (self.lam > 0 and self.m > 0):
            raise ValueError("ConeSpec needs lam > 0 and m > 0")

    def contains(self, z: complex) -> bool:
        z = complex(z)
        return z.imag > self.m and abs(z.real) < self.lam * z.imag


def surface_pow(z: SurfacePoint, alpha: float) -> complex:
    """``r**alpha * exp(i alpha theta)``, continuous in theta across sheets."""
    return cmath.rect(z.r ** alpha, alpha * z.theta)


def surface_log(z: SurfacePoint) -> complex:
    return complex(math.log(z.r), z.theta)


def project(z: SurfacePoint) -> complex:
    """Representative in C \\ {0} with the sheet offset removed."""
    return cmath.rect(z.r, z.theta - TWO_PI * z.sheet)


def _distance_to_ray(z: complex, angle: float) -> float:
    d = complex(math.cos(angle), math.sin(angle))
    w = z * d.conjugate()  # rotate the ray onto the positive real axis
    if w.real >= 0:
        return abs(w.imag)
    return abs(w)


def branch_arg(z: complex, cut: float = math.pi, limit: str = "raise") -> float:
    """Argument of ``z`` in ``(cut - 2 pi, cut]``.

    ``limit`` decides what happens when ``z`` sits on the cut ray:
    ``"raise"`` raises CutContact, ``"high"`` returns the limit with the
    argument tending to ``cut`` and ``"low"`` the limit tending to
    ``cut - 2 pi``.
    """
    z = complex(z)
    if z == 0:
        raise CutContact("argument of 0 is undefined")
    if _distance_to_ray(z, cut) <= CUT_TOL * (1.0 + abs(z)):
        if limit == "raise":
            raise CutContact(f"{z} lies on the cut at angle {cut}")
        return cut if limit == "high" else cut - TWO_PI
    a = math.atan2(z.imag, z.real)
    while a > cut:
        a -= TWO_PI
    while a <= cut - TWO_PI:
        a += TWO_PI
    return a


def principal_pow(z: complex, alpha: float, cut: float = math.pi,
                  limit: str = "raise") -> complex:
    """``z**alpha`` with the cut along the ray ``arg z = cut``.

    With the default cut this is the principal power: real and positive for
    ``z > 0``.  Integer exponents never raise on the cut.
    """
    z = complex(z)
    if z == 0:
        if alpha > 0:
            return 0j
        raise CutContact("0 raised to a non-positive power")
    if float(alpha).is_integer():
        return z ** int(alpha)
    a = branch_arg(z, cut, limit)
    return cmath.rect(abs(z) ** alpha, alpha * a)


def principal_log(z: complex, cut: float = math.pi, limit: str = "raise") -> complex:
    z = complex(z)
    return complex(math.log(abs(z)), branch_arg(z, cut, limit))
