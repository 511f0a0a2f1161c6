"""Cauchy-type transforms of the supported laws.

Conventions:

* ``cauchy_G(d, z)`` is the Cauchy transform on the upper half-plane (and
  on the real axis outside the closed support, where it is real).
* ``cauchy_G_tilde(d, z)`` is the integral ``int mu(dx)/(z-x)`` at any
  point off the closed support, in either half-plane.
* ``cauchy_G_continued(d, z)`` is the analytic continuation of the
  upper-half-plane transform across the support, obtained as
  ``G_tilde(z) - 2 pi i rho(z)`` where ``rho`` is the analytically
  continued density.
* ``cauchy_G_quad(d, z)`` is an independent quadrature oracle for
  ``cauchy_G_tilde`` that never calls the hypergeometric code.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np
from scipy import integrate, special

from .distributions import (Affine, Beta, BetaPrime, Cauchy, Distribution,
                            Gamma, Gaussian, InverseGamma, MarchenkoPastur,
                            PointMass, Semicircle, StudentT, Ultraspherical,
                            affine)
from .errors import (DomainError, NearSupport, NoConvergence,
                     NonconvergentLadder, OutsideDomain, PoleOfF,
                     UnsupportedFamily)
from .hypergeom import _neville, hyp2f1
from .surface_complex import ConeSpec, principal_pow

TWO_PI_I = 2j * math.pi
QUAD_TOL = 1e-13
NEAR_SUPPORT = 1e-6
REAL_EPS = 1e-12


class Side(str, Enum):
    UpperPlane = "UpperPlane"
    LowerContinuation = "LowerContinuation"
    SurfaceSheet = "SurfaceSheet"


@dataclass(frozen=True)
class TransformValue:
    value: complex
    side: Side
    sheet: int | None = None


# --------------------------------------------------------------------------
# support geometry

def _support(d):
    return d.support


def dist_to_support(d: Distribution, z: complex) -> float:
    lo, hi = _support(d)
    x, y = z.real, z.imag
    if x < lo:
        return math.hypot(lo - x, y)
    if x > hi:
        return math.hypot(x - hi, y)
    return abs(y)


def _real_off_support(d, z):
    lo, hi = _support(d)
    return z.imag == 0 and (z.real < lo or z.real > hi)


# --------------------------------------------------------------------------
# G tilde: the measure-integral off the support

def _g_beta(p, q, z):
    return hyp2f1(1.0, p, p + q, 1.0 / z) / z


def _g_beta_prime(p, q, z):
    return q / ((p + q) * z) * hyp2f1(1.0, p, 1.0 + p + q, 1.0 + 1.0 / z)


def _g_student(q, z):
    return (q - 0.5) / q / z * hyp2f1(1.0, 0.5, 1.0 + q, 1.0 + 1.0 / (z * z))


def _sqrt_prod(a, b):
    return cmath.sqrt(a) * cmath.sqrt(b)


def cauchy_G_tilde(d: Distribution, z: complex) -> complex:
    """``int mu(dx)/(z-x)`` for ``z`` off the closed support."""
    z = complex(z)
    if isinstance(d, PointMass):
        if z == d.a:
            raise DomainError("G of a point mass is singular at the atom")
        return 1.0 / (z - float(d.a))
    if isinstance(d, Affine):
        s, t = float(d.scale), float(d.shift)
        return cauchy_G_tilde(d.base, (z - t) / s) / s
    if dist_to_support(d, z) == 0:
        raise DomainError(f"{z} lies on the support of {d.spec()}")
    if isinstance(d, Beta):
        return _g_beta(float(d.p), float(d.q), z)
    if isinstance(d, BetaPrime):
        return _g_beta_prime(float(d.p), float(d.q), z)
    if isinstance(d, StudentT):
        return _g_student(float(d.q), z)
    if isinstance(d, Ultraspherical):
        s = float(d.p) + 0.5
        return 0.5 * _g_beta(s, s, (z + 1.0) / 2.0)
    if isinstance(d, Semicircle):
        return (z - _sqrt_prod(z - 2.0, z + 2.0)) / 2.0
    if isinstance(d, MarchenkoPastur):
        return (z - _sqrt_prod(z, z - 4.0)) / (2.0 * z)
    if isinstance(d, Cauchy):
        return 1.0 / (z + 1j) if z.imag > 0 else 1.0 / (z - 1j)
    if isinstance(d, Gamma) and d.p == 1 and abs(z) < 500:
        # exponential law: -e^{-z} E_1(-z), whose cut is exactly [0, inf)
        return complex(-cmath.exp(-z) * special.exp1(-z))
    if isinstance(d, (Gamma, InverseGamma, Gaussian)):
        return _quad(d, z)
    raise UnsupportedFamily(type(d).__name__)


def cauchy_G(d: Distribution, z: complex) -> complex:
    """Cauchy transform on the closed upper half-plane minus the support."""
    z = complex(z)
    if z.imag < 0 or (z.imag == 0 and not _real_off_support(d, z)):
        raise DomainError(f"cauchy_G needs Im z > 0 or z real off the support, got {z}")
    return cauchy_G_tilde(d, z)


def reciprocal_F(d: Distribution, z: complex) -> complex:
    g = cauchy_G(d, z)
    if abs(g) < 1e-300:
        raise PoleOfF(f"G vanishes at {z}")
    return 1.0 / g


def eta_transform(d: Distribution, z: complex) -> complex:
    """``1 - z F(1/z)``; ``F`` is evaluated off the support in either half-plane."""
    z = complex(z)
    if z == 0:
        return 0j
    g = cauchy_G_tilde(d, 1.0 / z)
    if abs(g) < 1e-300:
        raise PoleOfF(f"G vanishes at {1.0 / z}")
    return 1.0 - z / g


# --------------------------------------------------------------------------
# quadrature oracle

def _cquad(f, a, b, **kw):
    val, err = integrate.quad(f, a, b, complex_func=True, epsabs=QUAD_TOL,
                              epsrel=QUAD_TOL, limit=400, **kw)
    return complex(val)


def _compact_data(d):
    """(lo, hi, alpha, beta, r): density = (x-lo)^alpha (hi-x)^beta r."""
    if isinstance(d, Beta):
        return 0.0, 1.0, float(d.p) - 1, float(d.q) - 1, 1.0 / d.norm
    if isinstance(d, Ultraspherical):
        a = float(d.p) - 0.5
        return -1.0, 1.0, a, a, 1.0 / d.norm
    if isinstance(d, Semicircle):
        return -2.0, 2.0, 0.5, 0.5, 1.0 / (2 * math.pi)
    if isinstance(d, MarchenkoPastur):
        return 0.0, 4.0, -0.5, 0.5, 1.0 / (2 * math.pi)
    return None


def _quad_compact(d, z, data):
    lo, hi, al, be, r = data
    L = hi - lo
    sig = 0.0 if z.imag == 0 else (-1.0 if z.imag > 0 else 1.0)
    kap = 0.5 * sig

    def f(t):
        w = t + 1j * kap * (t - lo) * (hi - t) / L
        dw = 1.0 + 1j * kap * (hi + lo - 2 * t) / L
        fa = (1 + 1j * kap * (hi - t) / L) ** al
        fb = (1 - 1j * kap * (t - lo) / L) ** be
        return r * fa * fb * dw / (z - w)

    return _cquad(f, lo, hi, weight="alg", wvar=(al, be))


def _halfline_density(d):
    """(exponent at 0, smooth part s) with density(w) = w^e s(w)."""
    if isinstance(d, BetaPrime):
        p, q = float(d.p), float(d.q)
        nb = d.norm
        return p - 1, lambda w: (1 + w) ** (-p - q) / nb
    if isinstance(d, Gamma):
        p = float(d.p)
        lg = special.gammaln(p)
        return p - 1, lambda w: cmath.exp(-w - lg)
    if isinstance(d, InverseGamma):
        p = float(d.p)
        lg = special.gammaln(p)
        return 0.0, lambda w: cmath.exp((-p - 1) * cmath.log(w) - 1 / w - lg)
    return None


def _quad_halfline(d, z, data):
    e, s = data
    sig = 0.0 if z.imag == 0 else (-1.0 if z.imag > 0 else 1.0)
    rot = cmath.exp(1j * sig * math.pi / 4)
    phase = rot ** e if e else 1.0

    def head(t):  # t^e factored into the quadrature weight
        w = t * rot
        return phase * s(w) * rot / (z - w)

    def tail(t):
        w = t * rot
        return (t ** e) * phase * s(w) * rot / (z - w)

    return (_cquad(head, 0.0, 1.0, weight="alg", wvar=(e, 0.0))
            + _cquad(tail, 1.0, math.inf))


def _line_density(d):
    if isinstance(d, StudentT):
        q = float(d.q)
        nb = d.norm
        return 0.5, lambda w: (1 + w * w) ** (-q) / nb
    if isinstance(d, Cauchy):
        return 0.5, lambda w: 1.0 / (math.pi * (1 + w * w))
    if isinstance(d, Gaussian):
        return 1.0, lambda w: cmath.exp(-0.5 * w * w) / math.sqrt(2 * math.pi)
    return None


def _quad_line(z, shift, rho):
    def f(t):
        w = t - 1j * shift
        return rho(w) / (z - w)

    pts = sorted({-8.0, 0.0, 8.0, z.real})
    total = _cquad(f, -math.inf, pts[0]) + _cquad(f, pts[-1], math.inf)
    for a, b in zip(pts, pts[1:]):
        total += _cquad(f, a, b)
    return total


def cauchy_G_shifted(d: Distribution, z: complex, shift: float) -> complex:
    """Integral over the line ``R - i shift`` (negative shift: above R).

    For an entire density (Gaussian) this is the continuation of ``G`` from
    the upper half-plane to ``Im z > -shift``.  For Student-t and Cauchy the
    shift must stay inside the strip ``|Im w| < 1``.
    """
    z = complex(z)
    data = _line_density(d)
    if data is None:
        raise UnsupportedFamily(f"no line contour for {d.spec()}")
    if not isinstance(d, Gaussian) and abs(shift) >= 1:
        raise DomainError("shift leaves the strip of analyticity")
    if z.imag <= -shift + NEAR_SUPPORT and shift > 0:
        raise NearSupport("z lies on or below the shifted contour")
    return _quad_line(z, shift, data[1])


def _quad(d, z):
    data = _compact_data(d)
    if data is not None:
        return _quad_compact(d, z, data)
    data = _halfline_density(d)
    if data is not None:
        return _quad_halfline(d, z, data)
    data = _line_density(d)
    if data is not None:
        h, rho = data
        sig = 0.0 if z.imag == 0 else (1.0 if z.imag > 0 else -1.0)
        return _quad_line(z, sig * h, rho)
    raise UnsupportedFamily(type(d).__name__)


def cauchy_G_quad(d: Distribution, z: complex) -> complex:
    """Quadrature oracle for ``cauchy_G_tilde``; no hypergeometric code used.

    The integration path is bent away from ``z`` inside the region where the
    density is analytic: a parabolic arc for compact supports, a ray at
    angle ``-+pi/4`` for half-line supports and a horizontal line for laws on
    the whole line.
    """
    z = complex(z)
    if isinstance(d, PointMass):
        return cauchy_G_tilde(d, z)
    if isinstance(d, Affine):
        s, t = float(d.scale), float(d.shift)
        return cauchy_G_quad(d.base, (z - t) / s) / s
    if dist_to_support(d, z) < NEAR_SUPPORT:
        raise NearSupport(f"{z} is within {NEAR_SUPPORT} of the support")
    return _quad(d, z)


# --------------------------------------------------------------------------
# continuation

def density_continued(d: Distribution, z: complex) -> complex:
    """Analytic continuation of the density used in the residue term."""
    z = complex(z)
    if isinstance(d, Beta):
        p, q = float(d.p), float(d.q)
        return principal_pow(z, p - 1) * principal_pow(1 - z, q - 1) / d.norm
    if isinstance(d, BetaPrime):
        p, q = float(d.p), float(d.q)
        return principal_pow(z, p - 1) * principal_pow(1 + z, -p - q) / d.norm
    if isinstance(d, StudentT):
        q = float(d.q)
        # (1+z^2)^{-q} with both cuts pointing up along the imaginary axis
        a = principal_pow(z - 1j, -q, cut=math.pi / 2, limit="high")
        b = principal_pow(z + 1j, -q, cut=math.pi / 2, limit="high")
        return a * b / d.norm
    if isinstance(d, Ultraspherical):
        a = float(d.p) - 0.5
        return principal_pow(1 + z, a) * principal_pow(1 - z, a) / d.norm
    if isinstance(d, Gaussian):
        return cmath.exp(-0.5 * z * z) / math.sqrt(2 * math.pi)
    if isinstance(d, Gamma):
        p = float(d.p)
        return principal_pow(z, p - 1) * cmath.exp(-z - special.gammaln(p))
    if isinstance(d, InverseGamma):
        p = float(d.p)
        return principal_pow(z, -p - 1) * cmath.exp(-1 / z - special.gammaln(p))
    if isinstance(d, Semicircle):
        return principal_pow(2 - z, 0.5) * principal_pow(2 + z, 0.5) / (2 * math.pi)
    if isinstance(d, MarchenkoPastur):
        return principal_pow(4 - z, 0.5) * principal_pow(z, -0.5) / (2 * math.pi)
    if isinstance(d, Cauchy):
        return 1.0 / (math.pi * (1 + z * z))
    raise UnsupportedFamily(f"no continued density for {d.spec()}")


def in_continuation_domain(d: Distribution, z: complex) -> bool:
    z = complex(z)
    x, y = z.real, z.imag
    if y > 0:
        return True
    if isinstance(d, Affine):
        if d.scale < 0:
            return False
        return in_continuation_domain(d.base, (z - float(d.shift)) / float(d.scale))
    if isinstance(d, PointMass):
        return z != d.a
    if isinstance(d, (Gaussian,)):
        return True
    if isinstance(d, Cauchy):
        return z != -1j
    if isinstance(d, StudentT):
        # on i(-1,0) the value from the right half-plane is returned
        if x == 0:
            return y < 0 and y != -1
        return x > 0 or y < 0
    if y == 0:
        lo, hi = d.support
        if isinstance(d, (BetaPrime, Gamma, InverseGamma)):
            return x > 0
        return lo < x < hi
    return True


def _continued_raw(d, z):
    if z.imag > 0 or isinstance(d, PointMass):
        return cauchy_G_tilde(d, z)
    if isinstance(d, Affine):
        s, t = float(d.scale), float(d.shift)
        return _continued_raw(d.base, (z - t) / s) / s
    if z.imag < 0:
        try:
            return cauchy_G_tilde(d, z) - TWO_PI_I * density_continued(d, z)
        except DomainError:
            # hugging the support from below; the closed forms refuse it
            if not _circle_room(d, z.real) > 1e-6:
                raise
            return _circle_mean(d, z)
    return _continued_on_axis(d, z)


def _continued_on_axis(d, z):
    if _real_off_support(d, z):
        return cauchy_G_tilde(d, z)
    return _circle_mean(d, z)


def _circle_room(d, x):
    lo, hi = d.support
    room = min(x - lo, hi - x, 1.0)
    if isinstance(d, Cauchy):
        room = min(room, 0.5)
    if isinstance(d, StudentT):
        room = min(room, abs(x))
    return room


def _circle_mean(d, z, n=32):
    # mean value over a circle a quarter of the way to the nearest branch
    # point; the trapezoid rule converges like 4**-n.  Offset nodes keep
    # every sample at least r sin(pi/n) away from the real axis.
    room = _circle_room(d, z.real)
    if not room > 0:
        raise DomainError(f"{z} is at a branch point of the continuation")
    r = 0.25 * room
    acc = 0j
    for k in range(n):
        w = z + r * cmath.exp(1j * math.pi * (2 * k + 1) / n)
        if w.imag > 0:
            acc += cauchy_G_tilde(d, w)
        else:
            acc += cauchy_G_tilde(d, w) - TWO_PI_I * density_continued(d, w)
    return acc / n


def cauchy_G_continued(d: Distribution, z: complex) -> TransformValue:
    """Continuation of the upper-half-plane transform to the family domain.

    Beta: C minus (-inf,0] and [1,inf).  Beta prime, gamma, inverse gamma:
    C minus (-inf,0].  Student-t: the upper half-plane together with
    ``(C^- u H^+) \\ i[-1,0]``; on ``i(-1,0)`` the limit from the right is
    returned.  Gaussian: the whole plane.
    """
    z = complex(z)
    if not in_continuation_domain(d, z):
        raise OutsideDomain(f"{z} is outside the continuation domain of {d.spec()}")
    side = Side.UpperPlane if z.imag >= 0 else Side.LowerContinuation
    return TransformValue(_continued_raw(d, z), side)


def G_cont(d: Distribution, z: complex) -> complex:
    """Shorthand for ``cauchy_G_continued(d, z).value``."""
    return cauchy_G_continued(d, z).value


# --------------------------------------------------------------------------
# derivatives

def ode_rhs(d: Distribution, z: complex, g: complex) -> complex:
    """``G'(z)`` from the first-order ODE of the family, given ``G(z) = g``.

    The ODE is linear, so every branch (upper transform, G tilde, the
    continuation) satisfies it.
    """
    if isinstance(d, Beta):
        p, q = float(d.p), float(d.q)
        return ((p - 1) / z + (q - 1) / (z - 1)) * g - (p + q - 1) / (z * (z - 1))
    if isinstance(d, BetaPrime):
        p, q = float(d.p), float(d.q)
        return ((p - 1) / z - (p + q) / (z + 1)) * g + q / (z * (z + 1))
    if isinstance(d, StudentT):
        q = float(d.q)
        return 2 * q / (1 + z * z) * ((q - 0.5) / q - z * g)
    if isinstance(d, Ultraspherical):
        p = float(d.p)
        return ((2 * p - 1) * z * g - 2 * p) / (z * z - 1)
    if isinstance(d, Gaussian):
        return 1 - z * g
    if isinstance(d, Gamma):
        p = float(d.p)
        return 1 / z + ((p - 1) / z - 1) * g
    if isinstance(d, InverseGamma):
        p = float(d.p)
        return g * (1 / (z * z) - (p + 1) / z) + p / (z * z)
    if isinstance(d, Semicircle):
        return g / (2 * g - z)
    if isinstance(d, MarchenkoPastur):
        return (g - g * g) / (2 * z * g - z)
    if isinstance(d, (Cauchy, PointMass)):
        return -g * g
    if isinstance(d, Affine):
        s, t = float(d.scale), float(d.shift)
        return ode_rhs(d.base, (z - t) / s, s * g) / (s * s)
    raise UnsupportedFamily(type(d).__name__)


def cauchy_G_prime(d: Distribution, z: complex) -> complex:
    """Derivative of the continued transform at ``z``."""
    z = complex(z)
    return ode_rhs(d, z, G_cont(d, z))


def contour_derivative(f: Callable[[complex], complex], z: complex, r: float,
                       n: int = 48) -> complex:
    """``f'(z)`` by the trapezoidal rule on the Cauchy integral over ``|w-z| = r``.

    Converges geometrically, like ``(r/R)**n`` with ``R`` the distance to the
    nearest singularity.
    """
    s = 0j
    for k in range(n):
        e = cmath.exp(2j * math.pi * k / n)
        s += f(z + r * e) / e
    return s / (n * r)


# --------------------------------------------------------------------------
# residuals of the family ODEs and recursions

def ode_residual(d: Distribution, z: complex) -> float:
    """Largest residual of the family ODE(s) at ``z`` in the upper half-plane.

    ``G'`` is taken from the contour derivative of ``cauchy_G`` on a circle
    of radius ``Im z / 2``, independent of the ODE being checked.
    """
    z = complex(z)
    if z.imag <= 0:
        raise DomainError("ode_residual needs Im z > 0")
    g = cauchy_G(d, z)
    gp = contour_derivative(lambda w: cauchy_G(d, w), z, 0.5 * z.imag)
    res = abs(gp - ode_rhs(d, z, g))
    if isinstance(d, BetaPrime):
        p, q = float(d.p), float(d.q)
        g1 = cauchy_G(BetaPrime(d.p, d.q + 1), z)
        alt = q * (q + 1) / ((p + q) * z) * ((-z + (p - 1) / (q + 1)) * g1 + 1)
        res = max(res, abs(gp - alt))
    elif isinstance(d, StudentT):
        q = float(d.q)
        g1 = cauchy_G(StudentT(d.q + 1), z)
        res = max(res, abs(gp - (2 * q - 1) * (1 - z * g1)))
    return res


def recursion_residual(d: Distribution, z: complex) -> float:
    """Residual of the parameter-raising recursion for beta prime or Student-t."""
    z = complex(z)
    if isinstance(d, BetaPrime):
        p, q = float(d.p), float(d.q)
        lhs = cauchy_G(d, z)
        rhs = q / (p + q) * ((1 + z) * cauchy_G(BetaPrime(d.p, d.q + 1), z) - 1)
        return abs(lhs - rhs)
    if isinstance(d, StudentT):
        q = float(d.q)
        lhs = cauchy_G(StudentT(d.q + 1), z)
        rhs = (q / (q - 0.5) * cauchy_G(d, z) + z) / (1 + z * z)
        return abs(lhs - rhs)
    raise UnsupportedFamily("recursions exist for BetaPrime and StudentT only")


# --------------------------------------------------------------------------
# Voiculescu transform, densities, convolution operations

def default_cone(d: Distribution) -> ConeSpec:
    return ConeSpec(1.0, 10.0 * (1.0 + d.spread))


def voiculescu_phi(d, z: complex, tol: float = 1e-12, G=None, dG=None,
                   max_iter: int = 100) -> complex:
    """``F^{-1}(z) - z`` by Newton's method from ``w0 = z``.

    ``G`` and ``dG`` override the transform and its derivative, which lets
    the routine run on laws known only through an evaluator.
    """
    z = complex(z)
    if G is None:
        G = lambda w: cauchy_G(d, w)  # noqa: E731
        dG = lambda w: cauchy_G_prime(d, w)  # noqa: E731
    w = z
    for _ in range(max_iter):
        g = G(w)
        F = 1.0 / g
        r = F - z
        if abs(r) < tol:
            return w - z
        Fp = -dG(w) / (g * g)
        step = r / Fp
        w_new = w - step
        # stay in the upper half-plane
        while w_new.imag <= 0:
            step /= 2
            w_new = w - step
        w = w_new
    raise NoConvergence(f"Newton inversion of F did not converge at {z}; "
                        "the cone constant may be too small")


def _edge_distance(d, x):
    lo, hi = d.support
    out = min(abs(x - lo), abs(hi - x))
    if isinstance(d, (StudentT, Cauchy)):
        out = min(out, 1.0)
    if isinstance(d, Gaussian):
        out = 1.0
    return out


def stieltjes_density(d: Distribution, x: float, eps_ladder=None):
    """Density at ``x`` by Stieltjes inversion with polynomial extrapolation.

    Evaluates ``-Im G(x+iy)/pi`` on a geometric ladder of heights and
    extrapolates to ``y = 0`` with Neville's scheme.  Returns
    ``(value, error_estimate)``.
    """
    x = float(x)
    if eps_ladder is None:
        y0 = min(0.05, 0.25 * _edge_distance(d, x))
        if not y0 > 0:
            raise DomainError(f"{x} is not interior to the support")
        eps_ladder = [y0 * 2.0 ** -k for k in range(6)]
    ys = list(eps_ladder)
    vals = [-cauchy_G(d, complex(x, y)).imag / math.pi for y in ys]
    full = _neville(ys, vals, 0.0)
    part = _neville(ys[:-1], vals[:-1], 0.0)
    val, err = full.real if isinstance(full, complex) else full, abs(full - part)
    if not math.isfinite(val) or err > 1e-4 * max(1.0, abs(val)):
        raise NonconvergentLadder(f"extrapolation unstable at x={x} (err {err:.2e})")
    return float(val), float(err)


def boolean_power_F(d, t: float) -> Callable[[complex], complex]:
    """Evaluator of ``F`` for the Boolean power ``mu^{uplus t}``."""
    if t < 0:
        raise DomainError("Boolean powers need t >= 0")
    if t == 0:
        return lambda z: complex(z)
    F = _as_F(d)
    return lambda z: (1 - t) * complex(z) + t * F(z)


def _as_F(d):
    if callable(d):
        return d
    return lambda z: reciprocal_F(d, z)


def monotone_convolve_F(d1, d2) -> Callable[[complex], complex]:
    """``F_1 o F_2``, the reciprocal transform of the monotone convolution."""
    F1, F2 = _as_F(d1), _as_F(d2)
    return lambda z: F1(F2(z))


def semicircle_free_convolve_G(d: Distribution, z: complex, s: float = 0.5,
                               tol: float = 1e-13, max_iter: int = 20000) -> complex:
    """``G`` of the free convolution of ``d`` with the standard semicircle.

    Solves ``G = G_d(z - G)`` by damped fixed-point iteration from ``1/z``,
    halving the damping whenever the residual grows for 20 steps in a row.
    """
    z = complex(z)
    if z.imag <= 0:
        raise DomainError("needs Im z > 0")
    g = 1.0 / z
    best = math.inf
    worse = 0
    for _ in range(max_iter):
        target = cauchy_G(d, z - g)
        res = abs(target - g)
        if res < tol:
            return target
        if res < best:
            best, worse = res, 0
        else:
            worse += 1
            if worse >= 20:
                s /= 2
                worse = 0
                if s < 1e-3:
                    break
        g = (1 - s) * g + s * target
    raise NoConvergence(f"subordination iteration stalled at {z}")


def semicircle_free_convolve_dG(d: Distribution, z: complex) -> complex:
    """Derivative of ``semicircle_free_convolve_G`` by implicit differentiation."""
    g = semicircle_free_convolve_G(d, z)
    h = cauchy_G_prime(d, complex(z) - g)
    return h / (1 + h)


# --------------------------------------------------------------------------
# closed forms and identities

def closed_form_G(example: int, a: float, z: complex) -> complex:
    """Elementary Cauchy transforms of six one-parameter beta/beta prime laws.

    1: Beta(a, 1-a)        2: Beta(1-a, 1+a)       3: Beta(2-a, 1+a)
    4: BetaPrime(1-a, a)   5: BetaPrime(1+a, 1-a)  6: BetaPrime(1+a, 2-a)
    """
    z = complex(z)
    if example == 1:
        return (1 - 1 / z) ** (-a) / z
    if example == 2:
        return (1 - (1 - 1 / z) ** a) / a
    if example == 3:
        return 2 * (a - z + z * (1 - 1 / z) ** a) / (a * (a - 1))
    mz = -z
    if example == 4:
        return (1 - mz ** (-a)) / (1 + z)
    if example == 5:
        return 1 / (1 + z) - (1 - mz ** a) / (a * (1 + z) ** 2)
    if example == 6:
        return 1 / (1 + z) - 2 * (a * z + a - 1 + mz ** a) / (a * (a - 1) * (1 + z) ** 3)
    raise ValueError("example must be 1..6")


def closed_form_law(example: int, a: float) -> Distribution:
    return {1: lambda: Beta(a, 1 - a), 2: lambda: Beta(1 - a, 1 + a),
            3: lambda: Beta(2 - a, 1 + a), 4: lambda: BetaPrime(1 - a, a),
            5: lambda: BetaPrime(1 + a, 1 - a), 6: lambda: BetaPrime(1 + a, 2 - a)}[example]()


def eta_closed_beta_tilde(a: float, z: complex) -> complex:
    return 1 - (1 - complex(z)) ** a


def eta_closed_beta_prime_tilde(a: float, z: complex) -> complex:
    z = complex(z)
    return (-z) ** a / ((-z) ** a - (1 - z) ** a)


def beta_zero_asymptotic(p: float, q: float, z: complex) -> complex:
    """Leading behaviour of the continued beta transform as ``z -> 0``."""
    z = complex(z)
    lead = -math.pi / (special.beta(p, q) * math.sin(math.pi * p)) * principal_pow(-z, p - 1)
    if p < 0.5:
        return lead
    const = -(p + q - 1) / (p - 1)
    if p < 2:
        return const + lead
    return const - (p + q - 1) * (p + q - 2) / ((p - 1) * (p - 2)) * z


def beta_prime_zero_asymptotic(p: float, q: float, z: complex) -> complex:
    """Leading behaviour of the continued beta prime transform as ``z -> 0``."""
    z = complex(z)
    lead = -math.pi / (special.beta(p, q) * math.sin(math.pi * p)) * principal_pow(-z, p - 1)
    if p < 0.5:
        return lead
    const = -q / (p - 1)
    if p < 2:
        return const + lead
    return const - q * (q + 1) / ((p - 1) * (p - 2)) * z


RV_RULES = ("inverse", "affine", "square", "beta_to_betaprime",
            "beta_to_betaprime_inverse", "beta_gamma_limit",
            "betaprime_invgamma_limit", "gamma_inverse",
            "ultraspherical_affine", "t_square")


def rv_transform_check(rule: str, params: dict, z: complex) -> float:
    """Residual of a random-variable transformation identity at ``z``.

    One side is the toolkit's transform of the transformed law; the other is
    built from the transform of the original law by the change-of-variable
    rule.  Laws without a hypergeometric route are evaluated by quadrature.
    """
    z = complex(z)
    P = params
    if rule == "inverse":
        # X > 0  =>  G_{1/X}(z) = 1/z - G_X(1/z)/z^2
        base, image = P["base"], P["image"]
        lhs = cauchy_G_tilde(image, z)
        rhs = 1 / z - cauchy_G_tilde(base, 1 / z) / (z * z)
        return abs(lhs - rhs)
    if rule == "affine":
        base, s, t = P["base"], P["scale"], P["shift"]
        lhs = cauchy_G_quad(affine(base, s, t), z)
        rhs = cauchy_G_tilde(base, (z - t) / s) / s
        return abs(lhs - rhs)
    if rule == "square":
        base, image = P["base"], P["image"]  # image = law of base^2, base symmetric
        return abs(cauchy_G_tilde(base, z) - z * cauchy_G_tilde(image, z * z))
    if rule == "beta_to_betaprime":
        p, q = P["p"], P["q"]
        lhs = cauchy_G_tilde(BetaPrime(p, q), z)
        rhs = 1 / (z + 1) + cauchy_G_tilde(Beta(p, q), z / (z + 1)) / (z + 1) ** 2
        return abs(lhs - rhs)
    if rule == "beta_to_betaprime_inverse":
        p, q = P["p"], P["q"]
        lhs = cauchy_G_tilde(BetaPrime(q, p), z)
        rhs = 1 / (z + 1) - cauchy_G_tilde(Beta(p, q), 1 / (z + 1)) / (z + 1) ** 2
        return abs(lhs - rhs)
    if rule == "beta_gamma_limit":
        p, q = P["p"], P["q"]
        return abs(cauchy_G_tilde(affine(Beta(p, q), q, 0), z) - cauchy_G_quad(Gamma(p), z))
    if rule == "betaprime_invgamma_limit":
        p, q = P["p"], P["q"]
        return abs(cauchy_G_tilde(affine(BetaPrime(q, p), 1 / q, 0), z)
                   - cauchy_G_quad(InverseGamma(p), z))
    if rule == "gamma_inverse":
        p = P["p"]
        return rv_transform_check("inverse", {"base": Gamma(p), "image": InverseGamma(p)}, z)
    if rule == "ultraspherical_affine":
        p = P["p"]
        s = p + 0.5
        return abs(cauchy_G_tilde(Ultraspherical(p), z)
                   - cauchy_G_quad(affine(Beta(s, s), 2, -1), z))
    if rule == "t_square":
        q = P["q"]
        return rv_transform_check("square", {"base": StudentT(q),
                                             "image": BetaPrime(0.5, q - 0.5)}, z)
    raise ValueError(f"unknown rule {rule!r}; expected one of {RV_RULES}")


def upper_grid(n: int = 50, seed: int = 12345, xlim: float = 3.0,
               ylo: float = 0.05, yhi: float = 3.0) -> list[complex]:
    """Deterministic pseudo-random points in the upper half-plane."""
    rng = np.random.default_rng(seed)
    xs = rng.uniform(-xlim, xlim, n)
    ys = np.exp(rng.uniform(math.log(ylo), math.log(yhi), n))
    return [complex(x, y) for x, y in zip(xs, ys)]
