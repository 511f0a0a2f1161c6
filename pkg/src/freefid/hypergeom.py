"""Gauss hypergeometric function 2F1(a, b; c; z) for real parameters.

The router maps ``z`` into the disc ``|w| <= SERIES_RADIUS`` with one of
the classical argument transformations and sums the series there:

=================  ====================  ==========================================
route              argument              note
=================  ====================  ==========================================
Series             z
Pfaff              z / (z - 1)           always regular
Recip_15_3_7       1 / z                 singular when b - a is an integer
OneMinusRecip      1 - 1 / z             singular when a + b - c is an integer
Euler_15_3_3       z                     used when it turns the series into a polynomial
=================  ====================  ==========================================

Singular connection formulas are evaluated at ``b + s`` for a few small
shifts ``s`` and interpolated back to ``s = 0`` (route ``PerturbedLimit``).
Around ``z = exp(+-i pi/3)`` every transform has modulus close to 1; there
the value is carried from a series point by Taylor steps of the
hypergeometric ODE (route ``TaylorContinuation``).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

from scipy import integrate, special

from . import kernels
from .errors import (DegenerateParameters, DomainError, NoConvergence, NoRoute,
                     PreconditionError)

EPS = 2.0 ** -53
SERIES_RADIUS = 0.8
CUT_TOL = 1e-14
# integer distance below which a connection formula counts as singular
DEGENERATE_TOL = 1e-3
PERTURB_DELTA = 5e-3
PERTURB_NODES = (-1.0, -2.0 / 3.0, -1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0, 1.0)
TAYLOR_RATIO = 0.5


class Route(str, Enum):
    SERIES = "Series"
    EULER = "Euler_15_3_3"
    RECIP = "Recip_15_3_7"
    ONE_MINUS_RECIP = "OneMinusRecip_15_3_9"
    PFAFF = "Pfaff"
    PERTURBED = "PerturbedLimit"
    TAYLOR = "TaylorContinuation"


@dataclass(frozen=True)
class HypParams:
    a: float
    b: float
    c: float

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if _is_nonpos_int(self.c):
            raise PreconditionError(f"c = {self.c} is a non-positive integer")

    def __iter__(self):
        return iter((self.a, self.b, self.c))


@dataclass(frozen=True)
class EvalReport:
    value: complex
    route: Route
    est_error: float


def _is_nonpos_int(x: float) -> bool:
    return x <= 0 and x == round(x)


def _dist_to_int(x: float) -> float:
    return abs(x - round(x))


def gamma_ratio(num, den) -> float:
    """``prod Gamma(num) / prod Gamma(den)`` through log-gamma and signs.

    A pole in the denominator gives 0; a pole in the numerator raises.
    """
    if any(_is_nonpos_int(x) for x in den):
        return 0.0
    if any(_is_nonpos_int(x) for x in num):
        raise DegenerateParameters(f"Gamma pole among {num}")
    log = math.fsum(special.gammaln(x) for x in num) - math.fsum(special.gammaln(x) for x in den)
    sign = 1.0
    for x in list(num) + list(den):
        sign *= special.gammasgn(x)
    return sign * math.exp(log)


def _terminates(a: float, b: float) -> bool:
    return _is_nonpos_int(a) or _is_nonpos_int(b)


def _on_cut(z: complex) -> bool:
    return abs(z.imag) <= CUT_TOL * (1.0 + abs(z)) and z.real >= 1.0 - CUT_TOL


def _series(a, b, c, w):
    if _is_nonpos_int(c):
        raise DegenerateParameters(f"series with c = {c}")
    if abs(w) >= 1.0 and not _terminates(a, b):
        raise DomainError(f"series argument {w} outside the unit disc")
    val, n = kernels.hyp2f1_series(a, b, c, w)
    if n < 0:
        raise NoConvergence(f"2F1 series did not converge at {w}")
    return complex(val), 4.0 * EPS * max(n, 1) * abs(val)


def f21_series(p: HypParams, z: complex) -> complex:
    """Sum the defining series directly (``|z| < 1``, ideally ``<= 0.8``)."""
    a, b, c = p
    return _series(a, b, c, complex(z))[0]


def _pow(z, alpha):
    # principal branch
    if z == 0:
        return 0j if alpha > 0 else complex(math.inf)
    return cmath.exp(alpha * cmath.log(z))


def _route_series(a, b, c, z):
    return _series(a, b, c, z)


def _route_euler(a, b, c, z):
    v, e = _series(c - a, c - b, c, z)
    f = _pow(1.0 - z, c - a - b)
    return f * v, abs(f) * e + 4 * EPS * abs(f * v)


def _route_pfaff(a, b, c, z):
    w = z / (z - 1.0)
    v, e = _series(a, c - b, c, w)
    f = _pow(1.0 - z, -a)
    return f * v, abs(f) * e + 4 * EPS * abs(f * v)


def _route_recip(a, b, c, z):
    w = 1.0 / z
    total = 0j
    scale = 0.0
    for x, y in ((a, b), (b, a)):
        coef = gamma_ratio([c, y - x], [y, c - x])
        if coef == 0.0:
            continue
        v, e = _series(x, 1.0 - c + x, 1.0 - y + x, w)
        t = coef * _pow(-z, -x) * v
        total += t
        scale += abs(t) + abs(coef * _pow(-z, -x)) * e
    return total, 8.0 * EPS * scale


def _route_one_minus_recip(a, b, c, z):
    w = 1.0 - 1.0 / z
    total = 0j
    scale = 0.0
    coef = gamma_ratio([c, c - a - b], [c - a, c - b])
    if coef != 0.0:
        v, e = _series(a, a - c + 1.0, a + b - c + 1.0, w)
        t = coef * _pow(z, -a) * v
        total += t
        scale += abs(t) + abs(coef * _pow(z, -a)) * e
    coef = gamma_ratio([c, a + b - c], [a, b])
    if coef != 0.0:
        v, e = _series(c - a, 1.0 - a, c - a - b + 1.0, w)
        pre = coef * _pow(1.0 - z, c - a - b) * _pow(z, a - c)
        t = pre * v
        total += t
        scale += abs(t) + abs(pre) * e
    return total, 8.0 * EPS * scale


_ROUTES = {
    Route.SERIES: _route_series,
    Route.EULER: _route_euler,
    Route.PFAFF: _route_pfaff,
    Route.RECIP: _route_recip,
    Route.ONE_MINUS_RECIP: _route_one_minus_recip,
}


def route_argument(route: Route, z: complex) -> complex:
    """Series argument a route feeds to the kernel."""
    if route in (Route.SERIES, Route.EULER):
        return z
    if route is Route.PFAFF:
        return z / (z - 1.0)
    if route is Route.RECIP:
        return 1.0 / z
    if route is Route.ONE_MINUS_RECIP:
        return 1.0 - 1.0 / z
    raise ValueError(route)


def is_degenerate(route: Route, a: float, b: float, c: float) -> bool:
    if route is Route.RECIP:
        return _dist_to_int(b - a) < DEGENERATE_TOL
    if route is Route.ONE_MINUS_RECIP:
        return _dist_to_int(a + b - c) < DEGENERATE_TOL
    return False


def _neville(xs, ys, x0=0.0):
    p = list(ys)
    n = len(xs)
    for k in range(1, n):
        for i in range(n - k):
            p[i] = ((x0 - xs[i + k]) * p[i] + (xs[i] - x0) * p[i + 1]) / (xs[i] - xs[i + k])
    return p[0]


def _perturbed(a, b, c, z, route):
    nodes = [PERTURB_DELTA * s for s in PERTURB_NODES]
    vals = []
    err = 0.0
    for s in nodes:
        v, e = _ROUTES[route](a, b + s, c, z)
        vals.append(v)
        err = max(err, e)
    full = _neville(nodes, vals)
    inner = _neville(nodes[1:5], vals[1:5])
    # Lebesgue constant of the six nodes is modest (< 5)
    return full, abs(full - inner) + 5.0 * err


def _taylor_path(a, b, c, start, target):
    f, _ = _regular(a, b, c, start)
    d = 0j
    if a * b != 0:
        d = a * b / c * _regular(a + 1.0, b + 1.0, c + 1.0, start)[0]
    cur = start
    steps = 0
    while cur != target:
        radius = min(abs(cur), abs(1.0 - cur))
        rest = target - cur
        if abs(rest) <= TAYLOR_RATIO * radius:
            h = rest
        else:
            h = rest / abs(rest) * (TAYLOR_RATIO * radius)
        f, d, n = kernels.taylor_step(a, b, c, cur, f, d, h)
        if n < 0:
            raise NoConvergence("Taylor continuation step did not converge")
        cur = target if h == rest else cur + h
        steps += 1
        if steps > 10_000:
            raise NoConvergence("Taylor continuation path too long")
    return complex(f), complex(d), steps


def f21_taylor(p: HypParams, z: complex, start: complex | None = None) -> EvalReport:
    """Continue 2F1 along the segment ``start -> z`` by ODE Taylor steps.

    The segment must not meet ``[1, inf)`` or pass close to 0 other than at
    a series point.  Default start: the point of modulus 0.5 on the ray
    through ``z``.
    """
    a, b, c = p
    z = complex(z)
    if _on_cut(z):
        raise DomainError(f"z = {z} lies on the cut [1, inf)")
    if start is None:
        start = z * (0.5 / abs(z)) if abs(z) > 0.5 else z
    f, _, steps = _taylor_path(a, b, c, complex(start), z)
    return EvalReport(f, Route.TAYLOR, 64.0 * EPS * (steps + 1) * abs(f))


def _regular(a, b, c, z):
    """Router without the perturbation fallback for singular formulas."""
    rep = f21(HypParams(a, b, c), z)
    return rep.value, rep.est_error


def f21_route(p: HypParams, z: complex, route: Route) -> EvalReport:
    """Evaluate with a forced route (for cross-checks)."""
    a, b, c = p
    z = complex(z)
    if _on_cut(z):
        raise DomainError(f"z = {z} lies on the cut [1, inf)")
    if route is Route.TAYLOR:
        return f21_taylor(p, z)
    if is_degenerate(route, a, b, c):
        raise DegenerateParameters(f"{route.value} singular for {p}")
    v, e = _ROUTES[route](a, b, c, z)
    return EvalReport(v, route, e)


def select_route(p: HypParams, z: complex) -> Route:
    a, b, c = p
    z = complex(z)
    if _terminates(a, b):
        return Route.SERIES
    if _terminates(c - a, c - b):
        return Route.EULER
    cands = []
    for route in (Route.SERIES, Route.PFAFF, Route.RECIP, Route.ONE_MINUS_RECIP):
        w = abs(route_argument(route, z))
        if w <= SERIES_RADIUS:
            cands.append((w, route))
    cands.sort(key=lambda t: t[0])
    for _, route in cands:
        if not is_degenerate(route, a, b, c):
            return route
    if cands:
        return Route.PERTURBED
    return Route.TAYLOR


def f21(p: HypParams, z: complex) -> EvalReport:
    """2F1(a, b; c; z) off the cut ``[1, inf)`` with route and error estimate."""
    a, b, c = p
    z = complex(z)
    if _on_cut(z):
        raise DomainError(f"z = {z} lies on the cut [1, inf)")
    if z == 0:
        return EvalReport(1.0 + 0j, Route.SERIES, 0.0)
    route = select_route(p, z)
    if route is Route.PERTURBED:
        cands = sorted((abs(route_argument(r, z)), r) for r in
                       (Route.RECIP, Route.ONE_MINUS_RECIP)
                       if abs(route_argument(r, z)) <= SERIES_RADIUS)
        if not cands:
            raise NoRoute(f"no transform for z = {z}")
        v, e = _perturbed(a, b, c, z, cands[0][1])
        return EvalReport(v, Route.PERTURBED, e)
    if route is Route.TAYLOR:
        return f21_taylor(p, z)
    if route is Route.SERIES and abs(z) >= 1.0 and not _terminates(a, b):
        raise NoRoute(f"no transform for z = {z}")
    v, e = _ROUTES[route](a, b, c, z)
    return EvalReport(v, route, e)


def hyp2f1(a: float, b: float, c: float, z: complex) -> complex:
    """Shorthand returning only the value."""
    return f21(HypParams(a, b, c), z).value


def f21_integral(p: HypParams, z: complex) -> complex:
    """Euler integral representation, evaluated by adaptive quadrature.

    ``B(b, c-b) F = int_0^1 x^(b-1) (1-x)^(c-b-1) (1-zx)^(-a) dx``, valid
    for ``c > b > 0`` and ``z`` off ``[1, inf)``.  The algebraic endpoint
    weights are handled by QUADPACK's ``alg`` weight; a breakpoint is put
    under the nearby singularity ``x = 1/z`` when it projects into (0, 1).
    """
    a, b, c = p
    z = complex(z)
    if not (c > b > 0):
        raise PreconditionError("Euler integral needs c > b > 0")
    if _on_cut(z):
        raise DomainError(f"z = {z} lies on the cut [1, inf)")
    al = b - 1.0
    be = c - b - 1.0

    def g(x):
        return (1.0 - z * x) ** (-a)

    pieces = []
    x0 = None
    if z != 0:
        r = (1.0 / z).real
        if 0.02 < r < 0.98:
            x0 = r
    opts = dict(epsabs=1e-15, epsrel=1e-13, limit=400)
    if x0 is None:
        pieces.append((0.0, 1.0, (al, be), lambda x: g(x)))
    else:
        pieces.append((0.0, x0, (al, 0.0), lambda x: g(x) * (1.0 - x) ** be))
        pieces.append((x0, 1.0, (0.0, be), lambda x: g(x) * x ** al))
    total = 0j
    for lo, hi, wvar, fn in pieces:
        re = integrate.quad(lambda x: fn(x).real, lo, hi, weight="alg", wvar=wvar, **opts)[0]
        im = integrate.quad(lambda x: fn(x).imag, lo, hi, weight="alg", wvar=wvar, **opts)[0]
        total += complex(re, im)
    return total / special.beta(b, c - b)
