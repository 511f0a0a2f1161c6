"""Decision procedures for free infinite divisibility.

The procedures fall into three groups:

* exact ones: the parameter-region classifier and the local-exponent set
  ``I``, both settled with rational interval arithmetic;
* numerical evidence for the analytic sufficient conditions: level-curve
  tracing of the continued Cauchy transform and the checks of conditions
  (A)/(B) on a domain;
* probes of the Boolean-power indicator along the imaginary axis.

Numerical procedures return their samples so a caller can inspect what was
checked; nothing here claims to be a proof.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import numpy as np
from scipy import integrate, optimize

from .cumulants import rational
from .distributions import (Beta, BetaPrime, Distribution, Gamma, Gaussian,
                            InverseGamma, StudentT, Ultraspherical)
from .errors import (AlphaOne, FreeFidError, LadderInconclusive,
                     NumericFailure, OutsideDomain, PreconditionError,
                     RangeExhausted, SeedFailure, StallError)
from .hypergeom import _neville
from .transforms import (G_cont, cauchy_G, cauchy_G_prime, cauchy_G_quad,
                         in_continuation_domain, ode_rhs)
from .verdict import FidVerdict, Reason, Status

HALF = Fraction(1, 2)
THREE_HALVES = Fraction(3, 2)


# --------------------------------------------------------------------------
# the exponent set I

@dataclass(frozen=True)
class ExponentReport:
    alpha: float
    in_I: bool
    theta_alpha: float
    interval: tuple | None = None

    def describe(self) -> str:
        if self.interval is None:
            return f"alpha={self.alpha} not in I"
        side, n = self.interval
        return f"alpha={self.alpha} in the n={n} {side} component of I"


def _exponent_interval(a: Fraction):
    """``(side, n)`` of the component of I containing ``a``, else None."""
    if a == 1:
        return None
    s = 1 / abs(a - 1)
    # a in ((2n-1)/2n, 2n/(2n+1)) or ((2n+2)/(2n+1), (2n+1)/2n)  <=>  2n < s < 2n+1
    fl = math.floor(s)
    if s <= 2 or s == fl or fl % 2:
        return None
    return ("lower" if a < 1 else "upper", fl // 2)


def in_exponent_set(alpha) -> bool:
    return _exponent_interval(rational(alpha)) is not None


def classify_exponent(alpha) -> ExponentReport:
    """Membership of ``alpha`` in I, decided exactly, and ``theta(alpha)``."""
    a = rational(alpha)
    if a <= 0:
        raise ValueError("alpha must be positive")
    if a == 1:
        raise AlphaOne("theta(alpha) is undefined for alpha = 1")
    theta = (1 / abs(float(a) - 1) - 1) * math.pi
    comp = _exponent_interval(a)
    return ExponentReport(float(alpha), comp is not None, theta, comp)


def exponent_intervals(n_max: int) -> list:
    """The first ``n_max`` components of each family, as Fraction pairs."""
    out = []
    for n in range(1, n_max + 1):
        out.append((Fraction(2 * n - 1, 2 * n), Fraction(2 * n, 2 * n + 1)))
        out.append((Fraction(2 * n + 2, 2 * n + 1), Fraction(2 * n + 1, 2 * n)))
    return sorted(out)


# --------------------------------------------------------------------------
# parameter regions

CITE_BETA_FID = "beta law FID region: p,q >= 3/2, or min(p,q) <= 1/2 with p+q >= 2"
CITE_BETA_NOT = "beta law with p,q <= 1 is not FID (reciprocal Cauchy transform vanishes at 0 and 1)"
CITE_EXPONENT = "local density exponent in I rules out free infinite divisibility"
CITE_BP_FID = "beta prime law FID for p in (0,1/2] or [3/2,inf)"
CITE_GAMMA_FID = "gamma law FID for p in (0,1/2] or [3/2,inf) (limit of beta prime)"
CITE_IG_FID = "inverse gamma law FID for every p > 0"
CITE_U_FID = "ultraspherical law FID for p >= 1 (affine image of beta_{p+1/2,p+1/2})"
CITE_U_NOT = "ultraspherical law not FID for -1/2 < p < 1"
CITE_T_FID = "t law FID for q in (1/2,2] or [2n+1/4, 2n+2], n >= 1"


def student_t_fid_set(q) -> bool:
    q = rational(q)
    if HALF < q <= 2:
        return True
    if q <= 2:
        return False
    n = math.floor((q - 2) / 2) + 1  # candidate n with 2n <= q < 2n+2, or q = 2n+2
    for m in (n - 1, n):
        if m >= 1 and 2 * m + Fraction(1, 4) <= q <= 2 * m + 2:
            return True
    return False


def _region_regular(x):
    return x <= HALF or x >= THREE_HALVES


def region_classifier(d: Distribution) -> FidVerdict:
    """Verdict from the proven parameter regions; Inconclusive elsewhere."""
    inc = FidVerdict(Status.Inconclusive, None, {"family": type(d).__name__}, "")
    if isinstance(d, Beta):
        p, q = rational(d.p), rational(d.q)
        ev = {"p": p, "q": q}
        if p >= THREE_HALVES and q >= THREE_HALVES:
            return FidVerdict(Status.KnownFID, Reason.ParamRegion, {**ev, "case": "i"}, CITE_BETA_FID)
        if p <= HALF and p + q >= 2:
            return FidVerdict(Status.KnownFID, Reason.ParamRegion, {**ev, "case": "ii"}, CITE_BETA_FID)
        if q <= HALF and p + q >= 2:
            return FidVerdict(Status.KnownFID, Reason.ParamRegion, {**ev, "case": "iii"}, CITE_BETA_FID)
        if p <= 1 and q <= 1:
            return FidVerdict(Status.CertifiedNotFID, Reason.ParamRegion, ev, CITE_BETA_NOT)
        for name, x in (("p", p), ("q", q)):
            if in_exponent_set(x):
                rep = classify_exponent(x)
                return FidVerdict(Status.CertifiedNotFID, Reason.ExponentInI,
                                  {**ev, "edge": name, "interval": rep.interval}, CITE_EXPONENT)
        return inc
    if isinstance(d, (BetaPrime, Gamma)):
        p = rational(d.p)
        cite = CITE_BP_FID if isinstance(d, BetaPrime) else CITE_GAMMA_FID
        if _region_regular(p):
            return FidVerdict(Status.KnownFID, Reason.ParamRegion, {"p": p}, cite)
        if in_exponent_set(p):
            return FidVerdict(Status.CertifiedNotFID, Reason.ExponentInI,
                              {"p": p, "interval": classify_exponent(p).interval}, CITE_EXPONENT)
        return inc
    if isinstance(d, InverseGamma):
        return FidVerdict(Status.KnownFID, Reason.ParamRegion, {"p": rational(d.p)}, CITE_IG_FID)
    if isinstance(d, Ultraspherical):
        p = rational(d.p)
        if p >= 1:
            return FidVerdict(Status.KnownFID, Reason.ParamRegion, {"p": p}, CITE_U_FID)
        return FidVerdict(Status.CertifiedNotFID, Reason.ParamRegion, {"p": p}, CITE_U_NOT)
    if isinstance(d, StudentT):
        q = rational(d.q)
        if student_t_fid_set(q):
            return FidVerdict(Status.KnownFID, Reason.ParamRegion, {"q": q}, CITE_T_FID)
        return FidVerdict(Status.Inconclusive, None, {"q": q,
                          "note": "outside the proven t ranges; no negative result known"}, "")
    if isinstance(d, Gaussian):
        return FidVerdict(Status.KnownFID, Reason.ParamRegion, {},
                          "the normal law is FID (limit of t laws with integer q)")
    return inc


# --------------------------------------------------------------------------
# subordination endpoint test

def subordination_endpoint_test(d: Distribution, eps_ladder=None) -> FidVerdict:
    """Blow-up of G (so F -> 0) at both edges of a beta law with p, q <= 1.

    For an edge exponent a < 1 the transform grows like eps**(a-1); for
    a = 1 (a jump of the density) it grows like log(1/eps).  Both are
    checked along the ladder and the fitted rates returned as evidence.
    """
    if not isinstance(d, Beta):
        raise PreconditionError("endpoint test applies to beta laws")
    p, q = float(d.p), float(d.q)
    if not (0 < p <= 1 and 0 < q <= 1):
        raise PreconditionError(f"endpoint test needs p, q <= 1, got {d.spec()}")
    if eps_ladder is None:
        eps_ladder = [10.0 ** -k for k in range(3, 10)]
    eps = np.array(sorted(eps_ladder, reverse=True), dtype=float)
    evidence = {}
    for label, x0, a in (("zero", 0.0, p), ("one", 1.0, q)):
        mags = np.array([abs(cauchy_G(d, complex(x0, e))) for e in eps])
        L = np.log(1 / eps)
        if a < 1:
            slope = np.polyfit(L, np.log(mags), 1)[0]
            ok = abs(slope - (1 - a)) < 0.05 * max(1 - a, 0.2) and np.all(np.diff(mags) > 0)
            evidence[label] = {"kind": "power", "fitted_rate": float(slope),
                               "expected_rate": 1 - a, "F_last": float(1 / mags[-1])}
        else:
            slope = np.polyfit(L, mags, 1)[0]
            # |G(x0 + i eps)| ~ c log(1/eps), c the density limit at the edge
            c = float(d.density(1e-12 if label == "zero" else 1 - 1e-12))
            ok = abs(slope - c) < 0.05 * c and np.all(np.diff(mags) > 0)
            evidence[label] = {"kind": "log", "fitted_rate": float(slope),
                               "expected_rate": c, "F_last": float(1 / mags[-1])}
        if not ok:
            raise LadderInconclusive(f"growth of G at x={x0} not established: {evidence[label]}")
    return FidVerdict(Status.CertifiedNotFID, Reason.SubordinationEndpoint, evidence,
                      "F vanishes at both edges of a beta law with p, q <= 1")


# --------------------------------------------------------------------------
# level-curve tracing

class Anchor(str, Enum):
    AtZero = "AtZero"
    AtOne = "AtOne"
    AtMinusOne = "AtMinusOne"
    AtInfinity = "AtInfinity"


ANCHOR_POINT = {Anchor.AtZero: 0j, Anchor.AtOne: 1 + 0j, Anchor.AtMinusOne: -1 + 0j,
                Anchor.AtInfinity: None}


@dataclass
class EndState:
    kind: str  # ReachedInfinity | ReachedPoint | Stalled
    radius: float | None = None
    point: complex | None = None
    note: str = ""

    def to_dict(self):
        out = {"kind": self.kind, "note": self.note}
        if self.radius is not None:
            out["radius"] = self.radius
        if self.point is not None:
            out["point"] = [self.point.real, self.point.imag]
        return out


@dataclass
class TraceParams:
    R_max: float = 1e3
    snap: float = 1e-4
    tol: float = 1e-9
    h_frac: float = 0.05
    max_steps: int = 20000
    seed_radii: tuple = (0.1, 0.05, 0.02, 0.01, 0.005)
    seed_R0: tuple = (20.0, 40.0, 80.0)
    branch: int | None = None  # for AtMinusOne: sign of G on the wanted curve
    approach: float = 1e-8


@dataclass
class CurveTrace:
    points: list
    g_values: list
    start_anchor: Anchor
    end_state: EndState
    dist: str = ""
    seed: dict = field(default_factory=dict)

    @property
    def monotone(self) -> int:
        """+1 or -1 if the real values are strictly monotone, else 0."""
        d = np.diff(self.g_values)
        if np.all(d > 0):
            return 1
        if np.all(d < 0):
            return -1
        return 0

    def max_imag_residual(self, d) -> float:
        """max |Im G| / max(1, |G|) over the trace points."""
        return max(abs(v.imag) / max(1.0, abs(v)) for v in (G_cont(d, z) for z in self.points))


def _singular_points(d):
    if isinstance(d, Beta):
        return [0j, 1 + 0j]
    if isinstance(d, BetaPrime):
        return [0j, -1 + 0j]
    raise PreconditionError("curve tracing is implemented for beta and beta prime laws")


def anchor_limit(d, anchor: Anchor):
    """Finite limit of G at the anchor, or None when G blows up or vanishes there."""
    if isinstance(d, Beta):
        p, q = float(d.p), float(d.q)
        if anchor is Anchor.AtZero and p > 1:
            return -(p + q - 1) / (p - 1)
        if anchor is Anchor.AtOne and q > 1:
            return (p + q - 1) / (q - 1)
    if isinstance(d, BetaPrime):
        p, q = float(d.p), float(d.q)
        if anchor is Anchor.AtZero and p > 1:
            return -q / (p - 1)
        if anchor is Anchor.AtInfinity:
            return 0.0
    return None


def _theta_grid():
    mid = np.linspace(0.0, 1.0, 401)[1:-1]
    ends = 10.0 ** -np.linspace(2.4, 7, 120)
    s = np.unique(np.concatenate([mid, ends, 1 - ends]))
    return -math.pi * s[::-1]


def _newton_level(d, z, g_target, max_iter=30, tol=1e-12):
    for _ in range(max_iter):
        G = G_cont(d, z)
        dG = ode_rhs(d, z, G)
        r = G - g_target
        # rounding of z itself limits the attainable residual near poles
        floor = 4e-16 * abs(z) * abs(dG)
        if abs(r) <= tol * max(1.0, abs(g_target)) + floor:
            return z, G
        if dG == 0 or not np.isfinite(dG):
            raise NumericFailure("zero derivative in corrector")
        step = r / dG
        z_new = z - step
        k = 0
        while not in_continuation_domain(d, z_new) and k < 30:
            step *= 0.5
            z_new = z - step
            k += 1
        z = z_new
    raise NumericFailure("corrector did not converge")


def _arc_crossings(d, center, r, thetas):
    vals = []
    pts = []
    for t in thetas:
        z = center + r * cmath.exp(1j * t)
        if not in_continuation_domain(d, z):
            vals.append(np.nan)
        else:
            vals.append(G_cont(d, z).imag)
        pts.append(t)
    out = []
    for i in range(len(pts) - 1):
        a, b = vals[i], vals[i + 1]
        if np.isfinite(a) and np.isfinite(b) and a * b < 0:
            f = lambda t: G_cont(d, center + r * cmath.exp(1j * t)).imag  # noqa: E731
            t0 = optimize.brentq(f, pts[i], pts[i + 1], xtol=1e-15, rtol=1e-15)
            z0 = center + r * cmath.exp(1j * t0)
            out.append((t0, z0, G_cont(d, z0).real))
    return out


def _seed(d, anchor, params: TraceParams):
    a = ANCHOR_POINT[anchor]
    limit = anchor_limit(d, anchor)
    side = {Anchor.AtZero: -1, Anchor.AtOne: 1}.get(anchor)
    thetas = _theta_grid()
    radii = params.seed_R0 if a is None else params.seed_radii
    found = None
    tried = []
    for r in radii:
        cands = _arc_crossings(d, 0j if a is None else a, r, thetas)
        if limit is not None and side is not None:
            cands = [c for c in cands if (c[2] - limit) * side > 0]
        if a is None:
            # G ~ 1/z: the curve leaves infinity near the positive axis with G > 0
            cands = [c for c in cands if c[2] > 0]
        if params.branch is not None:
            cands = [c for c in cands if c[2] * params.branch > 0]
        tried.append((r, len(cands)))
        if not cands:
            continue
        if limit is not None:
            best = min(cands, key=lambda c: abs(c[2] - limit))
        else:
            best = max(cands, key=lambda c: abs(c[2]))
        found = (r, best)
        if a is None:
            break
    if found is None:
        raise SeedFailure(f"no level crossing near {anchor.value} for {d.spec()} (radii/candidates {tried})")
    r, (theta, z0, g0) = found
    z0, G = _newton_level(d, z0, g0)
    return z0, g0, {"radius": r, "theta": theta, "g": g0, "limit": limit}


def _march(d, z, g, direction, params, sing, stop):
    """Predictor-corrector steps in g; ``stop(z)`` returns an EndState or None."""
    pts, gs = [], []

    def scale(w):
        return min([abs(w - s) for s in sing] + [abs(w)])

    frac = params.h_frac
    prev_dz = None
    for _ in range(params.max_steps):
        hz = frac * scale(z)
        dG = cauchy_G_prime(d, z)
        dg = direction * hz * abs(dG)
        z_pred = z + dg / dG
        ok = in_continuation_domain(d, z_pred)
        if ok:
            try:
                z_new, G_new = _newton_level(d, z_pred, g + dg)
            except FreeFidError:
                ok = False
        if ok:
            dz = z_new - z
            ok = (abs(z_new - z_pred) < 0.3 * hz
                  and abs(G_new.imag) < params.tol * max(1.0, abs(G_new)))
            if ok and prev_dz is not None:
                ok = abs(cmath.phase(dz / prev_dz)) < 0.35
        if not ok:
            frac *= 0.5
            if frac < 1e-7:
                return pts, gs, EndState("Stalled", point=z, note="step control exhausted")
            continue
        prev_dz = dz
        z, g = z_new, g + dg
        pts.append(z)
        gs.append(g)
        frac = min(params.h_frac, frac * 1.5)
        end = stop(z)
        if end is not None:
            return pts, gs, end
    return pts, gs, EndState("Stalled", point=z, note="step budget exhausted")


def trace_real_level_curve(d: Distribution, anchor, params: TraceParams | None = None,
                           raise_on_stall: bool = False) -> CurveTrace:
    """Follow a curve on which the continued G is real, starting at ``anchor``.

    The curve is parametrised by the real value g.  Each step predicts
    ``z + dg / G'(z)`` and corrects with Newton on ``G(z) = g + dg``; the
    z-step is kept to a fraction of the distance to the nearest singular
    point, so traces approach 0, 1 or -1 geometrically and leave for infinity
    geometrically.  From the seed the curve is first followed back into the
    anchor (down to ``params.approach``), then outwards until it reaches
    infinity, another anchor, or stalls.
    """
    params = params or TraceParams()
    anchor = Anchor(anchor)
    sing = _singular_points(d)
    a = ANCHOR_POINT[anchor]
    z0, g0, seed = _seed(d, anchor, params)

    dG = cauchy_G_prime(d, z0)
    away = -z0 if a is None else (z0 - a)
    direction = 1.0 if (away.conjugate() * (1 / dG)).real > 0 else -1.0

    head_pts, head_gs = [], []
    if a is not None and params.approach:
        def stop_in(w):
            if abs(w - a) < params.approach:
                return EndState("ReachedPoint", point=a)
            return None
        head_pts, head_gs, head_end = _march(d, z0, g0, -direction, params, sing, stop_in)
        seed["approach_end"] = head_end.kind
        seed["approach_distance"] = abs(head_pts[-1] - a) if head_pts else None

    left = {"flag": False}

    def stop_out(w):
        if abs(w) > params.R_max:
            return EndState("ReachedInfinity", radius=abs(w))
        if a is not None and abs(w - a) > 10 * seed["radius"]:
            left["flag"] = True
        hit = [s for s in sing if abs(w - s) < params.snap and (s != a or left["flag"])]
        if hit:
            return EndState("ReachedPoint", point=hit[0])
        return None

    pts, gs, end = _march(d, z0, g0, direction, params, sing, stop_out)
    if end.kind == "Stalled" and raise_on_stall:
        raise StallError(f"trace from {anchor.value} stalled at {end.point}")
    points = head_pts[::-1] + [z0] + pts
    values = head_gs[::-1] + [g0] + gs
    return CurveTrace(points, values, anchor, end, d.spec(), seed)


def anchor_value_estimate(tr: CurveTrace) -> float | None:
    """Limit of G at the start anchor, extrapolated from the innermost points."""
    a = ANCHOR_POINT[tr.start_anchor]
    if a is None or len(tr.points) < 6:
        return None
    # nodes with distances growing by at least 1.5, else Neville amplifies noise
    s, g = [], []
    for z, v in zip(tr.points, tr.g_values):
        r = abs(z - a)
        if not s or r >= 1.5 * s[-1]:
            s.append(r)
            g.append(v)
        if len(s) == 5:
            break
    if len(s) < 3:
        return None
    return float(np.real(_neville(s, g, 0.0)))


# --------------------------------------------------------------------------
# domains for conditions (A) and (B)

def _point_in_polygon(poly: np.ndarray, z: complex) -> bool:
    x, y = z.real, z.imag
    xs, ys = poly.real, poly.imag
    xj, yj = np.roll(xs, 1), np.roll(ys, 1)
    cross = ((ys > y) != (yj > y)) & (x < (xj - xs) * (y - ys) / (yj - ys + 1e-300) + xs)
    return bool(np.count_nonzero(cross) % 2)


class Domain:
    """A connected open set containing the upper half-plane (or H^+ ∩ C^+)."""

    name = "domain"
    box = (-4.0, 4.0, -4.0, 4.0)

    def contains(self, z: complex) -> bool:
        raise NotImplementedError

    def boundary_samples(self) -> list:
        """``(label, boundary point, unit direction pointing into the domain)``."""
        return []

    def infinity_samples(self) -> list:
        """Points far out inside the domain, grouped by direction."""
        return []

    def local_scale(self, zb: complex) -> float:
        """Length scale for the approach ladder at a boundary point."""
        return max(1.0, abs(zb))


class FamilyDomain(Domain):
    """The natural continuation domain of the family (plane minus its cuts)."""

    def __init__(self, d: Distribution, n: int = 12):
        self.d = d
        self.n = n
        if isinstance(d, Beta):
            self.name = "C minus (-inf,0] and [1,inf)"
            self.box = (-3.0, 4.0, -3.5, 3.5)
            self.cuts = [(-1, 0.0), (1, 1.0)]
        elif isinstance(d, (BetaPrime, Gamma, InverseGamma)):
            self.name = "C minus (-inf,0]"
            self.box = (-4.0, 4.0, -4.0, 4.0)
            self.cuts = [(-1, 0.0)]
        elif isinstance(d, Gaussian):
            self.name = "C"
            self.box = (-4.0, 4.0, -4.0, 4.0)
            self.cuts = []
        else:
            raise PreconditionError(f"no family domain for {d.spec()}")

    def contains(self, z):
        return in_continuation_domain(self.d, z)

    def boundary_samples(self):
        out = []
        for direction, start in self.cuts:
            for x in start + direction * np.geomspace(0.05, 6.0, self.n):
                for sgn, lab in ((1, "above"), (-1, "below")):
                    out.append((f"cut {lab} x={x:.4g}", complex(x, 0.0), complex(0, sgn)))
            out.append((f"endpoint {start}", complex(start), complex(0.3, -1) / abs(complex(0.3, -1))))
        return out

    def infinity_samples(self):
        out = []
        for th in np.linspace(-0.9, 0.9, 7) * math.pi:
            if abs(th) < 1e-12:
                continue
            out.append((f"infinity arg={th / math.pi:.2f}pi", [R * cmath.exp(1j * th) for R in (1e2, 3e2, 1e3)]))
        return out


class RightHalfPlane(Domain):
    """H^+ = {Re z > 0}, for condition (B) of a t law."""

    name = "H+"
    box = (0.05, 4.0, -4.0, 4.0)

    def __init__(self, n: int = 20):
        self.n = n

    def contains(self, z):
        return z.real > 0

    def boundary_samples(self):
        ys = np.concatenate([-1 - np.geomspace(0.05, 6, self.n // 2), np.linspace(-0.95, 3, self.n // 2)])
        return [(f"+0+i({y:.4g})", complex(0, y), 1 + 0j) for y in ys]

    def infinity_samples(self):
        return [(f"infinity arg={th / math.pi:.2f}pi", [R * cmath.exp(1j * th) for R in (1e2, 3e2, 1e3)])
                for th in np.linspace(-0.45, 0.45, 7) * math.pi]


class StudentDomain(Domain):
    """(C^- ∪ H^+) minus i[-1, 0]."""

    name = "Dst"
    box = (-4.0, 4.0, -4.0, 4.0)

    def __init__(self, n: int = 20):
        self.n = n

    def contains(self, z):
        if z.real == 0 and -1 <= z.imag <= 0:
            return False
        return z.imag < 0 or z.real > 0

    def boundary_samples(self):
        out = [(f"x-i0 x={x:.4g}", complex(x, 0), -1j) for x in -np.geomspace(0.05, 6, self.n // 2)]
        for y in np.linspace(-0.95, -0.05, self.n // 4):
            out.append((f"+0+i({y:.3g})", complex(0, y), 1 + 0j))
            out.append((f"-0+i({y:.3g})", complex(0, y), -1 + 0j))
        out.append(("-i", -1j, complex(1, -1) / math.sqrt(2)))
        return out

    def infinity_samples(self):
        return [(f"infinity arg={th / math.pi:.2f}pi", [R * cmath.exp(1j * th) for R in (1e2, 3e2, 1e3)])
                for th in np.linspace(-0.95, 0.45, 9) * math.pi]


class TracedDomain(Domain):
    """Upper half-plane plus the lower region cut out by traced real curves.

    For beta laws the curves are c1 (0 to infinity) and c2 (1 to infinity);
    for beta prime, c1 (0 to -1) and c2 (infinity to -1).  The lower part
    is the polygon those curves close up with the real axis.
    """

    name = "D(C)"

    def __init__(self, d, c1: CurveTrace, c2: CurveTrace, n: int = 24):
        self.d = d
        self.c1, self.c2 = c1, c2
        self.n = n
        p1, p2 = list(c1.points), list(c2.points)
        if isinstance(d, Beta):
            poly = [0j] + p1 + p2[::-1] + [1 + 0j]
            self.real_segment = (0.0, 1.0)
        elif isinstance(d, BetaPrime):
            far = p2[0] if c2.start_anchor is Anchor.AtInfinity else p2[-1]
            seq2 = p2[::-1] if c2.start_anchor is Anchor.AtInfinity else p2
            # c1 from 0 to -1, then c2 from -1 out to infinity, back along (0, inf)
            poly = [0j] + p1 + [-1 + 0j] + seq2 + [complex(abs(far), 0.0)]
            self.real_segment = (0.0, math.inf)
        else:
            raise PreconditionError("traced domains exist for beta and beta prime")
        self.poly = np.array(poly, dtype=complex)
        R = min(8.0, max(2.0, 1.5 * max(abs(z) for z in p1 if abs(z) < 8) if p1 else 2.0))
        self.box = (-R, R + 1, -R, R)

    def contains(self, z):
        z = complex(z)
        if z.imag > 0:
            return True
        lo, hi = self.real_segment
        if z.imag == 0:
            return lo < z.real < hi
        return in_continuation_domain(self.d, z) and _point_in_polygon(self.poly, z)

    def local_scale(self, zb):
        # curve points can sit 1e-8 from an anchor; the ladder must stay closer
        anchors = (0j, 1 + 0j) if isinstance(self.d, Beta) else (0j, -1 + 0j)
        near = min(abs(zb - a) for a in anchors)
        return max(1.0, abs(zb)) if near == 0 else min(max(1.0, abs(zb)), near)

    def _curve_samples(self, tr, label):
        pts = tr.points
        idx = np.unique(np.geomspace(2, len(pts) - 3, self.n).astype(int)) if len(pts) > 6 else []
        out = []
        for k in idx:
            z = pts[k]
            t = pts[k + 1] - pts[k - 1]
            nrm = 1j * t / abs(t)
            probe = 1e-3 * min(abs(z), 1.0, abs(z - (1 if isinstance(self.d, Beta) else -1)))
            if not self.contains(z + probe * nrm):
                nrm = -nrm
            out.append((f"{label} z={z.real:.4g}{z.imag:+.4g}i", z, nrm))
        return out

    def boundary_samples(self):
        out = self._curve_samples(self.c1, "c1") + self._curve_samples(self.c2, "c2")
        for x in -np.geomspace(0.05, 6.0, 8):
            out.append((f"x+i0 x={x:.4g}", complex(x, 0), 1j))
        if isinstance(self.d, Beta):
            for x in 1 + np.geomspace(0.05, 6.0, 8):
                out.append((f"x+i0 x={x:.4g}", complex(x, 0), 1j))
            out.append(("endpoint 1", 1 + 0j, 1j))
        out.append(("endpoint 0", 0j, 1j))
        return out

    def infinity_samples(self):
        out = [(f"infinity arg={th / math.pi:.2f}pi", [R * cmath.exp(1j * th) for R in (1e2, 3e2, 9e2)])
               for th in np.linspace(0.1, 0.9, 5) * math.pi]
        for th in np.linspace(-0.98, -0.02, 25) * math.pi:
            zs = [R * cmath.exp(1j * th) for R in (1e2, 3e2, 9e2) if self.contains(R * cmath.exp(1j * th))]
            if len(zs) == 3:
                out.append((f"infinity arg={th / math.pi:.2f}pi", zs))
        return out


def traced_domain(d, params: TraceParams | None = None) -> TracedDomain:
    if isinstance(d, Beta):
        c1 = trace_real_level_curve(d, Anchor.AtZero, params)
        c2 = trace_real_level_curve(d, Anchor.AtOne, params)
    elif isinstance(d, BetaPrime):
        c1 = trace_real_level_curve(d, Anchor.AtZero, params)
        c2 = trace_real_level_curve(d, Anchor.AtInfinity, params)
    else:
        raise PreconditionError("traced domains exist for beta and beta prime")
    return TracedDomain(d, c1, c2)


# --------------------------------------------------------------------------
# condition checks

@dataclass
class SubResult:
    name: str
    passed: bool
    detail: str = ""
    witness: list | None = None
    samples: int = 0


@dataclass
class ConditionReport:
    condition: str
    domain: str
    sub: dict
    samples: int
    critical_points: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.sub.values())

    @property
    def failed(self) -> list:
        return [k for k, s in self.sub.items() if not s.passed]

    def to_dict(self):
        return {"condition": self.condition, "domain": self.domain, "pass": self.passed,
                "samples": self.samples,
                "sub": {k: {"pass": s.passed, "detail": s.detail, "samples": s.samples,
                            "witness": None if s.witness is None else
                            [[z.real, z.imag, g.real, g.imag] for z, g in s.witness]}
                        for k, s in self.sub.items()}}


def critical_equation(d):
    """``h`` with ``h(z) = 0`` exactly at the zeros of G' (for a given branch)."""
    return _critical_pair(d)[0]


def _critical_pair(d):
    # h(z, g) and dh/dz given g and g' (None: differentiate numerically)
    if isinstance(d, Beta):
        p, q = float(d.p), float(d.q)
        c, a, b = p + q - 1, p + q - 2, p - 1
    elif isinstance(d, BetaPrime):
        p, q = float(d.p), float(d.q)
        c, a, b = q, q + 1, p - 1
    elif isinstance(d, StudentT):
        q = float(d.q)
        c, a, b = q - 0.5, q, 0.0
    else:
        return (lambda z, g: ode_rhs(d, z, g)), None
    return ((lambda z, g: g - c / (a * z - b)),
            (lambda z, g, dg: dg + c * a / (a * z - b) ** 2))


def _critical_sweep(d, domain: Domain, n: int = 40, tol: float = 1e-11, seed=None):
    h, dh_exact = _critical_pair(d)
    x0, x1, y0, y1 = domain.box
    xs = np.linspace(x0, x1, n)
    ys = np.linspace(y0, y1, n)
    rng = np.random.default_rng(seed) if seed is not None else None
    roots = []
    for x in xs:
        for y in ys:
            z = complex(x, y)
            if rng is not None:
                z += complex(*rng.uniform(-0.01, 0.01, 2))
            if not domain.contains(z):
                continue
            try:
                for _ in range(30):
                    g = G_cont(d, z)
                    r = h(z, g)
                    if abs(r) < tol:
                        break
                    if dh_exact is not None:
                        dh = dh_exact(z, g, ode_rhs(d, z, g))
                    else:
                        e = 1e-6 * max(1.0, abs(z))
                        dh = (h(z + e, G_cont(d, z + e)) - h(z - e, G_cont(d, z - e))) / (2 * e)
                    step = r / dh
                    if abs(step) > 1.0:
                        step = step / abs(step)
                    z = z - step
                    if not domain.contains(z):
                        raise OutsideDomain("left domain")
                else:
                    continue
            except (FreeFidError, ZeroDivisionError, ValueError, OverflowError):
                continue
            if not any(abs(z - w) < 1e-8 for w, _ in roots):
                roots.append((z, G_cont(d, z)))
    return roots


def _ladder_limit(d, zb, direction, scale=None):
    eps = [10.0 ** -k for k in range(2, 8)]
    scale = max(1.0, abs(zb)) if scale is None else scale
    zs = [zb + e * scale * direction for e in eps]
    vals = [G_cont(d, z) for z in zs]
    if abs(vals[-1]) > 1e6 and abs(vals[-1]) > abs(vals[0]):
        return math.inf, list(zip(zs, vals))
    est = _neville(eps[-4:], vals[-4:], 0.0)
    est2 = _neville(eps[-5:-1], vals[-5:-1], 0.0)
    if abs(est - est2) <= 1e-5 * max(1.0, abs(est)):
        return est, list(zip(zs, vals))
    # fractional power eps**g (edge of the support): geometric in the rung index
    a = _aitken(vals[-3:])
    b = _aitken(vals[-4:-1])
    if a is not None and b is not None:
        if a == math.inf and b == math.inf:
            return math.inf, list(zip(zs, vals))
        if a != math.inf and b != math.inf and abs(a - b) <= 1e-3 * max(1.0, abs(a)):
            return a, list(zip(zs, vals))
    # no limit yet: report the last rung, caller decides
    return vals[-1], list(zip(zs, vals))


def _aitken(v):
    d1, d2 = v[1] - v[0], v[2] - v[1]
    if d1 == 0:
        return v[2]
    r = d2 / d1
    if abs(r) > 1.5 and abs(v[2]) > abs(v[1]) > abs(v[0]):
        return math.inf
    if abs(r) > 0.9:
        return None
    return v[2] + d2 * r / (1 - r)


def _target_A(v, tol):
    return v == math.inf or v.imag >= -tol * max(1.0, abs(v))


def _target_B(v, tol):
    return v == math.inf or v.real <= tol * max(1.0, abs(v)) or v.imag >= -tol * max(1.0, abs(v))


def _default_domain(d, which):
    if which == "B":
        if not isinstance(d, StudentT):
            raise PreconditionError("condition (B) is implemented for t laws")
        return StudentDomain() if student_t_fid_set(d.q) and not float(d.q) <= 2 else RightHalfPlane()
    if isinstance(d, (Beta, BetaPrime)):
        return traced_domain(d)
    return FamilyDomain(d)


def verify_condition(d: Distribution, which: str = "A", domain=None, grid: int = 40,
                     traces=None, tol: float = 1e-8, seed=None) -> ConditionReport:
    """Numerical check of condition (A) or (B) on a domain.

    ``domain`` is a ``Domain`` or one of ``"family"``, ``"traced"``, ``"Hplus"``,
    ``"Dst"``; by default beta and beta prime laws use the traced domain
    (the plain cut plane violates the barrier condition for most
    parameters), t laws use H^+ or Dst, everything else the family domain.
    """
    which = which.upper()
    if which == "C":
        return _verify_C(d, grid)
    if isinstance(domain, str):
        domain = {"family": lambda: FamilyDomain(d),
                  "traced": lambda: TracedDomain(d, *traces) if traces else traced_domain(d),
                  "Hplus": RightHalfPlane, "Dst": StudentDomain}[domain]()
    elif domain is None:
        domain = TracedDomain(d, *traces) if traces else _default_domain(d, which)
    target = _target_A if which == "A" else _target_B
    sub = {}
    count = 0

    # (1) evaluation on a grid and next to the boundary
    bad = []
    pts = 0
    x0, x1, y0, y1 = domain.box
    for x in np.linspace(x0, x1, 25):
        for y in np.linspace(y0, y1, 25):
            z = complex(x, y)
            if not domain.contains(z):
                continue
            pts += 1
            try:
                v = G_cont(d, z)
                if not np.isfinite(v):
                    bad.append((z, v))
            except FreeFidError as e:
                bad.append((z, complex(np.nan)))
    for _, zb, nrm in domain.boundary_samples():
        z = zb + 1e-3 * domain.local_scale(zb) * nrm
        if domain.contains(z):
            pts += 1
            try:
                G_cont(d, z)
            except FreeFidError:
                bad.append((z, complex(np.nan)))
    sub[f"{which}1"] = SubResult(f"{which}1", not bad, f"{pts} evaluations", bad or None, pts)
    count += pts

    # (2) zeros of G' with G in the lower half-plane
    roots = _critical_sweep(d, domain, grid, seed=seed)
    lower = [(z, g) for z, g in roots if g.imag < -tol * max(1.0, abs(g))]
    sub[f"{which}2"] = SubResult(f"{which}2", not lower,
                                 f"{len(roots)} critical points found, {len(lower)} with G in C^-",
                                 lower or None, grid * grid)
    count += grid * grid

    # (3) boundary and infinity limits
    witness = None
    n3 = 0
    for label, zb, nrm in domain.boundary_samples():
        n3 += 1
        try:
            lim, seq = _ladder_limit(d, zb, nrm, domain.local_scale(zb))
        except FreeFidError:
            continue
        if not target(lim, 1e-6):
            witness = seq
            fail_label = f"{label}: limit {lim:.6g}"
            break
    if witness is None:
        for label, zs in domain.infinity_samples():
            n3 += 1
            vals = [G_cont(d, z) for z in zs]
            v = vals[-1]
            ok = abs(v) < 1e-2 or abs(v) > 1e6 or target(v, 1e-6)
            if not ok:
                witness = list(zip(zs, vals))
                fail_label = f"{label}: value {v:.6g}"
                break
    sub[f"{which}3"] = SubResult(f"{which}3", witness is None,
                                 "all boundary limits in the allowed set" if witness is None else fail_label,
                                 witness, n3)
    count += n3

    if which == "B":
        sub["B0"] = _check_imag_axis(d)
    return ConditionReport(which, domain.name, sub, count, roots)


def _check_imag_axis(d, c=-1.0):
    """G maps i(c, inf) into i(-inf, 0), strictly monotonically."""
    ys = np.concatenate([c + np.geomspace(1e-4, -c - 1e-4, 30), np.geomspace(1e-3, 200, 40)])
    ys = np.unique(ys)
    vals = [G_cont(d, complex(0, y)) for y in ys]
    imag = np.array([v.imag for v in vals])
    reals = max(abs(v.real) / abs(v) for v in vals)
    ok = reals < 1e-8 and np.all(imag < 0) and np.all(np.diff(imag) > 0)
    return SubResult("B0", bool(ok), f"max |Re G|/|G| = {reals:.2e}, Im G from {imag[0]:.4g} to {imag[-1]:.4g}",
                     None, len(ys))


def _verify_C(d, grid):
    """(C): analytic in the family domain and G' != 0 where G is real or in C^-."""
    dom = FamilyDomain(d)
    roots = _critical_sweep(d, dom, grid)
    lower = [(z, g) for z, g in roots if g.imag <= 1e-9 * max(1.0, abs(g))]
    sub = {"C1": SubResult("C1", True, "analytic family continuation", None, 0),
           "C2": SubResult("C2", not lower, f"{len(roots)} critical points, {len(lower)} with G in C^- or R",
                           lower or None, grid * grid)}
    return ConditionReport("C", dom.name, sub, grid * grid, roots)


# --------------------------------------------------------------------------
# t-law boundary values

class TRegion(str, Enum):
    PosImagAxisBelowMinus1 = "PosImagAxisBelowMinus1"
    NegRealLine = "NegRealLine"
    LeftImagSegment = "LeftImagSegment"


def _t_quad_G_tilde(q, z):
    return cauchy_G_quad(StudentT(q), z)


def _t_pv_real(q, x):
    """PV integral of rho(t)/(x - t) over the real line."""
    d = StudentT(q)
    f = lambda t: float(d.density(t))  # noqa: E731
    L = 50.0 + abs(x)
    pv = integrate.quad(f, x - L, x + L, weight="cauchy", wvar=x, limit=400, epsabs=1e-14, epsrel=1e-12)[0]
    tail = 0.0
    for a, b in ((-np.inf, x - L), (x + L, np.inf)):
        tail += integrate.quad(lambda t: f(t) / (x - t), a, b, limit=200, epsabs=1e-15)[0]
    return -pv + tail


def t_boundary_signs(q, region, coord) -> tuple:
    """Closed-form boundary values of the continued t transform.

    * ``PosImagAxisBelowMinus1``: ``G(+0+iy)``, ``y < -1``;
    * ``NegRealLine``: ``G(x-i0)``, ``x < 0``;
    * ``LeftImagSegment``: ``G(-0+iy)``, ``-1 < y < 0``.

    The G tilde pieces are integrals, evaluated by quadrature.
    """
    region = TRegion(region)
    q = float(q)
    B = StudentT(q).norm
    if region is TRegion.PosImagAxisBelowMinus1:
        y = float(coord)
        if not y < -1:
            raise ValueError("needs y < -1")
        c = (y * y - 1) ** -q
        re = 2 * math.pi * math.sin(math.pi * q) * c / B
        im = _t_quad_G_tilde(q, complex(0, y)).imag - 2 * math.pi * math.cos(math.pi * q) * c / B
    elif region is TRegion.NegRealLine:
        x = float(coord)
        if not x < 0:
            raise ValueError("needs x < 0")
        c = (1 + x * x) ** -q
        re = _t_pv_real(q, x) + 2 * math.pi * math.sin(2 * math.pi * q) * c / B
        im = math.pi * (3 - 4 * math.cos(math.pi * q) ** 2) * c / B
    else:
        y = float(coord)
        if not -1 < y < 0:
            raise ValueError("needs -1 < y < 0")
        c = (1 - y * y) ** -q
        re = 2 * math.pi * math.sin(2 * math.pi * q) * c / B
        im = _t_quad_G_tilde(q, complex(0, y)).imag - 2 * math.pi * math.cos(2 * math.pi * q) * c / B
    return re, im


def t_boundary_limit(q, region, coord, eps=None) -> complex:
    """One-sided limit of the continued transform, by extrapolation in eps."""
    region = TRegion(region)
    d = StudentT(q)
    if eps is None:
        eps = [1e-3 * 2.0 ** -k for k in range(6)]
    if region is TRegion.PosImagAxisBelowMinus1:
        zs = [complex(e, coord) for e in eps]
    elif region is TRegion.NegRealLine:
        zs = [complex(coord, -e) for e in eps]
    else:
        zs = [complex(-e, coord) for e in eps]
    vals = [G_cont(d, z) for z in zs]
    return complex(_neville(eps, vals, 0.0))


def t_sign_condition(re: float, im: float, tol: float = 0.0) -> bool:
    return re <= tol or im >= -tol


# --------------------------------------------------------------------------
# Boolean-power indicator probe

def _default_yrange(d):
    if isinstance(d, StudentT):
        return (-0.99, 30.0)
    return (-8.0, 8.0)


def _f_and_fprime(d, y):
    z = complex(0.0, y)
    G = G_cont(d, z)
    dG = ode_rhs(d, z, G)
    f = (1 / G) / 1j
    fp = -dG / (G * G)
    return f.real, fp.real


@dataclass
class IndicatorResult:
    t: float
    critical: tuple | None
    monotone_f: bool
    samples: int

    def to_dict(self):
        out = {"t": self.t, "monotone": self.monotone_f, "samples": self.samples}
        if self.critical is not None:
            out["y0"], out["y1"] = self.critical
        return out


def indicator_probe(d: Distribution, t: float, y_range=None, n: int = 200,
                    raise_if_none: bool = False) -> IndicatorResult:
    """Look for a critical point of ``f_t(y) = (1-t) y + t F(iy)/i``.

    Returns the pair ``(y0, y1 = f_t(y0))`` when ``f_t'`` changes sign;
    ``y1 > 0`` is the numerical witness that the Boolean power of order t
    is not FID.  The grid is dense near the lower end of the range (where
    F may vanish) and geometric towards the upper end.
    """
    if not d.symmetric:
        raise PreconditionError("indicator probe needs a symmetric law")
    lo, hi = y_range or _default_yrange(d)
    t = float(t)
    span = hi - lo
    u = np.geomspace(1e-3, 1.0, n)
    ys = np.unique(np.concatenate([lo + span * (u - 1e-3) / (1 - 1e-3), np.linspace(lo, hi, n)]))
    fs, fps = zip(*(_f_and_fprime(d, y) for y in ys))
    fps = np.array(fps)
    monotone = bool(np.all(fps > 0))
    ftp = (1 - t) + t * fps
    crit = None
    for i in range(len(ys) - 1):
        if ftp[i] * ftp[i + 1] < 0:
            g = lambda y: (1 - t) + t * _f_and_fprime(d, y)[1]  # noqa: E731
            y0 = optimize.brentq(g, ys[i], ys[i + 1], xtol=1e-13)
            f0 = _f_and_fprime(d, y0)[0]
            crit = (float(y0), float((1 - t) * y0 + t * f0))
            break
    if crit is None and raise_if_none:
        raise RangeExhausted(f"no sign change of f_t' on {lo, hi}")
    return IndicatorResult(t, crit, monotone, len(ys))


def indicator_verdict(d, ts=(1.1, 1.5, 2.0), y_range=None) -> FidVerdict:
    """Not-FID witnesses for Boolean powers above 1 (phi(mu) <= 1)."""
    found = {}
    for t in ts:
        r = indicator_probe(d, t, y_range)
        if r.critical is not None and r.critical[1] > 0:
            found[t] = r.critical
    if found:
        return FidVerdict(Status.CertifiedNotFID, Reason.IndicatorCritical,
                          {"boolean_powers": found},
                          "critical point of f_t with positive value: the Boolean power is not FID")
    return FidVerdict(Status.Inconclusive, None, {"t": list(ts)}, "")


def gaussian_f(y: float) -> float:
    return _f_and_fprime(Gaussian(), y)[0]


def gaussian_ode_check(y_grid=None, h: float = 1e-3) -> float:
    """max |f' - (f^2 - y f)| with f' from 5-point central differences."""
    if y_grid is None:
        y_grid = np.linspace(-5, 5, 41)
    worst = 0.0
    for y in y_grid:
        fm2, fm1, fp1, fp2 = (gaussian_f(y + k * h) for k in (-2, -1, 1, 2))
        fd = (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h)
        f = gaussian_f(y)
        worst = max(worst, abs(fd - (f * f - y * f)))
    return worst
