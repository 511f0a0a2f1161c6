"""Parametric laws handled by the toolkit.

Parameters are stored as given (int, Fraction or float) so that exact
moment computations can use them; numerical code converts with ``float``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real

import numpy as np
from scipy import special

INF = math.inf


def _check(cond, msg):
    if not cond:
        raise ValueError(msg)


class Distribution:
    """Common interface; concrete laws are frozen dataclasses below."""

    symmetric = False
    support = (-INF, INF)

    def density(self, x):
        raise NotImplementedError

    @property
    def spread(self) -> float:
        """Rough scale of the law, used for cone heuristics."""
        return 1.0

    def spec(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Beta(Distribution):
    p: Real
    q: Real

    def __post_init__(self):
        _check(self.p > 0 and self.q > 0, "Beta needs p, q > 0")

    support = (0.0, 1.0)

    @property
    def norm(self):
        return special.beta(float(self.p), float(self.q))

    def density(self, x):
        x = np.asarray(x, dtype=float)
        p, q = float(self.p), float(self.q)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = x ** (p - 1) * (1 - x) ** (q - 1) / self.norm
        return np.where((x > 0) & (x < 1), out, 0.0)

    def spec(self):
        return f"beta:{_fmt(self.p)}:{_fmt(self.q)}"


@dataclass(frozen=True)
class BetaPrime(Distribution):
    p: Real
    q: Real

    def __post_init__(self):
        _check(self.p > 0 and self.q > 0, "BetaPrime needs p, q > 0")

    support = (0.0, INF)

    @property
    def norm(self):
        return special.beta(float(self.p), float(self.q))

    def density(self, x):
        x = np.asarray(x, dtype=float)
        p, q = float(self.p), float(self.q)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = x ** (p - 1) * (1 + x) ** (-p - q) / self.norm
        return np.where(x > 0, out, 0.0)

    def spec(self):
        return f"betaprime:{_fmt(self.p)}:{_fmt(self.q)}"


@dataclass(frozen=True)
class Gamma(Distribution):
    p: Real

    def __post_init__(self):
        _check(self.p > 0, "Gamma needs p > 0")

    support = (0.0, INF)

    def density(self, x):
        x = np.asarray(x, dtype=float)
        p = float(self.p)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.exp((p - 1) * np.log(x) - x - special.gammaln(p))
        return np.where(x > 0, out, 0.0)

    @property
    def spread(self):
        return math.sqrt(float(self.p)) + float(self.p)

    def spec(self):
        return f"gamma:{_fmt(self.p)}"


@dataclass(frozen=True)
class InverseGamma(Distribution):
    p: Real

    def __post_init__(self):
        _check(self.p > 0, "InverseGamma needs p > 0")

    support = (0.0, INF)

    def density(self, x):
        x = np.asarray(x, dtype=float)
        p = float(self.p)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            out = np.exp((-p - 1) * np.log(x) - 1.0 / x - special.gammaln(p))
        return np.where(x > 0, out, 0.0)

    def spec(self):
        return f"invgamma:{_fmt(self.p)}"


@dataclass(frozen=True)
class Ultraspherical(Distribution):
    p: Real

    def __post_init__(self):
        _check(self.p > -0.5, "Ultraspherical needs p > -1/2")

    symmetric = True
    support = (-1.0, 1.0)

    @property
    def norm(self):
        s = float(self.p) + 0.5
        return 4.0 ** float(self.p) * special.beta(s, s)

    def density(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(invalid="ignore", divide="ignore"):
            out = (1 - x * x) ** (float(self.p) - 0.5) / self.norm
        return np.where(np.abs(x) < 1, out, 0.0)

    def spec(self):
        return f"ultra:{_fmt(self.p)}"


@dataclass(frozen=True)
class StudentT(Distribution):
    q: Real

    def __post_init__(self):
        _check(self.q > 0.5, "StudentT needs q > 1/2")

    symmetric = True

    @property
    def norm(self):
        return special.beta(0.5, float(self.q) - 0.5)

    def density(self, x):
        x = np.asarray(x, dtype=float)
        return (1 + x * x) ** (-float(self.q)) / self.norm

    def spec(self):
        return f"t:{_fmt(self.q)}"


@dataclass(frozen=True)
class Gaussian(Distribution):
    symmetric = True

    def density(self, x):
        x = np.asarray(x, dtype=float)
        return np.exp(-0.5 * x * x) / math.sqrt(2 * math.pi)

    def spec(self):
        return "gauss"


@dataclass(frozen=True)
class Semicircle(Distribution):
    """Standard semicircle law on [-2, 2] (variance 1)."""

    symmetric = True
    support = (-2.0, 2.0)

    def density(self, x):
        x = np.asarray(x, dtype=float)
        return np.sqrt(np.clip(4 - x * x, 0, None)) / (2 * math.pi)

    def spec(self):
        return "semicircle"


@dataclass(frozen=True)
class MarchenkoPastur(Distribution):
    """Free Poisson law with rate 1 (all free cumulants equal 1)."""

    support = (0.0, 4.0)

    def density(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.sqrt(np.clip(x * (4 - x), 0, None)) / (2 * math.pi * x)
        return np.where((x > 0) & (x < 4), out, 0.0)

    @property
    def spread(self):
        return 2.0

    def spec(self):
        return "mp"


@dataclass(frozen=True)
class Cauchy(Distribution):
    """Standard Cauchy law, density 1/(pi (1+x^2))."""

    symmetric = True

    def density(self, x):
        x = np.asarray(x, dtype=float)
        return 1.0 / (math.pi * (1 + x * x))

    def spec(self):
        return "cauchy"


@dataclass(frozen=True)
class PointMass(Distribution):
    a: Real = 0

    @property
    def support(self):
        return (float(self.a), float(self.a))

    @property
    def symmetric(self):
        return self.a == 0

    @property
    def spread(self):
        return 1.0 + abs(float(self.a))

    def density(self, x):
        raise ValueError("a point mass has no density")

    def spec(self):
        return f"delta:{_fmt(self.a)}"


@dataclass(frozen=True)
class Affine(Distribution):
    """Law of ``scale * X + shift`` for ``X ~ base``; build with ``affine``."""

    base: Distribution
    scale: Real
    shift: Real = 0

    def __post_init__(self):
        _check(self.scale != 0, "use affine() for scale 0")

    @property
    def support(self):
        lo, hi = self.base.support
        s, t = float(self.scale), float(self.shift)
        ends = sorted([s * lo + t if math.isfinite(lo) else math.copysign(INF, s * lo),
                       s * hi + t if math.isfinite(hi) else math.copysign(INF, s * hi)])
        return tuple(ends)

    @property
    def symmetric(self):
        return self.base.symmetric and self.shift == 0

    @property
    def spread(self):
        return abs(float(self.scale)) * self.base.spread + abs(float(self.shift))

    def density(self, x):
        s, t = float(self.scale), float(self.shift)
        return self.base.density((np.asarray(x, dtype=float) - t) / s) / abs(s)

    def spec(self):
        return f"affine:{_fmt(self.scale)}:{_fmt(self.shift)}:{self.base.spec()}"


def affine(base: Distribution, scale: Real = 1, shift: Real = 0) -> Distribution:
    """``scale * X + shift`` with normalisation of trivial cases."""
    if scale == 0:
        return PointMass(shift)
    if isinstance(base, PointMass):
        return PointMass(scale * base.a + shift)
    if isinstance(base, Affine):
        return affine(base.base, scale * base.scale, scale * base.shift + shift)
    if scale == 1 and shift == 0:
        return base
    return Affine(base, scale, shift)


def dilate(d: Distribution, c: Real) -> Distribution:
    """Dilation ``D_c``: the law of ``c X``."""
    return affine(d, c, 0)


def beta_tilde(a: Real) -> Beta:
    """``beta_{a, 1-a}``, 0 < a < 1."""
    return Beta(a, 1 - a)


def beta_prime_tilde(a: Real) -> Distribution:
    """``beta'_{1-a, a}`` shifted by +1 (supported on [1, inf))."""
    return affine(BetaPrime(1 - a, a), 1, 1)


def beta_a(a: Real) -> Beta:
    """``beta_{1-a, 1+a}``, -1 < a < 1."""
    return Beta(1 - a, 1 + a)


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else str(x.numerator)
    if isinstance(x, int):
        return str(x)
    return repr(float(x))
