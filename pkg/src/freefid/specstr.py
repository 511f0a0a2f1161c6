"""Distribution spec strings: ``family[:arg]*``.

Arguments are rationals (``3/2``, ``5``, ``0.25``); they are kept exact so
that moment and cumulant code downstream can use them.  Examples::

    beta:3/2:5   betaprime:5:2   gamma:1   invgamma:2   ultra:1/2
    t:2          gauss           semicircle   mp   cauchy   delta:0
    affine:2:-1:beta:1/2:1/2     (2 X - 1 with X ~ beta(1/2, 1/2))
"""
from __future__ import annotations

from fractions import Fraction

from .distributions import (Beta, BetaPrime, Cauchy, Distribution, Gamma,
                            Gaussian, InverseGamma, MarchenkoPastur, PointMass,
                            Semicircle, StudentT, Ultraspherical, affine)
from .errors import SpecParseError

_FAMILIES = {
    "beta": (Beta, 2),
    "betaprime": (BetaPrime, 2),
    "bp": (BetaPrime, 2),
    "gamma": (Gamma, 1),
    "invgamma": (InverseGamma, 1),
    "ultra": (Ultraspherical, 1),
    "t": (StudentT, 1),
    "gauss": (Gaussian, 0),
    "normal": (Gaussian, 0),
    "semicircle": (Semicircle, 0),
    "mp": (MarchenkoPastur, 0),
    "cauchy": (Cauchy, 0),
    "delta": (PointMass, 1),
}


def parse_rational(tok: str):
    tok = tok.strip()
    if not tok:
        raise SpecParseError("empty number")
    try:
        x = Fraction(tok)
    except (ValueError, ZeroDivisionError) as e:
        raise SpecParseError(f"not a rational number: {tok!r}") from e
    return x.numerator if x.denominator == 1 else x


def parse_spec(text: str) -> Distribution:
    """Build a distribution from its spec string; raises SpecParseError."""
    if not isinstance(text, str) or not text.strip():
        raise SpecParseError("empty distribution spec")
    parts = text.strip().lower().split(":")
    d, rest = _parse(parts)
    if rest:
        raise SpecParseError(f"trailing fields in {text!r}: {':'.join(rest)}")
    return d


def _parse(parts):
    name, args = parts[0], parts[1:]
    if name == "affine":
        if len(args) < 3:
            raise SpecParseError("affine needs scale:shift:<spec>")
        s, t = parse_rational(args[0]), parse_rational(args[1])
        base, rest = _parse(args[2:])
        return affine(base, s, t), rest
    if name not in _FAMILIES:
        raise SpecParseError(f"unknown family {name!r}; known: {', '.join(sorted(_FAMILIES))}")
    cls, k = _FAMILIES[name]
    if len(args) < k:
        raise SpecParseError(f"{name} needs {k} parameter(s), got {len(args)}")
    vals = [parse_rational(a) for a in args[:k]]
    try:
        d = cls(*vals)
    except ValueError as e:
        raise SpecParseError(str(e)) from e
    return d, args[k:]
