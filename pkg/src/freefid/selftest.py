"""Quick invariant suites, runnable from the command line."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .cumulants import (exact_moments, free_cumulants, hankel_det_sign,
                        hankel_matrix, nc_partition_cumulants)
from .distributions import (Beta, BetaPrime, Gamma, Gaussian, MarchenkoPastur,
                            Semicircle, StudentT, beta_prime_tilde, beta_tilde)
from .transforms import (cauchy_G, cauchy_G_quad, closed_form_G, closed_form_law,
                         eta_transform, ode_residual, recursion_residual, upper_grid)

SUITES = ("transforms", "cumulants", "semigroup", "ode")


@dataclass
class Check:
    name: str
    value: float
    limit: float

    @property
    def passed(self) -> bool:
        return bool(self.value < self.limit)

    def to_dict(self):
        return {"name": self.name, "value": float(self.value), "limit": self.limit, "pass": self.passed}


def _rel(a, b):
    return abs(a - b) / max(1e-300, abs(b))


def suite_transforms():
    grid = upper_grid(12, seed=7)
    out = []
    for ex in range(1, 7):
        d = closed_form_law(ex, 0.3)
        worst = max(_rel(closed_form_G(ex, 0.3, z), cauchy_G_quad(d, z)) for z in grid)
        out.append(Check(f"closed form {ex} vs quadrature", worst, 1e-10))
    worst = 0.0
    for z in grid:
        ref = -1j * math.sqrt(math.pi / 2) * special.wofz(z / math.sqrt(2))
        worst = max(worst, _rel(cauchy_G(Gaussian(), z), ref))
    out.append(Check("gauss vs Faddeeva", worst, 1e-10))
    out.append(Check("semicircle G(2i)", abs(cauchy_G(Semicircle(), 2j) - 1j * (1 - math.sqrt(2))), 1e-14))
    worst = max(_rel(cauchy_G(d, z), cauchy_G_quad(d, z))
                for d in (Beta(2.5, 0.7), BetaPrime(1.5, 3.2), StudentT(2.5)) for z in grid)
    out.append(Check("hypergeometric route vs quadrature", worst, 1e-10))
    return out


def suite_cumulants():
    out = []
    m = exact_moments(Beta(3, 5), 8)
    r = free_cumulants(m)
    diff = max(abs(a - b) for a, b in zip(r.values, nc_partition_cumulants(m, 8)))
    out.append(Check("moment formula vs NC(n) enumeration", float(diff), 1e-300))
    mp = free_cumulants(exact_moments(MarchenkoPastur(), 12))
    out.append(Check("free Poisson cumulants equal 1", float(max(abs(x - 1) for x in mp.values)), 1e-300))
    r = free_cumulants(exact_moments(Gamma(1), 32))
    sign = hankel_det_sign(hankel_matrix(r, 16)).sign
    out.append(Check("exponential: 16x16 Hankel determinant negative", float(sign + 1), 0.5))
    return out


def suite_semigroup():
    xs = -np.geomspace(0.01, 10, 40)
    worst = wp = 0.0
    for a in (0.3, 0.5, 0.8):
        for b in (0.3, 0.5, 0.8):
            A, B, AB = beta_tilde(a), beta_tilde(b), beta_tilde(a * b)
            P, Q, PQ = beta_prime_tilde(a), beta_prime_tilde(b), beta_prime_tilde(a * b)
            for x in xs:
                worst = max(worst, abs(eta_transform(A, eta_transform(B, x)) - eta_transform(AB, x)))
                wp = max(wp, abs(eta_transform(P, eta_transform(Q, x)) - eta_transform(PQ, x)))
    return [Check("eta composition, beta", worst, 1e-12),
            Check("eta composition, beta prime", wp, 1e-12)]


def suite_ode():
    grid = upper_grid(20, seed=11)
    out = []
    for d in (Beta(2.5, 0.7), BetaPrime(1.5, 3.2), StudentT(2.5)):
        out.append(Check(f"ode residual {d.spec()}", max(ode_residual(d, z) for z in grid), 1e-8))
    for d in (BetaPrime(1.5, 3.2), StudentT(2.5)):
        out.append(Check(f"recursion residual {d.spec()}",
                         max(recursion_residual(d, z) for z in grid), 1e-8))
    return out


_RUN = {"transforms": suite_transforms, "cumulants": suite_cumulants,
        "semigroup": suite_semigroup, "ode": suite_ode}


def run(suite: str = "all") -> dict:
    names = SUITES if suite == "all" else (suite,)
    if any(n not in _RUN for n in names):
        raise ValueError(f"unknown suite {suite!r}; expected one of {SUITES + ('all',)}")
    return {n: [c.to_dict() for c in _RUN[n]()] for n in names}
