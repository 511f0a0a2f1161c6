import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from freefid.distributions import (Beta, BetaPrime, Cauchy, Gamma, Gaussian, InverseGamma,
                                   MarchenkoPastur, PointMass, Semicircle, StudentT,
                                   Ultraspherical, affine, beta_a, beta_prime_tilde,
                                   beta_tilde, dilate)
from freefid.errors import DomainError, NearSupport, OutsideDomain
from freefid.transforms import (G_cont, Side, beta_prime_zero_asymptotic, beta_zero_asymptotic,
                                boolean_power_F, cauchy_G, cauchy_G_continued, cauchy_G_quad,
                                cauchy_G_tilde, closed_form_G, closed_form_law,
                                density_continued, eta_closed_beta_prime_tilde,
                                eta_closed_beta_tilde, eta_transform, monotone_convolve_F,
                                ode_residual, reciprocal_F, recursion_residual,
                                rv_transform_check, semicircle_free_convolve_G,
                                stieltjes_density, upper_grid, voiculescu_phi)

GRID = upper_grid(50)


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


FAMILIES = [Beta(2.5, 0.7), Beta(0.3, 4), BetaPrime(1.5, 3.2), BetaPrime(0.4, 0.8),
            StudentT(2.5), StudentT(0.8), Ultraspherical(0.3), Semicircle(), MarchenkoPastur(),
            Gamma(2.5), InverseGamma(1.5), Gaussian(), Cauchy(), affine(Beta(2, 3), -2, 1)]


# closed forms and the quadrature oracle

@pytest.mark.parametrize("example", range(1, 7))
@pytest.mark.parametrize("a", [0.3, 0.5, 0.8])
def test_closed_forms_against_both_routes(example, a):
    d = closed_form_law(example, a)
    for z in GRID:
        cf = closed_form_G(example, a, z)
        assert rel(cf, cauchy_G_quad(d, z)) < 1e-10
        assert rel(cf, cauchy_G(d, z)) < 1e-10


@pytest.mark.parametrize("d", [Beta(2, 2), Beta(0.6, 3.3), BetaPrime(2.2, 0.9), BetaPrime(1, 2),
                               StudentT(2), StudentT(3.7), Ultraspherical(1.5)])
def test_hypergeometric_route_against_quadrature(d):
    assert max(rel(cauchy_G(d, z), cauchy_G_quad(d, z)) for z in GRID) < 1e-10


def test_gaussian_against_faddeeva():
    for z in GRID:
        ref = -1j * math.sqrt(math.pi / 2) * special.wofz(z / math.sqrt(2))
        assert rel(cauchy_G(Gaussian(), z), ref) < 1e-10


def test_exponential_closed_form_against_quadrature():
    for z in GRID:
        assert rel(cauchy_G(Gamma(1), z), cauchy_G_quad(Gamma(1), z)) < 1e-10


def test_documented_values():
    assert cauchy_G(Beta(0.5, 0.5), 2.0) == pytest.approx(1 / math.sqrt(2), rel=1e-13)
    assert cauchy_G(PointMass(1.5), 2 + 1j) == pytest.approx(1 / (0.5 + 1j))
    assert cauchy_G(Semicircle(), 2j) == pytest.approx(1j * (2 - math.sqrt(8)) / 2, rel=1e-14)
    assert cauchy_G_quad(Cauchy(), 2j) == pytest.approx(-1j / 3, rel=1e-10)
    assert abs(cauchy_G_quad(Gaussian(), 1j).real) < 1e-14
    assert reciprocal_F(Semicircle(), 2j) == pytest.approx(1j * (1 + math.sqrt(2)), rel=1e-13)
    assert reciprocal_F(PointMass(0.7), 3 + 2j) == pytest.approx(2.3 + 2j)
    z = 1j
    assert reciprocal_F(Beta(1, 1), z) == pytest.approx(1 / cmath.log(z / (z - 1)), rel=1e-12)
    with pytest.raises(NearSupport):
        cauchy_G_quad(Beta(2, 2), 0.5 + 1e-8j)


# analytic properties

@pytest.mark.parametrize("d", FAMILIES, ids=lambda d: d.spec())
def test_im_F_dominates_im_z(d):
    pts = upper_grid(500 if not isinstance(d, (Gamma, InverseGamma, Gaussian)) else 60, seed=2)
    for z in pts:
        assert reciprocal_F(d, z).imag >= z.imag - 1e-12
        assert cauchy_G(d, z).imag < 0


@pytest.mark.parametrize("d", [Semicircle(), StudentT(2.5), Ultraspherical(0.3), Gaussian(),
                               Cauchy()], ids=lambda d: d.spec())
def test_symmetric_laws_on_imaginary_axis(d):
    for y in np.geomspace(0.01, 100, 25):
        g = cauchy_G(d, complex(0, y))
        assert abs(g.real) <= 1e-13 * abs(g)
        assert g.imag < 0


@pytest.mark.parametrize("d", [Gaussian(), StudentT(0.8), StudentT(2), StudentT(5.5)],
                         ids=lambda d: d.spec())
def test_positive_real_part_in_first_quadrant(d):
    for x in np.linspace(0.05, 4, 12):
        for y in np.linspace(0.05, 4, 12):
            assert cauchy_G(d, complex(x, y)).real > 0


@pytest.mark.parametrize("d", FAMILIES, ids=lambda d: d.spec())
def test_cone_asymptotics(d):
    errs = []
    for Y in (1e4, 3e4, 1e5):
        errs.append(abs(1j * Y * cauchy_G(d, 1j * Y) - 1))
        z = Y * cmath.exp(0.25j * math.pi)
        errs.append(abs(z * cauchy_G(d, z) - 1))
    assert max(errs) < 0.01


@pytest.mark.parametrize("p,q", [(0.7, 2.0), (1.4, 3.0), (1.8, 0.6)])
def test_zero_asymptotics_exponent(p, q):
    for d, asym, const in ((Beta(p, q), beta_zero_asymptotic, -(p + q - 1) / (p - 1)),
                           (BetaPrime(p, q), beta_prime_zero_asymptotic, -q / (p - 1))):
        rs = np.geomspace(1e-11, 1e-9, 6)
        zs = [r * cmath.exp(0.75j * math.pi) for r in rs]
        vals = [abs(G_cont(d, z) - (const if p >= 0.5 else 0)) for z in zs]
        slope = np.polyfit(np.log(rs), np.log(vals), 1)[0]
        assert abs(slope - (p - 1)) < 0.02
        assert rel(G_cont(d, zs[0]), asym(p, q, zs[0])) < 1e-2


# continuation

def test_beta_continuation_formula():
    d = Beta(2, 2)
    z = 0.5 - 0.1j
    expect = cauchy_G_tilde(d, z) - 2j * math.pi / special.beta(2, 2) * z * (1 - z)
    tv = cauchy_G_continued(d, z)
    assert tv.side is Side.LowerContinuation
    assert rel(tv.value, expect) < 1e-13
    x = 0.5
    up = [cauchy_G(d, complex(x, e)) for e in (1e-5, 1e-6, 1e-7)]
    down = [G_cont(d, complex(x, -e)) for e in (1e-5, 1e-6, 1e-7)]
    for e, a, b in zip((1e-5, 1e-6, 1e-7), up, down):
        assert abs(a - b) < 30 * e
    assert abs(G_cont(d, x) - up[-1]) < 2e-6


def test_cauchy_law_student_continuation():
    d = StudentT(1)
    z = -0.5j + 0.3
    assert rel(G_cont(d, z), 1 / (z + 1j)) < 1e-12
    w = 0.4 - 0.5j
    formula = cauchy_G_tilde(d, w) - 2j * math.pi * density_continued(d, w)
    assert rel(formula, 1 / (w + 1j)) < 1e-12


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 0.95), st.floats(1e-9, 1e-3))
def test_continuation_is_continuous_across_support(x, e):
    d = Beta(2.3, 1.7)
    a = cauchy_G(d, complex(x, e))
    b = G_cont(d, complex(x, -e))
    assert abs(a - b) < 40 * e * (1 + abs(a))


def test_continuation_domain_errors():
    with pytest.raises(OutsideDomain):
        G_cont(Beta(2, 3), -1.0)
    with pytest.raises(OutsideDomain):
        G_cont(StudentT(2), -1j)
    with pytest.raises(DomainError):
        cauchy_G(Beta(2, 3), 0.5 - 0.1j)


def test_sheet_values_on_student_cut_use_right_limit():
    d = StudentT(2.5)
    for y in (-0.3, -0.7):
        on = G_cont(d, complex(1e-300, y))
        right = G_cont(d, complex(1e-9, y))
        assert abs(on - right) < 1e-6 * max(1, abs(right))


# eta transforms and convolutions

@pytest.mark.parametrize("a", [0.3, 0.5, 0.8])
def test_eta_closed_forms(a):
    for x in -np.geomspace(0.01, 10, 25):
        assert rel(eta_transform(beta_tilde(a), x), eta_closed_beta_tilde(a, x)) < 1e-12
        assert rel(eta_transform(beta_prime_tilde(a), x), eta_closed_beta_prime_tilde(a, x)) < 1e-11


def test_eta_documented_values():
    assert eta_transform(beta_tilde(0.5), -1.0) == pytest.approx(1 - math.sqrt(2), rel=1e-13)
    assert eta_transform(PointMass(1), -0.3 + 0.2j) == pytest.approx(-0.3 + 0.2j)
    assert eta_transform(beta_prime_tilde(0.999999), -1.0) == pytest.approx(-1.0, rel=1e-5)
    comp = eta_transform(beta_tilde(0.5), eta_transform(beta_tilde(0.5), -1.0))
    assert comp == pytest.approx(1 - 2 ** 0.25, rel=1e-13)


@pytest.mark.parametrize("a", [0.3, 0.5, 0.8])
@pytest.mark.parametrize("b", [0.3, 0.5, 0.8])
def test_eta_semigroup(a, b):
    xs = -np.geomspace(0.01, 10, 60)
    for x in xs:
        lhs = eta_transform(beta_tilde(a), eta_transform(beta_tilde(b), x))
        assert abs(lhs - eta_transform(beta_tilde(a * b), x)) < 1e-12
        lhs = eta_transform(beta_prime_tilde(a), eta_transform(beta_prime_tilde(b), x))
        assert abs(lhs - eta_transform(beta_prime_tilde(a * b), x)) < 1e-12


@pytest.mark.parametrize("a,b", [(0.5, 0.5), (0.3, 0.7), (0.8, 0.4)])
def test_monotone_convolution_identity(a, b):
    comp = monotone_convolve_F(dilate(beta_a(a), b), beta_a(b))
    for z in GRID:
        ref = 1 / closed_form_G(2, a * b, z)
        assert rel(comp(z), ref) < 1e-10
    ident = monotone_convolve_F(PointMass(0), beta_a(b))
    assert rel(ident(1 + 1j), reciprocal_F(beta_a(b), 1 + 1j)) < 1e-15


def test_boolean_power():
    z = 2j
    assert boolean_power_F(Gaussian(), 1)(z) == pytest.approx(reciprocal_F(Gaussian(), z))
    assert boolean_power_F(Gaussian(), 0)(z) == z
    expect = -z + 2 / cauchy_G_quad(Gaussian(), z)
    assert boolean_power_F(Gaussian(), 2)(z) == pytest.approx(expect, rel=1e-12)
    with pytest.raises(DomainError):
        boolean_power_F(Gaussian(), -1)


def test_voiculescu_transform():
    assert voiculescu_phi(Semicircle(), 5j) == pytest.approx(-0.2j, abs=1e-12)
    assert voiculescu_phi(PointMass(0.75), 40j) == pytest.approx(0.75, abs=1e-12)
    assert voiculescu_phi(Cauchy(), 5j) == pytest.approx(-1j, abs=1e-12)


def test_free_convolution_with_semicircle():
    for z in (0.3 + 1j, 2j, -1 + 0.5j):
        ref = (z - cmath.sqrt(z - 2) * cmath.sqrt(z + 2)) / 2
        assert rel(semicircle_free_convolve_G(PointMass(0), z), ref) < 1e-12
        zs = z - 0.8
        ref = (zs - cmath.sqrt(zs - 2) * cmath.sqrt(zs + 2)) / 2
        assert rel(semicircle_free_convolve_G(PointMass(0.8), z), ref) < 1e-12
    # additivity of F^{-1} on the imaginary axis: phi_{w + mu} = phi_mu + 1/z
    w = 3j
    g = semicircle_free_convolve_G(Gaussian(), w)
    assert abs(g * 0 + voiculescu_phi(Gaussian(), w) + 1 / w
               - (_inverse_F_from_G(lambda u: semicircle_free_convolve_G(Gaussian(), u), w) - w)) < 1e-8


def _inverse_F_from_G(G, z):
    u = z
    for _ in range(60):
        f = 1 / G(u) - z
        h = 1e-6
        df = (1 / G(u + h) - 1 / G(u - h)) / (2 * h)
        u = u - f / df
        if abs(f) < 1e-14:
            break
    return u


# Stieltjes inversion

def test_density_examples():
    assert stieltjes_density(Beta(0.5, 0.5), 0.5)[0] == pytest.approx(2 / math.pi, abs=1e-9)
    assert stieltjes_density(Semicircle(), 0.0)[0] == pytest.approx(1 / math.pi, abs=1e-9)
    assert stieltjes_density(Beta(2, 2), 1e-3)[0] == pytest.approx(6e-3 * (1 - 1e-3), abs=1e-8)
    assert stieltjes_density(Beta(1, 1), 0.3)[0] == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("d", [Beta(0.5, 0.5), Beta(2, 2), Semicircle()], ids=lambda d: d.spec())
def test_density_recovery_on_interior_grid(d):
    lo, hi = d.support
    xs = np.linspace(lo, hi, 41)[2:-2]
    for x in xs:
        v, err = stieltjes_density(d, x)
        assert abs(v - float(d.density(x))) < 1e-6
        assert err < 1e-6


# ODEs, recursions and variable changes

@pytest.mark.parametrize("d", [Beta(2, 3), Beta(0.6, 1.7), BetaPrime(1, 2), BetaPrime(2.5, 0.7),
                               StudentT(2), StudentT(3.3), Ultraspherical(0.8)],
                         ids=lambda d: d.spec())
def test_ode_residuals(d):
    rng = np.random.default_rng(17)
    zs = [complex(x, y) for x, y in zip(rng.uniform(-3, 3, 100), np.exp(rng.uniform(-2.5, 1.1, 100)))]
    assert max(ode_residual(d, z) for z in zs) < 1e-8


def test_documented_residuals():
    assert ode_residual(Beta(2, 3), 1 + 1j) < 1e-8
    assert ode_residual(StudentT(2), 0.5j) < 1e-8
    assert recursion_residual(BetaPrime(1, 2), 2j) < 1e-9


@pytest.mark.parametrize("d", [BetaPrime(1.5, 3.2), StudentT(2.5), StudentT(0.9)], ids=lambda d: d.spec())
def test_recursions(d):
    assert max(recursion_residual(d, z) for z in GRID) < 1e-9


def test_variable_changes():
    assert rv_transform_check("ultraspherical_affine", {"p": 0.7}, 1j) < 1e-10
    assert rv_transform_check("t_square", {"q": 2}, 1 + 1j) < 1e-10
    assert rv_transform_check("beta_to_betaprime", {"p": 2, "q": 3}, 2j) < 1e-10
    assert rv_transform_check("beta_to_betaprime_inverse", {"p": 2, "q": 3}, 2j) < 1e-10
    assert rv_transform_check("inverse", {"base": BetaPrime(2, 3), "image": BetaPrime(3, 2)}, 1 + 1j) < 1e-10
    assert rv_transform_check("affine", {"base": Beta(2, 3), "scale": -2, "shift": 1}, 1 + 1j) < 1e-10
    assert rv_transform_check("gamma_inverse", {"p": 2.5}, 1 + 1j) < 1e-10
    # a beta law rescaled by q tends to the gamma law as q grows
    r1 = rv_transform_check("beta_gamma_limit", {"p": 1.5, "q": 50}, 1 + 2j)
    r2 = rv_transform_check("beta_gamma_limit", {"p": 1.5, "q": 500}, 1 + 2j)
    assert r2 < r1 / 5
