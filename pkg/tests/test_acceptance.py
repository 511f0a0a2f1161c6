"""Acceptance checks, one per criterion.

Each check prints ``PASS``/``FAIL`` with the measured quantity; under pytest
the lines are also repeated in the terminal summary.  Run directly with
``python3 tests/test_acceptance.py`` for the lines alone.
"""
import math
import time
from fractions import Fraction

import numpy as np

from freefid.cumulants import (exact_moments, free_cumulants, hankel_det_sign, hankel_fid_test,
                               hankel_matrix)
from freefid.distributions import (Beta, BetaPrime, Gamma, Gaussian, Semicircle, StudentT, beta_a,
                                   beta_prime_tilde, beta_tilde, dilate)
from freefid.fid_analysis import (Anchor, TRegion, anchor_value_estimate, gaussian_ode_check,
                                  indicator_probe, region_classifier, t_boundary_limit,
                                  t_boundary_signs, t_sign_condition, trace_real_level_curve,
                                  verify_condition)
from freefid.transforms import (cauchy_G, cauchy_G_quad, closed_form_G, closed_form_law,
                                eta_transform, monotone_convolve_F, ode_residual,
                                recursion_residual, stieltjes_density, upper_grid)
from freefid.verdict import Status

F = Fraction
LINES = []


def report(n, ok, text):
    line = f"{'PASS' if ok else 'FAIL'} criterion {n:2d}: {text}"
    LINES.append(line)
    print(line)
    return ok


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def _fraction_det(H):
    # plain Gaussian elimination over Q, independent of the Bareiss kernel
    A = [[Fraction(x) for x in row] for row in H]
    n, det = len(A), Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            if f:
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return det


def test_c01_exponential_hankel():
    t0 = time.perf_counter()
    r = free_cumulants(exact_moments(Gamma(1), 32))
    H = hankel_matrix(r, 16)
    rep = hankel_det_sign(H)
    dt = time.perf_counter() - t0
    ok = rep.sign == -1 and _fraction_det(H) == rep.det and H[0][0] == r[2] and H[15][15] == r[32]
    ok = report(1, ok and dt < 60, f"exponential 16x16 Hankel det sign {rep.sign_char()} "
                f"(|det| ~ 1e{math.log10(-rep.det) if rep.det < 0 else 0:.1f}), {dt:.2f}s")
    assert ok


def test_c02_beta_one_q():
    t0 = time.perf_counter()
    ks = []
    for q in range(1, 16):
        v = hankel_fid_test(Beta(1, q), 16)
        ks.append(v.evidence.get("k") if v.status is Status.CertifiedNotFID else None)
    dt = time.perf_counter() - t0
    ok = all(k is not None and k <= 16 for k in ks) and dt < 300
    ok = report(2, ok, f"beta(1,q) q=1..15 first negative orders {ks}, {dt:.1f}s")
    assert ok


TABLE = {60: 26, 61: 25, 62: 24, 70: 21, 90: 18, 100: 18, 150: 16}


def test_c03_beta_prime_table():
    t0 = time.perf_counter()
    got, claimed_neg = {}, {}
    for q, k_claim in TABLE.items():
        d = BetaPrime(1, q)
        v = hankel_fid_test(d, k_claim + 1)
        got[q] = v.evidence.get("k")
        r = free_cumulants(exact_moments(d, 2 * k_claim))
        claimed_neg[q] = hankel_det_sign(hankel_matrix(r, k_claim)).sign == -1
    # the deciding minors where the table disagrees, by independent elimination
    indep = {}
    for q, k in TABLE.items():
        if got[q] != k:
            r = free_cumulants(exact_moments(BetaPrime(1, q), 2 * got[q]))
            indep[q] = _fraction_det(hankel_matrix(r, got[q])) < 0
    dt = time.perf_counter() - t0
    ok = all(got[q] == k for q, k in TABLE.items()) and dt < 600
    mism = {q: (got[q], k) for q, k in TABLE.items() if got[q] != k}
    text = (f"first negative orders {[got[q] for q in TABLE]} vs expected {list(TABLE.values())}; "
            f"mismatches (got, expected) {mism}; expected-order det negative for all q: "
            f"{all(claimed_neg.values())}; computed orders negative by independent elimination: "
            f"{indep}; {dt:.1f}s")
    ok = report(3, ok, text)
    assert ok


PROP_LAWS = [Beta(2, 2), Beta(0.6, 3.3), Beta(2.5, 0.7), BetaPrime(2.2, 0.9), BetaPrime(1, 2),
             BetaPrime(0.4, 3.5), StudentT(2), StudentT(0.8), StudentT(3.7)]


def test_c04_closed_forms():
    grid = upper_grid(50)
    worst_ex = max(rel(closed_form_G(ex, a, z), cauchy_G_quad(closed_form_law(ex, a), z))
                   for ex in range(1, 7) for a in (0.3, 0.5, 0.8) for z in grid)
    worst_ex_route = max(rel(closed_form_G(ex, a, z), cauchy_G(closed_form_law(ex, a), z))
                         for ex in range(1, 7) for a in (0.3, 0.5, 0.8) for z in grid)
    worst_prop = max(rel(cauchy_G(d, z), cauchy_G_quad(d, z)) for d in PROP_LAWS for z in grid)
    ok = max(worst_ex, worst_prop, worst_ex_route) < 1e-10
    ok = report(4, ok, f"examples 1-6 vs quadrature {worst_ex:.2e} (vs library route "
                f"{worst_ex_route:.2e}); hypergeometric formulas vs quadrature {worst_prop:.2e}")
    assert ok


def test_c05_ode_residuals():
    rng = np.random.default_rng(2024)
    zs = [complex(x, y) for x, y in zip(rng.uniform(-3, 3, 100), np.exp(rng.uniform(-2.5, 1.1, 100)))]
    worst = {}
    for d in (Beta(2, 3), Beta(0.6, 1.7), BetaPrime(1.5, 3.2), BetaPrime(0.7, 2.4),
              StudentT(2.5), StudentT(0.9)):
        worst[f"ode {d.spec()}"] = max(ode_residual(d, z) for z in zs)
    for d in (BetaPrime(1.5, 3.2), StudentT(2.5), StudentT(0.9)):
        worst[f"recursion {d.spec()}"] = max(recursion_residual(d, z) for z in zs)
    ok = max(worst.values()) < 1e-8
    ok = report(5, ok, "max residuals " + ", ".join(f"{k}: {v:.1e}" for k, v in worst.items()))
    assert ok


def test_c06_stieltjes():
    worst = {}
    for d in (Beta(0.5, 0.5), Beta(2, 2), Semicircle()):
        lo, hi = d.support
        xs = np.linspace(lo, hi, 41)[1:-1]
        worst[d.spec()] = max(abs(stieltjes_density(d, x)[0] - float(d.density(x))) for x in xs)
    ok = max(worst.values()) < 1e-6
    ok = report(6, ok, "max abs density error " + ", ".join(f"{k}: {v:.1e}" for k, v in worst.items()))
    assert ok


def test_c07_semigroups():
    xs = -np.geomspace(0.01, 10, 200)[::-1]
    wb = wp = 0.0
    for a in (0.3, 0.5, 0.8):
        for b in (0.3, 0.5, 0.8):
            for x in xs:
                wb = max(wb, abs(eta_transform(beta_tilde(a), eta_transform(beta_tilde(b), x))
                                 - eta_transform(beta_tilde(a * b), x)))
                wp = max(wp, abs(eta_transform(beta_prime_tilde(a), eta_transform(beta_prime_tilde(b), x))
                                 - eta_transform(beta_prime_tilde(a * b), x)))
    wm = 0.0
    for a, b in ((0.5, 0.5), (0.3, 0.8), (0.8, 0.3)):
        comp = monotone_convolve_F(dilate(beta_a(a), b), beta_a(b))
        wm = max(wm, max(rel(comp(z), 1 / closed_form_G(2, a * b, z)) for z in upper_grid(50)))
    ok = wb < 1e-12 and wp < 1e-12 and wm < 1e-10
    ok = report(7, ok, f"eta composition beta {wb:.1e}, beta prime {wp:.1e}; monotone identity {wm:.1e}")
    assert ok


def test_c08_traces():
    msgs, ok = [], True
    d = Beta(4.5, 6)
    for anchor, lim in ((Anchor.AtZero, -(4.5 + 6 - 1) / 3.5), (Anchor.AtOne, (4.5 + 6 - 1) / 5)):
        tr = trace_real_level_curve(d, anchor)
        est = anchor_value_estimate(tr)
        good = (tr.end_state.kind == "ReachedInfinity" and tr.monotone != 0
                and abs(est - lim) < 1e-6 and tr.max_imag_residual(d) < 1e-9)
        ok &= good
        msgs.append(f"beta(4.5,6) {anchor.value}: {tr.end_state.kind}, limit {est:.9f} (exact {lim:.9f})")
    d = BetaPrime(5, 2)
    for anchor in (Anchor.AtZero, Anchor.AtInfinity):
        tr = trace_real_level_curve(d, anchor)
        good = (tr.end_state.kind == "ReachedPoint" and abs(tr.end_state.point + 1) < 1e-9
                and tr.monotone != 0 and tr.max_imag_residual(d) < 1e-9)
        if anchor is Anchor.AtZero:
            est = anchor_value_estimate(tr)
            good &= abs(est - (-2 / 4)) < 1e-6
            msgs.append(f"beta'(5,2) AtZero: meets -1, limit {est:.9f} (exact -0.5)")
        else:
            msgs.append(f"beta'(5,2) AtInfinity: {tr.end_state.kind} at {tr.end_state.point}")
        ok &= good
    ok = report(8, ok, "; ".join(msgs))
    assert ok


def test_c09_conditions():
    res = {}
    for d in (Beta(2, 3), Beta(5, 5), BetaPrime(2, 1)):
        res[d.spec()] = verify_condition(d, "A").passed
    e = verify_condition(Gamma(1), "A")
    witness = e.sub["A3"].witness
    exp_ok = (not e.sub["A3"].passed) and bool(witness) and e.sub["A1"].passed and e.sub["A2"].passed
    ok = all(res.values()) and exp_ok
    ok = report(9, ok, f"(A) passes {res}; exponential fails A3 ({e.sub['A3'].detail}, "
                f"witness of {len(witness or [])} points)")
    assert ok


def test_c10_gaussian():
    r = gaussian_ode_check(np.linspace(-5, 5, 101))
    hits = {t: indicator_probe(Gaussian(), t).critical for t in (1.1, 1.5, 2.0)}
    none = {t: indicator_probe(Gaussian(), t).critical for t in (0.5, 1.0)}
    ok = r < 1e-7 and all(c is not None and c[1] > 0 for c in hits.values()) \
        and all(c is None for c in none.values())
    crit = ", ".join(f"t={t}: ({c[0]:.4f}, {c[1]:.4f})" for t, c in hits.items() if c)
    ok = report(10, ok, f"ODE residual {r:.1e}; critical pairs {crit}; none for t=0.5, 1.0: "
                f"{all(c is None for c in none.values())}")
    assert ok


T_POINTS = ([(TRegion.PosImagAxisBelowMinus1, y) for y in -1 - np.geomspace(0.05, 5, 7)]
            + [(TRegion.NegRealLine, x) for x in -np.geomspace(0.05, 5, 7)]
            + [(TRegion.LeftImagSegment, y) for y in np.linspace(-0.9, -0.1, 6)])


def test_c11_t_boundary():
    worst = 0.0
    for q in (0.8, 1.5, 2.0, 2.5):
        for region, c in T_POINTS:
            re, im = t_boundary_signs(q, region, c)
            lim = t_boundary_limit(q, region, c)
            worst = max(worst, abs(complex(re, im) - lim) / max(1.0, abs(lim)))
    axis = [(r, c) for r, c in T_POINTS if r is TRegion.PosImagAxisBelowMinus1]
    holds_2 = all(t_sign_condition(*t_boundary_signs(2.0, r, c), tol=1e-12) for r, c in axis)
    viol = sum(not t_sign_condition(*t_boundary_signs(2.3, r, c)) for r, c in axis)
    ok = worst < 1e-6 and holds_2
    ok = report(11, ok, f"formula vs one-sided limit max rel error {worst:.1e} on 20 points x 4 q; "
                f"sign condition for q=2 on the H+ boundary: {holds_2}; q=2.3 violations "
                f"(report only): {viol}/{len(axis)}")
    assert ok


def _in_I(a: Fraction) -> bool:
    for n in range(1, 400):
        if F(2 * n - 1, 2 * n) < a < F(2 * n, 2 * n + 1) or F(2 * n + 2, 2 * n + 1) < a < F(2 * n + 1, 2 * n):
            return True
    return False


def test_c12_classifier():
    vals = [F(k, 40) for k in range(1, 201)]
    inI = {a: _in_I(a) for a in vals}
    half, three = F(1, 2), F(3, 2)
    mismatches = asym = known = notfid = overlap = 0
    for p in vals:
        for q in vals:
            s = region_classifier(Beta(p, q)).status
            fid = (p >= three and q >= three) or (min(p, q) <= half and p + q >= 2)
            raw_nfid = (p <= 1 and q <= 1) or inI[p] or inI[q]
            overlap += fid and raw_nfid
            nfid = not fid and raw_nfid
            expect = Status.KnownFID if fid else Status.CertifiedNotFID if nfid else Status.Inconclusive
            mismatches += s is not expect
            known += s is Status.KnownFID
            notfid += s is Status.CertifiedNotFID
            if p < q:
                asym += region_classifier(Beta(q, p)).status is not s
    # the two criteria themselves never both apply
    ok = mismatches == 0 and asym == 0 and overlap == 0
    ok = report(12, ok, f"200x200 grid: {known} KnownFID, {notfid} CertifiedNotFID, "
                f"{overlap} points where both region criteria apply, "
                f"{mismatches} mismatches vs interval oracle, {asym} asymmetric verdicts")
    assert ok


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_c") and callable(fn):
            try:
                fn()
            except AssertionError:
                pass
