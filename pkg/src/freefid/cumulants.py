"""Exact moments, free cumulants and the Hankel non-FID test.

Everything here is rational arithmetic (``fractions.Fraction`` and Python
ints); floating point never enters, so determinant signs are certified.

The moment/cumulant relation used throughout is

    m_n = sum_{s=1}^{n} r_s [x^{n-s}] M(x)^s,   M(x) = sum_k m_k x^k,

i.e. M(x) = 1 + sum_s r_s x^s M(x)^s.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .distributions import (Affine, Beta, BetaPrime, Distribution, Gamma,
                            MarchenkoPastur, PointMass, Semicircle)
from .errors import HorizonExceeded, MomentHorizonExceeded, UnsupportedFamily
from .kernels import bareiss_det, bareiss_leading_minors
from .verdict import FidVerdict, Reason, Status

HANKEL_CITATION = ("a negative Hankel determinant of (r_{n+2}) rules out "
                   "free infinite divisibility")


def rational(x) -> Fraction:
    """Exact rational value of a parameter (floats are taken at face value)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(repr(float(x)))


@dataclass(frozen=True)
class MomentSequence:
    """m_1..m_N of a law; ``m[0] == 1`` is implicit."""

    dist: str
    values: tuple
    note: str = ""

    @property
    def horizon(self) -> int:
        return len(self.values)

    def __getitem__(self, n):
        if n == 0:
            return Fraction(1)
        if not 1 <= n <= self.horizon:
            raise HorizonExceeded(f"moment {n} beyond horizon {self.horizon}")
        return self.values[n - 1]

    def with_constant(self) -> list:
        return [Fraction(1), *self.values]


@dataclass(frozen=True)
class CumulantSequence:
    """r_1..r_N."""

    values: tuple
    dist: str = ""

    @property
    def horizon(self) -> int:
        return len(self.values)

    def __getitem__(self, n):
        if not 1 <= n <= self.horizon:
            raise HorizonExceeded(f"cumulant {n} beyond horizon {self.horizon}")
        return self.values[n - 1]


@dataclass(frozen=True)
class HankelReport:
    k: int
    sign: int
    det: Fraction
    spec: str

    def sign_char(self) -> str:
        return "-0+"[self.sign + 1]


def _pochhammer_ratio(a, b, n):
    # (a)_n / (b)_n as successive ratios
    out = [Fraction(1)]
    for j in range(n):
        out.append(out[-1] * (a + j) / (b + j))
    return out


def _raw_moments(d: Distribution, n_max: int) -> list:
    if isinstance(d, Beta):
        p, q = rational(d.p), rational(d.q)
        return _pochhammer_ratio(p, p + q, n_max)
    if isinstance(d, BetaPrime):
        p, q = rational(d.p), rational(d.q)
        if n_max >= q:
            raise MomentHorizonExceeded(
                f"beta prime with q={q} has moments only below order q (asked {n_max})")
        out = [Fraction(1)]
        for n in range(1, n_max + 1):
            out.append(out[-1] * (p + n - 1) / (q - n))
        return out
    if isinstance(d, Gamma):
        p = rational(d.p)
        out = [Fraction(1)]
        for n in range(1, n_max + 1):
            out.append(out[-1] * (p + n - 1))
        return out
    if isinstance(d, Semicircle):
        return [Fraction(math.comb(n, n // 2), n // 2 + 1) if n % 2 == 0 else Fraction(0)
                for n in range(n_max + 1)]
    if isinstance(d, MarchenkoPastur):
        return moments_from_cumulants([Fraction(1)] * n_max)
    if isinstance(d, PointMass):
        a = rational(d.a)
        return [a ** n for n in range(n_max + 1)]
    if isinstance(d, Affine):
        base = _raw_moments(d.base, n_max)
        s, t = rational(d.scale), rational(d.shift)
        return [sum((math.comb(n, k) * s ** k * t ** (n - k) * base[k]
                     for k in range(n + 1)), Fraction(0))
                for n in range(n_max + 1)]
    raise UnsupportedFamily(f"no exact moments for {type(d).__name__}")


def exact_moments(d: Distribution, n_max: int) -> MomentSequence:
    """Exact moments m_1..m_{n_max}.

    Beta: (p)_n/(p+q)_n.  Beta prime: (p)_n/((q-1)(q-2)...(q-n)), only for
    n < q.  Gamma: (p)_n.  Semicircle: Catalan numbers at even orders.
    Marchenko-Pastur: obtained from r_n = 1.  Affine images of these by
    binomial expansion (rational scale and shift).
    """
    m = _raw_moments(d, n_max)
    note = ""
    if isinstance(d, BetaPrime):
        note = f"finite moments require n < q = {rational(d.q)}"
    return MomentSequence(d.spec(), tuple(m[1:]), note)


class _PowerTable:
    """Columns of [x^k] M(x)^s, filled as moments become known."""

    def __init__(self, n_max):
        self.n_max = n_max
        self.m = []
        self.P = [[] for _ in range(n_max + 1)]

    def push(self, mk):
        k = len(self.m)
        self.m.append(mk)
        m = self.m
        self.P[0].append(Fraction(1) if k == 0 else Fraction(0))
        for s in range(1, self.n_max + 1):
            prev = self.P[s - 1]
            self.P[s].append(sum((prev[j] * m[k - j] for j in range(k + 1)), Fraction(0)))


def _cumulants_from_list(m: Sequence[Fraction]) -> list:
    n_max = len(m) - 1
    table = _PowerTable(n_max)
    table.push(m[0])
    r = [Fraction(0)]
    for n in range(1, n_max + 1):
        P = table.P
        r.append(m[n] - sum((r[s] * P[s][n - s] for s in range(1, n)), Fraction(0)))
        table.push(m[n])
    return r[1:]


def moments_from_cumulants(r: Sequence) -> list:
    """Forward map: [1, m_1..m_N] from r_1..r_N."""
    r = [Fraction(0), *(rational(x) for x in r)]
    n_max = len(r) - 1
    table = _PowerTable(n_max)
    table.push(Fraction(1))
    for n in range(1, n_max + 1):
        P = table.P
        table.push(sum((r[s] * P[s][n - s] for s in range(1, n + 1)), Fraction(0)))
    return table.m


def free_cumulants(m: MomentSequence) -> CumulantSequence:
    return CumulantSequence(tuple(_cumulants_from_list(m.with_constant())), m.dist)


# independent oracles

def _set_partitions(n):
    # restricted growth strings
    a = [0] * n
    def rec(i, mx):
        if i == n:
            yield tuple(a)
            return
        for v in range(mx + 2):
            a[i] = v
            yield from rec(i + 1, max(mx, v))
    if n == 0:
        yield ()
        return
    a[0] = 0
    yield from rec(1, 0)


def _is_noncrossing(labels):
    n = len(labels)
    for a, b in combinations(range(n), 2):
        if labels[a] != labels[b]:
            continue
        for c in range(a + 1, b):
            if labels[c] == labels[a]:
                continue
            for e in range(b + 1, n):
                if labels[e] == labels[c]:
                    return False
    return True


def noncrossing_partitions(n: int) -> list:
    """Block-size lists of all non-crossing partitions of {1..n}."""
    out = []
    for labels in _set_partitions(n):
        if _is_noncrossing(labels):
            sizes = [labels.count(v) for v in range(max(labels) + 1)]
            out.append(sizes)
    return out


def nc_partition_cumulants(m: MomentSequence, n_max: int = 8) -> list:
    """r_1..r_{n_max} by m_n = sum over NC(n) of products of r_{|B|}."""
    if n_max > 10:
        raise ValueError("brute-force enumeration limited to n <= 10")
    r = {}
    for n in range(1, n_max + 1):
        total = Fraction(0)
        for sizes in noncrossing_partitions(n):
            if sizes == [n]:
                continue
            prod = Fraction(1)
            for b in sizes:
                prod *= r[b]
            total += prod
        r[n] = m[n] - total
    return [r[n] for n in range(1, n_max + 1)]


def reversion_cumulants(m: MomentSequence) -> list:
    """r_n as coefficients of w/h(w) - 1 where h inverts w = x M(x)."""
    N = m.horizon
    a = [Fraction(0)] + [m[k - 1] for k in range(1, N + 2)]
    h = [Fraction(0), Fraction(1)] + [Fraction(0)] * N
    for n in range(2, N + 2):
        # coefficient n of a o h with the current truncation
        res = Fraction(0)
        pw = [Fraction(1)] + [Fraction(0)] * n
        for k in range(1, n + 1):
            pw = [sum((pw[j] * h[i - j] for j in range(i + 1)), Fraction(0))
                  for i in range(n + 1)]
            res += a[k] * pw[n]
        h[n] -= res
    u = h[1:]
    C = [Fraction(1)] + [Fraction(0)] * N
    for n in range(1, N + 1):
        C[n] = -sum((u[k] * C[n - k] for k in range(1, n + 1)), Fraction(0))
    # with x = h(w): M(x) = w / h(w) = C(w) and M = 1 + sum r_s w^s
    return C[1:]


# Hankel machinery

def hankel_matrix(r: CumulantSequence, k: int) -> list:
    """k x k matrix H[i][j] = r_{2+i+j}."""
    if k < 1:
        raise ValueError("k >= 1")
    if r.horizon < 2 * k:
        raise HorizonExceeded(f"order {k} needs r up to {2 * k}, have {r.horizon}")
    return [[r[2 + i + j] for j in range(k)] for i in range(k)]


def _integer_matrix(H):
    den = math.lcm(*(x.denominator for row in H for x in row)) if H else 1
    return [[int(x * den) for x in row] for row in H], den


def _sign(x):
    return (x > 0) - (x < 0)


def hankel_det_sign(H) -> HankelReport:
    H = [[rational(x) for x in row] for row in H]
    k = len(H)
    M, den = _integer_matrix(H)
    det = Fraction(bareiss_det(M), den ** k) if k else Fraction(1)
    return HankelReport(k, _sign(det), det, f"hankel {k}x{k}")


def leading_minor_signs(H) -> list:
    """Signs of the k leading principal minors of a rational matrix."""
    H = [[rational(x) for x in row] for row in H]
    M, _ = _integer_matrix(H)
    minors = bareiss_leading_minors(M)
    out = []
    for j, v in enumerate(minors):
        if v is None:
            v = bareiss_det([row[:j + 1] for row in M[:j + 1]])
        out.append(_sign(v))
    return out


def _max_order(d):
    if isinstance(d, BetaPrime):
        q = rational(d.q)
        top = math.ceil(q) - 1
        return top // 2
    return None


def hankel_fid_test(d: Distribution, k_max: int = 16) -> FidVerdict:
    """First k <= k_max with a negative k x k Hankel determinant of (r_{n+2})."""
    limit = _max_order(d)
    if limit is not None and k_max > limit:
        raise MomentHorizonExceeded(
            f"{d.spec()}: Hankel order {k_max} needs moments to {2 * k_max}, "
            f"only orders <= {limit} available")
    r = free_cumulants(exact_moments(d, 2 * k_max))
    H = hankel_matrix(r, k_max)
    signs = leading_minor_signs(H)
    pattern = "".join("-0+"[s + 1] for s in signs)
    for j, s in enumerate(signs, start=1):
        if s < 0:
            det = hankel_det_sign([row[:j] for row in H[:j]]).det
            return FidVerdict(Status.CertifiedNotFID, Reason.HankelNegative,
                              {"k": j, "det": det, "signs": pattern},
                              HANKEL_CITATION)
    return FidVerdict(Status.Inconclusive, None,
                      {"k_max": k_max, "signs": pattern}, "")
