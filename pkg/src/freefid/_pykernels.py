"""Pure-Python reference kernels (fallback for ``_ckernels``).

Every function here has a twin with the same signature in
``_ckernels.pyx``; ``freefid.kernels`` picks one at import time.
"""

EPS = 2.0 ** -53


def hyp2f1_series(a, b, c, z, tol=EPS, max_terms=1_000_000):
    """Partial sums of the Gauss series.

    Returns ``(value, nterms)``; ``nterms == -1`` signals that
    ``max_terms`` was hit before two consecutive terms fell below
    ``tol * |sum|``.
    """
    a = float(a)
    b = float(b)
    c = float(c)
    z = complex(z)
    s = 1.0 + 0.0j
    t = 1.0 + 0.0j
    quiet = 0
    n = 0
    while n < max_terms:
        t = t * ((a + n) * (b + n) / ((c + n) * (n + 1.0))) * z
        s += t
        n += 1
        if t == 0:
            return s, n
        if abs(t) <= tol * abs(s):
            quiet += 1
            if quiet >= 2:
                return s, n
        else:
            quiet = 0
    return s, -1


def taylor_step(a, b, c, z0, f0, d0, h, tol=EPS, max_terms=4000):
    """Advance a solution of the hypergeometric ODE from ``z0`` to ``z0 + h``.

    ``f0``, ``d0`` are the value and derivative at ``z0``.  Coefficients of
    the Taylor expansion in ``t = z - z0`` follow from substituting into
    ``z(1-z)F'' + (c - (a+b+1)z)F' - abF = 0``; they are carried pre-scaled
    by ``h**n``.  Returns ``(f, f', nterms)`` with ``nterms == -1`` on
    non-convergence.
    """
    a = float(a)
    b = float(b)
    c = float(c)
    z0 = complex(z0)
    h = complex(h)
    A = z0 * (1.0 - z0)
    B = 1.0 - 2.0 * z0
    C = c - (a + b + 1.0) * z0
    g_prev = complex(f0)
    g = complex(d0) * h
    s = g_prev + g
    ds = g
    h2 = h * h
    n = 0
    while n < max_terms:
        g_next = ((n + a) * (n + b) * g_prev * h2
                  - (n + 1.0) * (B * n + C) * g * h) / (A * (n + 2.0) * (n + 1.0))
        s += g_next
        ds += (n + 2.0) * g_next
        if abs(g_next) <= tol * abs(s) and abs(g) <= tol * abs(s):
            return s, ds / h, n + 2
        g_prev = g
        g = g_next
        n += 1
    return s, ds / h, -1


def bareiss_det(matrix):
    """Exact determinant of an integer matrix (fraction-free, row pivoting)."""
    m = [list(row) for row in matrix]
    k = len(m)
    if k == 0:
        return 1
    sign = 1
    prev = 1
    for i in range(k - 1):
        if m[i][i] == 0:
            for r in range(i + 1, k):
                if m[r][i] != 0:
                    m[i], m[r] = m[r], m[i]
                    sign = -sign
                    break
            else:
                return 0
        piv = m[i][i]
        row_i = m[i]
        for r in range(i + 1, k):
            row_r = m[r]
            lead = row_r[i]
            for j in range(i + 1, k):
                row_r[j] = (row_r[j] * piv - lead * row_i[j]) // prev
            row_r[i] = 0
        prev = piv
    return sign * m[k - 1][k - 1]


def bareiss_leading_minors(matrix):
    """All leading principal minors ``det(M[:j, :j])``, j = 1..k, in one pass.

    Without pivoting the Bareiss pivot after step j is exactly the j-th
    leading minor.  If a pivot vanishes the remaining entries are ``None``
    and the caller has to fall back to ``bareiss_det`` on each submatrix.
    """
    m = [list(row) for row in matrix]
    k = len(m)
    out = []
    prev = 1
    for i in range(k):
        piv = m[i][i]
        out.append(piv)
        if piv == 0:
            out.extend([None] * (k - i - 1))
            return out
        row_i = m[i]
        for r in range(i + 1, k):
            row_r = m[r]
            lead = row_r[i]
            for j in range(i + 1, k):
                row_r[j] = (row_r[j] * piv - lead * row_i[j]) // prev
        prev = piv
    return out
