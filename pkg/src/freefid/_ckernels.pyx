# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same signatures and semantics as ``_pykernels``."""

cdef double EPS = 2.0 ** -53


def hyp2f1_series(double a, double b, double c, double complex z,
                  double tol=EPS, long max_terms=1000000):
    cdef double complex s = 1.0
    cdef double complex t = 1.0
    cdef long n = 0
    cdef int quiet = 0
    while n < max_terms:
        t = t * ((a + n) * (b + n) / ((c + n) * (n + 1.0))) * z
        s = s + t
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


def taylor_step(double a, double b, double c, double complex z0,
                double complex f0, double complex d0, double complex h,
                double tol=EPS, long max_terms=4000):
    cdef double complex A = z0 * (1.0 - z0)
    cdef double complex B = 1.0 - 2.0 * z0
    cdef double complex C = c - (a + b + 1.0) * z0
    cdef double complex g_prev = f0
    cdef double complex g = d0 * h
    cdef double complex s = g_prev + g
    cdef double complex ds = g
    cdef double complex h2 = h * h
    cdef double complex g_next
    cdef long n = 0
    while n < max_terms:
        g_next = ((n + a) * (n + b) * g_prev * h2
                  - (n + 1.0) * (B * n + C) * g * h) / (A * (n + 2.0) * (n + 1.0))
        s = s + g_next
        ds = ds + (n + 2.0) * g_next
        if abs(g_next) <= tol * abs(s) and abs(g) <= tol * abs(s):
            return s, ds / h, n + 2
        g_prev = g
        g = g_next
        n += 1
    return s, ds / h, -1


def bareiss_det(matrix):
    cdef list m = [list(row) for row in matrix]
    cdef Py_ssize_t k = len(m)
    cdef Py_ssize_t i, r, j
    cdef list row_i, row_r
    cdef object piv, prev, lead
    cdef int sign = 1
    if k == 0:
        return 1
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
        row_i = m[i]
        piv = row_i[i]
        for r in range(i + 1, k):
            row_r = m[r]
            lead = row_r[i]
            for j in range(i + 1, k):
                row_r[j] = (row_r[j] * piv - lead * row_i[j]) // prev
            row_r[i] = 0
        prev = piv
    return sign * m[k - 1][k - 1]


def bareiss_leading_minors(matrix):
    cdef list m = [list(row) for row in matrix]
    cdef Py_ssize_t k = len(m)
    cdef Py_ssize_t i, r, j
    cdef list row_i, row_r, out = []
    cdef object piv, prev, lead
    prev = 1
    for i in range(k):
        row_i = m[i]
        piv = row_i[i]
        out.append(piv)
        if piv == 0:
            out.extend([None] * (k - i - 1))
            return out
        for r in range(i + 1, k):
            row_r = m[r]
            lead = row_r[i]
            for j in range(i + 1, k):
                row_r[j] = (row_r[j] * piv - lead * row_i[j]) // prev
        prev = piv
    return out
