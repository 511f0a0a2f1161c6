import random

import pytest

from freefid import kernels
from freefid import _pykernels as py


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")


@pytest.mark.skipif(kernels.compiled_backend is None, reason="compiled kernels not built")
def test_compiled_and_python_agree():
    c = kernels.compiled_backend
    for z in (0.3 + 0.4j, -0.7, 0.79j):
        vp, np_ = py.hyp2f1_series(0.7, 1.3, 2.2, z)
        vc, nc = c.hyp2f1_series(0.7, 1.3, 2.2, z)
        assert abs(vp - vc) <= 1e-15 * abs(vp)
        assert np_ == nc
    fp = py.taylor_step(0.4, 1.3, 2.9, 0.3 + 0.1j, 1.1 + 0.05j, 0.2 + 0.01j, 0.1j)
    fc = c.taylor_step(0.4, 1.3, 2.9, 0.3 + 0.1j, 1.1 + 0.05j, 0.2 + 0.01j, 0.1j)
    assert all(abs(a - b) <= 1e-14 * max(1, abs(a)) for a, b in zip(fp[:2], fc[:2]))
    rng = random.Random(3)
    for n in range(1, 9):
        M = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        assert py.bareiss_det(M) == c.bareiss_det(M)
        assert py.bareiss_leading_minors(M) == c.bareiss_leading_minors(M)


def test_bareiss_against_fraction_elimination():
    from fractions import Fraction
    rng = random.Random(5)
    for n in range(1, 8):
        M = [[rng.randint(-20, 20) for _ in range(n)] for _ in range(n)]
        A = [[Fraction(x) for x in row] for row in M]
        det = Fraction(1)
        for i in range(n):
            piv = next((r for r in range(i, n) if A[r][i] != 0), None)
            if piv is None:
                det = Fraction(0)
                break
            if piv != i:
                A[i], A[piv] = A[piv], A[i]
                det = -det
            det *= A[i][i]
            for r in range(i + 1, n):
                f = A[r][i] / A[i][i]
                A[r] = [x - f * y for x, y in zip(A[r], A[i])]
        assert kernels.bareiss_det(M) == det


def test_zero_pivot_minors():
    M = [[0, 1], [1, 0]]
    assert kernels.bareiss_det(M) == -1
    minors = kernels.bareiss_leading_minors(M)
    assert minors[0] == 0
