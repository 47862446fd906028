from fractions import Fraction

from conftest import seeded

from bhht.intmat import (
    determinant,
    identity,
    invariant_factors,
    matmul,
    smith_normal_form,
    solve_exact,
)


def det_by_fractions(a):
    # independent oracle: plain Gaussian elimination over the rationals
    n = len(a)
    m = [[Fraction(x) for x in row] for row in a]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] * inv
            m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    assert det.denominator == 1
    return int(det)


def random_matrix(rng, rows, cols, lo=-9, hi=9):
    return [[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)]


def test_determinant_matches_fraction_elimination():
    rng = seeded(1)
    for _ in range(200):
        n = rng.randint(1, 5)
        a = random_matrix(rng, n, n)
        assert determinant(a) == det_by_fractions(a)


def test_determinant_trivila_cases():
    assert determinant([]) == 1
    assert determinant([[7]]) == 7
    assert determinant([[1, 2], [2, 4]]) == 0


def test_smith_normal_form_properties():
    rng = seeded(2)
    for _ in range(150):
        rows = rng.randint(1, 4)
        cols = rng.randint(1, 4)
        a = random_matrix(rng, rows, cols, -6, 6)
        d, u, v = smith_normal_form(a)
        assert matmul(matmul(u, a), v) == d
        assert abs(determinant(u)) == 1
        assert abs(determinant(v)) == 1
        diag = [d[i][i] for i in range(min(rows, cols))]
        for i in range(rows):
            for j in range(cols):
                if i != j:
                    assert d[i][j] == 0
        for x, y in zip(diag, diag[1:]):
            assert x >= 0 and y >= 0
            if x == 0:
                assert y == 0
            else:
                assert y % x == 0


def test_invariant_factors_product_is_det():
    rng = seeded(3)
    for _ in range(100):
        n = rng.randint(1, 4)
        a = random_matrix(rng, n, n, -5, 5)
        det = determinant(a)
        if det == 0:
            continue
        facs = invariant_factors(a)
        prod = 1
        for f in facs:
            prod *= f
        assert prod == abs(det)


def test_solve_exact():
    rng = seeded(4)
    for _ in range(100):
        n = rng.randint(1, 5)
        a = random_matrix(rng, n, n)
        if determinant(a) == 0:
            continue
        x = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(n)]
        b = [sum(a[i][j] * x[j] for j in range(n)) for i in range(n)]
        assert solve_exact(a, b) == x


def test_solve_singular_raises():
    import pytest

    with pytest.raises(ValueError):
        solve_exact([[1, 2], [2, 4]], [1, 1])


def test_identity():
    assert identity(2) == [[1, 0], [0, 1]]
