"""Exact determinants and ranks over the integers and prime fields."""

from __future__ import annotations

from fractions import Fraction
from math import gcd

MERSENNE_61 = (1 << 61) - 1


def det_bareiss(matrix):
    """Fraction-free determinant of a square integer matrix."""
    a = [list(row) for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        piv = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * piv - a[i][k] * a[k][j]) // prev
        prev = piv
    return sign * a[n - 1][n - 1]


def det_mod(matrix, p=MERSENNE_61):
    a = [[x % p for x in row] for row in matrix]
    n = len(a)
    det = 1
    for k in range(n):
        piv = next((r for r in range(k, n) if a[r][k]), None)
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det = det * a[k][k] % p
        inv = pow(a[k][k], p - 2, p)
        for i in range(k + 1, n):
            f = a[i][k] * inv % p
            if f:
                row_k = a[k]
                row_i = a[i]
                for j in range(k, n):
                    row_i[j] = (row_i[j] - f * row_k[j]) % p
    return det % p


def _primitive(row):
    g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                return row
    return [x // g for x in row] if g > 1 else row


def _echelon(vectors, width):
    """Row-echelon form over Q using integer rows kept primitive."""
    rows = [_primitive(list(v)) for v in vectors if any(v)]
    pivots = []
    r = 0
    for col in range(width):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        a = pr[col]
        for i in range(r + 1, len(rows)):
            f = rows[i][col]
            if f:
                rows[i] = _primitive([x * a - f * y for x, y in zip(rows[i], pr)])
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return pivots


def rank(vectors):
    """Rank over Q of integer vectors (exact)."""
    vectors = [v for v in vectors]
    if not vectors:
        return 0
    return len(_echelon(vectors, len(vectors[0])))


def pivot_columns(vectors, width):
    """Columns carrying a pivot in a row-echelon form of the vectors (over Q)."""
    return _echelon(vectors, width)


def interpolate_coefficient(values, k, p=None):
    """Coefficient of t^k of the polynomial taking ``values[t]`` at t = 0, 1, ...

    Exact over Q when ``p`` is None, otherwise modulo the prime ``p``.
    """
    n = len(values)
    # Newton divided differences, then expand.
    if p is None:
        coef = [Fraction(v) for v in values]
        for j in range(1, n):
            for i in range(n - 1, j - 1, -1):
                coef[i] = (coef[i] - coef[i - 1]) / j
    else:
        coef = [v % p for v in values]
        for j in range(1, n):
            inv = pow(j, p - 2, p)
            for i in range(n - 1, j - 1, -1):
                coef[i] = (coef[i] - coef[i - 1]) * inv % p
    # Newton basis prod_{m<i}(t - m) -> monomial basis
    poly = [0] * n
    basis = [1]
    for i in range(n):
        for d, b in enumerate(basis):
            poly[d] += coef[i] * b
        basis = [0] + basis
        for d in range(len(basis) - 1):
            basis[d] -= i * basis[d + 1]
    out = poly[k] if k < n else 0
    if p is None:
        if out.denominator != 1:
            raise ArithmeticError("non-integral interpolation result")
        return int(out)
    return out % p
