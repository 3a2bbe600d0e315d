import itertools
import random

import pytest

from conftest import pairs_by_label
from nilfibre.components import enumerate_component_tableaux
from nilfibre.diagram import build_diagram, compositions, invariant_degree
from nilfibre.invariants import (
    CapacityError,
    BSInvariant,
    all_invariants,
    factor_with_unit,
    horizontal_monomial_check,
    is_zero_on_subspace,
    multilinear_factor,
    parse_substitution,
    restrict,
    weierstrass_check,
)
from nilfibre.polynomial import C_VAR, Polynomial, product
from nilfibre.reverse import excluded_roots_reverse, implement_pair, start


def x(i, j):
    return Polynomial.var((i, j))


def oracle(d, p):
    """Lowest c-coefficient of the minor by brute-force permutation expansion."""
    lo = d.entry_of_box[(p.left, 1)]
    hi = d.entry_of_box[(p.right, p.height)]
    vals = list(range(lo, hi + 1))
    size = len(vals) - p.height
    rows, cols = vals[:size], vals[p.height:]
    c = Polynomial.var(C_VAR)

    def entry(a, b):
        if a == b:
            return c
        if a < b and d.in_nilradical(a, b):
            return x(a, b)
        return Polynomial()

    total = Polynomial()
    for perm in itertools.permutations(range(size)):
        inv = sum(1 for s in range(size) for t in range(s + 1, size) if perm[s] > perm[t])
        term = product(entry(rows[r], cols[perm[r]]) for r in range(size))
        total = total - term if inv % 2 else total + term
    coeffs = total.c_coefficients()
    k = min(e for e, q in coeffs.items() if not q.is_zero())
    return coeffs[k]


SMALL = [comp for n in range(2, 8) for comp in compositions(n)]


def test_symbolic_matches_permutation_oracle():
    checked = 0
    for comp in SMALL:
        d = build_diagram(comp)
        for inv in all_invariants(d):
            if inv.size > 6:
                continue
            ref = oracle(d, inv.pair)
            got = inv.symbolic()
            assert got == ref or got == -ref, (comp, inv.pair)
            checked += 1
    assert checked > 100


@pytest.mark.parametrize("n", range(2, 11))
def test_degree_is_left_rectangle_size(n):
    for comp in compositions(n):
        d = build_diagram(comp)
        for inv in all_invariants(d):
            assert inv.degree == invariant_degree(d, inv.pair)
            if n <= 8:
                q = inv.symbolic()
                assert q.is_homogeneous() and q.degree() == inv.degree and q.is_multilinear()


def test_blackbox_agrees_with_symbolic():
    rng = random.Random(3)
    for n in range(2, 9):
        for comp in compositions(n):
            d = build_diagram(comp)
            for inv in all_invariants(d):
                point = {v: rng.randint(-5, 5) for v in inv.variables}
                assert inv.evaluate(point) == inv.symbolic().evaluate(point)


def _unitriangular_inverse(u):
    n = len(u)
    nil = [[u[i][j] - (i == j) for j in range(n)] for i in range(n)]
    res = [[int(i == j) for j in range(n)] for i in range(n)]
    power = [row[:] for row in res]
    for k in range(1, n):
        power = _mul(power, nil)
        res = [[res[i][j] + (-1) ** k * power[i][j] for j in range(n)] for i in range(n)]
    return res


def _mul(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


@pytest.mark.parametrize("comp", [(1, 2, 1, 2), (2, 1, 2, 1, 2), (1, 2, 3, 1, 1, 3, 2), (2, 1, 1, 2, 2), (3, 1, 3)])
def test_semi_invariance_under_unipotent_conjugation(comp):
    rng = random.Random(sum(comp))
    d = build_diagram(comp)
    n = d.n
    for _ in range(3):
        x_ = [[0] * n for _ in range(n)]
        for i, j in d.nilradical:
            x_[i - 1][j - 1] = rng.randint(-4, 4)
        u = [[int(i == j) for j in range(n)] for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                if d.block(i + 1) <= d.block(j + 1):
                    u[i][j] = rng.randint(-2, 2)
        y = _mul(_mul(u, x_), _unitriangular_inverse(u))
        px = {(i, j): x_[i - 1][j - 1] for i, j in d.nilradical}
        py = {(i, j): y[i - 1][j - 1] for i, j in d.nilradical}
        for inv in all_invariants(d):
            assert inv.evaluate(px) == inv.evaluate(py)


def test_1212_invariants():
    d = build_diagram((1, 2, 1, 2))
    i1, i2 = all_invariants(d)
    assert i1.symbolic() in (x(1, 2) * x(2, 4) + x(1, 3) * x(3, 4), -(x(1, 2) * x(2, 4) + x(1, 3) * x(3, 4)))
    assert (i1.degree, i2.degree) == (2, 3)
    sub = parse_substitution("x1,2=1;x1,3=0;x2,4=0")
    q = restrict(i2.symbolic(), sub)
    ref = x(3, 4) * (x(2, 5) * x(4, 6) - x(2, 6) * x(4, 5))
    assert q in (ref, -ref)
    unit, factors = factor_with_unit(q)
    assert len(factors) == 2
    assert product(factors) * unit == q


def test_1221_after_implementing_outer_pair():
    d = build_diagram((1, 2, 2, 1))
    P = pairs_by_label(d)
    st = implement_pair(start(d), P["C1,C4"], 4)
    X = excluded_roots_reverse(st)
    inv = BSInvariant(d, P["C2,C3"])
    q = inv.symbolic().substitute({v: 0 for v in X})
    assert q in (x(2, 4) * x(3, 5), -(x(2, 4) * x(3, 5)))


def test_factor_counterexample_to_cooccurrence():
    q = x(3, 4) * (x(2, 5) * x(4, 6) - x(2, 6) * x(4, 5))
    assert len(multilinear_factor(q)) == 2
    assert len(multilinear_factor(x(1, 2) * x(2, 4) + x(1, 3) * x(3, 4))) == 1


def test_factor_random_products():
    rng = random.Random(11)
    for trial in range(20):
        names = [(i, j) for i in range(1, 6) for j in range(6, 10)]
        rng.shuffle(names)
        k = rng.randint(1, 4)
        chunks = [names[3 * t: 3 * t + 3] for t in range(k)]
        parts = []
        for chunk in chunks:
            # a + b*c with unit coefficients is irreducible
            a, b, c = (Polynomial.var(v) for v in chunk)
            parts.append(a + b * c if rng.random() < 0.5 else a * b - c)
        q = product(parts) * Polynomial.const(rng.choice([1, -1, 3]))
        unit, factors = factor_with_unit(q)
        assert len(factors) == k
        assert product(factors) * unit == q


def test_factor_rejects_bad_input():
    with pytest.raises(ValueError):
        factor_with_unit(Polynomial())
    with pytest.raises(ValueError):
        factor_with_unit(x(1, 2) * x(1, 2))


def test_zero_test_bounds():
    q = x(1, 2) * x(2, 3) - x(1, 3) * x(3, 3)
    z = is_zero_on_subspace(q, {(1, 2), (1, 3)}, trials=3)
    assert z.zero and z.failure_bound < 2 ** -40
    assert not is_zero_on_subspace(q, {(1, 2)}, trials=3).zero
    with pytest.raises(ValueError):
        is_zero_on_subspace(q, (), trials=0)


def test_blackbox_restriction_matches_symbolic():
    rng = random.Random(5)
    d = build_diagram((1, 2, 1, 2))
    for inv in all_invariants(d):
        q = inv.symbolic()
        for _ in range(10):
            fixed = {v: rng.choice([0, 1]) for v in rng.sample(sorted(inv.variables), 3)}
            zeros = set(rng.sample(sorted(set(inv.variables) - set(fixed)), 2))
            want = q.substitute(fixed).substitute({v: 0 for v in zeros}).is_zero()
            assert is_zero_on_subspace(restrict(inv, fixed), zeros).zero == want


def test_capacity_error():
    d = build_diagram((3, 4, 2, 1, 2, 4, 3, 1))
    big = max(all_invariants(d), key=lambda inv: inv.N)
    assert big.N > 14
    with pytest.raises(CapacityError):
        big.symbolic()


def test_weierstrass_section_1212():
    d = build_diagram((1, 2, 1, 2))
    for ct in enumerate_component_tableaux(d):
        rep = weierstrass_check(ct)
        assert rep["ok"] and rep["distinct"]
        hit = {tuple(r["coordinate"]) for r in rep["invariants"]}
        assert hit == set(ct.Y)


def test_horizontal_lines_after_translation():
    # two height-one pairs implemented to the right; the lines must re-route
    d = build_diagram((2, 1, 1, 1, 2))
    P = pairs_by_label(d)
    st = implement_pair(start(d), P["C2,C3"], 3)
    st = implement_pair(st, P["C3,C4"], 4)
    h = horizontal_monomial_check(st, P["C1,C5"])
    assert h["ok"], h
    assert h["black_count"] == h["degree"] == 5
    assert not set(map(tuple, h["lines"])) & set(excluded_roots_reverse(st))
