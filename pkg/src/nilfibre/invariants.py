"""BS invariants: construction, restriction, identity testing, factorisation.

For a neighbouring pair (C, C') of height s we take the sub-matrix on the
entries of the columns [C, C'] (size N), form c*Id plus the generic
nilradical matrix of that sub-parabolic, and keep the (N-s) x (N-s) minor
on the first N-s rows and last N-s columns.  The invariant is the
coefficient of c^e in that minor, e = N - s - degree, which is its lowest
non-vanishing power of c.  Signs are fixed so the monomial of horizontal
composite lines through the rectangle has coefficient +1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .diagram import invariant_degree
from .linalg import MERSENNE_61, det_bareiss, det_mod, interpolate_coefficient
from .polynomial import C_VAR, Polynomial, product
from .tableau import StructuralError

SYMBOLIC_BOUND = 14
DEFAULT_TRIALS = 3


class CapacityError(RuntimeError):
    pass


def distinguished_monomial(d, p):
    """Variables of the horizontal composite lines through R^s cap [C, C']."""
    out = []
    for t in range(1, p.height + 1):
        row = [d.entry_of_box[(r, t)] for r in range(p.left, p.right + 1) if d.height(r) >= t]
        out.extend(zip(row, row[1:]))
    return tuple(sorted(out))


class BSInvariant:
    """Black-box BS invariant; ``symbolic()`` materialises it when small enough."""

    def __init__(self, d, p):
        self.diagram = d
        self.pair = p
        lo = d.entry_of_box[(p.left, 1)]
        hi = d.entry_of_box[(p.right, p.height)]
        vals = list(range(lo, hi + 1))
        s = p.height
        self.N = len(vals)
        self.size = self.N - s
        self.rows = vals[: self.size]
        self.cols = vals[s:]
        self.degree = invariant_degree(d, p)
        self.c_power = self.size - self.degree
        self.variables = tuple(sorted((a, b) for a in self.rows for b in self.cols if d.in_nilradical(a, b)))
        self.distinguished = distinguished_monomial(d, p)
        indicator = {v: 1 for v in self.distinguished}
        raw = self._raw(indicator)
        if raw not in (1, -1):
            raise StructuralError(f"distinguished monomial has coefficient {raw} in I for {p.label()}")
        self.sign = raw
        self._symbolic = None

    def _matrix(self, point, cval):
        d = self.diagram
        m = []
        for a in self.rows:
            row = []
            for b in self.cols:
                if a == b:
                    row.append(cval)
                elif a < b and d.in_nilradical(a, b):
                    row.append(point.get((a, b), 0))
                else:
                    row.append(0)
            m.append(row)
        return m

    def _raw(self, point, modulus=None):
        det = (lambda m: det_mod(m, modulus)) if modulus else det_bareiss
        if self.c_power == 0:
            return det(self._matrix(point, 0))
        values = [det(self._matrix(point, c)) for c in range(self.size + 1)]
        return interpolate_coefficient(values, self.c_power, modulus)

    def evaluate(self, point, modulus=None):
        v = self.sign * self._raw(point, modulus)
        return v % modulus if modulus else v

    def symbolic(self, bound=SYMBOLIC_BOUND):
        if self._symbolic is None:
            if self.N > bound:
                raise CapacityError(f"sub-matrix size {self.N} exceeds symbolic bound {bound}; use blackbox mode")
            self._symbolic = self._expand()
        return self._symbolic

    def _expand(self):
        d = self.diagram
        n = self.size
        e = self.c_power
        entries = []
        for a in self.rows:
            row = []
            for b in self.cols:
                if a == b:
                    row.append(Polynomial.var(C_VAR))
                elif d.in_nilradical(a, b):
                    row.append(Polynomial.var((a, b)))
                else:
                    row.append(None)
            entries.append(row)
        memo = {}

        def minor(i, mask):
            if i == n:
                return Polynomial.const(1)
            if mask in memo:
                return memo[mask]
            total = Polynomial()
            before = 0
            for q in range(n):
                if mask >> q & 1:
                    continue
                ent = entries[i][q]
                if ent is not None:
                    sub = minor(i + 1, mask | (1 << q))
                    if not sub.is_zero():
                        term = ent.mul_truncated(sub, e)
                        total = total + (term if before % 2 == 0 else -term)
                before += 1
            memo[mask] = total
            return total

        full = minor(0, 0)
        coeffs = full.c_coefficients()
        low = min(coeffs) if coeffs else None
        if low != e:
            raise StructuralError(f"lowest c-power {low} differs from expected {e}")
        return coeffs[e] * self.sign

    def __repr__(self):
        return f"BSInvariant({self.diagram.composition}, {self.pair.label()}, h={self.pair.height})"


def bs_invariant(d, p, mode="blackbox"):
    inv = BSInvariant(d, p)
    return inv.symbolic() if mode == "symbolic" else inv


def all_invariants(d):
    return [BSInvariant(d, p) for p in d.pairs]


# -------------------------------------------------------------- restriction


@dataclass
class Restricted:
    """A black box with some coordinates pinned to integer values."""

    base: object
    fixed: dict

    @property
    def variables(self):
        return tuple(v for v in self.base.variables if v not in self.fixed)

    @property
    def degree(self):
        return self.base.degree

    @property
    def homogeneous(self):
        return all(v == 0 for v in self.fixed.values())

    def evaluate(self, point, modulus=None):
        merged = dict(point)
        merged.update(self.fixed)
        return self.base.evaluate(merged, modulus)


def restrict(q, sub):
    """Apply a substitution {coordinate: value}; coordinates not listed are kept."""
    if isinstance(q, Polynomial):
        return q.substitute(sub)
    if isinstance(q, Restricted):
        fixed = dict(q.fixed)
        fixed.update(sub)
        return Restricted(q.base, fixed)
    return Restricted(q, dict(sub))


def parse_substitution(text):
    out = {}
    for item in filter(None, (s.strip() for s in text.split(";"))):
        lhs, rhs = item.split("=")
        lhs = lhs.strip().lstrip("x")
        i, j = lhs.split(",")
        out[(int(i), int(j))] = int(rhs)
    return out


@dataclass(frozen=True)
class ZeroTest:
    zero: bool
    failure_bound: float
    trials: int
    seed: int
    modulus: int


def is_zero_on_subspace(q, excluded, trials=DEFAULT_TRIALS, seed=0, modulus=MERSENNE_61):
    """Schwartz-Zippel test of q restricted to {x : x_e = 0 for e in excluded}."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = random.Random(seed)
    excluded = set(excluded)
    if isinstance(q, Polynomial):
        variables = [v for v in q.variables() if v != C_VAR]
        deg = max(q.degree(), 0)
    else:
        variables = list(q.variables)
        deg = q.degree
    free = [v for v in variables if v not in excluded]
    for _ in range(trials):
        point = {v: rng.randrange(modulus) for v in free}
        if q.evaluate(point, modulus) % modulus:
            return ZeroTest(False, 0.0, trials, seed, modulus)
    return ZeroTest(True, (deg / modulus) ** trials, trials, seed, modulus)


def interpolate_multilinear(func, variables):
    """Recover a polynomial multilinear in ``variables`` from its values on {0,1}^k."""
    k = len(variables)
    values = {}
    for mask in range(1 << k):
        values[mask] = func({variables[t]: 1 for t in range(k) if mask >> t & 1})
    # Moebius inversion over the subset lattice
    coef = dict(values)
    for t in range(k):
        for mask in range(1 << k):
            if mask >> t & 1:
                coef[mask] -= coef[mask ^ (1 << t)]
    terms = {}
    for mask, c in coef.items():
        if c:
            mono = tuple(sorted((variables[t], 1) for t in range(k) if mask >> t & 1))
            terms[mono] = c
    return Polynomial(terms)


def linearise(inv, S, Y):
    """I with S coordinates set to 1, Y kept, everything else set to 0."""
    ys = [v for v in inv.variables if v in Y]
    base = {v: 1 for v in inv.variables if v in S}

    def f(point):
        merged = dict(base)
        merged.update(point)
        return inv.evaluate(merged)

    return interpolate_multilinear(f, ys)


def weierstrass_check(ct, invariants=None):
    d = ct.diagram
    invariants = invariants or all_invariants(d)
    S, Y = ct.S, ct.Y
    rows = []
    hit = []
    ok = True
    for inv in invariants:
        img = linearise(inv, S, Y)
        single = None
        if len(img.terms) == 1:
            (mono, c), = img.terms.items()
            if len(mono) == 1 and c in (1, -1):
                single = (mono[0][0], c)
        if single is None:
            ok = False
        else:
            hit.append(single[0])
        rows.append({"pair": inv.pair.label(), "height": inv.pair.height, "image": str(img),
                     "coordinate": list(single[0]) if single else None,
                     "sign": single[1] if single else None})
    distinct = len(set(hit)) == len(hit) == len(invariants)
    return {"ok": ok and distinct, "distinct": distinct, "invariants": rows}


# ----------------------------------------------------------- factorisation


def _separable(f, a, b):
    fa, fb = f.derivative(a), f.derivative(b)
    return f * fa.derivative(b) == fa * fb


def factor_with_unit(q):
    """Split a multilinear polynomial into irreducible factors on disjoint variables.

    Two variables belong to different factors exactly when
    f * d2f/dadb == df/da * df/db, so the interaction graph joins every pair
    failing that identity and its connected components give the factors.
    """
    if not isinstance(q, Polynomial):
        raise TypeError("symbolic polynomial required")
    if q.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    if not q.is_multilinear() or C_VAR in q.variables():
        raise ValueError("polynomial is not multilinear in the coordinates")
    variables = q.variables()
    parent = {v: v for v in variables}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for x in range(len(variables)):
        for y in range(x + 1, len(variables)):
            a, b = variables[x], variables[y]
            if find(a) != find(b) and not _separable(q, a, b):
                parent[find(a)] = find(b)
    groups = {}
    for v in variables:
        groups.setdefault(find(v), []).append(v)
    blocks = sorted((sorted(g) for g in groups.values()), key=lambda g: g[0])

    anchor = min(q.terms)
    factors = []
    for block in blocks:
        bs = set(block)
        outside = tuple((v, e) for v, e in anchor if v not in bs)
        terms = {}
        for m, c in q.terms.items():
            if tuple((v, e) for v, e in m if v not in bs) == outside:
                inner = tuple((v, e) for v, e in m if v in bs)
                terms[inner] = terms.get(inner, 0) + c
        g = Polynomial(terms)
        cont = g.content()
        lead = g.sorted_terms()[0][1]
        g = Polynomial({m: c // cont * (1 if lead > 0 else -1) for m, c in g.terms.items()})
        factors.append(g)
    prod = product(factors)
    m0, c0 = next(iter(prod.terms.items()))
    unit, rem = divmod(q.terms.get(m0, 0), c0)
    if rem or prod * unit != q:
        raise ArithmeticError("factor reconstruction failed")
    return unit, factors


def multilinear_factor(q):
    return factor_with_unit(q)[1]


# ------------------------------------------------------ non-vanishing check


def _rectangle_lines(t, tz, p):
    lines = {}
    for row in range(1, p.height + 1):
        chain = [t.cell(*tz.left_boundary[row - 1]).entry]
        chain += [t.cell(r, q).entry for r, q in tz.left_boxes if q == row and not t.cell(r, q).red]
        lines.update(zip(chain, chain[1:]))
    return lines


def _rotate(phi, t, k, X):
    # k recoloured in its row and a black k placed one row lower, pushed
    # against i'.  Lines a->k, k->b, i'->j' become i'->k with the tails b, j'
    # shared between a and k, preferring a->b, k->j'.
    inverse = {j: i for i, j in phi.items()}
    if k not in inverse:
        return
    r, q = t.black_position(k)
    a = inverse[k]
    left = [t.cell(c, q).entry for c in range(r - 1, 0, -1) if t.height(c) >= q]
    left = [e for e in left if e != a]
    if not left:
        return
    i2 = left[0]
    b = phi.pop(k, None)
    j2 = phi.pop(i2, None)
    del phi[a]
    phi[i2] = k
    for x, y in ((b, j2), (j2, b)):
        tails = {a: x, k: y}
        if not any(v is not None and (s, v) in X for s, v in tails.items()):
            break
    phi.update({s: v for s, v in tails.items() if v is not None})


def _exchange(phi, X, d):
    # translation can slide an end point under a red copy of the start point;
    # such a line trades targets with another line when both stay admissible
    def fine(i, j):
        return (i, j) not in X and d.in_nilradical(i, j)

    for i in sorted(phi):
        if fine(i, phi[i]):
            continue
        for i2 in sorted(phi):
            if i2 != i and fine(i, phi[i2]) and fine(i2, phi[i]):
                phi[i], phi[i2] = phi[i2], phi[i]
                break


def horizontal_lines(state, p, mode=None):
    """Degree-many disjoint lines of the trapezium, carried from the left rectangle
    through every implementation step of ``state``.

    Start and end points never move.  After each substitution a line that has
    become excluded exchanges its target with the line leaving the entry which
    the newly placed black was pushed against.  Returns (trapezium, lines, ok).
    """
    from .reverse import STANDARD, excluded_roots_reverse, implement_pair, start, trapezium

    mode = mode or STANDARD
    d = state.diagram
    tz = trapezium(state, p)
    if tz.implemented:
        raise ValueError(f"{p.label()} already implemented; the check does not apply")
    cur = start(d)
    phi = _rectangle_lines(cur.tableau, trapezium(cur, p), p)
    for q, col, k in state.steps:
        cur = implement_pair(cur, q, col, mode, enforce_hidden_rule=False)
        X = excluded_roots_reverse(cur)
        if any((i, j) in X for i, j in phi.items()):
            _rotate(phi, cur.tableau, k, X)
            _exchange(phi, X, d)
    return tz, tuple(sorted(phi.items()))


def horizontal_monomial_check(state, p, inv=None, mode=None):
    from .reverse import excluded_roots_reverse

    d = state.diagram
    inv = inv or BSInvariant(d, p)
    tz, lines = horizontal_lines(state, p, mode)
    X = excluded_roots_reverse(state)
    bad = [v for v in lines if v in X or not d.in_nilradical(*v)]
    coeff = inv.evaluate({v: 1 for v in lines}) if not bad else 0
    return {
        "ok": not bad and coeff != 0 and len(lines) == inv.degree,
        "lines": [list(v) for v in lines],
        "coefficient": coeff,
        "black_count": tz.black_count,
        "degree": inv.degree,
        "excluded_or_levi": [list(v) for v in bad],
    }
