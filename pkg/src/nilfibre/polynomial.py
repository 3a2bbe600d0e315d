"""Exact sparse multivariate polynomials with integer coefficients.

Variables are matrix coordinates ``(i, j)``; the auxiliary scalar c is the
reserved variable ``C_VAR``.  A monomial is a sorted tuple of
``(variable, exponent)`` pairs.
"""

from __future__ import annotations

import json
from math import gcd

C_VAR = (0, 0)


def _mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    out = dict(a)
    for v, e in b:
        out[v] = out.get(v, 0) + e
    return tuple(sorted(out.items()))


class Polynomial:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, c):
        return cls({(): c})

    @classmethod
    def var(cls, v):
        return cls({((v, 1),): 1})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, int):
            other = Polynomial.const(other)
        return isinstance(other, Polynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if isinstance(other, int):
            other = Polynomial.const(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Polynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, Polynomial) else Polynomial.const(-other))

    def __mul__(self, other):
        if isinstance(other, int):
            return Polynomial({m: c * other for m, c in self.terms.items()})
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial(out)

    __rmul__ = __mul__

    def mul_truncated(self, other, max_c):
        """Product dropping every term whose c-degree exceeds ``max_c``."""
        out = {}
        for m1, c1 in self.terms.items():
            d1 = _c_degree(m1)
            for m2, c2 in other.terms.items():
                if d1 + _c_degree(m2) > max_c:
                    continue
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial(out)

    def variables(self):
        return sorted({v for m in self.terms for v, _ in m})

    def degree(self, exclude_c=True):
        if not self.terms:
            return -1
        return max(sum(e for v, e in m if not (exclude_c and v == C_VAR)) for m in self.terms)

    def is_homogeneous(self):
        degs = {sum(e for v, e in m if v != C_VAR) for m in self.terms}
        return len(degs) <= 1

    def is_multilinear(self):
        return all(e == 1 for m in self.terms for v, e in m if v != C_VAR)

    def c_coefficients(self):
        """Map c-degree -> coefficient polynomial in the x variables."""
        out = {}
        for m, c in self.terms.items():
            k = _c_degree(m)
            rest = tuple((v, e) for v, e in m if v != C_VAR)
            out.setdefault(k, {})[rest] = c
        return {k: Polynomial(v) for k, v in sorted(out.items())}

    def substitute(self, values):
        """Replace variables by integers; variables absent from ``values`` are kept."""
        out = {}
        for m, c in self.terms.items():
            keep = []
            coef = c
            for v, e in m:
                if v in values:
                    coef *= values[v] ** e
                    if coef == 0:
                        break
                else:
                    keep.append((v, e))
            if coef:
                key = tuple(keep)
                out[key] = out.get(key, 0) + coef
        return Polynomial(out)

    def evaluate(self, point, modulus=None):
        total = 0
        for m, c in self.terms.items():
            t = c
            for v, e in m:
                t *= point.get(v, 0) ** e
                if modulus:
                    t %= modulus
            total += t
        return total % modulus if modulus else total

    def coefficient(self, monomial):
        return self.terms.get(tuple(sorted(monomial)), 0)

    def derivative(self, v):
        """Partial derivative in a variable of exponent <= 1 in every term."""
        out = {}
        for m, c in self.terms.items():
            for w, e in m:
                if w == v:
                    rest = tuple((x, f) for x, f in m if x != v)
                    if e > 1:
                        rest = tuple(sorted(rest + ((v, e - 1),)))
                    out[rest] = out.get(rest, 0) + c * e
        return Polynomial(out)

    def content(self):
        g = 0
        for c in self.terms.values():
            g = gcd(g, c)
        return g

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: (-sum(e for _, e in mc[0]), mc[0]))

    def to_json(self):
        return [{"coeff": c, "vars": [[v[0], v[1], e] if v != C_VAR else ["c", e] for v, e in m]}
                for m, c in self.sorted_terms()]

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            names = []
            for v, e in m:
                name = "c" if v == C_VAR else f"x{v[0]},{v[1]}"
                names.append(name if e == 1 else f"{name}^{e}")
            body = "*".join(names)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts).replace("+ -", "- ")


def _c_degree(m):
    for v, e in m:
        if v == C_VAR:
            return e
    return 0


def product(polys):
    out = Polynomial.const(1)
    for p in polys:
        out = out * p
    return out


def parse_var(text):
    text = text.strip().lstrip("x")
    i, j = text.split(",")
    return (int(i), int(j))
