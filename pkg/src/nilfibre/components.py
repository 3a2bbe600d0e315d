"""Component tableaux T^C(infinity) built from the string and batch rules.

Rows are processed top-down and, within a row, columns left to right.  The
entry heading an i-string at (C_r, R_s) tries to enter the first empty box
of C_{r+1}, at row s + m.  For m = 0 it moves across.  For m >= 1 it may
descend only if the surrounding pairs of heights s, ..., s+m-1 all exist and
are still free; otherwise (or if another member of the batch is chosen) the
string stops and is joined by a label-1 line to the numerically lowest
(that is, topmost) entry of C_{r+1} not yet joined by such a line.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagram import build_diagram, surrounding_pair
from .reverse import STANDARD, excluded_roots_reverse, push_lower_parts
from .tableau import Cell, Line, RedSet, Tableau, initial_tableau


@dataclass(frozen=True)
class ComponentTableau:
    diagram: object
    infinity: Tableau
    collapsed: Tableau
    per_column: dict
    lines_one: tuple
    lines_star: tuple
    used_pairs: dict
    choice_trace: tuple

    def red_set(self):
        return RedSet.of([ln.j for ln in self.lines_star], red_order_values(self))

    @property
    def S(self):
        return frozenset(ln.coordinate for ln in self.lines_one)

    @property
    def Y(self):
        return frozenset(ln.coordinate for ln in self.lines_star)


class _Build:
    __slots__ = ("cols", "used", "joined", "ones", "stars", "per_col", "usage", "trace")

    def __init__(self, d):
        self.cols = [list(d.column_entries(r)) for r in range(1, d.k + 1)]
        self.used = set()
        self.joined = set()
        self.ones = []
        self.stars = []
        self.per_col = {}
        self.usage = {}
        self.trace = []

    def copy(self):
        b = _Build.__new__(_Build)
        b.cols = [list(c) for c in self.cols]
        b.used = set(self.used)
        b.joined = set(self.joined)
        b.ones = list(self.ones)
        b.stars = list(self.stars)
        b.per_col = {k: dict(v, J=list(v["J"])) for k, v in self.per_col.items()}
        b.usage = dict(self.usage)
        b.trace = list(self.trace)
        return b


def _stop(d, b, r, s, i):
    nxt = r + 1
    for row in range(1, d.height(nxt) + 1):
        j = d.entry_of_box[(nxt, row)]
        if j not in b.joined:
            b.joined.add(j)
            b.ones.append((i, j))
            return


def _descend(d, b, r, s, i, pairs):
    nxt = r + 1
    h = d.height(nxt)
    for p in pairs:
        assert p not in b.used, "pair consumed twice"
        b.used.add(p)
        b.usage[p] = (i, r, s)
    landing = len(b.cols[nxt - 1]) + 1
    if nxt not in b.per_col:
        assert landing == h + 1
        rows = list(range(s, h + 1))
        J = [d.entry_of_box[(nxt, q)] for q in rows]
        b.per_col[nxt] = {"h": h, "m": len(J), "mPrime": 1, "J": J}
        for j in J:
            b.stars.append((i, j))
    else:
        assert landing == s + 1, "only single-row descents may follow the first"
        info = b.per_col[nxt]
        info["mPrime"] += 1
        b.stars.append((i, d.entry_of_box[(nxt, h)]))
    b.cols[nxt - 1].append(i)
    b.trace.append((i, r, s, len(pairs)))


def _run(d, b, s, r, out):
    while True:
        if r >= d.k:
            # row finished: every pair of height <= s must be spent
            if any(p.height <= s and p not in b.used for p in d.pairs):
                return
            s, r = s + 1, 1
            if s > max(len(c) for c in b.cols):
                if len(b.used) == d.g:
                    out.append(b)
                return
            continue
        col = b.cols[r - 1]
        if len(col) < s:
            r += 1
            continue
        i = col[s - 1]
        m = len(b.cols[r]) + 1 - s
        if m == 0:
            b.cols[r].append(i)
            r += 1
            continue
        pairs = [surrounding_pair(d, s + t, r) for t in range(m)]
        if all(p is not None and p not in b.used for p in pairs):
            alt = b.copy()
            _descend(d, alt, r, s, i, pairs)
            _run(d, alt, s, r + 1, out)
        _stop(d, b, r, s, i)
        r += 1


def _finish(d, b):
    t0 = initial_tableau(d)
    red = {j for info in b.per_col.values() for j in info["J"]}
    inf_cols = []
    for r, col in enumerate(b.cols, start=1):
        h = d.height(r)
        inf_cols.append(tuple(Cell(v, q < h and v in red) for q, v in enumerate(col)))
    infinity = Tableau(d, tuple(inf_cols), "component-infinity")
    collapsed = Tableau(d, tuple(tuple(Cell(c.entry, c.entry in red) for c in col) for col in t0.columns),
                        "component-collapsed")
    per_column = {k: {**v, "J": tuple(v["J"])} for k, v in sorted(b.per_col.items())}
    return ComponentTableau(
        d, infinity, collapsed, per_column,
        tuple(Line(i, j, "one") for i, j in b.ones),
        tuple(Line(i, j, "star") for i, j in b.stars),
        dict(b.usage), tuple(b.trace),
    )


def enumerate_all(d):
    """Every completed tableau, one per admissible branch (no deduplication)."""
    if not hasattr(d, "pairs"):
        d = build_diagram(d)
    out = []
    _run(d, _Build(d), 1, 1, out)
    return [_finish(d, b) for b in out]


def enumerate_component_tableaux(d):
    seen = {}
    for ct in enumerate_all(d):
        seen.setdefault(ct.red_set().values, ct)
    return sorted(seen.values(), key=lambda ct: (red_order_values(ct), ct.red_set().values))


def check_red_map_injective(d):
    cts = enumerate_all(d)
    keys = [ct.red_set().values for ct in cts]
    return len(keys) == len(set(keys))


def collapse(ct):
    return ct.collapsed


def red_order_values(ct):
    out = []
    for col in sorted(ct.per_column):
        info = ct.per_column[col]
        out.extend([info["J"][-1]] * info["mPrime"])
        out.extend(reversed(info["J"][:-1]))
    return tuple(out)


def red_order(ct):
    """Ordered Red Set and the complete sequence of pairs it induces."""
    from .reverse import psi_steps
    return RedSet.of(red_order_values(ct)), [p for p, _ in psi_steps(ct)]


def auxiliary_tableau(d, i, j):
    """T with a black j placed directly under i, the original j turned red."""
    t = initial_tableau(d)
    cols = [list(c) for c in t.columns]
    rj, sj = d.box_of_entry[j]
    cols[rj - 1][sj - 1] = Cell(j, True)
    ri, si = d.box_of_entry[i]
    push_lower_parts(cols, ri, si, [Cell(j)], STANDARD, None, first_inclusive=True)
    return t.with_columns(cols, "reverse")


def excluded_roots_component(ct):
    out = set()
    for ln in ct.lines_star:
        out |= excluded_roots_reverse(auxiliary_tableau(ct.diagram, ln.i, ln.j))
    return frozenset(out)
