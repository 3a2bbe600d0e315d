"""Root-set properties, covering and tangent-space rank certificates."""

from __future__ import annotations

from .components import excluded_roots_component
from .linalg import pivot_columns, rank
from .reverse import excluded_roots_reverse


def xyz_properties(X, Y, S):
    X, Y, S = set(X), set(Y), set(S)
    rows = [i for i, _ in S]
    cols = [j for _, j in S]
    report = {
        "Y_not_in_X": sorted(Y - X),
        "S_meets_X": sorted(S & X),
        "rook": len(set(rows)) == len(rows) and len(set(cols)) == len(cols),
        "Z": sorted(X - Y),
    }
    report["ok"] = not report["Y_not_in_X"] and not report["S_meets_X"] and report["rook"]
    return report


def covers(S, z):
    i, j = z
    return any(a == i and k < j for a, k in S)


def covering_check(S, Z, Y=()):
    uncovered = sorted(z for z in Z if not covers(S, z))
    covered_y = sorted(y for y in Y if covers(S, y))
    return {"ok": not uncovered and not covered_y, "uncovered": uncovered, "covered_Y": covered_y}


def bracket_vectors(d, S, coords, borel=False):
    """Projections of [b, e] onto ``coords`` for b running over n (or b)."""
    index = {c: t for t, c in enumerate(coords)}
    n = d.n
    by_row, by_col = {}, {}
    for i, j in S:
        by_row.setdefault(i, []).append(j)
        by_col.setdefault(j, []).append(i)
    basis = [(a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1)]
    if borel:
        basis += [(a, a) for a in range(1, n + 1)]
    out = []
    for a, b in basis:
        vec = [0] * len(coords)
        # [E_ab, E_ij] = delta_bi E_aj - delta_ja E_ib
        for j in by_row.get(b, ()):
            t = index.get((a, j))
            if t is not None:
                vec[t] += 1
        for i in by_col.get(a, ()):
            t = index.get((i, b))
            if t is not None:
                vec[t] -= 1
        if any(vec):
            out.append(vec)
    return out


def tangent_rank_check(d, X, S, Y, borel=False):
    """Is u + n.e + Y the whole nilradical?  Exact rank over Q.

    u and Y are coordinate subspaces, so modulo them only the coordinates
    of Z = X minus Y need to be reached by the brackets.
    """
    X, Y = set(X), set(Y)
    Z = sorted(X - Y)
    vecs = bracket_vectors(d, S, Z, borel)
    r = rank(vecs) if Z else 0
    missing = []
    if r < len(Z):
        piv = set(pivot_columns(vecs, len(Z)))
        missing = [Z[t] for t in range(len(Z)) if t not in piv]
    m = len(d.nilradical)
    return {
        "ok": r == len(Z),
        "dim_m": m,
        "dim_u": m - len(X),
        "rank": m - len(X) + len(Y & set(d.nilradical)) + r,
        "deficit": len(Z) - r,
        "missing": missing,
        "codim": len(Y),
        "borel": borel,
    }


def coincidence_check(ct, rs):
    if ct.red_set() != rs.red_set():
        raise ValueError("Red Sets differ")
    X = set(excluded_roots_component(ct)) | set(excluded_roots_reverse(rs))
    Y, S = ct.Y, ct.S
    cov = covering_check(S, X - Y, Y)
    tr = tangent_rank_check(ct.diagram, X, S, Y)
    return {"ok": cov["ok"] and tr["ok"], "covering": cov, "tangent": tr, "union_size": len(X)}


def line_geometry_check(rs, ct):
    t = rs.tableau
    right = t.rightmost_positions()
    black = {c.entry: (r, s) for r, s, c in t.cells() if not c.red}
    X = excluded_roots_reverse(rs)
    stars = ct.Y
    problems = []
    lines = []
    for ln in ct.lines_one:
        i, j = ln.i, ln.j
        (ri, si), (rj, sj) = right[i], black[j]
        u = sum(1 for a, b in stars if a == i and b < j)
        drop = sj - si
        lines.append({"line": [i, j], "drop": drop, "stars_left": u})
        if not rj > ri or drop != u:
            problems.append({"line": [i, j], "drop": drop, "expected": u, "right_going": rj > ri})
    missing_stars = sorted(y for y in stars if y not in X)
    return {"ok": not problems and not missing_stars, "lines": lines, "problems": problems,
            "stars_not_excluded": missing_stars}
