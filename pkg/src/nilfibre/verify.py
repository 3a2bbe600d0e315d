"""Property suites over components and reverse constructions.

Every check yields a flat record {composition, redSet, check, ok, detail} so
that reports from many compositions can be merged and sorted deterministically.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

from .components import (
    check_red_map_injective,
    enumerate_all,
    enumerate_component_tableaux,
    excluded_roots_component,
    red_order,
)
from .diagram import build_diagram, compositions
from .geometry import (
    coincidence_check,
    covering_check,
    line_geometry_check,
    tangent_rank_check,
    xyz_properties,
)
from .invariants import (
    DEFAULT_TRIALS,
    all_invariants,
    horizontal_monomial_check,
    is_zero_on_subspace,
    weierstrass_check,
)
from .reverse import (
    EXTREME,
    STANDARD,
    build_for_component,
    composite_line_count,
    excluded_roots_reverse,
    explore,
    trapezium,
)
from .tableau import StructuralError

SYMBOLIC_CROSSCHECK_N = 6


def _record(comp, rs, check, ok, detail=None):
    return {
        "composition": list(comp),
        "redSet": list(rs) if rs is not None else None,
        "check": check,
        "ok": bool(ok),
        "detail": detail,
    }


def _vanishing(invs, X, trials, seed, symbolic):
    bad = []
    bound = 0.0
    for inv in invs:
        z = is_zero_on_subspace(inv, X, trials, seed)
        bound = max(bound, z.failure_bound)
        if not z.zero:
            bad.append(inv.pair.label())
        elif symbolic:
            q = inv.symbolic().substitute({v: 0 for v in X})
            if q.terms:
                bad.append(inv.pair.label() + " (symbolic)")
    return bad, bound


def component_records(ct, invs, mode=STANDARD, trials=DEFAULT_TRIALS, seed=0, symbolic=False):
    d = ct.diagram
    comp = d.composition.parts
    key = ct.red_set().values
    out = []
    try:
        rs = build_for_component(ct, mode)
    except StructuralError as exc:
        return [_record(comp, key, "psi", False, str(exc))]
    out.append(_record(comp, key, "psi", rs.red_set() == ct.red_set()))
    S, Y = ct.S, ct.Y
    for tag, X in (("component", excluded_roots_component(ct)), ("reverse", excluded_roots_reverse(rs))):
        xyz = xyz_properties(X, Y, S)
        out.append(_record(comp, key, f"xyz-{tag}", xyz["ok"], _clean(xyz)))
        cov = covering_check(S, set(X) - Y, Y)
        out.append(_record(comp, key, f"covering-{tag}", cov["ok"], _clean(cov)))
        tr = tangent_rank_check(d, X, S, Y)
        out.append(_record(comp, key, f"tangent-{tag}", tr["ok"], _clean(tr)))
        if tag == "reverse":
            trb = tangent_rank_check(d, X, S, Y, borel=True)
            out.append(_record(comp, key, "tangent-borel", trb["ok"], _clean(trb)))
    co = coincidence_check(ct, rs)
    out.append(_record(comp, key, "coincidence", co["ok"], {"union_size": co["union_size"]}))
    lg = line_geometry_check(rs, ct)
    out.append(_record(comp, key, "line-geometry", lg["ok"], _clean(lg)))
    w = weierstrass_check(ct, invs)
    out.append(_record(comp, key, "weierstrass", w["ok"], _clean(w)))
    bad, bound = _vanishing(invs, excluded_roots_reverse(rs), trials, seed, symbolic)
    out.append(_record(comp, key, "vanishing", not bad, {"nonzero": bad, "failure_bound": bound}))
    if mode == EXTREME:
        std = build_for_component(ct, STANDARD)
        extra = set(excluded_roots_reverse(rs)) - set(excluded_roots_reverse(std))
        cov = covering_check(S, extra)
        out.append(_record(comp, key, "extreme-extra-covered", cov["ok"],
                           {"extra": sorted(map(list, extra)), "uncovered": cov["uncovered"]}))
    return out


def sequence_records(d, seq, invs=None, trials=DEFAULT_TRIALS, seed=0, symbolic=False):
    """Walk every branch of one complete sequence and check each stage."""
    comp = d.composition.parts
    invs = {inv.pair: inv for inv in (invs or all_invariants(d))}
    ex = explore(d, seq)
    parent = {e.target: e.source for e in ex.edges if e.target is not None}
    label = ";".join(p.label() for p in seq)
    problems = {k: [] for k in ("monotone", "trapezium", "composite-count", "black-count",
                                "drop", "horizontal", "vanishing")}
    bound = 0.0
    for nd in ex.nodes:
        st = nd.state
        X = excluded_roots_reverse(st)
        where = [p.label() for p in st.implemented]
        if nd.index in parent and not excluded_roots_reverse(ex.nodes[parent[nd.index]].state) <= X:
            problems["monotone"].append(where)
        for p in d.pairs:
            try:
                tz = trapezium(st, p)
            except AssertionError as exc:
                problems["trapezium"].append([where, p.label(), str(exc)])
                continue
            if composite_line_count(tz) != tz.black_count:
                problems["composite-count"].append([where, p.label()])
            deg = invs[p].degree
            if not tz.implemented:
                if tz.black_count != deg:
                    problems["black-count"].append([where, p.label(), tz.black_count, deg])
                h = horizontal_monomial_check(st, p, invs[p])
                if not h["ok"]:
                    problems["horizontal"].append([where, p.label(), h["lines"]])
            elif st.implemented[-1] == p and tz.black_count != deg - 1:
                problems["drop"].append([where, p.label(), tz.black_count, deg])
        if nd.stage == len(seq):
            bad, b = _vanishing(invs.values(), X, trials, seed, symbolic)
            bound = max(bound, b)
            if bad:
                problems["vanishing"].append([where, bad])
    leaves = len(ex.leaves(len(seq)))
    out = []
    for check, found in problems.items():
        detail = {"sequence": label, "nodes": len(ex.nodes), "leaves": leaves, "problems": found[:5]}
        if check == "vanishing":
            detail["failure_bound"] = bound
        out.append(_record(comp, None, f"sequence-{check}", not found, detail))
    return out


def verify_composition(comp, red_set=None, mode=STANDARD, trials=DEFAULT_TRIALS, seed=0,
                       symbolic=None, sequences=True):
    d = build_diagram(comp)
    n = d.n
    if symbolic is None:
        symbolic = n <= SYMBOLIC_CROSSCHECK_N
    invs = all_invariants(d)
    cts = enumerate_component_tableaux(d)
    out = []
    raw = enumerate_all(d)
    out.append(_record(d.composition.parts, None, "red-map-injective", check_red_map_injective(d),
                       {"components": len(cts), "branches": len(raw)}))
    if red_set is not None:
        want = tuple(sorted(red_set))
        cts = [ct for ct in cts if ct.red_set().values == want]
        if not cts:
            raise LookupError(f"no component with Red Set {want}")
    for ct in cts:
        out.extend(component_records(ct, invs, mode, trials, seed, symbolic))
    if sequences and red_set is None:
        seqs = sorted({tuple(red_order(ct)[1]) for ct in cts})
        for seq in seqs:
            out.extend(sequence_records(d, seq, invs, trials, seed, symbolic))
    return out


def _one(args):
    comp, mode, trials, seed = args
    return verify_composition(comp, mode=mode, trials=trials, seed=seed)


def verify_all(max_n, mode=STANDARD, trials=DEFAULT_TRIALS, seed=0, jobs=1):
    work = [(tuple(c), mode, trials, seed) for n in range(1, max_n + 1) for c in compositions(n)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            chunks = list(pool.map(_one, work, chunksize=8))
    else:
        chunks = [_one(w) for w in work]
    return merge(r for chunk in chunks for r in chunk)


def merge(records):
    def key(r):
        seq = (r["detail"] or {}).get("sequence", "") if isinstance(r["detail"], dict) else ""
        return (sum(r["composition"]), r["composition"], r["redSet"] or [], r["check"], seq)

    return sorted(records, key=key)


def summary(records):
    failed = [r for r in records if not r["ok"]]
    return {"ok": not failed, "checks": len(records), "failed": len(failed)}


def _clean(obj):
    # tuples and frozensets into JSON-friendly lists
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [_clean(v) for v in obj]
        return sorted(items) if isinstance(obj, (set, frozenset)) else items
    return obj
