"""Command line entry point: nilfibre <command> -c <composition> [options]."""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from pathlib import Path

from . import __version__
from .components import enumerate_component_tableaux, excluded_roots_component
from .diagram import CompositionError, build_diagram, parse_composition
from .invariants import (
    CapacityError,
    DEFAULT_TRIALS,
    all_invariants,
    factor_with_unit,
    is_zero_on_subspace,
    parse_substitution,
    restrict,
)
from .reverse import EXTREME, STANDARD, build_for_component, excluded_roots_reverse, explore
from .tableau import render, tableau_to_json
from .verify import merge, summary, verify_all, verify_composition

DEFAULT_SEED = 1729
SEED_ENV = "NILFIBRE_SEED"

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ----------------------------------------------------------------- parsing


def parse_pair(d, text):
    """'C2,C4' (or '2,4') -> the neighbouring pair with those columns."""
    bits = [b.strip().upper().lstrip("C") for b in text.strip().strip("()").split(",")]
    try:
        left, right = (int(b) for b in bits)
    except ValueError:
        raise UsageError(f"cannot read pair {text!r}") from None
    for p in d.pairs:
        if (p.left, p.right) == (left, right):
            return p
    raise UsageError(f"C{left},C{right} is not a neighbouring pair of {d.composition}")


def parse_sequence(d, text):
    return [parse_pair(d, item) for item in text.split(";") if item.strip()]


def parse_red_set(text):
    try:
        return tuple(sorted(int(v) for v in text.replace("(", "").replace(")", "").split(",") if v.strip()))
    except ValueError:
        raise UsageError(f"cannot read Red Set {text!r}") from None


def _coords(xs):
    return [list(x) for x in sorted(xs)]


def _seq_label(seq):
    return ";".join(p.label() for p in seq)


# -------------------------------------------------------------- documents


def component_document(ct):
    rs = ct.red_set()
    return {
        "redSet": list(rs.values),
        "multiplicities": {str(k): v for k, v in rs.multiplicities().items()},
        "linesOne": [[ln.i, ln.j] for ln in ct.lines_one],
        "linesStar": [[ln.i, ln.j] for ln in ct.lines_star],
        "excludedRoots": _coords(excluded_roots_component(ct)),
        "tableauInfinity": tableau_to_json(ct.infinity),
        "tableauCollapsed": tableau_to_json(ct.collapsed),
    }


def reverse_document(state):
    doc = tableau_to_json(state.tableau)
    doc["implemented"] = [p.label() for p in state.implemented]
    doc["steps"] = [{"pair": p.label(), "column": c, "value": v} for p, c, v in state.steps]
    doc["redSet"] = list(state.red_set().values)
    doc["excludedRoots"] = _coords(excluded_roots_reverse(state))
    return doc


def _text_component(ct):
    lines = [f"Red Set {ct.red_set()}",
             "  1-lines: " + " ".join(f"l{ln.i},{ln.j}" for ln in ct.lines_one),
             "  *-lines: " + " ".join(f"l{ln.i},{ln.j}" for ln in ct.lines_star),
             render(ct.collapsed)]
    return "\n".join(lines)


def _text_reverse(state):
    head = "implemented: " + (" ".join(p.label() for p in state.implemented) or "-")
    return "\n".join([f"Red Set {state.red_set()}", head, render(state.tableau),
                      "excluded: " + " ".join(f"x{i},{j}" for i, j in sorted(excluded_roots_reverse(state)))])


# ---------------------------------------------------------------- commands


def cmd_enum_components(args, d):
    cts = enumerate_component_tableaux(d)
    if args.format == "json":
        return [component_document(ct) for ct in cts], OK
    if args.format == "latex":
        return "\n\n".join(render(ct.collapsed, "latex") for ct in cts), OK
    head = f"{len(cts)} component tableaux for {d.composition}"
    return "\n\n".join([head] + [_text_component(ct) for ct in cts]), OK


def _mode(args):
    return EXTREME if args.extreme else STANDARD


def _component_for(d, red_set):
    for ct in enumerate_component_tableaux(d):
        if ct.red_set().values == red_set:
            return ct
    raise UsageError(f"no component tableau with Red Set {red_set}")


def cmd_reverse(args, d):
    mode = _mode(args)
    if args.red_set:
        ct = _component_for(d, parse_red_set(args.red_set))
        states = [build_for_component(ct, mode, args.alternative)]
    elif args.sequence:
        seq = parse_sequence(d, args.sequence)
        try:
            ex = explore(d, seq, mode)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        states = sorted(ex.leaves(len(seq)), key=lambda st: st.key())
    else:
        raise UsageError("reverse needs --sequence or --red-set")
    if args.format == "json":
        return [reverse_document(st) for st in states], OK
    if args.format == "latex":
        return "\n\n".join(render(st.tableau, "latex") for st in states), OK
    return "\n\n".join(_text_reverse(st) for st in states), OK


def cmd_invariant(args, d):
    invs = all_invariants(d)
    if args.pair:
        p = parse_pair(d, args.pair)
        invs = [inv for inv in invs if inv.pair == p]
    sub = parse_substitution(args.substitute) if args.substitute else {}
    docs = []
    for inv in invs:
        doc = {"pair": inv.pair.label(), "height": inv.pair.height, "degree": inv.degree,
               "minorSize": inv.size, "variables": len(inv.variables)}
        if args.symbolic:
            try:
                q = restrict(inv.symbolic(), sub)
            except CapacityError as exc:
                raise UsageError(str(exc)) from None
            doc["polynomial"] = q.to_json()
            doc["text"] = str(q)
            if q.terms and q.is_multilinear():
                unit, factors = factor_with_unit(q)
                doc["factors"] = [str(f) for f in factors]
                doc["unit"] = unit
        else:
            z = is_zero_on_subspace(restrict(inv, sub), (), args.trials, args.seed)
            doc["zero"] = z.zero
            doc["failureBound"] = z.failure_bound
        docs.append(doc)
    if args.format == "json":
        return docs, OK
    out = []
    for doc in docs:
        out.append(f"I{doc['height']}_{doc['pair']}  degree {doc['degree']}")
        if "text" in doc:
            out.append("  " + (doc["text"] or "0"))
            if doc.get("factors"):
                lead = "" if doc["unit"] == 1 else f"{doc['unit']} * "
                out.append("  factors: " + lead + " | ".join(doc["factors"]))
        else:
            out.append(f"  zero: {doc['zero']} (bound {doc['failureBound']:.3g})")
    return "\n".join(out), OK


def _factor_annotations(inv, source, target):
    """Factors of the invariant restricted to the source stage, and which vanish on the target."""
    X0 = excluded_roots_reverse(source)
    q = inv.symbolic().substitute({v: 0 for v in X0})
    if not q.terms:
        return {"restricted": "0", "factors": [], "vanishing": []}
    unit, factors = factor_with_unit(q)
    X1 = excluded_roots_reverse(target) if target is not None else frozenset()
    dead = [str(f) for f in factors if not f.substitute({v: 0 for v in X1}).terms]
    return {"restricted": str(q), "factors": [str(f) for f in factors], "vanishing": dead}


def cmd_factorize(args, d):
    if not args.sequence:
        raise UsageError("factorize needs --sequence")
    seq = parse_sequence(d, args.sequence)
    mode = _mode(args)
    try:
        ex = explore(d, seq, mode)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    invs = {inv.pair: inv for inv in all_invariants(d)}
    nodes = [{"id": nd.index, "stage": nd.stage, "redSet": list(nd.state.red_set().values),
              "implemented": [p.label() for p in nd.state.implemented],
              "leaf": nd.stage == len(seq)} for nd in ex.nodes]
    edges = []
    for e in ex.edges:
        src = ex.nodes[e.source].state
        tgt = ex.nodes[e.target].state if e.target is not None else None
        edge = {"source": e.source, "target": e.target, "pair": e.pair.label(),
                "choice": e.choice, "value": e.value}
        if e.rejected:
            edge["rejected"] = {"reason": e.rejected, "wouldBe": list(e.would_be)}
        else:
            try:
                edge.update(_factor_annotations(invs[e.pair], src, tgt))
            except CapacityError as exc:
                edge["factors"] = None
                edge["note"] = str(exc)
        edges.append(edge)
    leaves = sorted({tuple(n["redSet"]) for n in nodes if n["leaf"]})
    chart = {"composition": list(d.parts), "sequence": _seq_label(seq), "mode": mode,
             "nodes": nodes, "edges": edges, "leaves": [list(v) for v in leaves]}
    if args.format == "json":
        return chart, OK
    out = [f"flow chart for {d.composition}, sequence {chart['sequence']}"]
    for e in edges:
        src = nodes[e["source"]]
        head = f"  [{','.join(map(str, src['redSet'])) or '-'}] --{e['pair']}@C{e['choice']}--> "
        if "rejected" in e:
            out.append(head + f"rejected ({e['rejected']['reason']}), would be "
                       f"({','.join(map(str, e['rejected']['wouldBe']))})")
        else:
            tgt = nodes[e["target"]]
            facs = " | ".join(e.get("factors") or []) or "-"
            dead = " | ".join(e.get("vanishing") or []) or "-"
            out.append(head + f"[{','.join(map(str, tgt['redSet']))}]  factors: {facs}  vanishing: {dead}")
    out.append("leaves: " + " ".join("(" + ",".join(map(str, v)) + ")" for v in leaves))
    return "\n".join(out), OK


def cmd_verify(args, d):
    mode = _mode(args)
    if args.all_n:
        records = verify_all(args.all_n, mode, args.trials, args.seed, args.jobs)
    else:
        if d is None:
            raise UsageError("verify needs -c or --all-n")
        rs = parse_red_set(args.red_set) if args.red_set else None
        try:
            records = merge(verify_composition(d.parts, rs, mode, args.trials, args.seed,
                                               symbolic=True if args.symbolic else None))
        except LookupError as exc:
            raise UsageError(str(exc)) from None
    report = {"summary": summary(records), "seed": args.seed, "trials": args.trials,
              "mode": mode, "records": records}
    code = OK if report["summary"]["ok"] else FAILED
    if args.format == "json":
        return report, code
    out = []
    for r in records:
        rs = "(" + ",".join(map(str, r["redSet"])) + ")" if r["redSet"] else "-"
        out.append(f"{'PASS' if r['ok'] else 'FAIL'} {','.join(map(str, r['composition']))} {rs} {r['check']}")
    s = report["summary"]
    out.append(f"{s['checks'] - s['failed']}/{s['checks']} checks passed")
    return "\n".join(out), code


def cmd_render(args, d):
    fmt = {"text": "text", "latex": "latex", "json": "json"}[args.format]
    if args.red_set:
        ct = _component_for(d, parse_red_set(args.red_set))
        if args.which == "reverse":
            t = build_for_component(ct, _mode(args), args.alternative).tableau
        elif args.which == "infinity":
            t = ct.infinity
        else:
            t = ct.collapsed
    else:
        from .tableau import initial_tableau

        t = initial_tableau(d)
    if fmt == "json":
        return tableau_to_json(t), OK
    return render(t, fmt), OK


COMMANDS = {
    "enum-components": cmd_enum_components,
    "reverse": cmd_reverse,
    "invariant": cmd_invariant,
    "factorize": cmd_factorize,
    "verify": cmd_verify,
    "render": cmd_render,
}


# ------------------------------------------------------------------ driver


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-c", "--composition", help="e.g. 1,2,1,2")
    common.add_argument("--format", choices=("text", "json", "latex"), default="text")
    common.add_argument("--seed", type=int, default=None,
                        help=f"random seed (default ${SEED_ENV} or {DEFAULT_SEED})")
    common.add_argument("--extreme", action="store_true", help="extreme shifting")
    common.add_argument("--symbolic", action="store_true", help="expand invariants symbolically")
    common.add_argument("--runs-dir", help="persist output and a manifest under DIR/runs/")
    common.add_argument("-o", "--output", help="write the document here instead of stdout")

    ap = argparse.ArgumentParser(prog="nilfibre", description=__doc__)
    ap.add_argument("--version", action="version", version=f"nilfibre {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("enum-components", parents=[common], help="list component tableaux")
    p = sub.add_parser("reverse", parents=[common], help="reverse tableaux")
    p.add_argument("--sequence", help='complete sequence, e.g. "C1,C3;C2,C4"')
    p.add_argument("--red-set", help="build Psi of the component with this Red Set")
    p.add_argument("--alternative", action="store_true", help="decrease-then-increase order in Psi")
    p = sub.add_parser("invariant", parents=[common], help="BS invariants")
    p.add_argument("--pair", help="C2,C4; default all pairs")
    p.add_argument("--substitute", help='e.g. "x1,2=1;x1,3=0"')
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p = sub.add_parser("factorize", parents=[common], help="flow chart of a complete sequence")
    p.add_argument("--sequence")
    p = sub.add_parser("verify", parents=[common], help="run the property suite")
    p.add_argument("--all-n", type=int, metavar="N")
    p.add_argument("--red-set")
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p.add_argument("--jobs", type=int, default=1)
    p = sub.add_parser("render", parents=[common], help="draw a tableau")
    p.add_argument("--red-set")
    p.add_argument("--which", choices=("collapsed", "infinity", "reverse"), default="collapsed")
    p.add_argument("--alternative", action="store_true")
    return ap


def _dump(doc):
    if isinstance(doc, str):
        return doc if doc.endswith("\n") else doc + "\n"
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _persist(args, d, text):
    comp = "-".join(map(str, d.parts)) if d is not None else f"all-n{args.all_n}"
    where = Path(args.runs_dir) / "runs" / comp / f"{args.command}-{args.seed}"
    where.mkdir(parents=True, exist_ok=True)
    ext = {"json": "json", "latex": "tex", "text": "txt"}[args.format]
    out = where / f"output.{ext}"
    out.write_text(text)
    flags = {k: v for k, v in sorted(vars(args).items())
             if k not in ("command", "composition", "seed", "runs_dir", "output")}
    manifest = {
        "composition": list(d.parts) if d is not None else None,
        "command": args.command,
        "seed": args.seed,
        "flags": flags,
        "version": __version__,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "digests": {out.name: hashlib.sha256(text.encode()).hexdigest()},
    }
    (where / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return where


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.seed is None:
        try:
            args.seed = int(os.environ.get(SEED_ENV, DEFAULT_SEED))
        except ValueError:
            print(f"error: {SEED_ENV} must be an integer", file=sys.stderr)
            return USAGE
    try:
        d = build_diagram(parse_composition(args.composition)) if args.composition else None
        if d is None and not (args.command == "verify" and args.all_n):
            raise UsageError(f"{args.command} needs -c/--composition")
        doc, code = COMMANDS[args.command](args, d)
    except (UsageError, CompositionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    text = _dump(doc)
    if args.output:
        Path(args.output).write_text(text)
    else:
        try:
            sys.stdout.write(text)
            sys.stdout.flush()
        except BrokenPipeError:
            sys.stderr.close()
    if args.runs_dir:
        _persist(args, d, text)
    return code


if __name__ == "__main__":
    sys.exit(main())
