"""Coloured tableaux shared by component and reverse constructions."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import NamedTuple

from .diagram import Diagram, build_diagram


class StructuralError(AssertionError):
    """A construction produced a tableau violating a structural lemma."""


class Cell(NamedTuple):
    entry: int
    red: bool = False

    def token(self):
        return f"r{self.entry}" if self.red else str(self.entry)


@dataclass(frozen=True)
class RedSet:
    """Multiset of red entries. Equality ignores presentation order."""

    values: tuple[int, ...]
    ordered: tuple[int, ...] = field(default=(), compare=False, hash=False)

    @classmethod
    def of(cls, items, ordered=None):
        items = tuple(items)
        return cls(tuple(sorted(items)), tuple(ordered) if ordered is not None else items)

    def __len__(self):
        return len(self.values)

    def multiplicities(self):
        return dict(sorted(Counter(self.values).items()))

    def __str__(self):
        shown = self.ordered or self.values
        return "(" + ",".join(str(v) for v in shown) + ")"


@dataclass(frozen=True)
class Line:
    i: int
    j: int
    label: str  # "one" or "star"

    @property
    def coordinate(self):
        return (self.i, self.j)


@dataclass(frozen=True)
class Tableau:
    """Columns are stored top-down and are always gap free."""

    diagram: Diagram
    columns: tuple[tuple[Cell, ...], ...]
    provenance: str = "base"

    @property
    def k(self):
        return len(self.columns)

    def column(self, r):
        return self.columns[r - 1]

    def height(self, r):
        return len(self.columns[r - 1])

    def black_height(self, r):
        col = self.columns[r - 1]
        for s in range(len(col), 0, -1):
            if not col[s - 1].red:
                return s
        return 0

    def cell(self, r, s):
        col = self.columns[r - 1]
        return col[s - 1] if 1 <= s <= len(col) else None

    def cells(self):
        for r, col in enumerate(self.columns, start=1):
            for s, c in enumerate(col, start=1):
                yield r, s, c

    @property
    def depth(self):
        return max((len(c) for c in self.columns), default=0)

    def row(self, s):
        return [(r, self.cell(r, s)) for r in range(1, self.k + 1) if self.cell(r, s)]

    def with_columns(self, columns, provenance=None):
        return Tableau(self.diagram, tuple(tuple(c) for c in columns), provenance or self.provenance)

    def black_position(self, value):
        for r, s, c in self.cells():
            if c.entry == value and not c.red:
                return (r, s)
        return None

    def rightmost_positions(self):
        """value -> (column, row) of its rightmost occurrence, any colour."""
        out = {}
        for r, s, c in self.cells():
            out[c.entry] = (r, s)
        return out


def initial_tableau(d):
    if not isinstance(d, Diagram):
        d = build_diagram(d)
    cols = [tuple(Cell(v) for v in d.column_entries(r)) for r in range(1, d.k + 1)]
    return Tableau(d, tuple(cols), "base")


def is_standard_with_multiplicities(t):
    for col in t.columns:
        for a, b in zip(col, col[1:]):
            if not a.entry < b.entry:
                return False
    for s in range(1, t.depth + 1):
        row = [c.entry for _, c in t.row(s)]
        if any(not a < b for a, b in zip(row, row[1:])):
            return False
    return True


def red_set(t):
    reds = [c.entry for _, _, c in t.cells() if c.red]
    return RedSet.of(reds)


def strings(t):
    """Group cells by value, ordered right to left.

    For reverse provenance the shape is checked: each leftward hop goes
    down exactly one row, every cell but the last is red and the last is
    the unique black cell.
    """
    groups = {}
    for r, s, c in t.cells():
        groups.setdefault(c.entry, []).append((r, s, c))
    out = {}
    for v in sorted(groups):
        cells = sorted(groups[v], key=lambda x: (-x[0], x[1]))
        if t.provenance == "reverse":
            blacks = [x for x in cells if not x[2].red]
            if len(blacks) != 1 or cells[-1] is not blacks[0]:
                raise StructuralError(f"value {v}: expected a single black cell ending its string")
            for (r1, s1, _), (r2, s2, _) in zip(cells, cells[1:]):
                if not (r2 < r1 and s2 == s1 + 1):
                    raise StructuralError(f"value {v}: string does not step one row down per hop")
        out[v] = [(r, s, c.red) for r, s, c in cells]
    return out


# ---------------------------------------------------------------- rendering


def render(t, mode="text"):
    if mode == "text":
        return _render_text(t)
    if mode in ("latex", "latex-array"):
        return _render_latex(t)
    if mode == "json":
        return json.dumps(tableau_to_json(t), sort_keys=True)
    raise ValueError(f"unknown render mode {mode!r}")


def _render_text(t):
    tokens = [[t.cell(r, s).token() if t.cell(r, s) else "" for r in range(1, t.k + 1)]
              for s in range(1, t.depth + 1)]
    heads = [f"C{r}" for r in range(1, t.k + 1)]
    width = max([len(h) for h in heads] + [len(x) for row in tokens for x in row])
    label_w = max(len(f"R{t.depth}"), 2)
    lines = [" " * label_w + "|" + "|".join(h.rjust(width) for h in heads)]
    for s, row in enumerate(tokens, start=1):
        lines.append(f"R{s}".ljust(label_w) + "|" + "|".join(x.rjust(width) for x in row))
    return "\n".join(lines) + "\n"


def _render_latex(t):
    spec = "c" * t.k
    lines = ["\\begin{array}{" + spec + "}"]
    for s in range(1, t.depth + 1):
        row = []
        for r in range(1, t.k + 1):
            c = t.cell(r, s)
            if c is None:
                row.append("")
            elif c.red:
                row.append("\\textcolor{red}{" + str(c.entry) + "}")
            else:
                row.append(str(c.entry))
        lines.append(" & ".join(row) + " \\\\")
    lines.append("\\end{array}")
    return "\n".join(lines) + "\n"


def tableau_to_json(t):
    return {
        "shape": list(t.diagram.parts),
        "provenance": t.provenance,
        "heights": [t.height(r) for r in range(1, t.k + 1)],
        "cells": [{"col": r, "row": s, "entry": c.entry, "color": "red" if c.red else "black"}
                  for r, s, c in t.cells()],
    }


def tableau_from_json(doc):
    d = build_diagram(tuple(doc["shape"]))
    cols = [[] for _ in d.parts]
    for item in sorted(doc["cells"], key=lambda x: (x["col"], x["row"])):
        col = cols[item["col"] - 1]
        if item["row"] != len(col) + 1:
            raise ValueError("cells do not form gap-free columns")
        col.append(Cell(item["entry"], item["color"] == "red"))
    return Tableau(d, tuple(tuple(c) for c in cols), doc.get("provenance", "base"))


def parse_text(text, shape, provenance="reverse"):
    """Inverse of the text rendering (the shape is not part of the grid)."""
    d = build_diagram(tuple(shape))
    rows = [ln for ln in text.splitlines() if ln.strip()]
    cols = [[] for _ in d.parts]
    for ln in rows[1:]:
        fields = ln.split("|")[1:]
        for r, tok in enumerate(fields):
            tok = tok.strip()
            if tok:
                red = tok.startswith("r")
                cols[r].append(Cell(int(tok[1:] if red else tok), red))
    return Tableau(d, tuple(tuple(c) for c in cols), provenance)
