"""Compositions, diagram geometry and the neighbouring-pair catalogue.

Everything is 1-based: column C_r has index r and height c_r, box (r, s)
sits in column r and row s.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property


class CompositionError(ValueError):
    pass


@dataclass(frozen=True)
class Composition:
    parts: tuple[int, ...]

    def __post_init__(self):
        if not self.parts:
            raise CompositionError("composition must have at least one part")
        for c in self.parts:
            if not isinstance(c, int) or c < 1:
                raise CompositionError(f"parts must be positive integers, got {c!r}")

    @property
    def n(self):
        return sum(self.parts)

    @property
    def k(self):
        return len(self.parts)

    def __str__(self):
        return ",".join(str(c) for c in self.parts)


def parse_composition(text):
    """Parse ``"1,2,1,2"`` (or an iterable of ints) into a Composition."""
    if isinstance(text, Composition):
        return text
    if isinstance(text, str):
        items = [t.strip() for t in text.replace("(", "").replace(")", "").split(",")]
        if items == [""]:
            items = []
        try:
            parts = tuple(int(t) for t in items)
        except ValueError as exc:
            raise CompositionError(f"cannot parse composition {text!r}") from exc
    else:
        parts = tuple(int(c) for c in text)
    return Composition(parts)


@dataclass(frozen=True, order=True)
class NeighbouringPair:
    height: int
    left: int
    right: int

    def __post_init__(self):
        if self.left >= self.right:
            raise ValueError("left column must precede right column")

    def label(self):
        return f"C{self.left},C{self.right}"

    def surrounds(self, r):
        """True when columns r and r+1 both lie in [C, C']."""
        return self.left <= r and r + 1 <= self.right

    def to_json(self):
        return {"left": self.left, "right": self.right, "height": self.height}


@dataclass(frozen=True)
class Rectangle:
    pair: NeighbouringPair
    boxes: tuple[tuple[int, int], ...]
    left_boxes: tuple[tuple[int, int], ...]

    @property
    def invariant_degree(self):
        return len(self.left_boxes)


@dataclass(frozen=True)
class Diagram:
    composition: Composition

    @property
    def parts(self):
        return self.composition.parts

    @property
    def n(self):
        return self.composition.n

    @property
    def k(self):
        return self.composition.k

    def height(self, r):
        return self.parts[r - 1]

    @cached_property
    def boxes(self):
        return tuple((r, s) for r in range(1, self.k + 1) for s in range(1, self.height(r) + 1))

    @cached_property
    def entry_of_box(self):
        """Initial filling: down columns, then left to right."""
        return {box: i + 1 for i, box in enumerate(self.boxes)}

    @cached_property
    def box_of_entry(self):
        return {v: box for box, v in self.entry_of_box.items()}

    def block(self, value):
        """Levi block (= column of the initial tableau) holding a value."""
        return self.box_of_entry[value][0]

    def column_entries(self, r):
        return [self.entry_of_box[(r, s)] for s in range(1, self.height(r) + 1)]

    def in_nilradical(self, i, j):
        return i < j and self.block(i) != self.block(j)

    @cached_property
    def nilradical(self):
        n = self.n
        return tuple((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)
                     if self.block(i) != self.block(j))

    @cached_property
    def pairs(self):
        return tuple(neighbouring_pairs(self))

    @property
    def g(self):
        return len(self.pairs)

    def to_json(self):
        return {
            "parts": list(self.parts),
            "n": self.n,
            "pairs": [p.to_json() for p in self.pairs],
        }


def build_diagram(composition):
    if not isinstance(composition, Composition):
        composition = parse_composition(composition)
    return Diagram(composition)


def neighbouring_pairs(d):
    pairs = []
    for a in range(1, d.k + 1):
        s = d.height(a)
        for b in range(a + 1, d.k + 1):
            if d.height(b) == s:
                pairs.append(NeighbouringPair(s, a, b))
                break
    pairs.sort()
    return pairs


def surrounding_pair(d, s, r):
    """The height-s neighbouring pair (C, C') with C_{r+1} in ]C, C'], if any."""
    if not 1 <= r < d.k:
        raise ValueError(f"adjacency index {r} out of range")
    found = [p for p in d.pairs if p.height == s and p.surrounds(r)]
    assert len(found) <= 1, "two neighbouring pairs of one height surround an adjacency"
    return found[0] if found else None


def left_rectangle(d, p):
    boxes = tuple((r, t) for r in range(p.left, p.right + 1)
                  for t in range(1, min(p.height, d.height(r)) + 1))
    left = tuple(b for b in boxes if b[0] != p.left)
    return Rectangle(p, boxes, left)


def invariant_degree(d, p):
    return left_rectangle(d, p).invariant_degree


def compositions(n):
    """All 2^(n-1) compositions of n, in lexicographic order."""
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in compositions(n - first):
            yield (first,) + rest
