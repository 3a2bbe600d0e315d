"""Reverse tableaux: implementing neighbouring pairs one at a time.

Implementing a pair (C, C') of height s recolours the lowest black entry j
(in row s) of a chosen column red and inserts a black j one row lower in
the nearest column to the left of height >= s.  Lower parts of columns
(rows > s) are pushed left in unison to make room.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagram import surrounding_pair
from .tableau import Cell, RedSet, StructuralError, initial_tableau, is_standard_with_multiplicities

STANDARD = "standard"
EXTREME = "extreme"


class HiddenRuleRejection(Exception):
    """The chosen entry did not originate between the columns of the pair."""

    def __init__(self, pair, value, origin):
        super().__init__(f"{value} originates in C{origin}, outside [C{pair.left},C{pair.right}]")
        self.pair = pair
        self.value = value
        self.origin = origin


@dataclass(frozen=True)
class ReverseState:
    tableau: object
    implemented: tuple = ()
    steps: tuple = ()  # (pair, chosen column, recoloured value)

    @property
    def diagram(self):
        return self.tableau.diagram

    def red_set(self):
        ordered = [v for _, _, v in self.steps]
        return RedSet.of(ordered)

    def key(self):
        return (self.red_set().values, self.tableau.columns)

    def origin(self, value):
        """Column of the original black entry in T (frozen, never updated)."""
        return self.diagram.block(value)


@dataclass(frozen=True)
class EligibleSet:
    pair: object
    left_boundary: int
    columns: tuple
    choices: tuple


def start(d):
    return ReverseState(initial_tableau(d).with_columns(initial_tableau(d).columns, "reverse"))


def eligible_set(state, p):
    t = state.tableau
    d = t.diagram
    s = p.height
    if p in state.implemented:
        raise ValueError(f"pair {p.label()} already implemented")
    v = d.entry_of_box[(p.left, s)]
    c_minus = t.rightmost_positions()[v]
    if c_minus[1] != s:
        raise StructuralError(f"rightmost {v} left row {s}")
    c_minus = c_minus[0]
    cols = tuple(r for r in range(c_minus, p.right + 1)
                 if t.height(r) >= s and t.black_height(r) <= s)
    if not cols or cols[0] != c_minus:
        raise StructuralError(f"left boundary C{c_minus} is not eligible for {p.label()}")
    for r in cols[1:]:
        if t.black_height(r) != s:
            raise StructuralError(f"enabling violated: C{r} has black height {t.black_height(r)} < {s}")
    if t.black_height(cols[0]) < s and t.height(cols[0]) != s:
        raise StructuralError(f"enabling violated: leftmost C{cols[0]} has height {t.height(cols[0])}")
    return EligibleSet(p, c_minus, cols, cols[1:])


def _receiver(heights, s, cur, mode, c_minus):
    if mode == EXTREME and c_minus is not None and cur > c_minus:
        for r in range(cur - 1, c_minus, -1):
            if heights[r - 1] > s:
                return r
        return c_minus
    for r in range(cur - 1, 0, -1):
        if heights[r - 1] >= s:
            return r
    return None


def push_lower_parts(cols, start_col, s, carry, mode=STANDARD, c_minus=None, first_inclusive=False):
    """Place ``carry`` below row s, pushing displaced lower parts leftwards.

    With ``first_inclusive`` the carry goes into ``start_col`` itself,
    otherwise into the first receiver strictly to its left.  Columns of
    height < s are skipped; a column of height exactly s absorbs the
    carry and ends the chain (extreme mode skips those too, down to C^-).
    """
    heights = [len(c) for c in cols]
    cur = start_col
    first = True
    while carry:
        if first and first_inclusive:
            nxt = cur
        else:
            nxt = _receiver(heights, s, cur, mode, c_minus)
        first = False
        if nxt is None:
            raise StructuralError("shifting ran past the first column")
        lower = cols[nxt - 1][s:]
        cols[nxt - 1] = cols[nxt - 1][:s] + carry
        heights[nxt - 1] = len(cols[nxt - 1])
        carry = lower
        cur = nxt
    return cols


def implement_pair(state, p, choice, mode=STANDARD, enforce_hidden_rule=True):
    es = eligible_set(state, p)
    if choice not in es.choices:
        raise ValueError(f"C{choice} is not an admissible choice for {p.label()}")
    s = p.height
    t = state.tableau
    cols = [list(c) for c in t.columns]
    cell = cols[choice - 1][s - 1]
    if cell.red or t.black_height(choice) != s:
        raise StructuralError("chosen column has no black entry in the pair's row")
    j = cell.entry
    if enforce_hidden_rule and not (p.left <= state.origin(j) <= p.right):
        raise HiddenRuleRejection(p, j, state.origin(j))
    cols[choice - 1][s - 1] = Cell(j, True)

    push_lower_parts(cols, choice, s, [Cell(j)], mode, es.left_boundary)

    new = t.with_columns(cols)
    if not is_standard_with_multiplicities(new):
        raise StructuralError(f"non-standard tableau after {p.label()} at C{choice}")
    return ReverseState(new, state.implemented + (p,), state.steps + ((p, choice, j),))


@dataclass
class FlowNode:
    index: int
    state: ReverseState
    stage: int


@dataclass
class FlowEdge:
    source: int
    target: int | None
    pair: object
    choice: int
    value: int
    rejected: str | None = None
    would_be: tuple = ()


@dataclass
class Exploration:
    nodes: list = field(default_factory=list)
    edges: list = field(default_factory=list)

    def leaves(self, total):
        return [nd.state for nd in self.nodes if nd.stage == total]


def explore(d, seq, mode=STANDARD, root=None):
    """Breadth-first expansion of every admissible branch of a sequence."""
    seq = tuple(seq)
    if sorted(seq) != sorted(d.pairs) or len(set(seq)) != len(seq):
        raise ValueError("sequence must list every neighbouring pair exactly once")
    out = Exploration()
    root = root or start(d)
    out.nodes.append(FlowNode(0, root, 0))
    frontier = [0]
    for stage, p in enumerate(seq, start=1):
        nxt_frontier = []
        seen = {}
        for idx in frontier:
            st = out.nodes[idx].state
            try:
                choices = eligible_set(st, p).choices
            except StructuralError:
                choices = ()
            if not choices:
                # the pair cannot be enabled from this state; the branch dies here
                out.edges.append(FlowEdge(idx, None, p, 0, 0, "enabling", st.red_set().values))
                continue
            for choice in choices:
                value = st.tableau.column(choice)[p.height - 1].entry
                try:
                    child = implement_pair(st, p, choice, mode)
                except HiddenRuleRejection as exc:
                    would = tuple(sorted(st.red_set().values + (exc.value,)))
                    out.edges.append(FlowEdge(idx, None, p, choice, value, "hidden-rule", would))
                    continue
                key = child.key()
                if key not in seen:
                    seen[key] = len(out.nodes)
                    out.nodes.append(FlowNode(len(out.nodes), child, stage))
                    nxt_frontier.append(seen[key])
                out.edges.append(FlowEdge(idx, seen[key], p, choice, value))
        frontier = nxt_frontier
    return out


def enumerate_reverse(d, seq, mode=STANDARD):
    ex = explore(d, seq, mode)
    leaves = ex.leaves(len(tuple(seq)))
    return sorted(leaves, key=lambda st: st.key())


# ------------------------------------------------------------ excluded roots


def excluded_roots_reverse(state_or_tableau):
    t = getattr(state_or_tableau, "tableau", state_or_tableau)
    d = t.diagram
    right = t.rightmost_positions()
    black = {}
    for r, s, c in t.cells():
        if not c.red:
            black[c.entry] = (r, s)
    out = set()
    for i, j in d.nilradical:
        if j not in black or i not in right:
            continue
        ri, si = right[i]
        rj, sj = black[j]
        if si < sj and ri >= rj:
            out.add((i, j))
    return frozenset(out)


# ---------------------------------------------------------------- trapezia


@dataclass(frozen=True)
class TrapeziumState:
    pair: object
    stage: int
    left_boundary: tuple   # (column, row) per row 1..s
    right_boundary: tuple
    left_boxes: tuple
    black_count: int
    implemented: bool
    column_counts: tuple = ()


def trapezium(state, p):
    t = state.tableau
    d = t.diagram
    s = p.height
    done = p in state.implemented
    left, right = [], []
    for row in range(1, s + 1):
        a = d.entry_of_box[(p.left, row)]
        b = d.entry_of_box[(p.right, row)]
        occ_a = [(r, q) for r, q, c in t.cells() if c.entry == a]
        occ_b = [(r, q, c) for r, q, c in t.cells() if c.entry == b]
        ba = max(occ_a)
        if ba[1] != row:
            raise StructuralError(f"left boundary entry {a} not in row {row}")
        r_b, q_b, c_b = min(occ_b)
        if not done and (q_b != row or c_b.red):
            raise StructuralError(f"right boundary entry {b} moved before {p.label()} was implemented")
        left.append(ba)
        right.append((r_b, q_b))
    boxes = []
    for row in range(1, s + 1):
        lo = left[row - 1][0]
        hi = right[row - 1][0]
        for r in range(lo + 1, hi + 1):
            if t.cell(r, row) is not None:
                boxes.append((r, row))
    black = sum(1 for r, q in boxes if not t.cell(r, q).red)
    if not done and any(t.cell(r, q).red for r, q in boxes if q == s):
        raise StructuralError(f"left trapezium of {p.label()} acquired a red entry in R{s}")
    counts = {}
    for r, q in left:
        counts[r] = counts.get(r, 0) + 1
    for r, q in boxes:
        if not t.cell(r, q).red:
            counts[r] = counts.get(r, 0) + 1
    return TrapeziumState(p, len(state.implemented), tuple(left), tuple(right), tuple(boxes),
                          black, done, tuple(sorted(counts.items())))


def composite_line_count(tz):
    s = tz.pair.height
    return sum(min(s, c) for _, c in tz.column_counts) - s


# ------------------------------------------------------------------- Psi


def psi_steps(ct, alternative=False):
    """Pairs (with target values) implemented by the map Psi, in order."""
    d = ct.diagram
    steps = []
    for col in sorted(ct.per_column):
        info = ct.per_column[col]
        h, m, mp = info["h"], info["m"], info["mPrime"]
        r = col - 1
        up = [(h + t, d.entry_of_box[(col, h)]) for t in range(mp)]
        down = [(h - t, d.entry_of_box[(col, h - t)]) for t in range(1, m)]
        for height, value in (down + up if alternative else up + down):
            p = surrounding_pair(d, height, r)
            if p is None:
                raise StructuralError(f"no free pair of height {height} around C{r},C{r + 1}")
            steps.append((p, value))
    return steps


def build_for_component(ct, mode=STANDARD, alternative=False):
    state = start(ct.diagram)
    for p, value in psi_steps(ct, alternative):
        pos = state.tableau.black_position(value)
        if pos is None or pos[1] != p.height:
            raise StructuralError(f"black {value} is not in row {p.height} when implementing {p.label()}")
        state = implement_pair(state, p, pos[0], mode)
    if state.red_set() != ct.red_set():
        raise StructuralError("Psi changed the Red Set")
    return state


def build_for_sequence(d, choices, mode=STANDARD):
    """Replay explicit (pair, column) choices from T."""
    state = start(d)
    for p, col in choices:
        state = implement_pair(state, p, col, mode)
    return state
