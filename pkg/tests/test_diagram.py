import pytest

from nilfibre.diagram import (
    CompositionError,
    build_diagram,
    compositions,
    invariant_degree,
    left_rectangle,
    neighbouring_pairs,
    parse_composition,
    surrounding_pair,
)


@pytest.mark.parametrize("text", ["0,2", "1,-1", "", "a,b", "1,,2"])
def test_bad_compositions_rejected(text):
    with pytest.raises(CompositionError):
        parse_composition(text)


def test_parse_forms():
    assert parse_composition("1,2,1,2").parts == (1, 2, 1, 2)
    assert parse_composition("(1, 2, 1, 2)").parts == (1, 2, 1, 2)
    assert parse_composition([3, 1]).n == 4


@pytest.mark.parametrize("n", range(1, 9))
def test_composition_count(n):
    comps = list(compositions(n))
    assert len(comps) == 2 ** (n - 1)
    assert len(set(comps)) == len(comps)


def test_boxes_numbered_down_columns():
    d = build_diagram((1, 2, 3, 1, 1, 3, 2))
    assert d.n == 13 and d.k == 7
    assert list(d.column_entries(3)) == [4, 5, 6]
    assert d.entry_of_box[(7, 2)] == 13
    assert d.box_of_entry[9] == (6, 1)
    assert d.block(5) == 3


def test_1231132_pairs():
    d = build_diagram((1, 2, 3, 1, 1, 3, 2))
    labels = sorted(p.label() for p in d.pairs)
    assert labels == ["C1,C4", "C2,C7", "C3,C6", "C4,C5"]
    assert d.g == 4


def test_neighbouring_means_no_equal_height_between():
    for n in range(1, 9):
        for comp in compositions(n):
            d = build_diagram(comp)
            for p in neighbouring_pairs(d):
                assert d.height(p.left) == d.height(p.right) == p.height
                assert all(d.height(r) != p.height for r in range(p.left + 1, p.right))


def test_surrounding_pair():
    d = build_diagram((1, 2, 3, 1, 1, 3, 2))
    assert surrounding_pair(d, 2, 3).label() == "C2,C7"
    assert surrounding_pair(d, 1, 4).label() == "C4,C5"
    assert surrounding_pair(d, 3, 1) is None
    with pytest.raises(ValueError):
        surrounding_pair(d, 1, 7)


def test_degrees_of_1212():
    d = build_diagram((1, 2, 1, 2))
    deg = {p.label(): invariant_degree(d, p) for p in d.pairs}
    assert deg == {"C1,C3": 2, "C2,C4": 3}


def test_left_rectangle_size_is_degree():
    d = build_diagram((3, 4, 2, 1, 2, 4, 3, 1))
    for p in d.pairs:
        rect = left_rectangle(d, p)
        assert rect.invariant_degree == invariant_degree(d, p)


def test_nilradical_dimension():
    for comp in [(1, 2, 1, 2), (2, 1, 3), (5,)]:
        d = build_diagram(comp)
        n = d.n
        expect = (n * n - sum(c * c for c in comp)) // 2
        assert len(d.nilradical) == expect
