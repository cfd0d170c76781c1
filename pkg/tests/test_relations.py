import pytest
from hypothesis import given, strategies as st

from packdp.relations import (RelationError, complement, complement_tuple, concat, dumps_relation, is_regular,
                              make_relation, rel_copy, rel_cover, rel_cneq, rel_eq, rel_sel, rel_sel_full,
                              rel_sum, relation_from_dict, stack, weight)


def test_basic_relations():
    assert rel_cneq(2).tuples == ((0, 2), (1, 1), (2, 0))
    assert rel_cover(3, 0).tuples == ((0, 0, 0),)
    assert rel_eq(2, {0, 1}).tuples == ((0, 0), (1, 1))
    for z in range(1, 4):
        assert rel_cneq(z) == rel_sum(2, z)
    assert len(rel_eq(4, {0, 2, 3})) == 3
    assert len(rel_cover(5, 2)) == 1


def test_regularity():
    assert is_regular(rel_cneq(3), 0, 3)
    assert is_regular(rel_eq(3, {0, 1}), 0, 3)
    assert not is_regular(make_relation(2, 1, [(1, 0)]), 0, 2)


def test_complement():
    assert complement(make_relation(2, 2, [(0, 1)]), 2).tuples == ((2, 1),)
    for c in (1, 2, 3):
        assert complement(rel_cneq(c), c) == rel_cneq(c)
    with pytest.raises(RelationError):
        complement_tuple((3,), 2)


def test_concat_and_stack():
    assert concat((1, 2), (3,)) == (1, 2, 3)
    assert stack([(1, 2), (3, 4)]) == (1, 2, 3, 4)
    with pytest.raises(RelationError):
        stack([(1,), (1, 2)])


def test_sel():
    assert rel_sel_full(2, 1).tuples == ((0, 1), (1, 0))
    assert rel_sel([{1}, {2}], 2, 1).tuples == ((0, 0),)
    assert rel_sel_full(1, 2).tuples == ((0, 0),)
    for x in range(1, 5):
        for y in range(1, 3):
            r = rel_sel_full(x, y)
            assert len(r) == x and {weight(t) for t in r} == {(x - 1) * y}


def test_copy():
    assert rel_copy(make_relation(2, 1, [(0, 1)]), 1).tuples == ((0, 1, 1, 0),)
    phi = [(0, 0, 0, 0, 0, 0), (0, 0, 1, 1, 1, 0)]
    w = make_relation(6, 1, phi)
    assert len(rel_copy(w, 1)) == len(w)
    assert is_regular(rel_copy(w, 1), 0, 3)


def test_json_round_trip():
    r = rel_sel_full(3, 2)
    import json
    assert relation_from_dict(json.loads(dumps_relation(r))) == r


def test_validation():
    with pytest.raises(RelationError):
        make_relation(2, 1, [(0, 2)])
    with pytest.raises(RelationError):
        make_relation(2, 1, [(0,)])


@st.composite
def relations(draw):
    arity = draw(st.integers(1, 4))
    c = draw(st.integers(1, 3))
    tuples = draw(st.lists(st.tuples(*[st.integers(0, c)] * arity), min_size=1, max_size=6))
    return make_relation(arity, c, tuples), c


@given(relations(), st.integers(2, 5))
def test_complement_preserves_regularity(rc, d):
    r, c = rc
    assert complement(complement(r, c), c) == r
    for x in range(d):
        if is_regular(r, x, d):
            assert is_regular(complement(r, c), (r.arity * c - x) % d, d)
