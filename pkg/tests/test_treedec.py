import random

import pytest
from hypothesis import given

from packdp.graph import complete_graph, cycle_graph, make_graph, path_graph
from packdp.instances import partial_ktree
from packdp.treedec import (TDError, check_nice, emit_td, heuristic_treedec, make_td, nicify, parse_td,
                            path_decomposition, validate)

from strategies import graphs

NODE_CONSTANT = 6  # nicify node count <= NODE_CONSTANT * (width+1) * n, measured


def test_parse_emit():
    td = parse_td("s td 1 3 3\nb 1 1 2 3\n")
    assert td.width == 2
    with pytest.raises(TDError):
        parse_td("s tx 1 3 3\nb 1 1 2 3\n")
    text = "s td 5 2 6\nb 1 1 2\nb 2 2 3\nb 3 3 4\nb 4 4 5\nb 5 5 6\n1 2\n2 3\n3 4\n4 5\n"
    assert emit_td(parse_td(text)) == text


def test_validate_examples():
    p4 = path_graph(4)
    td = path_decomposition([[0, 1], [1, 2], [2, 3]], 4)
    assert validate(td, p4) is None
    bad = validate(td, make_graph(4, list(p4.edges) + [(0, 3)]))
    assert bad.kind == "edge-uncovered"
    td = path_decomposition([[0, 1], [2], [0, 1]], 3)
    assert validate(td, make_graph(3, [(0, 1)])).kind == "disconnected"


def test_nicify_single_bag():
    ntd = nicify(make_td([[0, 1, 2]], [], 3))
    assert ntd.kind.count("leaf") == 1
    assert ntd.kind.count("introduce") == 3 and ntd.kind.count("forget") == 3
    assert ntd.bags[ntd.root] == frozenset()


def test_nicify_star_is_binary():
    td = make_td([[0, 1], [0, 2], [0, 3], [0, 4]], [(0, 1), (0, 2), (0, 3)], 5)
    ntd = nicify(td)
    assert check_nice(ntd) is None
    assert all(len(ch) <= 2 for ch in ntd.children)


def test_heuristics():
    assert heuristic_treedec(path_graph(6)).width == 1
    assert heuristic_treedec(complete_graph(5)).width == 4
    assert heuristic_treedec(cycle_graph(6), "min-fill").width == 2


@given(graphs(max_n=8))
def test_heuristic_output_validates(g):
    for strat in ("min-degree", "min-fill"):
        assert validate(heuristic_treedec(g, strat), g) is None


def test_nicify_preserves_width_on_random_decompositions():
    rng = random.Random(3)
    for _ in range(100):
        n = rng.randint(1, 15)
        g, td = partial_ktree(n, rng.randint(1, 3), rng.random(), rng)
        ntd = nicify(td)
        assert validate(ntd.as_tree_decomposition(), g) is None
        assert check_nice(ntd) is None
        assert ntd.width == td.width
        assert len(ntd.kind) <= NODE_CONSTANT * (td.width + 1) * max(n, 1)
