import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from packdp.clique_dp import (NEG, CliqueDPError, Table, forget_rule, introduce_rule, join_rule_convolution,
                              join_rule_naive, leaf_table, run_tables, solve_clique_packing,
                              solve_clique_partition)
from packdp.graph import complete_graph, disjoint_union, make_graph
from packdp.instances import random_table
from packdp.oracle import check_packing, max_packing_bruteforce
from packdp.treedec import make_td, nice_from_graph, nicify, path_decomposition

from strategies import graphs

K3, K4 = complete_graph(3), complete_graph(4)


def solve(g, c, d, variant, **kw):
    return solve_clique_packing(g, nice_from_graph(g), c, d, variant, **kw)


def test_examples():
    assert solve(K4, 1, 3, "dist").value == 1
    assert solve(K4, 3, 3, "arb").value == 4
    two, _ = disjoint_union(K3, K3)
    assert solve(two, 2, 3, "dist").value == 2
    assert solve(K3, 2, 3, "arb").value == 2


def test_partition_examples():
    assert solve_clique_partition(K3, nice_from_graph(K3), 1, 3, "dist")
    assert not solve_clique_partition(K4, nice_from_graph(K4), 1, 3, "dist")
    assert solve_clique_partition(K4, nice_from_graph(K4), 3, 3, "arb")
    assert solve_clique_partition(K4, nice_from_graph(K4), 3, 3, "arb", fast=True)


def test_introduce_rule():
    t = introduce_rule(leaf_table(), 5, 2)
    assert t.order == (5,) and t.entries() == 3
    assert t.get((0,)) == 0 and t.get((1,)) == NEG and t.get((2,)) == NEG
    lit = introduce_rule(leaf_table(), 5, 2, literal=True)
    assert lit.get((2,)) == 0


def test_forget_on_triangle():
    # bag {v, a, b} forming K3 with c=1: forgetting v with f(a)=f(b)=1 adds one triangle
    child = Table((0, 1, 2), dense=np.where(np.indices((2, 2, 2)).sum(0) == 0, 0, NEG).astype(np.int64))
    out = forget_rule(child, 0, K3, 1, 3, "dist")
    assert out.order == (1, 2)
    assert out.get((1, 1)) == 1 and out.get((0, 0)) == 0
    out2 = forget_rule(Table((0, 1, 2), dense=np.where(np.indices((3, 3, 3)).sum(0) == 0, 0, NEG)
                             .astype(np.int64)), 0, K3, 2, 3, "arb")
    assert out2.get((2, 2)) == 2


def test_join_examples():
    c = 1
    left = Table((0,), dense=np.array([3, 5], dtype=np.int64))
    right = Table((0,), dense=np.array([1, 4], dtype=np.int64))
    out = join_rule_naive(left, right, c)
    assert out.get((1,)) == max(5 + 1, 3 + 4)
    assert out.get((0,)) == 4
    ident = Table((0,), dense=np.array([0, NEG], dtype=np.int64))
    assert np.array_equal(join_rule_naive(ident, left, c).dense, left.dense)
    with pytest.raises(CliqueDPError):
        join_rule_naive(left, Table((1,), dense=np.array([0, 0])), c)


def test_literal_introduce_agrees_at_root():
    rng = random.Random(2)
    from packdp.instances import er_graph
    for _ in range(30):
        g = er_graph(rng.randint(3, 8), 0.6, rng)
        for c in (1, 2):
            assert solve(g, c, 3, "arb").value == solve(g, c, 3, "arb", literal=True).value


def test_invalid_decomposition_rejected():
    g = make_graph(3, [(0, 1), (1, 2)])
    ntd = nicify(path_decomposition([[0, 1], [2]], 3))
    with pytest.raises(CliqueDPError):
        solve_clique_packing(g, ntd, 1, 3, "dist")
    with pytest.raises(CliqueDPError):
        solve(g, 1, 2, "dist")


def test_dense_table_sizes():
    g = K4
    ntd = nice_from_graph(g)
    for c in (1, 2, 3):
        for t, tab in run_tables(g, ntd, c, 3, "dist", layout="dense").items():
            assert tab.entries() == (c + 1) ** len(ntd.bags[t])


@given(st.integers(0, 4), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_join_commutes_and_modes_agree(k, c, seed):
    rng = np.random.default_rng(seed)
    left = Table(tuple(range(k)), dense=random_table(k, c, 0.5, rng))
    right = Table(tuple(range(k)), dense=random_table(k, c, 0.5, rng))
    ab = join_rule_naive(left, right, c).dense
    assert np.array_equal(ab, join_rule_naive(right, left, c).dense)
    assert np.array_equal(ab, join_rule_convolution(left, right, c).dense)


@given(graphs(min_n=3, max_n=8), st.sampled_from(["dist", "arb"]), st.sampled_from([3, 4]))
def test_monotone_in_c_and_witness_valid(g, variant, d):
    ntd = nice_from_graph(g)
    prev = 0
    for c in (1, 2, 3):
        res = solve_clique_packing(g, ntd, c, d, variant, witness=True)
        assert res.value >= prev
        prev = res.value
        assert check_packing(g, complete_graph(d), res.witness, c, variant)
        assert sum(m for _, m in res.witness) == res.value


@given(graphs(min_n=3, max_n=8), st.sampled_from(["dist", "arb"]))
def test_equals_oracle(g, variant):
    ntd = nice_from_graph(g)
    for c in (1, 2):
        assert solve_clique_packing(g, ntd, c, 3, variant, join_mode="convolution").value == \
            max_packing_bruteforce(g, K3, c, variant)[0]
