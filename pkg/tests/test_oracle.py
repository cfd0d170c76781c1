import random

import pytest
from hypothesis import given

from packdp.graph import complete_graph, cycle_graph, make_graph, path_graph, paw_graph
from packdp.oracle import (Budget, BudgetExceeded, check_packing, csp_bruteforce, exact_cover_feasible,
                           max_packing_bruteforce, partition_feasible, permiset_bruteforce, realized_relation,
                           verify_gadget)
from packdp.gadgets import Gadget, neq_gadget
from packdp.reductions import make_csp
from packdp.relations import make_relation

from strategies import graphs

K3, K4 = complete_graph(3), complete_graph(4)


def test_max_packing_examples():
    assert max_packing_bruteforce(K4, K3, 1, "dist")[0] == 1
    val, wit = max_packing_bruteforce(K4, K3, 3, "arb")
    assert val == 4 and check_packing(K4, K3, wit, 3, "arb")
    assert max_packing_bruteforce(cycle_graph(6), K3, 5, "arb")[0] == 0


def test_exact_cover_examples():
    assert exact_cover_feasible(K3, K3, [1, 1, 1], "dist")[0]
    assert not exact_cover_feasible(K4, K3, [1] * 4, "dist")[0]
    ok, wit = exact_cover_feasible(K4, K3, [3] * 4, "arb")
    assert ok and check_packing(K4, K3, wit, 3, "arb", exact=True)


def test_realized_relation_examples():
    one = Gadget(K3, (0,), 1, K3, make_relation(1, 1, [(1,)]))
    assert realized_relation(one, "dist").tuples == ((1,),)
    assert realized_relation(neq_gadget(1, 3), "dist").tuples == ((0, 1), (1, 0))
    assert verify_gadget(neq_gadget(1, 3)).ok


def test_budget_is_explicit():
    with pytest.raises(BudgetExceeded):
        max_packing_bruteforce(complete_graph(7), K3, 3, "arb", Budget(5))


def test_csp_bruteforce():
    assert csp_bruteforce(make_csp(2, 2, [(0, 1, [(1, 1)])]))
    assert not csp_bruteforce(make_csp(2, 2, [(0, 1, [])]))


def test_csp_bruteforce_against_second_enumeration():
    import itertools
    rng = random.Random(5)
    vals = [(a, b) for a in (1, 2) for b in (1, 2)]
    for _ in range(30):
        cons = [(i, j, rng.sample(vals, rng.randint(0, 4))) for i, j in ((0, 1), (1, 2), (0, 2)) if rng.random() < 0.7]
        inst = make_csp(3, 2, cons)
        # reversed enumeration order
        ref = any(all((a[i], a[j]) in set(map(tuple, s)) for i, j, s in cons)
                  for a in reversed(list(itertools.product((1, 2), repeat=3))))
        assert csp_bruteforce(inst) == ref


def test_permiset_bruteforce():
    assert permiset_bruteforce(make_graph(4, []), 2)
    assert not permiset_bruteforce(complete_graph(4), 2)
    row = make_graph(9, [(0, 1), (1, 2), (0, 2)])
    assert permiset_bruteforce(row, 3)
    with pytest.raises(BudgetExceeded):
        permiset_bruteforce(make_graph(64, []), 8)


@given(graphs(max_n=7))
def test_dist_at_most_arb(g):
    for c in (1, 2):
        assert max_packing_bruteforce(g, K3, c, "dist")[0] <= max_packing_bruteforce(g, K3, c, "arb")[0]


@given(graphs(max_n=8))
def test_exact_cover_iff_max_hits_bound(g):
    for h, c, variant in ((K3, 1, "dist"), (K3, 2, "arb"), (path_graph(3), 1, "dist")):
        val, _ = max_packing_bruteforce(g, h, c, variant)
        hit = (c * g.n) % h.n == 0 and val == c * g.n // h.n
        assert partition_feasible(g, h, c, variant) == hit


@given(graphs(max_n=7))
def test_oracle_invariant_under_relabeling(g):
    perm = list(range(g.n))
    random.Random(g.m).shuffle(perm)
    g2 = g.relabel(perm)
    for h in (K3, paw_graph()):
        assert max_packing_bruteforce(g, h, 1, "dist")[0] == max_packing_bruteforce(g2, h, 1, "dist")[0]
