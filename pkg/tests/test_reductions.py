import pytest
from hypothesis import given, strategies as st

from packdp.clique_dp import solve_clique_partition
from packdp.graph import complete_graph, cycle_graph, make_graph, path_graph, paw_graph
from packdp.oracle import csp_bruteforce, partition_feasible
from packdp.reductions import (OK, UNSAT, ReductionError, VerificationCache, choose_ell, choose_separator,
                               make_csp, make_permiset, phi_encoding, reduce_csp_to_multiclique,
                               reduce_multi_to_single, reduce_permiset_to_hpartition)
from packdp.relations import complement, is_regular, make_relation, rel_copy, weight
from packdp.gadgets import neq_gadget
from packdp.treedec import nicify, validate

K3 = complete_graph(3)


def test_choose_ell():
    assert choose_ell(2, 1, 3) == 6
    assert choose_ell(1, 1, 3) == 3
    assert choose_ell(9, 2, 3) == 6


def test_phi_encoding_examples():
    assert phi_encoding(2, 6, 1, 3) == [(0, 0, 0, 0, 0, 0), (0, 0, 1, 1, 1, 0)]
    full = phi_encoding(8, 6, 1, 3)
    assert len(set(full)) == 8
    with pytest.raises(ReductionError):
        phi_encoding(9, 6, 1, 3)


@given(st.integers(1, 3), st.integers(3, 5), st.integers(1, 30))
def test_phi_encoding_is_regular(c, d, B):
    ell = choose_ell(B, c, d)
    phi = phi_encoding(B, ell, c, d)
    assert len(set(phi)) == B
    assert all(weight(x) % d == 0 for x in phi)
    w = make_relation(ell, c, phi)
    if (ell * c) % d == 0:
        assert is_regular(complement(w, c), 0, d)
        assert is_regular(rel_copy(w, c), 0, d)


def test_make_csp_assignment():
    inst = make_csp(3, 2, [(0, 1, [(1, 1)]), (1, 2, [(2, 2)]), (0, 1, [(1, 2)])])
    assert len(set(inst.assign)) == 3
    for (i, j, _), b in zip(inst.constraints, inst.assign):
        assert {i, j} <= inst.bags[b]
    assert inst.bags[0] == frozenset() and inst.bags[-1] == frozenset()
    with pytest.raises(ReductionError):
        make_csp(2, 2, [(0, 0, [(1, 1)])])
    with pytest.raises(ReductionError):
        make_csp(2, 2, [(0, 1, [(1, 3)])])


def test_csp_b1_round_trip():
    inst = make_csp(2, 1, [(0, 1, [(1, 1)])])
    out = reduce_csp_to_multiclique(inst, 1, 3)
    assert out.status == OK and validate(out.decomposition, out.graph) is None
    cert = out.certificate
    a_count = cert["ell"] * sum(r - l + 2 for l, r in zip(cert["l"], cert["r"]))
    assert cert["a_vertices"] == a_count == 18
    assert solve_clique_partition(out.graph, nicify(out.decomposition), 1, 3, "arb", fast=True)
    assert csp_bruteforce(inst)


def test_csp_empty_relation_short_circuits():
    out = reduce_csp_to_multiclique(make_csp(2, 2, [(0, 1, [])]), 1, 3)
    assert out.status == UNSAT


def test_csp_b2_structure():
    inst = make_csp(3, 2, [(0, 1, [(1, 1), (2, 2)]), (1, 2, [(1, 2), (2, 1)])])
    out = reduce_csp_to_multiclique(inst, 1, 3)
    assert validate(out.decomposition, out.graph) is None
    for name, gd in out.templates.items():
        assert is_regular(gd.claimed, 0, 3), name
    assert out.certificate["gadgets"]["N"] == 2


def test_multi_to_single_examples():
    for g, c, expect in ((K3, 1, True), (complete_graph(4), 1, False), (K3, 2, True)):
        out = reduce_multi_to_single(g, c, 3)
        assert validate(out.decomposition, out.graph) is None
        assert out.graph.m == sum(1 for _ in out.graph.edges)
        assert partition_feasible(g, K3, c, "arb") == expect
        assert solve_clique_partition(out.graph, nicify(out.decomposition), c, 3, "dist", fast=True) == expect


def test_multi_to_single_literal_width():
    # literal mode places the whole gadget beside the host bag
    for g in (K3, complete_graph(4)):
        out = reduce_multi_to_single(g, 1, 3, compact=False)
        internal = out.certificate["gadget_size"] - 3
        assert out.width == out.certificate["input_width"] + internal


def test_multi_to_single_drops_input_edges():
    g = make_graph(4, [(0, 1), (1, 2), (0, 2), (2, 3)])
    out = reduce_multi_to_single(g, 1, 3)
    assert not out.graph.has_edge(2, 3)
    assert len(out.certificate["cliques"]) == 1


def test_choose_separator_c4():
    sep = choose_separator(cycle_graph(4))
    assert sep.S == (0, 2) and sep.U == (0,) and sep.D == (2,)
    assert sep.components == ((1,), (3,))


def test_permiset_structure():
    out = reduce_permiset_to_hpartition(make_permiset(2, [((0, 0), (1, 1))]), cycle_graph(4))
    assert validate(out.decomposition, out.graph) is None
    assert "Q" not in out.certificate["gadgets"]  # t = 2 components, so no middle gadgets
    assert out.certificate["gadgets"] == {"A": 2, "F": 1}
    out = reduce_permiset_to_hpartition(make_permiset(2, [((0, 0), (0, 1))]), cycle_graph(4))
    assert out.certificate["vacuous_edges"] == [0]


def test_permiset_rejections():
    inst = make_permiset(2, [((0, 0), (1, 1))])
    for h in (paw_graph(), complete_graph(4), path_graph(3)):
        with pytest.raises(ReductionError):
            reduce_permiset_to_hpartition(inst, h)
    with pytest.raises(ReductionError):
        make_permiset(2, [((0, 0), (2, 1))])


def test_verification_cache():
    cache = VerificationCache()
    assert cache.verify(neq_gadget(1, 3)).ok
    assert cache.verify(neq_gadget(1, 3)).ok
    assert cache.hits == 1 and len(cache) == 1
