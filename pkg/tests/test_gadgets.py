import pytest

from packdp.gadgets import (GadgetError, arb_relation_gadget, attach, build, clique_reg_relation_gadget,
                            coherence_wrap, cover_gadget, dumps_gadget, eq_gadget_ring, eq_gadget_single,
                            gadget_from_dict, neq_gadget, ring_filler_count, toggle_gadget)
from packdp.graph import complete_graph, make_graph
from packdp.oracle import realized_relation, verify_gadget
from packdp.relations import make_relation, rel_cneq, rel_cover

K3 = complete_graph(3)


def test_neq_structure_and_relation():
    g = neq_gadget(1, 3)
    assert g.graph.n == 4 and g.graph.m == 5
    assert not g.graph.has_edge(*g.portals)
    assert g.claimed == rel_cneq(1)
    for c, d in ((1, 3), (2, 3), (1, 4), (2, 4)):
        assert neq_gadget(c, d).graph.n == c * (d - 1) + (c + 1)


def test_neq_2_3_realizes_cneq2():
    # [DERIVED] oracle enumeration
    assert realized_relation(neq_gadget(2, 3), "arb").tuples == ((0, 2), (1, 1), (2, 0))


def test_attach():
    host = make_graph(2, [(0, 1)])
    g = attach(host, neq_gadget(1, 3), [0, 1])
    assert g.n == host.n + 2
    with pytest.raises(GadgetError):
        attach(host, neq_gadget(1, 3), [0])
    twice = attach(attach(make_graph(4, []), neq_gadget(1, 3), [0, 1], "a"), neq_gadget(1, 3), [2, 3], "b")
    labels = [twice.label(v) for v in range(twice.n)]
    assert len(set(labels)) == len(labels) and twice.n == 8


def test_coherence_wrap():
    neq = neq_gadget(1, 3)
    w = coherence_wrap(neq, neq)
    assert len(w.portals) == 2
    # each guard brings its internals plus a fresh outer portal
    assert w.graph.n == neq.graph.n + 2 * (len(neq.internal) + 1)
    assert verify_gadget(w).ok
    with pytest.raises(GadgetError):
        coherence_wrap(neq_gadget(2, 3), neq)


def test_eq_single():
    g = eq_gadget_single(1, K3)
    assert len(g.portals) == 3
    # c*|H| hub vertices, one NEQ per hub vertex, |H| portals
    assert g.graph.n == 1 * 3 + 1 * 3 * len(neq_gadget(1, 3).internal) + 3
    assert g.claimed.tuples == ((0, 0, 0), (1, 1, 1))


def test_eq_ring():
    g = eq_gadget_ring(1, K3, 1)
    assert len(g.portals) == 3
    assert verify_gadget(g).ok
    for k in (1, 2, 3):
        assert ring_filler_count(K3, k) == (3 - 3) * k + (3 - 2) * k


def test_cover_structure():
    g = cover_gadget(2, 3, 1)
    assert len(g.portals) == 3
    assert g.claimed.tuples == ((1, 1, 1),) and g.claimed.bound == 2
    assert sum(g.claimed.tuples[0]) == 1 * 3 * (2 - 1)


def test_toggle():
    g = toggle_gadget(K3)
    assert len(g.portals) == 6 and len(g.claimed) == 2
    assert g.coherent == "unknown"
    assert g.claimed.tuples == ((0, 0, 0, 1, 1, 1), (1, 1, 1, 0, 0, 0))


def test_arb_relation():
    g = arb_relation_gadget(K3, make_relation(3, 1, [(1, 1, 1)]))
    assert verify_gadget(g).ok
    g = arb_relation_gadget(K3, make_relation(2, 1, [(1, 0), (0, 1)]))
    assert verify_gadget(g).ok
    with pytest.raises(GadgetError):
        arb_relation_gadget(K3, make_relation(2, 1, [(1, 0), (1, 1)]))


def test_arb_relation_size_depends_on_shape_only():
    a = arb_relation_gadget(K3, make_relation(3, 1, [(1, 1, 1), (0, 0, 0)]))
    b = arb_relation_gadget(K3, make_relation(3, 1, [(0, 0, 0), (1, 1, 1)]))
    assert a.graph.n == b.graph.n


def test_clique_reg_relation_c1_delegates():
    r = make_relation(3, 1, [(1, 1, 1)])
    assert clique_reg_relation_gadget(1, 3, r).graph.n == arb_relation_gadget(K3, r).graph.n


def test_clique_reg_relation_c2_builds():
    g = clique_reg_relation_gadget(2, 3, make_relation(3, 2, [(0, 0, 0)]))
    assert g.claimed == make_relation(3, 2, [(0, 0, 0)])


def test_wrong_claim_is_reported():
    g = neq_gadget(1, 3)
    bad = gadget_from_dict({**g.to_dict(), "claimed": {"arity": 2, "bound": 1, "tuples": [[1, 0]]}})
    rep = verify_gadget(bad)
    assert not rep.ok and rep.extra["arb"] == [(0, 1)]


def test_json_round_trip_and_build():
    g = build("neq", c=2, d=3)
    assert gadget_from_dict(__import__("json").loads(dumps_gadget(g))) == g
    with pytest.raises(GadgetError):
        build("nope")
