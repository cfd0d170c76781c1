"""One test per acceptance criterion; each prints a single PASS/FAIL line.

Every comparison is exact. Pinned constants: ALPHA = 30 (permiset width per
unit of k) and C_GADGET = 3471 (largest relation gadget for B=2, c=1, d=3).
"""

import time

import pytest

from packdp import suites
from packdp.gadgets import clique_reg_relation_gadget
from packdp.reductions import choose_ell, phi_encoding
from packdp.relations import complement_tuple, make_relation

from conftest import ACCEPTANCE

SEED = suites.DEFAULT_SEED
LIMIT_CLIQUE_S = 600
LIMIT_HDP_S = 1200
LIMIT_GADGET_S = 300


def record(n: int, rep, extra: str = "") -> None:
    status = "PASS" if rep.passed else "FAIL"
    detail = "; ".join(f"{c.name}: {c.detail}" for c in rep.criteria)
    line = f"criterion {n} [{status}] {rep.suite}: {detail}{extra}"
    ACCEPTANCE[n] = line
    print(line)


def timed(fn, *args, **kw):
    t = time.perf_counter()
    rep = fn(*args, **kw)
    return rep, time.perf_counter() - t


@pytest.fixture(scope="module")
def clique_report():
    return timed(suites.oracle_vs_clique_dp, SEED)


@pytest.fixture(scope="module")
def hdp_report():
    return timed(suites.oracle_vs_hdp, SEED)


def test_criterion_1_clique_dp_matches_oracle(clique_report):
    rep, secs = clique_report
    graphs = {r["graph"] for r in rep.cases}
    configs = {(r["c"], r["d"], r["variant"]) for r in rep.cases}
    record(1, rep, f" ({len(graphs)} graphs, {secs:.0f}s)")
    assert len(graphs) >= 200 and max(r["n"] for r in rep.cases) <= 10
    assert len(configs) == 12
    assert all(r["dp"] == r["oracle"] for r in rep.cases)
    assert rep.passed and secs < LIMIT_CLIQUE_S


def test_criterion_2_hdp_matches_oracle(hdp_report):
    rep, secs = hdp_report
    er = {r["graph"] for r in rep.cases if r["family"] == "er"}
    kt = {r["graph"] for r in rep.cases if r["family"] == "ktree"}
    record(2, rep, f" ({len(er)} ER + {len(kt)} width<=3 graphs, {secs:.0f}s)")
    assert len(er) >= 100 and len(kt) >= 50
    assert all(r["n"] <= 9 for r in rep.cases if r["family"] == "er")
    assert all(r["n"] <= 30 and r["width"] <= 3 for r in rep.cases if r["family"] == "ktree")
    assert {r["pattern"] for r in rep.cases} == {"K3", "P3", "paw", "C4", "K4"}
    assert all(r["dp"] == r["oracle"] for r in rep.cases)
    assert rep.passed and secs < LIMIT_HDP_S


def test_criterion_3_state_space_laws():
    rep = suites.state_law(SEED)
    record(3, rep)
    for r in rep.cases:
        if r["dp"] == "clique":
            assert r["states"] == (r["c"] + 1) ** r["bag"]
        elif r["bag"] <= 4:
            assert r["states"] <= (2 * (r["bag"] + 2)) ** (3 * r["bag"])
    assert max(r["bag"] for r in rep.cases if r["dp"] == "hdp") == 4
    assert rep.passed


def test_criterion_4_join_fidelity():
    rep = suites.join_fidelity(SEED)
    record(4, rep)
    assert len(rep.cases) == 1000
    assert max(r["bag"] for r in rep.cases) <= 5 and max(r["c"] for r in rep.cases) <= 3
    assert rep.passed


def test_criterion_5_gadget_realization():
    rep = suites.gadget_relations(SEED)
    record(5, rep, f" (slowest {max(rep.timings):.1f}s)")
    assert len(rep.cases) == 8
    assert all(r["dist_ok"] and r["arb_ok"] for r in rep.cases)
    assert max(rep.timings) < LIMIT_GADGET_S
    assert rep.passed


def test_criterion_6_multi_to_single():
    rep = suites.multi_to_single(SEED)
    record(6, rep)
    assert len(rep.cases) >= 50 and max(r["n"] for r in rep.cases) <= 8
    assert {r["c"] for r in rep.cases} == {1, 2}
    assert all(r["valid"] and r["input_feasible"] == r["output_feasible"] for r in rep.cases)
    assert rep.passed


def test_criterion_7_csp_structure():
    # the pinned constant is the largest R_j gadget: all four value pairs allowed
    ell = choose_ell(2, 1, 3)
    phi = phi_encoding(2, ell, 1, 3)
    full = [phi[a] + phi[b] + complement_tuple(phi[a], 1) + complement_tuple(phi[b], 1)
            for a in range(2) for b in range(2)]
    assert clique_reg_relation_gadget(1, 3, make_relation(4 * ell, 1, full)).graph.n == suites.C_GADGET
    rep = suites.csp_structure(SEED)
    record(7, rep)
    random_cases = [r for r in rep.cases if isinstance(r["instance"], int)]
    assert len(random_cases) >= 20 and max(r["vars"] for r in random_cases) <= 4
    assert all(r["max_bag"] <= r["bound"] for r in random_cases)
    assert rep.passed


def test_criterion_8_permiset_structure():
    rep = suites.permiset_structure(SEED)
    record(8, rep)
    built = [r for r in rep.cases if "width" in r]
    assert {r["k"] for r in built} == {2, 3}
    assert all(r["width"] <= suites.ALPHA * r["k"] for r in built)
    assert rep.passed


def test_criterion_9_partition_consistency(clique_report, hdp_report):
    rep = suites.partition_consistency(SEED, clique_report[0], hdp_report[0])
    record(9, rep)
    assert all(r["mismatch"] == 0 for r in rep.cases)
    assert all(r["feasible"] > 0 for r in rep.cases)
    assert rep.passed
