"""Seeded batch suites that check the solvers against the oracle.

Each suite returns a SuiteReport. Its ``to_dict()`` holds only deterministic
content, so the same seed gives byte-identical JSON. Wall-clock timings are
kept apart in ``timings``.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import clique_dp, hpack_dp
from .clique_dp import NEG, Table, join_rule_convolution, join_rule_naive
from .gadgets import arb_relation_gadget, eq_gadget_single, neq_gadget, toggle_gadget
from .graph import Graph, complete_graph, cycle_graph, make_graph, named_pattern, paw_graph, path_graph
from .instances import er_graph, partial_ktree, random_table
from .oracle import (check_packing, csp_bruteforce, exact_cover_feasible, max_packing_bruteforce,
                     partition_feasible, verify_gadget)
from .reductions import (OK, ReductionError, VerificationCache, choose_ell, make_csp, make_permiset,
                         phi_encoding, reduce_csp_to_multiclique, reduce_multi_to_single,
                         reduce_permiset_to_hpartition, smallest_csp_gadgets, smallest_permiset_gadgets)
from .relations import complement, is_regular, make_relation, rel_copy
from .treedec import nice_from_graph, nicify, validate

DEFAULT_SEED = 7

# pinned constants for the structural suites
C_GADGET = 3471  # largest relation gadget for B=2, c=1, d=3 (all four value pairs allowed)
ALPHA = 30  # permiset reduction width <= ALPHA * k


@dataclass
class Criterion:
    name: str
    passed: bool
    detail: str


@dataclass
class SuiteReport:
    suite: str
    seed: int
    criteria: list[Criterion] = field(default_factory=list)
    cases: list[dict] = field(default_factory=list)
    timings: list[float] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.criteria)

    def check(self, name: str, passed: bool, detail: str) -> None:
        self.criteria.append(Criterion(name, bool(passed), detail))

    def to_dict(self) -> dict:
        return {"suite": self.suite, "seed": self.seed, "passed": self.passed,
                "criteria": [c.__dict__ for c in self.criteria], "cases": self.cases}

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)


class _Clock:
    def __init__(self, rep: SuiteReport):
        self.rep = rep

    def __enter__(self):
        self.t = time.perf_counter()

    def __exit__(self, *exc):
        self.rep.timings.append(time.perf_counter() - self.t)


def _ratio(bad: int, total: int) -> str:
    return f"{total - bad}/{total} agree"


# -- 1: clique DP vs oracle ---------------------------------------------------------

def clique_graphs(seed: int, count: int = 200) -> list[Graph]:
    rng = random.Random(seed)
    return [er_graph(rng.randint(3, 10), (0.3, 0.5, 0.8)[i % 3], rng) for i in range(count)]


def oracle_vs_clique_dp(seed: int = DEFAULT_SEED, count: int = 200) -> SuiteReport:
    rep = SuiteReport("oracle-vs-clique-dp", seed)
    bad = wit_bad = 0
    for gi, g in enumerate(clique_graphs(seed, count)):
        with _Clock(rep):
            ntd = nice_from_graph(g)
            for c in (1, 2, 3):
                for d in (3, 4):
                    for variant in ("dist", "arb"):
                        h = complete_graph(d)
                        res = clique_dp.solve_clique_packing(g, ntd, c, d, variant, witness=True)
                        ref, _ = max_packing_bruteforce(g, h, c, variant)
                        wit_ok = check_packing(g, h, res.witness, c, variant) and \
                            sum(m for _, m in res.witness) == res.value
                        part = (c * g.n) % d == 0 and res.value == c * g.n // d
                        cover, _ = exact_cover_feasible(g, h, [c] * g.n, variant, c=c)
                        bad += res.value != ref
                        wit_bad += not wit_ok
                        rep.cases.append({"graph": gi, "n": g.n, "m": g.m, "width": ntd.width, "c": c, "d": d,
                                          "variant": variant, "dp": res.value, "oracle": ref,
                                          "witness_ok": wit_ok, "partition": part, "exact_cover": cover})
    rep.check("packing value equals oracle", bad == 0, _ratio(bad, len(rep.cases)))
    rep.check("witnesses pass the coverage checker", wit_bad == 0, _ratio(wit_bad, len(rep.cases)))
    return rep


# -- 2: H-DP vs oracle ------------------------------------------------------------------

H_PATTERNS = ("K3", "P3", "paw", "C4", "K4")


def _pattern(name: str) -> Graph:
    return complete_graph(4) if name == "K4" else named_pattern(name)


def hdp_instances(seed: int, er_count: int = 100, kt_count: int = 50):
    """ER graphs on 4..9 vertices (dense ones capped at 7 vertices), then
    partial 3-trees on 10..30 vertices with their width-3 decompositions."""
    rng = random.Random(seed)
    out = []
    for i in range(er_count):
        n, p = rng.randint(4, 9), (0.3, 0.5, 0.8)[i % 3]
        if p == 0.8:
            n = min(n, 7)
        g = er_graph(n, p, rng)
        out.append(("er", g, nice_from_graph(g)))
    for _ in range(kt_count):
        g, td = partial_ktree(rng.randint(10, 30), 3, rng.choice((0.5, 0.7, 0.9)), rng)
        out.append(("ktree", g, nicify(td)))
    return out


def oracle_vs_hdp(seed: int = DEFAULT_SEED, er_count: int = 100, kt_count: int = 50) -> SuiteReport:
    rep = SuiteReport("oracle-vs-hdp", seed)
    bad = {"er": 0, "ktree": 0}
    for gi, (fam, g, ntd) in enumerate(hdp_instances(seed, er_count, kt_count)):
        with _Clock(rep):
            for name in H_PATTERNS:
                h = _pattern(name)
                val = hpack_dp.solve_h_packing(g, ntd, h).value
                ref, _ = max_packing_bruteforce(g, h, 1, "dist")
                part = g.n % h.n == 0 and val == g.n // h.n
                cover, _ = exact_cover_feasible(g, h, [1] * g.n, "dist", c=1)
                bad[fam] += val != ref
                rep.cases.append({"graph": gi, "family": fam, "n": g.n, "m": g.m, "width": ntd.width,
                                  "pattern": name, "dp": val, "oracle": ref,
                                  "partition": part, "exact_cover": cover})
    for fam in ("er", "ktree"):
        total = sum(1 for r in rep.cases if r["family"] == fam)
        rep.check(f"{fam} graphs: H-packing equals oracle", bad[fam] == 0, _ratio(bad[fam], total))
    return rep


# -- 3: state-space laws ------------------------------------------------------------

def state_law(seed: int = DEFAULT_SEED, count: int = 40) -> SuiteReport:
    """Dense clique tables have (c+1)^|bag| entries; H-DP type counts for K_3
    stay under the type bound on bags of size <= 4."""
    rep = SuiteReport("state-law", seed)
    rng = random.Random(seed)
    dense_bad = type_bad = 0
    k3 = complete_graph(3)
    for gi in range(count):
        g, td = partial_ktree(rng.randint(6, 14), 3, rng.choice((0.6, 0.8, 1.0)), rng)
        ntd = nicify(td)
        with _Clock(rep):
            for c in (1, 2, 3):
                tabs = clique_dp.run_tables(g, ntd, c, 3, "arb", layout="dense")
                for t, tab in tabs.items():
                    size = len(ntd.bags[t])
                    ok = tab.is_dense and tab.entries() == (c + 1) ** size
                    dense_bad += not ok
                    rep.cases.append({"graph": gi, "dp": "clique", "c": c, "node": t, "bag": size,
                                      "states": tab.entries(), "bound": (c + 1) ** size, "ok": ok})
            res = hpack_dp.solve_h_packing(g, ntd, k3)
            for t, kind, size, types in res.stats:
                bound = hpack_dp.type_bound(size, 3)
                ok = size > 4 or types <= bound
                type_bad += not ok
                rep.cases.append({"graph": gi, "dp": "hdp", "c": 1, "node": t, "bag": size,
                                  "states": types, "bound": bound, "ok": ok})
    n_dense = sum(1 for r in rep.cases if r["dp"] == "clique")
    rep.check("dense table size is (c+1)^|bag| at every node", dense_bad == 0, _ratio(dense_bad, n_dense))
    rep.check("K3 type count within the type bound", type_bad == 0,
              _ratio(type_bad, len(rep.cases) - n_dense))
    return rep


# -- 4: join fidelity ---------------------------------------------------------------

def join_fidelity(seed: int = DEFAULT_SEED, count: int = 1000) -> SuiteReport:
    rep = SuiteReport("join-fidelity", seed)
    rng = np.random.default_rng(seed)
    bad = 0
    for i in range(count):
        k = int(rng.integers(0, 6))
        c = int(rng.integers(1, 4))
        dens = float(rng.choice((0.1, 0.4, 0.8, 1.0)))
        order = tuple(range(k))
        left = Table(order, dense=random_table(k, c, dens, rng))
        right = Table(order, dense=random_table(k, c, dens, rng))
        with _Clock(rep):
            a = join_rule_naive(left, right, c).dense
            b = join_rule_convolution(left, right, c).dense
        same = a.shape == b.shape and bool(np.array_equal(a, b))
        bad += not same
        rep.cases.append({"pair": i, "bag": k, "c": c, "density": dens,
                          "present": int((a > NEG).sum()), "equal": same})
    rep.check("naive and convolution joins agree bit-for-bit", bad == 0, _ratio(bad, count))
    return rep


# -- 5: gadget relations ------------------------------------------------------------

def gadget_catalogue() -> list[tuple[str, Callable]]:
    k3 = complete_graph(3)
    return [
        ("neq(1,3)", lambda: neq_gadget(1, 3)),
        ("neq(2,3)", lambda: neq_gadget(2, 3)),
        ("neq(1,4)", lambda: neq_gadget(1, 4)),
        ("eq_single(1,K3)", lambda: eq_gadget_single(1, k3)),
        ("toggle(K3)", lambda: toggle_gadget(k3)),
        ("arb(K3,{111,000})", lambda: arb_relation_gadget(k3, make_relation(3, 1, [(1, 1, 1), (0, 0, 0)]))),
        ("arb(K3,{10,01})", lambda: arb_relation_gadget(k3, make_relation(2, 1, [(1, 0), (0, 1)]))),
        ("arb(K3,{100,010,001})",
         lambda: arb_relation_gadget(k3, make_relation(3, 1, [(1, 0, 0), (0, 1, 0), (0, 0, 1)]))),
    ]


def gadget_relations(seed: int = DEFAULT_SEED) -> SuiteReport:
    rep = SuiteReport("gadget-relations", seed)
    for name, make in gadget_catalogue():
        with _Clock(rep):
            gd = make()
            vr = verify_gadget(gd)
        rep.cases.append({"gadget": name, "vertices": gd.graph.n, "portals": len(gd.portals),
                          "claimed": len(gd.claimed.tuples), **vr.to_dict()})
        rep.check(f"{name} realizes its claimed relation", vr.ok,
                  f"dist_ok={vr.dist_ok} arb_ok={vr.arb_ok}")
    return rep


# -- 6: multi to single -------------------------------------------------------------

def multi_graphs(seed: int, count: int = 50) -> list[tuple[Graph, int]]:
    """Half plain ER graphs, half with a planted triangle partition plus noise,
    so both answers occur."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        c = 1 + i % 2
        if i % 4 < 2:
            g = er_graph(rng.randint(3, 8), (0.3, 0.5, 0.7)[i % 3], rng)
        else:
            n = rng.choice((3, 6))
            perm = list(range(n))
            rng.shuffle(perm)
            edges = {(min(a, b), max(a, b)) for t in range(0, n, 3)
                     for a, b in ((perm[t], perm[t + 1]), (perm[t], perm[t + 2]), (perm[t + 1], perm[t + 2]))}
            edges |= {(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.3}
            g = make_graph(n, sorted(edges))
        out.append((g, c))
    return out


def multi_to_single(seed: int = DEFAULT_SEED, count: int = 50) -> SuiteReport:
    rep = SuiteReport("multi-to-single", seed)
    k3 = complete_graph(3)
    bad = 0
    for gi, (g, c) in enumerate(multi_graphs(seed, count)):
        with _Clock(rep):
            out = reduce_multi_to_single(g, c, 3)
            valid = validate(out.decomposition, out.graph) is None
            before = partition_feasible(g, k3, c, "arb")
            after = clique_dp.solve_clique_partition(out.graph, nicify(out.decomposition), c, 3, "dist",
                                                     fast=True)
        bad += before != after or not valid
        rep.cases.append({"graph": gi, "n": g.n, "m": g.m, "c": c, "cliques": len(out.certificate["cliques"]),
                          "out_n": out.graph.n, "out_width": out.width, "valid": valid,
                          "input_feasible": before, "output_feasible": after})
    rep.check("input multi-partition equals output single-partition", bad == 0, _ratio(bad, count))
    rep.check("both answers occur", len({r["input_feasible"] for r in rep.cases}) == 2,
              f"{sum(r['input_feasible'] for r in rep.cases)} feasible of {count}")
    return rep


# -- 7: CSP reduction structure ---------------------------------------------------------

def random_csp(rng: random.Random, B: int = 2, max_vars: int = 4):
    n = rng.randint(2, max_vars)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = rng.sample(pairs, rng.randint(1, min(3, len(pairs))))
    values = [(a, b) for a in range(1, B + 1) for b in range(1, B + 1)]
    cons = [(i, j, rng.sample(values, rng.randint(1, len(values)))) for i, j in chosen]
    return make_csp(n, B, cons)


def csp_structure(seed: int = DEFAULT_SEED, count: int = 20) -> SuiteReport:
    rep = SuiteReport("csp-structure", seed)
    rng = random.Random(seed)
    c, d = 1, 3
    ell = choose_ell(2, c, d)
    phi = phi_encoding(2, ell, c, d)
    w = make_relation(ell, c, phi)
    reg = {"W": is_regular(w, 0, d), "W^C": is_regular(complement(w, c), 0, d),
           "COPY": is_regular(rel_copy(w, c), 0, d)}
    bad_valid = bad_law = bad_reg = 0
    for gi in range(count):
        inst = random_csp(rng)
        with _Clock(rep):
            out = reduce_csp_to_multiclique(inst, c, d)
            valid = validate(out.decomposition, out.graph) is None
            p = out.certificate["max_var_bag"] - 1
            bound = out.certificate["ell"] * (p + 1) + C_GADGET
            rj_ok = all(is_regular(gd.claimed, 0, d) for name, gd in out.templates.items())
        bad_valid += not valid
        bad_law += out.width + 1 > bound
        bad_reg += not rj_ok
        rep.cases.append({"instance": gi, "vars": inst.n, "constraints": len(inst.constraints),
                          "out_n": out.graph.n, "max_bag": out.width + 1, "bound": bound,
                          "max_gadget": out.certificate["max_gadget"], "valid": valid,
                          "relations_regular": rj_ok, "satisfiable": csp_bruteforce(inst)})
    rep.check("emitted decompositions validate", bad_valid == 0, _ratio(bad_valid, count))
    rep.check(f"max bag <= ell*(p+1) + {C_GADGET}", bad_law == 0, _ratio(bad_law, count))
    rep.check("phi image, W^C and COPY are (0,d)-regular", all(reg.values()),
              ", ".join(f"{k}={v}" for k, v in reg.items()))
    rep.check("every R_j is (0,d)-regular", bad_reg == 0, _ratio(bad_reg, count))
    # B = 1 round trips: the only relations are {(1,1)} and the empty one
    trips = []
    for n, cons in ((2, [(0, 1, [(1, 1)])]), (2, [(0, 1, [])]), (3, [(0, 1, [(1, 1)]), (1, 2, [(1, 1)])]),
                    (3, [(0, 1, [(1, 1)]), (1, 2, [])])):
        inst = make_csp(n, 1, cons)
        with _Clock(rep):
            out = reduce_csp_to_multiclique(inst, c, d)
            if out.status == OK:
                feas = clique_dp.solve_clique_partition(out.graph, nicify(out.decomposition), c, d, "arb",
                                                        fast=True)
            else:
                feas = False
        sat = csp_bruteforce(inst)
        trips.append(feas == sat)
        rep.cases.append({"instance": f"B1-{len(trips)}", "vars": n, "constraints": len(cons),
                          "status": out.status, "out_n": out.graph.n, "feasible": feas, "satisfiable": sat})
    rep.check("B=1 round trips: feasibility equals satisfiability", all(trips), _ratio(trips.count(False), len(trips)))
    return rep


# -- 8: permiset reduction structure ----------------------------------------------------

def permiset_structure(seed: int = DEFAULT_SEED, per_k: int = 2) -> SuiteReport:
    rep = SuiteReport("permiset-structure", seed)
    rng = random.Random(seed)
    h = cycle_graph(4)
    bad_valid = bad_width = 0
    for k in (2, 3):
        cells = [(r, s) for r in range(k) for s in range(k)]
        for trial in range(per_k):
            pairs = [(a, b) for i, a in enumerate(cells) for b in cells[i + 1:]]
            edges = rng.sample(pairs, rng.randint(1, min(4, len(pairs))))
            inst = make_permiset(k, edges)
            with _Clock(rep):
                out = reduce_permiset_to_hpartition(inst, h)
                valid = validate(out.decomposition, out.graph) is None
            bad_valid += not valid
            bad_width += out.width > ALPHA * k
            rep.cases.append({"k": k, "trial": trial, "edges": [list(map(list, e)) for e in edges],
                              "out_n": out.graph.n, "width": out.width, "valid": valid,
                              "gadgets": out.certificate["gadgets"]})
    rep.check("construction succeeds and decompositions validate", bad_valid == 0,
              _ratio(bad_valid, len(rep.cases)))
    rep.check(f"width <= {ALPHA}*k", bad_width == 0, _ratio(bad_width, len(rep.cases)))
    rejected = []
    for name, bg in (("paw", paw_graph()), ("K4", complete_graph(4)), ("P3", path_graph(3))):
        try:
            reduce_permiset_to_hpartition(make_permiset(2, [((0, 0), (1, 1))]), bg)
            rejected.append(False)
        except ReductionError:
            rejected.append(True)
    rep.check("block-graph patterns rejected", all(rejected), f"{sum(rejected)}/{len(rejected)} rejected")
    cache = VerificationCache()
    ok = {}
    for name, gd in smallest_permiset_gadgets(h).items():
        with _Clock(rep):
            ok[name] = cache.verify(gd).ok
        rep.cases.append({"gadget": name, "k": 2, "vertices": gd.graph.n, "verified": ok[name]})
    rep.check("every gadget family verified at k=2", all(ok.values()),
              ", ".join(f"{k}={v}" for k, v in sorted(ok.items())))
    return rep


# -- 9: partition as packing ----------------------------------------------------------

def partition_consistency(seed: int = DEFAULT_SEED, clique: SuiteReport | None = None,
                          hdp: SuiteReport | None = None) -> SuiteReport:
    """(max packing = c*n/|H|) against exact cover with all-c demand, on the
    cases of the two oracle suites. Pass their reports to avoid a rerun."""
    rep = SuiteReport("partition-consistency", seed)
    clique = clique or oracle_vs_clique_dp(seed)
    hdp = hdp or oracle_vs_hdp(seed)
    for src in (clique, hdp):
        cases = src.cases
        bad = sum(r["partition"] != r["exact_cover"] for r in cases)
        feas = sum(r["exact_cover"] for r in cases)
        rep.cases.append({"source": src.suite, "cases": len(cases), "feasible": feas, "mismatch": bad})
        rep.timings.extend(src.timings)
        rep.check(f"{src.suite}: partition via max equals exact cover", bad == 0,
                  f"{_ratio(bad, len(cases))}, {feas} feasible")
    return rep


SUITES: dict[str, Callable[..., SuiteReport]] = {
    "oracle-vs-clique-dp": oracle_vs_clique_dp,
    "oracle-vs-hdp": oracle_vs_hdp,
    "state-law": state_law,
    "join-fidelity": join_fidelity,
    "gadget-relations": gadget_relations,
    "multi-to-single": multi_to_single,
    "csp-structure": csp_structure,
    "permiset-structure": permiset_structure,
    "partition-consistency": partition_consistency,
}


def run_suite(name: str, seed: int = DEFAULT_SEED) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    return SUITES[name](seed)
