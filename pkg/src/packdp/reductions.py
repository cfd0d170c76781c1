"""Lower-bound constructions as instance generators.

Three reductions are provided: 2-CSP to multi K_d-partition, multi to
single K_d-partition, and k x k permutation independent set to
H-partition. Each returns the constructed graph together with the path or
tree decomposition its proof describes, plus certificate maps that tie
input objects to vertex groups.

Decompositions come in two flavours. The literal one drops whole gadgets
into a bag. The compact one (default) replaces that single bag by a run of
bags, each holding the same base plus one bag of a path decomposition of
the gadget internals, which keeps widths small enough to actually run the
solvers on.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import networkx as nx

from .gadgets import (Assembly, Gadget, arb_relation_gadget, base_neq_for, blowup_neq,
                      clique_reg_relation_gadget, eq_gadget_single, layout_groups)
from .graph import (Graph, blocks, cliques, complete_graph, is_block_graph, is_clique,
                    min_block_separator)
from .oracle import Budget, VerifyReport, verify_gadget
from .relations import (Relation, complement, complement_tuple, make_relation, regular_residue,
                        rel_copy, rel_sel, rel_sel_full, sel_tuple)
from .treedec import (TreeDecomposition, heuristic_treedec, make_td, order_bags, path_decomposition,
                      rcm_order, validate)

OK, UNSAT = "ok", "unsatisfiable"


class ReductionError(ValueError):
    pass


@dataclass(frozen=True)
class ReductionOutput:
    graph: Graph
    decomposition: TreeDecomposition
    certificate: dict
    templates: dict[str, Gadget] = field(default_factory=dict)
    status: str = OK

    @property
    def width(self) -> int:
        return self.decomposition.width


# -- shared plumbing ---------------------------------------------------------------

class _Builder:
    """Assembly plus a bag schedule resolved once the graph is final."""

    def __init__(self, compact: bool) -> None:
        self.asm = Assembly()
        self.compact = compact
        self.plan: list[tuple] = []
        self.max_gadget = 0

    def vertices(self, prefix: str, k: int) -> list[int]:
        return self.asm.vertices(prefix, k)

    def place(self, gd: Gadget, prefix: str, targets: Sequence[int]) -> list[list[int]]:
        """Glue gd in; returns its new internal ids as layout groups, hub first."""
        before = len(self.asm.labels)
        self.asm.gadget(gd, prefix, targets)
        self.max_gadget = max(self.max_gadget, gd.graph.n)
        ports = set(gd.portals)
        local = {v: before + i for i, v in enumerate(v for v in range(gd.graph.n) if v not in ports)}
        return [[local[v] for v in grp] for grp in layout_groups(gd)]

    def bag(self, vs: Iterable[int]) -> None:
        self.plan.append(("bag", frozenset(vs)))

    def gadget_bags(self, base: Iterable[int], groups: Sequence[Sequence[int]]) -> None:
        self.plan.append(("gadget", frozenset(base), tuple(map(tuple, groups))))

    def resolve(self, g: Graph) -> list[frozenset[int]]:
        out: list[frozenset[int]] = []
        for item in self.plan:
            if item[0] == "bag":
                out.append(item[1])
            elif not self.compact:
                out.append(item[1].union(*item[2]))
            else:
                base = item[1] | frozenset(item[2][0])
                out.append(base)
                for grp in item[2][1:]:
                    for b in _narrow_bags(g, grp):
                        out.append(base | b)
        # drop consecutive repeats
        return [b for i, b in enumerate(out) if i == 0 or b != out[i - 1]]


def _narrow_bags(g: Graph, vs: Sequence[int]) -> list[frozenset[int]]:
    # construction order is often narrower than RCM on ring-shaped parts
    tries = [order_bags(g, rcm_order(g, vs)), order_bags(g, sorted(vs))]
    return min(tries, key=lambda bags: max((len(b) for b in bags), default=0))


def _require_regular(r: Relation, d: int, x: int | None = None, what: str = "relation") -> int:
    res = regular_residue(r, d)
    if res is None or (x is not None and res != x):
        raise ReductionError(f"{what} is not ({x if x is not None else 'x'},{d})-regular")
    return res


def _check_output(g: Graph, td: TreeDecomposition) -> None:
    bad = validate(td, g)
    if bad:
        raise ReductionError(f"emitted decomposition is invalid: {bad}")


# -- 2-CSP -----------------------------------------------------------------------------

Constraint = tuple[int, int, frozenset[tuple[int, int]]]


@dataclass(frozen=True)
class Csp2Instance:
    n: int
    B: int
    constraints: tuple[Constraint, ...]
    bags: tuple[frozenset[int], ...]  # nice path decomposition of the primal graph
    assign: tuple[int, ...]  # constraint -> bag index, injective

    def to_dict(self) -> dict:
        return {"n": self.n, "B": self.B,
                "constraints": [{"i": i, "j": j, "allowed": sorted(map(list, s))}
                                for i, j, s in self.constraints],
                "pathdec": [sorted(b) for b in self.bags]}


def _linear_bags(n: int, edges: set[tuple[int, int]]) -> list[frozenset[int]]:
    g = Graph(n, frozenset(edges))
    return order_bags(g, list(range(n)))


def _nice_path(bags: Sequence[frozenset[int]]) -> list[frozenset[int]]:
    """Consecutive bags differ by one vertex; starts and ends empty."""
    out = [frozenset()]
    for b in list(bags) + [frozenset()]:
        cur = out[-1]
        for v in sorted(cur - b):
            cur = cur - {v}
            out.append(cur)
        for v in sorted(b - cur):
            cur = cur | {v}
            out.append(cur)
    return [b for i, b in enumerate(out) if i == 0 or b != out[i - 1]]


def make_csp(n: int, B: int, constraints: Iterable[tuple[int, int, Iterable[Sequence[int]]]],
             pathdec: Sequence[Iterable[int]] | None = None) -> Csp2Instance:
    if n < 1 or B < 1:
        raise ReductionError("need n >= 1 and B >= 1")
    cons: list[Constraint] = []
    for i, j, allowed in constraints:
        if not (0 <= i < n and 0 <= j < n) or i == j:
            raise ReductionError(f"constraint ({i},{j}) must join two distinct variables")
        s = frozenset((int(a), int(b)) for a, b in allowed)
        if any(not (1 <= a <= B and 1 <= b <= B) for a, b in s):
            raise ReductionError(f"constraint ({i},{j}) uses values outside 1..{B}")
        cons.append((i, j, s))
    edges = {(min(i, j), max(i, j)) for i, j, _ in cons}
    if pathdec is None:
        raw = _linear_bags(n, edges)
    else:
        raw = [frozenset(b) for b in pathdec]
        td = path_decomposition(raw, n)
        bad = validate(td, Graph(n, frozenset(edges)))
        if bad:
            raise ReductionError(f"path decomposition invalid for the primal graph: {bad}")
    nice = _nice_path(raw)
    first = []
    for i, j, _ in cons:
        first.append(next(t for t, b in enumerate(nice) if i in b and j in b))
    bags: list[frozenset[int]] = []
    assign = [0] * len(cons)
    for t, b in enumerate(nice):
        here = [s for s, f in enumerate(first) if f == t]
        if not here:
            bags.append(b)
        for s in here:
            assign[s] = len(bags)
            bags.append(b)
    return Csp2Instance(n, B, tuple(cons), tuple(bags), tuple(assign))


def csp_from_dict(d: dict) -> Csp2Instance:
    cons = [(int(c["i"]), int(c["j"]), [tuple(p) for p in c["allowed"]]) for c in d["constraints"]]
    return make_csp(int(d["n"]), int(d["B"]), cons, d.get("pathdec"))


def choose_ell(B: int, c: int, d: int) -> int:
    """Smallest multiple of d with (c+1)^(ell-d) >= B."""
    if B < 1:
        raise ReductionError("B must be positive")
    ell = d
    while (c + 1) ** (ell - d) < B:
        ell += d
    return ell


def phi_encoding(B: int, ell: int, c: int, d: int) -> list[tuple[int, ...]]:
    """Value v (1-based) -> digits of v-1 in base c+1 over ell-d coordinates,
    then d padding coordinates lifting the weight to a multiple of d."""
    free = ell - d
    if free < 0 or (c + 1) ** free < B:
        raise ReductionError(f"capacity (c+1)^(ell-d) is below B={B}")
    out = []
    for v in range(B):
        digits = []
        x = v
        for _ in range(free):
            digits.append(x % (c + 1))
            x //= c + 1
        digits.reverse()
        p = (d - sum(digits) % d) % d
        out.append(tuple(digits) + (1,) * p + (0,) * (d - p))
    return out


def reduce_csp_to_multiclique(inst: Csp2Instance, c: int, d: int, ell: int | None = None,
                              compact: bool = True) -> ReductionOutput:
    if c < 1 or d < 3:
        raise ReductionError("need c >= 1 and d >= 3")
    if any(not s for _, _, s in inst.constraints):
        empty = Graph(0, frozenset())
        return ReductionOutput(empty, make_td([[]], [], 0), {"reason": "empty constraint relation"},
                               status=UNSAT)
    ell = choose_ell(inst.B, c, d) if ell is None else ell
    if ell % d:
        raise ReductionError("ell must be a multiple of d")
    phi = phi_encoding(inst.B, ell, c, d)
    w_rel = make_relation(ell, c, phi)
    wc_rel = complement(w_rel, c)
    copy_rel = rel_copy(w_rel, c)
    for r, name in ((w_rel, "W"), (wc_rel, "W^C"), (copy_rel, "COPY")):
        _require_regular(r, d, 0, name)
    memo: dict[Relation, Gadget] = {}

    def gadget_for(r: Relation) -> Gadget:
        if r not in memo:
            memo[r] = clique_reg_relation_gadget(c, d, r)
        return memo[r]

    t = len(inst.bags)
    lo = [min(j for j, b in enumerate(inst.bags) if i in b) for i in range(inst.n)]
    hi = [max(j for j, b in enumerate(inst.bags) if i in b) for i in range(inst.n)]
    rep = {j: s for s, j in enumerate(inst.assign)}
    bld = _Builder(compact)
    a: dict[tuple[int, int], list[int]] = {}
    for i in range(inst.n):
        for j in range(lo[i], hi[i] + 2):
            a[i, j] = bld.vertices(f"a{i + 1}.{j + 1}.", ell)
    rels: dict[int, Relation] = {}
    for s, (i1, i2, allowed) in enumerate(inst.constraints):
        tuples = [phi[u1 - 1] + phi[u2 - 1] + complement_tuple(phi[u1 - 1], c)
                  + complement_tuple(phi[u2 - 1], c) for u1, u2 in sorted(allowed)]
        rels[s] = make_relation(4 * ell, c, tuples)
        _require_regular(rels[s], d, 0, f"R_{s + 1}")
    counts = {"L": 0, "R": 0, "N": 0, "F": 0}
    for j in range(t):
        cur = {v for i in inst.bags[j] for v in a[i, j]}
        bld.bag(cur)
        for i in sorted(inst.bags[j]):
            if lo[i] == j:
                ins = bld.place(gadget_for(wc_rel), f"L{i + 1}", a[i, j])
                bld.gadget_bags(cur, ins)
                counts["L"] += 1
        gamma: set[int] = set()
        if j in rep:
            i1, i2, _ = inst.constraints[rep[j]]
            gamma = {i1, i2}
            ports = a[i1, j] + a[i2, j] + a[i1, j + 1] + a[i2, j + 1]
            ins = bld.place(gadget_for(rels[rep[j]]), f"N{j + 1}", ports)
            bld.gadget_bags(cur | set(a[i1, j + 1]) | set(a[i2, j + 1]), ins)
            cur = (cur - set(a[i1, j]) - set(a[i2, j])) | set(a[i1, j + 1]) | set(a[i2, j + 1])
            bld.bag(cur)
            counts["N"] += 1
        for i in sorted(inst.bags[j] - gamma):
            ins = bld.place(gadget_for(copy_rel), f"F{i + 1}.{j + 1}", a[i, j] + a[i, j + 1])
            bld.gadget_bags(cur | set(a[i, j + 1]), ins)
            cur = (cur - set(a[i, j])) | set(a[i, j + 1])
            bld.bag(cur)
            counts["F"] += 1
        for i in sorted(inst.bags[j]):
            if hi[i] == j:
                ins = bld.place(gadget_for(w_rel), f"R{i + 1}", a[i, j + 1])
                bld.gadget_bags(cur, ins)
                cur -= set(a[i, j + 1])
                counts["R"] += 1
    g = bld.asm.finish()
    bags = bld.resolve(g)
    td = path_decomposition(bags, g.n)
    _check_output(g, td)
    cert = {"ell": ell, "phi": [list(x) for x in phi], "l": lo, "r": hi,
            "a": {f"{i},{j}": vs for (i, j), vs in a.items()},
            "a_vertices": sum(len(vs) for vs in a.values()), "gadgets": counts,
            "max_gadget": bld.max_gadget, "max_var_bag": max((len(b) for b in inst.bags), default=0)}
    templates = {"W": gadget_for(w_rel), "W^C": gadget_for(wc_rel), "COPY": gadget_for(copy_rel)}
    for s, r in rels.items():
        templates[f"R{s + 1}"] = gadget_for(r)
    return ReductionOutput(g, td, cert, templates)


# -- multi to single --------------------------------------------------------------------

def reduce_multi_to_single(g: Graph, c: int, d: int, td: TreeDecomposition | None = None,
                           compact: bool = True) -> ReductionOutput:
    """Keep V(g), drop its edges, and hang one EQ gadget on every d-clique.

    In compact mode each gadget gets a chain of bags (clique plus a slice of
    the gadget) hanging off a duplicate of a bag holding the clique; in
    literal mode the duplicate bag simply receives the whole gadget.
    """
    if c < 1 or d < 3:
        raise ReductionError("need c >= 1 and d >= 3")
    td = td or heuristic_treedec(g, "min-fill")
    bad = validate(td, g)
    if bad:
        raise ReductionError(f"input decomposition invalid: {bad}")
    eq = eq_gadget_single(c, complete_graph(d))
    asm = Assembly([g.label(v) for v in range(g.n)], set())
    placed: list[tuple[tuple[int, ...], list[int]]] = []
    for x in cliques(g, d):
        before = len(asm.labels)
        asm.gadget(eq, "E" + "-".join(str(v + 1) for v in x), list(x))
        placed.append((x, list(range(before, len(asm.labels)))))
    out = asm.finish()
    bags = list(td.bags)
    tree = list(td.tree)
    for x, ins in placed:
        host = next(i for i, b in enumerate(td.bags) if set(x) <= b)
        dup = len(bags)
        if compact:
            bags.append(frozenset(x))
        else:
            bags.append(td.bags[host] | frozenset(ins))
        tree.append((host, dup))
        if compact:
            prev = dup
            for b in _narrow_bags(out, ins):
                bags.append(frozenset(x) | b)
                tree.append((prev, len(bags) - 1))
                prev = len(bags) - 1
    otd = make_td(bags, tree, out.n)
    _check_output(out, otd)
    cert = {"cliques": [list(x) for x, _ in placed],
            "gadget_vertices": {"-".join(map(str, x)): ins for x, ins in placed},
            "input_width": td.width, "gadget_size": eq.graph.n}
    return ReductionOutput(out, otd, cert, {"EQ": eq})


# -- permutation independent set --------------------------------------------------------

@dataclass(frozen=True)
class PermIsetInstance:
    k: int
    graph: Graph  # cell (r, s) is vertex r*k + s

    def cell(self, v: int) -> tuple[int, int]:
        return divmod(v, self.k)


def make_permiset(k: int, edges: Iterable[tuple[tuple[int, int], tuple[int, int]]]) -> PermIsetInstance:
    if k < 2:
        raise ReductionError("need k >= 2")
    es = []
    for (r1, s1), (r2, s2) in edges:
        for r, s in ((r1, s1), (r2, s2)):
            if not (0 <= r < k and 0 <= s < k):
                raise ReductionError(f"cell ({r},{s}) outside the {k}x{k} grid")
        es.append((r1 * k + s1, r2 * k + s2))
    from .graph import make_graph
    return PermIsetInstance(k, make_graph(k * k, es))


@dataclass(frozen=True)
class SeparatorChoice:
    block: tuple[int, ...]
    S: tuple[int, ...]
    U: tuple[int, ...]
    D: tuple[int, ...]
    components: tuple[tuple[int, ...], ...]


def choose_separator(h: Graph) -> SeparatorChoice:
    """Non-clique block with the smallest separator; S split by sorted id."""
    if not h.is_connected():
        raise ReductionError("pattern must be connected")
    if is_block_graph(h):
        raise ReductionError("pattern is a block graph; the reduction is undefined")
    best = None
    for blk in blocks(h).blocks:
        if is_clique(h, blk):
            continue
        sep = min_block_separator(h, blk)
        key = (len(sep), tuple(sorted(blk)))
        if best is None or key < best[0]:
            best = (key, tuple(sorted(blk)), tuple(sorted(sep)))
    _, blk, sep = best
    half = len(sep) // 2
    rest = h.induced([v for v in range(h.n) if v not in sep])
    sub, ids = rest
    comps = sorted(tuple(sorted(ids[v] for v in cc)) for cc in nx.connected_components(sub.to_networkx()))
    return SeparatorChoice(blk, sep, sep[:half], sep[half:], tuple(comps))


def _without(r: Relation, t: tuple[int, ...]) -> Relation:
    rest = [x for x in r.tuples if x != t]
    if not rest:
        raise ReductionError("removing the forbidden tuple empties the relation")
    return make_relation(r.arity, r.bound, rest)


def permiset_relations(k: int, m1: int, mt: int, mids: Sequence[int], w: tuple[int, int] = (1, 1)
                       ) -> dict[str, Relation]:
    """Relations used by the construction for one edge pattern w (1-based
    columns of the two endpoints)."""
    y = [range(1, k + 1), range(k + 1, 2 * k + 1)]
    rels = {"A": rel_sel_full(k, m1), "E": rel_sel_full(k, mt), "K": rel_sel_full(k, mt + m1),
            "Z": _without(rel_sel(y, 2 * k, mt + m1), sel_tuple((w[0], k + w[1]), 2 * k, mt + m1)),
            "F": _without(rel_sel(y, 2 * k, mt), sel_tuple((w[0], k + w[1]), 2 * k, mt))}
    for idx, m in enumerate(mids):
        rels[f"Q{idx + 2}"] = rel_sel_full(k, m)
    return rels


def reduce_permiset_to_hpartition(inst: PermIsetInstance, h: Graph, base_neq: Gadget | None = None,
                                  compact: bool = True) -> ReductionOutput:
    if h.n > 10:
        raise ReductionError("pattern larger than 10 vertices")
    sep = choose_separator(h)
    k = inst.k
    edges = sorted(inst.graph.edges)
    if not edges:
        raise ReductionError("instance has no edges")
    base = base_neq or (base_neq_for(1, h) if is_clique(h, range(h.n)) else blowup_neq(h))
    comps = sep.components
    t = len(comps)
    memo: dict[Relation, Gadget] = {}

    def gadget_for(r: Relation, name: str) -> Gadget:
        _require_regular(r, h.n, None, name)
        if r not in memo:
            memo[r] = arb_relation_gadget(h, r, base)
        return memo[r]

    bld = _Builder(compact)
    nE = len(edges)
    U = [[bld.vertices(f"U{s + 1}.{i + 1}.", len(sep.U)) for i in range(k)] for s in range(nE)]
    D = [[bld.vertices(f"D{s + 1}.{j + 1}.", len(sep.D)) for j in range(k)] for s in range(nE)]
    X = [[[[bld.vertices(f"X{l + 1}.{s + 1}.{i + 1}.{j + 1}.", len(comps[l])) for j in range(k)]
           for i in range(k)] for s in range(nE)] for l in range(t)]
    for s in range(nE):
        for i in range(k):
            for j in range(k):
                where = {}
                for u, v in zip(sep.U, U[s][i]):
                    where[u] = v
                for u, v in zip(sep.D, D[s][j]):
                    where[u] = v
                for l in range(t):
                    for u, v in zip(comps[l], X[l][s][i][j]):
                        where[u] = v
                for u, v in h.edges:
                    bld.asm.edge(where[u], where[v])

    def xrow(l: int, s: int, i: int) -> list[int]:
        return [v for j in range(k) for v in X[l][s][i][j]]

    def xpair(s: int, i: int) -> list[int]:
        return [v for j in range(k) for v in X[t - 1][s][i][j] + X[0][s + 1][i][j]]

    ends = []
    for a, b in edges:
        (i1, j1), (i2, j2) = sorted([inst.cell(a), inst.cell(b)])
        ends.append((i1, j1, i2, j2))
    m1, mt = len(comps[0]), len(comps[-1])
    mids = [len(cc) for cc in comps[1:-1]]
    families: dict[str, Relation] = {}
    counts: dict[str, int] = {}

    def use(name: str, r: Relation, prefix: str, ports: list[int], base_set: set[int]) -> None:
        gd = gadget_for(r, name)
        ins = bld.place(gd, prefix, ports)
        bld.gadget_bags(base_set | set(ports), ins)
        families.setdefault(name[0], r)
        counts[name[0]] = counts.get(name[0], 0) + 1

    def vs(s: int) -> set[int]:
        return {v for i in range(k) for v in U[s][i] + D[s][i]}

    def q_gadgets(s: int, cur: set[int]) -> None:
        for l in range(1, t - 1):
            for i in range(k):
                use("Q", rel_sel_full(k, len(comps[l])), f"Q{l + 1}.{s + 1}.{i + 1}", xrow(l, s, i), cur)

    cur = vs(0)
    for i in range(k):
        use("A", rel_sel_full(k, m1), f"A{i + 1}", xrow(0, 0, i), cur)
    q_gadgets(0, cur)
    bld.bag(cur)
    vacuous = []
    for s in range(1, nE):
        i1, j1, i2, j2 = ends[s - 1]
        cur = cur | {v for j in range(k) for v in D[s][j]}
        bld.bag(cur)
        special = {i1, i2} if i1 != i2 else set()
        if i1 == i2:
            vacuous.append(s - 1)
        for i in range(k):
            if i in special:
                continue
            use("K", rel_sel_full(k, mt + m1), f"K{s}.{i + 1}", xpair(s - 1, i), cur | set(U[s][i]))
            cur = (cur - set(U[s - 1][i])) | set(U[s][i])
            bld.bag(cur)
        if special:
            z = permiset_relations(k, m1, mt, mids, (j1 + 1, j2 + 1))["Z"]
            new = set(U[s][i1]) | set(U[s][i2])
            use("Z", z, f"Z{s}", xpair(s - 1, i1) + xpair(s - 1, i2), cur | new)
            cur = (cur - set(U[s - 1][i1]) - set(U[s - 1][i2])) | new
            bld.bag(cur)
        cur = cur - {v for j in range(k) for v in D[s - 1][j]}
        bld.bag(cur)
        q_gadgets(s, cur)
    i1, j1, i2, j2 = ends[-1]
    special = {i1, i2} if i1 != i2 else set()
    if i1 == i2:
        vacuous.append(nE - 1)
    for i in range(k):
        if i not in special:
            use("E", rel_sel_full(k, mt), f"E{i + 1}", xrow(t - 1, nE - 1, i), cur)
    if special:
        f = permiset_relations(k, m1, mt, mids, (j1 + 1, j2 + 1))["F"]
        use("F", f, "F", xrow(t - 1, nE - 1, i1) + xrow(t - 1, nE - 1, i2), cur)
    g = bld.asm.finish()
    bags = bld.resolve(g)
    td = path_decomposition(bags, g.n)
    _check_output(g, td)
    cert = {"separator": {"block": list(sep.block), "S": list(sep.S), "U": list(sep.U),
                          "D": list(sep.D), "components": [list(cc) for cc in comps]},
            "edges": [list(e) for e in ends], "vacuous_edges": vacuous, "gadgets": counts,
            "U": {f"{s},{i}": U[s][i] for s in range(nE) for i in range(k)},
            "D": {f"{s},{j}": D[s][j] for s in range(nE) for j in range(k)},
            "max_gadget": bld.max_gadget}
    templates = {"base": base}
    for name, r in families.items():
        templates[name] = memo[r]
    return ReductionOutput(g, td, cert, templates)


# -- verification cache -----------------------------------------------------------------

class VerificationCache:
    """oracle.verify_gadget results keyed by (kind, c, H, relation)."""

    def __init__(self) -> None:
        self._reports: dict[tuple, VerifyReport] = {}
        self.hits = 0

    @staticmethod
    def key(gd: Gadget) -> tuple:
        return (gd.kind, gd.c, gd.pattern.n, gd.pattern.edges, gd.claimed)

    def verify(self, gd: Gadget, budget: Budget | None = None) -> VerifyReport:
        key = self.key(gd)
        if key in self._reports:
            self.hits += 1
            return self._reports[key]
        rep = verify_gadget(gd, budget)
        self._reports[key] = rep
        return rep

    def __len__(self) -> int:
        return len(self._reports)


def smallest_permiset_gadgets(h: Graph, base_neq: Gadget | None = None) -> dict[str, Gadget]:
    """One gadget per family used by the permutation reduction, at k = 2."""
    sep = choose_separator(h)
    base = base_neq or blowup_neq(h)
    comps = sep.components
    rels = permiset_relations(2, len(comps[0]), len(comps[-1]), [len(cc) for cc in comps[1:-1]])
    out = {"base": base}
    for name, r in rels.items():
        _require_regular(r, h.n, None, name)
        out[name] = arb_relation_gadget(h, r, base)
    return out


def smallest_csp_gadgets(c: int, d: int) -> dict[str, Gadget]:
    """Gadget families of the CSP reduction at alphabet size 1."""
    ell = choose_ell(1, c, d)
    phi = phi_encoding(1, ell, c, d)
    w = make_relation(ell, c, phi)
    r = make_relation(4 * ell, c, [phi[0] + phi[0] + complement_tuple(phi[0], c) * 2])
    return {"W": clique_reg_relation_gadget(c, d, w),
            "W^C": clique_reg_relation_gadget(c, d, complement(w, c)),
            "COPY": clique_reg_relation_gadget(c, d, rel_copy(w, c)),
            "R": clique_reg_relation_gadget(c, d, r)}
