"""Gadget builders.

A gadget is a graph with an ordered list of portal vertices, built for a
fixed pattern H and coverage bound c, together with the relation it is
claimed to realize. Builders only assemble graphs; whether the claim holds is
checked separately by the oracle.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Sequence

from .graph import Graph, blow_up, complete_graph, graph_from_dict, graph_to_dict, is_clique, make_graph
from .relations import (Relation, make_relation, regular_residue, rel_cneq, rel_cover, rel_eq,
                        relation_from_dict, weight)

CLAIMED, WRAPPED, UNKNOWN = "claimed-coherent", "wrapped", "unknown"


class GadgetError(ValueError):
    pass


@dataclass(frozen=True)
class Gadget:
    graph: Graph
    portals: tuple[int, ...]
    c: int
    pattern: Graph
    claimed: Relation
    coherent: str = UNKNOWN
    kind: str = "custom"
    params: tuple[tuple[str, object], ...] = ()

    def __post_init__(self) -> None:
        if len(set(self.portals)) != len(self.portals):
            raise GadgetError("portals must be distinct")
        if any(not 0 <= p < self.graph.n for p in self.portals):
            raise GadgetError("portal outside the graph")
        if self.claimed.arity != len(self.portals):
            raise GadgetError("claimed arity differs from the portal count")
        if self.claimed.bound != self.c:
            raise GadgetError("claimed bound differs from c")

    @property
    def internal(self) -> list[int]:
        ps = set(self.portals)
        return [v for v in range(self.graph.n) if v not in ps]

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": {k: v for k, v in self.params},
                "c": self.c, "pattern": graph_to_dict(self.pattern),
                "graph": graph_to_dict(self.graph), "portals": list(self.portals),
                "claimed": self.claimed.to_dict(), "coherent": self.coherent}


def gadget_from_dict(d: dict) -> Gadget:
    return Gadget(graph_from_dict(d["graph"]), tuple(d["portals"]), int(d["c"]),
                  graph_from_dict(d["pattern"]), relation_from_dict(d["claimed"]),
                  d.get("coherent", UNKNOWN), d.get("kind", "custom"),
                  tuple(sorted(d.get("params", {}).items())))


def dumps_gadget(g: Gadget) -> str:
    return json.dumps(g.to_dict())


@dataclass
class Assembly:
    """Mutable scratch graph used while wiring gadgets together."""
    labels: list[str] = field(default_factory=list)
    edges: set[tuple[int, int]] = field(default_factory=set)

    def vertex(self, label: str) -> int:
        self.labels.append(label)
        return len(self.labels) - 1

    def vertices(self, prefix: str, k: int) -> list[int]:
        return [self.vertex(f"{prefix}{i + 1}") for i in range(k)]

    def edge(self, u: int, v: int) -> None:
        if u == v:
            return
        self.edges.add((min(u, v), max(u, v)))

    def graph(self, g: Graph, prefix: str, fixed: dict[int, int] | None = None) -> list[int]:
        """Copy g in; vertices listed in `fixed` reuse existing ids."""
        fixed = fixed or {}
        ids = [fixed[v] if v in fixed else self.vertex(f"{prefix}/{g.label(v)}") for v in range(g.n)]
        for u, v in g.edges:
            self.edge(ids[u], ids[v])
        return ids

    def gadget(self, gd: Gadget, prefix: str, targets: Sequence[int | None] | None = None) -> list[int]:
        """Copy gd in with portal i glued to targets[i] (None makes it fresh).

        Returns the ids of gd's portals in the assembly.
        """
        targets = list(targets) if targets is not None else [None] * len(gd.portals)
        if len(targets) != len(gd.portals):
            raise GadgetError("target count differs from portal count")
        fixed = {p: t for p, t in zip(gd.portals, targets) if t is not None}
        ids = self.graph(gd.graph, prefix, fixed)
        return [ids[p] for p in gd.portals]

    def finish(self) -> Graph:
        return make_graph(len(self.labels), self.edges, self.labels)


def attach(host: Graph, gadget: Gadget, targets: Sequence[int], prefix: str = "gadget") -> Graph:
    """Glue the gadget's portals onto `targets` of host; internals are fresh."""
    if len(targets) != len(gadget.portals):
        raise GadgetError("arity mismatch")
    if len(set(targets)) != len(targets):
        raise GadgetError("targets must be distinct")
    asm = Assembly([host.label(v) for v in range(host.n)], set(host.edges))
    asm.gadget(gadget, prefix, list(targets))
    return asm.finish()


def _params(**kw) -> tuple[tuple[str, object], ...]:
    return tuple(sorted(kw.items()))


def _is_clique_pattern(h: Graph) -> bool:
    return is_clique(h, range(h.n))


# -- base gadgets --------------------------------------------------------------

def neq_gadget(c: int, d: int) -> Gadget:
    """c copies of K_{d-1} and c+1 vertices joined to all of them.

    Portals are the last two of those c+1 vertices.
    """
    if d < 3:
        raise GadgetError("need d >= 3")
    if c < 1:
        raise GadgetError("need c >= 1")
    asm = Assembly()
    blocks = [asm.graph(complete_graph(d - 1), f"A{i + 1}") for i in range(c)]
    vs = asm.vertices("v", c + 1)
    for v in vs:
        for blk in blocks:
            for a in blk:
                asm.edge(v, a)
    return Gadget(asm.finish(), (vs[c - 1], vs[c]), c, complete_graph(d), rel_cneq(c),
                  CLAIMED, "neq", _params(c=c, d=d))


def blowup_neq(h: Graph, v: int = 0) -> Gadget:
    """Candidate CNEQ_1 gadget for any H: v doubled, the twins are portals.

    Nothing here proves it; callers verify it with the oracle before use.
    """
    g, twins = blow_up(h, v, 2)
    labels = [f"h{u}" for u in range(h.n)] + [f"h{v}'"]
    g = make_graph(g.n, g.edges, labels)
    return Gadget(g, tuple(twins), 1, h, rel_cneq(1), UNKNOWN, "blowup-neq", _params(v=v))


def base_neq_for(c: int, h: Graph, base: Gadget | None = None) -> Gadget:
    if base is not None:
        if base.c != c or base.pattern != h:
            raise GadgetError("base gadget context does not match")
        if base.claimed != rel_cneq(c):
            raise GadgetError("base gadget must claim CNEQ_c")
        return base
    if _is_clique_pattern(h) and h.n >= 3:
        return neq_gadget(c, h.n)
    raise GadgetError("a non-clique pattern needs a supplied CNEQ_1 base gadget")


def coherence_wrap(g: Gadget, base_neq: Gadget) -> Gadget:
    """Guard every portal with a NEQ gadget; its far ends become the portals."""
    if base_neq.c != g.c or base_neq.pattern != g.pattern:
        raise GadgetError("context mismatch between gadget and NEQ")
    if base_neq.claimed != rel_cneq(g.c):
        raise GadgetError("wrapping gadget must claim CNEQ_c")
    asm = Assembly()
    inner = asm.gadget(g, "core")
    outer = [asm.gadget(base_neq, f"guard{i + 1}", [p, None])[1] for i, p in enumerate(inner)]
    return Gadget(asm.finish(), tuple(outer), g.c, g.pattern, g.claimed, WRAPPED,
                  f"wrapped-{g.kind}", g.params)


# -- equality and cover gadgets --------------------------------------------------

def eq_gadget_single(c: int, h: Graph, base_neq: Gadget | None = None) -> Gadget:
    """EQ over |H| portals: c copies of H, each vertex guarded by a NEQ whose
    far ends are merged across copies."""
    neq = base_neq_for(c, h, base_neq)
    asm = Assembly()
    ports = asm.vertices("v", h.n)
    for i in range(c):
        copy = asm.graph(h, f"A{i + 1}")
        for j, u in enumerate(copy):
            asm.gadget(neq, f"T{i + 1}.{j + 1}", [u, ports[j]])
    return Gadget(asm.finish(), tuple(ports), c, h, rel_eq(h.n, range(c + 1)).with_bound(c),
                  CLAIMED if neq.coherent == CLAIMED else UNKNOWN, "eq-single", _params(c=c))


def _ring(asm: Assembly, h: Graph, k: int, neq: Gadget, eq1: Gadget, prefix: str) -> list[int]:
    # EQ_|H| portal order: A = (left, right, up, x...), B = (left, right, y...)
    hh = h.n
    m = k * hh
    a_side = [asm.gadget(eq1, f"{prefix}A{i + 1}") for i in range(m)]
    b_side = [asm.gadget(eq1, f"{prefix}B{i + 1}") for i in range(m)]
    for i in range(m):
        asm.gadget(neq, f"{prefix}L{i + 1}", [a_side[i][1], b_side[i][0]])
        asm.gadget(neq, f"{prefix}R{i + 1}", [b_side[i][1], a_side[(i + 1) % m][0]])
    for j in range(hh - 3):
        xs = [a_side[i][3 + j] for i in range(m)]
        for g0 in range(0, m, hh):
            asm.gadget(eq1, f"{prefix}FX{j + 1}.{g0 // hh + 1}", xs[g0:g0 + hh])
    for j in range(hh - 2):
        ys = [b_side[i][2 + j] for i in range(m)]
        for g0 in range(0, m, hh):
            asm.gadget(eq1, f"{prefix}FY{j + 1}.{g0 // hh + 1}", ys[g0:g0 + hh])
    return [a[2] for a in a_side]


def ring_filler_count(h: Graph, k: int) -> int:
    return k * ((h.n - 3) + (h.n - 2))


def eq_gadget_ring(c: int, h: Graph, k: int, base_neq: Gadget | None = None) -> Gadget:
    """EQ over k|H| portals: a cyclic chain of EQ_|H| pairs linked by NEQs."""
    if k < 1:
        raise GadgetError("need k >= 1")
    if h.n < 3:
        raise GadgetError("need |H| >= 3")
    neq = base_neq_for(c, h, base_neq)
    eq1 = eq_gadget_single(c, h, neq)
    asm = Assembly()
    ups = _ring(asm, h, k, neq, eq1, "")
    return Gadget(asm.finish(), tuple(ups), c, h, rel_eq(k * h.n, range(c + 1)).with_bound(c),
                  eq1.coherent, "eq-ring", _params(c=c, k=k))


def cover_gadget(c: int, d: int, k: int) -> Gadget:
    """COVER^{c-1} over k*d portals for H = K_d."""
    if d < 3 or c < 1 or k < 1:
        raise GadgetError("need d >= 3, c >= 1, k >= 1")
    h = complete_graph(d)
    t, twins = blow_up(h, 0, c * d)
    asm = Assembly()
    us = asm.vertices("u", c * d)
    for i in range(d):
        asm.graph(t, f"T{i + 1}", {tw: us[j] for j, tw in enumerate(twins)})
    ps = asm.vertices("p", k * d)
    ring = eq_gadget_ring(c, h, k + c)
    asm.gadget(ring, "W", ps + us)
    return Gadget(asm.finish(), tuple(ps), c, h, rel_cover(k * d, c - 1).with_bound(c), UNKNOWN,
                  "cover", _params(c=c, d=d, k=k))


def toggle_gadget(h: Graph, base_neq: Gadget | None = None) -> Gadget:
    """Two EQ_{2|H|}^{[0,1]} rings X, Y with x_{i+|H|} and y_{i+|H|} joined by
    NEQ_1; portals are x_1..x_|H| then y_1..y_|H|."""
    neq = base_neq_for(1, h, base_neq)
    ring = eq_gadget_ring(1, h, 2, neq)
    hh = h.n
    asm = Assembly()
    xs = asm.gadget(ring, "X")
    ys = asm.gadget(ring, "Y")
    for i in range(hh):
        asm.gadget(neq, f"N{i + 1}", [xs[hh + i], ys[hh + i]])
    rel = make_relation(2 * hh, 1, [(0,) * hh + (1,) * hh, (1,) * hh + (0,) * hh])
    return Gadget(asm.finish(), tuple(xs[:hh] + ys[:hh]), 1, h, rel, UNKNOWN, "toggle", ())


# -- relation gadgets --------------------------------------------------------------

def alpha(r: Sequence[int]) -> list[int]:
    """Coordinates in increasing order, coordinate j repeated r[j] times."""
    return [j for j, x in enumerate(r) for _ in range(x)]


def _relation_skeleton(asm: Assembly, h: Graph, tuples: Sequence[tuple[int, ...]], arity: int,
                       slack: int, neq: Gadget) -> list[int]:
    hh = h.n
    toggle = toggle_gadget(h, neq)
    central = asm.vertices("v", hh)
    ports = asm.vertices("p", arity)
    zs = asm.vertices("z", slack)
    rings: dict[int, Gadget] = {}
    for i, r in enumerate(tuples):
        s = weight(r)
        total = s + slack + hh
        if total % hh:
            raise GadgetError("tuple weight does not fit the slack")
        if total not in rings:
            rings[total] = eq_gadget_ring(1, h, total // hh, neq)
        a = asm.gadget(toggle, f"S{i + 1}", central + [None] * hh)
        e = asm.gadget(rings[total], f"E{i + 1}", a[hh:] + [None] * (s + slack))
        es = e[hh:]
        for t, j in enumerate(alpha(r)):
            asm.gadget(neq, f"N{i + 1}.{t + 1}", [es[t], ports[j]])
        for u in range(slack):
            asm.gadget(neq, f"M{i + 1}.{u + 1}", [es[s + u], zs[u]])
    return ports


def arb_relation_gadget(h: Graph, r: Relation, base_neq: Gadget | None = None) -> Gadget:
    """Gadget for any (x,|H|)-regular R inside {0,1}^l with c = 1."""
    if r.bound > 1 and any(v > 1 for t in r for v in t):
        raise GadgetError("relation must be 0/1")
    if not len(r):
        raise GadgetError("empty relation")
    x = regular_residue(r, h.n)
    if x is None:
        raise GadgetError("relation is not regular modulo |H|")
    neq = base_neq_for(1, h, base_neq)
    slack = (-x) % h.n
    asm = Assembly()
    ports = _relation_skeleton(asm, h, r.tuples, r.arity, slack, neq)
    return Gadget(asm.finish(), tuple(ports), 1, h, r.with_bound(1), UNKNOWN, "arb-relation",
                  _params(slack=slack))


def clique_reg_relation_gadget(c: int, d: int, r: Relation) -> Gadget:
    """Gadget for a (0,d)-regular R inside {0..c}^l with H = K_d."""
    if not len(r):
        raise GadgetError("empty relation")
    if regular_residue(r, d) != 0:
        raise GadgetError("relation is not (0,d)-regular")
    h = complete_graph(d)
    if c == 1:
        return arb_relation_gadget(h, r.with_bound(1), neq_gadget(1, d))
    neq = neq_gadget(1, d)
    tuples = list(r.tuples)
    gamma = (-len(tuples)) % d
    tuples += [tuples[0]] * gamma
    for _ in range(d * d):
        asm = Assembly()
        ports = _relation_skeleton(asm, h, tuples, r.arity, 0, neq)
        body = asm.finish()
        pset = set(ports)
        zs = [v for v in range(body.n) if v not in pset]
        if len(zs) % d == 0:
            break
        # pad with whole duplicate rounds until the internals split evenly
        tuples += [tuples[0]] * d
    else:
        raise GadgetError("could not make the internal vertex count divisible by d")
    asm2 = Assembly(list(body.labels), set(body.edges))
    asm2.gadget(cover_gadget(c, d, len(zs) // d), "F", zs)
    return Gadget(asm2.finish(), tuple(ports), c, h, r.with_bound(c), UNKNOWN, "clique-reg-relation",
                  _params(c=c, d=d, gamma=gamma, rounds=len(tuples)))


def build(kind: str, **kw) -> Gadget:
    """Dispatch by name, used by the CLI."""
    from .graph import named_pattern
    h = named_pattern(kw["pattern"]) if kw.get("pattern") else None
    if kind == "neq":
        return neq_gadget(kw["c"], kw["d"])
    if kind == "blowup-neq":
        return blowup_neq(h, kw.get("v", 0))
    if h is None and kw.get("d"):
        h = complete_graph(kw["d"])
    base = blowup_neq(h) if h is not None and not _is_clique_pattern(h) else None
    if kind == "eq-single":
        return eq_gadget_single(kw["c"], h, base)
    if kind == "eq-ring":
        return eq_gadget_ring(kw["c"], h, kw["k"], base)
    if kind == "cover":
        return cover_gadget(kw["c"], kw["d"], kw["k"])
    if kind == "toggle":
        return toggle_gadget(h, base)
    if kind == "arb-relation":
        return arb_relation_gadget(h, kw["relation"], base)
    if kind == "clique-reg-relation":
        return clique_reg_relation_gadget(kw["c"], kw["d"], kw["relation"])
    raise GadgetError(f"unknown gadget kind {kind!r}")


def layout_groups(gd: Gadget) -> list[list[int]]:
    """Internal vertices split into a hub (first) and independent parts.

    Relation gadgets hang one part per tuple off a few shared vertices, so a
    decomposition can sweep the parts one at a time while keeping the hub.
    Other gadgets come back as a single group.
    """
    ports = set(gd.portals)
    internal = [v for v in range(gd.graph.n) if v not in ports]
    if gd.kind not in ("arb-relation", "clique-reg-relation"):
        return [[], internal]
    hub: list[int] = []
    parts: dict[str, list[int]] = {}
    for v in internal:
        head = gd.graph.label(v).split("/", 1)[0]
        m = re.match(r"^[SENM](\d+)", head)
        if m:
            parts.setdefault(m.group(1), []).append(v)
        else:
            hub.append(v)
    return [hub] + [parts[k] for k in sorted(parts, key=int)]
