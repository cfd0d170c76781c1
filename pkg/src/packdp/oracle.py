"""Exhaustive reference solvers.

Every answer here comes from a complete search. Packings are enumerated
vertex by vertex along a fixed order: at each vertex we pick the multiset of
copies whose first vertex it is, so every packing is generated exactly once.
Identical residual-capacity states are merged, which keeps the search
exhaustive but makes large rigid gadgets tractable. If the state budget runs
out a BudgetExceeded error is raised; the oracle never guesses.
"""

from __future__ import annotations

import itertools
import os
import threading
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import reverse_cuthill_mckee

from .graph import Copy, Graph, enumerate_copies
from .relations import Relation, make_relation

DIST, ARB = "dist", "arb"
VARIANTS = (DIST, ARB)
BUDGET_ENV = "PACKDP_BUDGET"


class BudgetExceeded(RuntimeError):
    pass


class Cancelled(RuntimeError):
    pass


def default_budget() -> int:
    return int(os.environ.get(BUDGET_ENV, "20000000"))


@dataclass
class Budget:
    limit: int = field(default_factory=default_budget)
    cancel: threading.Event | None = None
    used: int = 0

    def spend(self, k: int = 1) -> None:
        self.used += k
        if self.used > self.limit:
            raise BudgetExceeded(f"search budget of {self.limit} states exceeded")
        if self.cancel is not None and self.cancel.is_set():
            raise Cancelled("search cancelled")


def _check_variant(variant: str) -> None:
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")


# -- items ---------------------------------------------------------------------

@dataclass(frozen=True)
class _Item:
    vertices: tuple[int, ...]
    ub: int
    copies: tuple[Copy, ...]


def _items(g: Graph, h: Graph, c: int, variant: str) -> list[_Item]:
    # copies on the same vertex set are interchangeable for coverage
    groups: dict[frozenset[int], list[Copy]] = defaultdict(list)
    for cp in enumerate_copies(g, h):
        groups[cp.vertices].append(cp)
    out = []
    for vs, cps in sorted(groups.items(), key=lambda kv: sorted(kv[0])):
        ub = c if variant == ARB else min(c, len(cps))
        out.append(_Item(tuple(sorted(vs)), ub, tuple(cps)))
    return out


def _order(n: int, items: Sequence[_Item]) -> list[int]:
    if n == 0:
        return []
    rows, cols = [], []
    for it in items:
        for a, b in itertools.combinations(it.vertices, 2):
            rows += [a, b]
            cols += [b, a]
    mat = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    return [int(x) for x in reverse_cuthill_mckee(mat, symmetric_mode=True)]


@dataclass
class _Problem:
    """Positions are ranks in the vertex order."""
    n: int
    pos: list[int]            # vertex -> position
    groups: list[list[int]]   # position -> items starting there
    items: list[_Item]
    ivert: list[tuple[int, ...]]  # item -> positions
    cap: list[int]            # position -> initial capacity
    exact: list[bool]         # position must end fully used
    portal_slot: list[int]    # position -> portal index or -1


def _problem(g: Graph, items: list[_Item], cap: Sequence[int], exact: Sequence[bool],
             portals: Sequence[int] = ()) -> _Problem:
    order = _order(g.n, items)
    pos = [0] * g.n
    for i, v in enumerate(order):
        pos[v] = i
    ivert = [tuple(sorted(pos[v] for v in it.vertices)) for it in items]
    groups: list[list[int]] = [[] for _ in range(g.n)]
    for k, pv in enumerate(ivert):
        groups[pv[0]].append(k)
    slot = [-1] * g.n
    for j, p in enumerate(portals):
        slot[pos[p]] = j
    return _Problem(g.n, pos, groups, items, ivert,
                    [cap[v] for v in order], [exact[v] for v in order], slot)


def _finalize(pb: _Problem, p: int, rem: dict[int, int], ports: tuple):
    """Drop position p from the residual map; None when an exact demand is unmet."""
    final = rem.pop(p, pb.cap[p])
    if pb.exact[p] and final != 0:
        return None
    if pb.portal_slot[p] >= 0:
        ports = ports + ((pb.portal_slot[p], pb.cap[p] - final),)
    return ports


def _sweep(pb: _Problem, mode: str, budget: Budget, want_witness: bool, lower: int = 0):
    """Forward pass deciding one item multiplicity at a time.

    Items are sorted by first position; once every item starting at or before
    a position is decided, that position is finalized. mode "max" keeps the
    best count per state and discards states that cannot reach `lower`;
    mode "set" keeps reachable states only. A state is the residual map of
    touched undecided positions plus the finalized portal usage.
    """
    order = sorted(range(len(pb.items)), key=lambda k: pb.ivert[k])
    size = len(pb.ivert[0]) if pb.ivert else 1
    if mode == "max" and lower:
        # usable capacity after the j-th item: min(residual, what later items can take)
        avail: list[dict[int, int]] = [{} for _ in range(len(order) + 1)]
        for j in range(len(order) - 1, -1, -1):
            avail[j] = dict(avail[j + 1])
            k = order[j]
            for q in pb.ivert[k]:
                avail[j][q] = avail[j].get(q, 0) + pb.items[k].ub
        base = [sum(min(pb.cap[q], a) for q, a in av.items()) for av in avail]
    layer: dict = {((), ()): 0}
    back: list[tuple[int, dict]] = []
    done = 0  # positions below this are finalized

    def advance(upto: int) -> None:
        nonlocal layer, done
        while done < upto:
            nxt: dict = {}
            bp: dict = {}
            for key, val in layer.items():
                rem = dict(key[0])
                ports = _finalize(pb, done, rem, key[1])
                if ports is None:
                    continue
                nk = (tuple(sorted(rem.items())), ports)
                if nk not in nxt or val > nxt[nk]:
                    nxt[nk] = val
                    if want_witness:
                        bp[nk] = (key, ())
            budget.spend(len(layer))
            if want_witness:
                back.append((-1, bp))
            layer = nxt
            done += 1

    for j, k in enumerate(order):
        advance(pb.ivert[k][0])
        verts = pb.ivert[k]
        ub = pb.items[k].ub
        nxt = {}
        bp = {}
        for key, val in layer.items():
            rem = dict(key[0])
            top = min([ub] + [rem.get(q, pb.cap[q]) for q in verts])
            for x in range(top + 1):
                if x:
                    r2 = dict(rem)
                    for q in verts:
                        r2[q] = r2.get(q, pb.cap[q]) - x
                    nk = (tuple(sorted(r2.items())), key[1])
                else:
                    nk = key
                nv = val + x
                if mode == "max" and lower:
                    av = avail[j + 1]
                    spare = base[j + 1]
                    for q, r in nk[0]:
                        a = av.get(q)
                        if a:
                            spare -= min(pb.cap[q], a) - min(r, a)
                    if nv + spare // size < lower:
                        continue
                if nk not in nxt or nv > nxt[nk]:
                    nxt[nk] = nv
                    if want_witness:
                        bp[nk] = (key, ((k, x),) if x else ())
        budget.spend(len(layer))
        if want_witness:
            back.append((k, bp))
        layer = nxt
        if not layer:
            return layer, back
    advance(pb.n)
    return layer, back


def _trace(pb: _Problem, back: list[tuple[int, dict]], key) -> list[tuple[int, int]]:
    picks: list[tuple[int, int]] = []
    for _, bp in reversed(back):
        key, ch = bp[key]
        picks.extend(ch)
    return picks


def _greedy(pb: _Problem) -> int:
    rem = list(pb.cap)
    total = 0
    for k in sorted(range(len(pb.items)), key=lambda k: pb.ivert[k]):
        x = min([pb.items[k].ub] + [rem[q] for q in pb.ivert[k]])
        for q in pb.ivert[k]:
            rem[q] -= x
        total += x
    return total


def _witness(pb: _Problem, picks: Iterable[tuple[int, int]], variant: str) -> list[tuple[tuple[int, ...], int]]:
    out: list[tuple[tuple[int, ...], int]] = []
    for k, x in sorted(picks):
        it = pb.items[k]
        if variant == DIST and len(it.copies) > 1:
            # distinct copies on the same vertex set, one each
            out.extend((it.vertices, 1) for _ in range(x))
        else:
            out.append((it.vertices, x))
    return out


# -- public solvers --------------------------------------------------------------

def max_packing_bruteforce(g: Graph, h: Graph, c: int, variant: str,
                           budget: Budget | None = None) -> tuple[int, list[tuple[tuple[int, ...], int]]]:
    """Largest packing covering each vertex at most c times, with a witness."""
    _check_variant(variant)
    if c < 1:
        raise ValueError("c must be positive")
    budget = budget or Budget()
    items = _items(g, h, c, variant)
    pb = _problem(g, items, [c] * g.n, [False] * g.n)
    # aim high first: a tight target prunes hardest, and the first target
    # that is reached is the optimum since no state able to beat it is cut
    floor = _greedy(pb)
    target = min(c * g.n // max(h.n, 1), sum(it.ub for it in items))
    while True:
        layer, back = _sweep(pb, "max", budget, True, lower=max(target, floor))
        key = max(layer, key=lambda k: layer[k]) if layer else None
        if key is not None and (layer[key] >= target or target <= floor):
            return layer[key], _witness(pb, _trace(pb, back, key), variant)
        target -= 1


def exact_cover_feasible(g: Graph, h: Graph, demand: Mapping[int, int] | Sequence[int], variant: str,
                         budget: Budget | None = None, c: int | None = None
                         ) -> tuple[bool, list[tuple[tuple[int, ...], int]] | None]:
    """Is there a packing covering each vertex v exactly demand[v] times?"""
    _check_variant(variant)
    budget = budget or Budget()
    dem = [int(demand[v]) for v in range(g.n)]
    if any(x < 0 for x in dem):
        raise ValueError("negative demand")
    top = max(dem, default=0) if c is None else c
    if any(x > top for x in dem):
        raise ValueError("demand above c")
    items = _items(g, h, max(top, 1), variant)
    pb = _problem(g, items, dem, [True] * g.n)
    layer, back = _sweep(pb, "set", budget, True)
    if not layer:
        return False, None
    key = next(iter(layer))
    return True, _witness(pb, _trace(pb, back, key), variant)


def realized_relation(gadget, variant: str, budget: Budget | None = None) -> Relation:
    """Portal coverage vectors of packings that cover every internal vertex
    exactly c times (portals at most c)."""
    _check_variant(variant)
    budget = budget or Budget()
    g, portals, c, h = gadget.graph, list(gadget.portals), gadget.c, gadget.pattern
    is_portal = [False] * g.n
    for p in portals:
        is_portal[p] = True
    items = _items(g, h, c, variant)
    pb = _problem(g, items, [c] * g.n, [not x for x in is_portal], portals)
    layer, _ = _sweep(pb, "set", budget, False)
    vecs = set()
    for _, ports in layer:
        vec = [0] * len(portals)
        for j, used in ports:
            vec[j] = used
        vecs.add(tuple(vec))
    return make_relation(len(portals), c, vecs)


@dataclass(frozen=True)
class VerifyReport:
    dist_ok: bool
    arb_ok: bool
    missing: dict[str, list[tuple[int, ...]]]
    extra: dict[str, list[tuple[int, ...]]]
    states: int

    @property
    def ok(self) -> bool:
        return self.dist_ok and self.arb_ok

    def to_dict(self) -> dict:
        return {"dist_ok": self.dist_ok, "arb_ok": self.arb_ok,
                "missing": {k: [list(t) for t in v] for k, v in self.missing.items()},
                "extra": {k: [list(t) for t in v] for k, v in self.extra.items()},
                "states": self.states}


def verify_gadget(gadget, budget: Budget | None = None) -> VerifyReport:
    budget = budget or Budget()
    claimed = gadget.claimed.as_set()
    ok, missing, extra = {}, {}, {}
    for variant in VARIANTS:
        got = realized_relation(gadget, variant, budget).as_set()
        ok[variant] = got == claimed
        missing[variant] = sorted(claimed - got)
        extra[variant] = sorted(got - claimed)
    return VerifyReport(ok[DIST], ok[ARB], missing, extra, budget.used)


def partition_feasible(g: Graph, h: Graph, c: int, variant: str, budget: Budget | None = None) -> bool:
    return exact_cover_feasible(g, h, [c] * g.n, variant, budget, c=c)[0]


# -- small reference deciders ------------------------------------------------------

def csp_bruteforce(inst, budget: Budget | None = None) -> bool:
    """Exhaustive satisfiability over the alphabet 1..B."""
    budget = budget or Budget()
    if inst.B ** inst.n > budget.limit:
        raise BudgetExceeded("assignment space exceeds the budget")
    cons = [(i, j, frozenset(map(tuple, allowed))) for i, j, allowed in inst.constraints]
    for a in itertools.product(range(1, inst.B + 1), repeat=inst.n):
        budget.spend()
        if all((a[i], a[j]) in s for i, j, s in cons):
            return True
    return False


def permiset_bruteforce(g: Graph, k: int, max_k: int = 7) -> bool:
    """Independent set hitting each row and column of the k x k grid once.

    Cell (r, s) is vertex r*k + s.
    """
    if k > max_k:
        raise BudgetExceeded(f"k={k} exceeds the permutation budget k <= {max_k}")
    if g.n != k * k:
        raise ValueError("graph must have k*k vertices")
    for perm in itertools.permutations(range(k)):
        cells = [r * k + perm[r] for r in range(k)]
        if all(not g.has_edge(a, b) for a, b in itertools.combinations(cells, 2)):
            return True
    return False


def check_packing(g: Graph, h: Graph, packing: Sequence[tuple[Sequence[int], int]], c: int,
                  variant: str, exact: bool = False) -> bool:
    """Independent validity check for a witness given as (vertices, mult) pairs."""
    from .graph import is_clique
    cover = [0] * g.n
    count: dict[frozenset[int], int] = defaultdict(int)
    for vs, mult in packing:
        if mult < 1 or len(set(vs)) != h.n:
            return False
        sub, _ = g.induced(vs)
        if h.m == h.n * (h.n - 1) // 2:
            if not is_clique(g, vs):
                return False
        elif not any(True for _ in enumerate_copies(sub, h)):
            return False
        for v in vs:
            cover[v] += mult
        count[frozenset(vs)] += mult
    if variant == DIST:
        for vs, k in count.items():
            sub, _ = g.induced(vs)
            if k > len(enumerate_copies(sub, h)):
                return False
    if exact:
        return all(x == c for x in cover)
    return all(x <= c for x in cover)
