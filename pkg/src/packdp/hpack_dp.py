"""Dynamic program over a nice tree decomposition for packing an arbitrary
connected pattern H with vertex-disjoint copies.

A state describes how the partial copies that touch the bag look from the
bag. Each such partial copy is a block: a map from V(H) to a bag vertex, DOWN
(mapped to an already forgotten vertex) or UP (not mapped yet). Bag vertices
used by no block are unused. The table value is the number of complete
copies lying entirely below the bag.

Tables are sparse and are generated forward from the child tables, so only
reachable states exist. Blocks are brought to a canonical form under the
automorphisms of H and sorted by their smallest bag vertex.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .graph import Graph, automorphisms
from .treedec import FORGET, INTRODUCE, JOIN, LEAF, NiceTreeDecomposition, check_nice, validate

UP, DOWN = -1, -2
Block = tuple[int, ...]
PType = tuple[Block, ...]


class HDPError(ValueError):
    pass


@dataclass(frozen=True)
class Pattern:
    h: Graph
    auts: tuple[tuple[int, ...], ...]
    _memo: dict = field(default_factory=dict, compare=False, repr=False)

    @classmethod
    def of(cls, h: Graph, canonical: bool = True) -> "Pattern":
        if h.n < 1:
            raise HDPError("empty pattern")
        auts = tuple(automorphisms(h)) if canonical else (tuple(range(h.n)),)
        return cls(h, auts)

    def canon_block(self, phi: Sequence[int]) -> Block:
        phi = tuple(phi)
        got = self._memo.get(phi)
        if got is None:
            got = self._memo[phi] = min(tuple(phi[i] for i in s) for s in self.auts)
        return got

    def canon(self, blocks: Iterable[Block]) -> PType:
        out = [self.canon_block(b) for b in blocks]
        out.sort(key=_block_key)
        return tuple(out)

    def replace(self, k: PType, j: int | None, b: Block | None) -> PType:
        """k with block j swapped for b (j None appends, b None drops); only b
        is recanonicalized."""
        out = list(k)
        if j is None:
            out.append(self.canon_block(b))
        elif b is None:
            del out[j]
            return tuple(out)
        else:
            out[j] = self.canon_block(b)
        out.sort(key=_block_key)
        return tuple(out)


def _block_key(b: Block) -> int:
    return min(x for x in b if x >= 0)


def imprint(hbar: dict[int, int], bag: Iterable[int], below: Iterable[int], hn: int) -> Block:
    """DOWN for pattern vertices mapped below the bag, the image for those in
    the bag, UP for unmapped ones."""
    if not hbar:
        raise HDPError("a partial copy maps at least one vertex")
    bag, below = set(bag), set(below)
    if len(set(hbar.values())) != len(hbar):
        raise HDPError("partial copy is not injective")
    out = []
    for u in range(hn):
        if u not in hbar:
            out.append(UP)
        elif hbar[u] in bag:
            out.append(hbar[u])
        elif hbar[u] in below:
            out.append(DOWN)
        else:
            raise HDPError(f"image of {u} lies outside the bag and below")
    return tuple(out)


def type_part(k: PType) -> dict[int, int]:
    """Bag vertex -> 1-based block index for used vertices."""
    return {x: i + 1 for i, b in enumerate(k) for x in b if x >= 0}


def is_valid_type(k: PType, bag: Iterable[int], g: Graph, h: Graph) -> bool:
    """Direct check of the type conditions.

    Blocks map to disjoint nonempty sets of bag vertices; each is injective
    and edge-preserving on its bag part; no H-edge joins an UP and a DOWN.
    """
    bag = set(bag)
    seen: set[int] = set()
    if len(k) > len(bag):
        return False
    for b in k:
        if len(b) != h.n:
            return False
        z = [u for u in range(h.n) if b[u] >= 0]
        imgs = [b[u] for u in z]
        if not z or len(set(imgs)) != len(imgs) or not set(imgs) <= bag or seen & set(imgs):
            return False
        seen |= set(imgs)
        for u, w in h.edges:
            if b[u] >= 0 and b[w] >= 0 and not g.has_edge(b[u], b[w]):
                return False
            if {b[u], b[w]} == {UP, DOWN}:
                return False
    return True


def type_bound(bag_size: int, hn: int) -> int:
    return (2 * (bag_size + 2)) ** (hn * bag_size)


def enumerate_types(bag: Iterable[int], h: Graph, g: Graph | None = None, canonical: bool = True,
                    limit: int = 6) -> list[PType]:
    """All valid types for a bag, each once.

    Without a host graph the bag is treated as a clique, which only adds
    types. Blocks are unordered; canonical=True also merges types that differ
    by an automorphism of H inside a block.
    """
    bag = sorted(set(bag))
    if len(bag) > limit:
        raise HDPError(f"bag larger than the enumeration limit {limit}")
    if g is None:
        g = Graph(max(bag, default=-1) + 1, frozenset(itertools.combinations(bag, 2)))
    pat = Pattern.of(h, canonical)
    out: set[PType] = set()
    for labels in itertools.product(range(len(bag) + 1), repeat=len(bag)):
        # labels: 0 unused, else a block id; require first-use order to skip renumberings
        used = [x for x in labels if x]
        firsts = list(dict.fromkeys(used))
        if firsts != list(range(1, len(firsts) + 1)):
            continue
        groups = [[bag[i] for i, x in enumerate(labels) if x == j] for j in firsts]
        options = [_block_options(grp, h, g) for grp in groups]
        for combo in itertools.product(*options):
            k = pat.canon(combo)
            if is_valid_type(k, bag, g, h):
                out.add(k)
    return sorted(out)


def _block_options(grp: list[int], h: Graph, g: Graph) -> list[Block]:
    if len(grp) > h.n:
        return []
    res = []
    for z in itertools.permutations(range(h.n), len(grp)):
        phi = [UP] * h.n
        for u, x in zip(z, grp):
            phi[u] = x
        rest = [u for u in range(h.n) if phi[u] == UP]
        for marks in itertools.product((UP, DOWN), repeat=len(rest)):
            b = list(phi)
            for u, m in zip(rest, marks):
                b[u] = m
            res.append(tuple(b))
    return res


# -- node rules ----------------------------------------------------------------------

Table = dict[PType, int]


def _put(tab: Table, k: PType, val: int, back: dict | None, src) -> None:
    if tab.get(k, -1) < val:
        tab[k] = val
        if back is not None:
            back[k] = src


def introduce_rule(child: Table, v: int, g: Graph, pat: Pattern, back: dict | None = None) -> Table:
    h = pat.h
    nv = g.adj[v]
    out: Table = {}
    fresh = [tuple(v if w == u else UP for w in range(h.n)) for u in range(h.n)]
    for k, val in child.items():
        _put(out, k, val, back, ("unused", k))
        for b in fresh:
            _put(out, pat.replace(k, None, b), val, back, ("new", k))
        for j, b in enumerate(k):
            for u in range(h.n):
                if b[u] != UP:
                    continue
                ok = True
                for w in h.adj[u]:
                    if b[w] == DOWN or (b[w] >= 0 and b[w] not in nv):
                        ok = False
                        break
                if ok:
                    nb = b[:u] + (v,) + b[u + 1:]
                    _put(out, pat.replace(k, j, nb), val, back, ("extend", k))
    return out


def forget_rule(child: Table, v: int, pat: Pattern, back: dict | None = None) -> Table:
    h = pat.h
    out: Table = {}
    for k, val in child.items():
        j = next((i for i, b in enumerate(k) if v in b), None)
        if j is None:
            _put(out, k, val, back, ("unused", k))
            continue
        b = k[j]
        u = b.index(v)
        in_bag = sum(1 for x in b if x >= 0)
        if in_bag == 1:
            if all(x == DOWN for i, x in enumerate(b) if i != u):
                _put(out, k[:j] + k[j + 1:], val + 1, back, ("complete", k))
            continue
        if any(b[w] == UP for w in h.adj[u]):
            continue
        nb = b[:u] + (DOWN,) + b[u + 1:]
        _put(out, pat.replace(k, j, nb), val, back, ("down", k))
    return out


def _merge_block(b1: Block, b2: Block, pat: Pattern) -> list[Block]:
    """Every combination of two imprints of one partial copy."""
    out = []
    z1 = {u: b1[u] for u in range(len(b1)) if b1[u] >= 0}
    for s in pat.auts:
        b2s = tuple(b2[s[u]] for u in range(len(b2)))
        if any(b2s[u] >= 0 for u in range(len(b2s)) if u not in z1):
            continue
        if any(b2s[u] != x for u, x in z1.items()):
            continue
        if any(x == DOWN and y == DOWN for x, y in zip(b1, b2s)):
            continue
        out.append(tuple(DOWN if DOWN in (x, y) else x for x, y in zip(b1, b2s)))
    return out


def _bag_key(k: PType, pat: Pattern) -> tuple[Block, ...]:
    # blocks that can merge have the same canonical bag part
    return tuple(pat.canon_block([x if x >= 0 else UP for x in b]) for b in k)


def join_rule(left: Table, right: Table, pat: Pattern, back: dict | None = None) -> Table:
    index: dict[tuple, list[tuple[PType, int]]] = {}
    for k, val in right.items():
        index.setdefault(_bag_key(k, pat), []).append((k, val))
    memo: dict[tuple[Block, Block], list[Block]] = {}
    out: Table = {}
    for k1, a in left.items():
        for k2, b in index.get(_bag_key(k1, pat), ()):
            options = []
            for pair in zip(k1, k2):
                opts = memo.get(pair)
                if opts is None:
                    opts = memo[pair] = _merge_block(pair[0], pair[1], pat)
                if not opts:
                    break
                options.append(opts)
            else:
                for combo in itertools.product(*options):
                    _put(out, pat.canon(combo), a + b, back, ("join", k1, k2))
    return out


# -- driver --------------------------------------------------------------------------

@dataclass
class HResult:
    value: int
    stats: list[tuple[int, str, int, int]] = field(default_factory=list)  # node, kind, bag, types
    completions: int | None = None


def _check(g: Graph, ntd: NiceTreeDecomposition, h: Graph) -> None:
    if h.n < 3 or h.n > 10:
        raise HDPError("pattern must have between 3 and 10 vertices")
    if not h.is_connected():
        raise HDPError("disconnected patterns are not supported")
    bad = validate(ntd.as_tree_decomposition(), g) or check_nice(ntd)
    if bad:
        raise HDPError(f"invalid decomposition: {bad}")


def run_tables(g: Graph, ntd: NiceTreeDecomposition, h: Graph, canonical: bool = True,
               witness: bool = False) -> tuple[dict[int, Table], dict[int, dict]]:
    pat = Pattern.of(h, canonical)
    tables: dict[int, Table] = {}
    backs: dict[int, dict] = {}
    for t in ntd.postorder():
        kind, ch = ntd.kind[t], ntd.children[t]
        back = {} if witness else None
        if kind == LEAF:
            tab = {(): 0}
        elif kind == INTRODUCE:
            tab = introduce_rule(tables[ch[0]], ntd.vertex[t], g, pat, back)
        elif kind == FORGET:
            tab = forget_rule(tables[ch[0]], ntd.vertex[t], pat, back)
        else:
            tab = join_rule(tables[ch[0]], tables[ch[1]], pat, back)
        tables[t] = tab
        if witness:
            backs[t] = back
    return tables, backs


def _count_completions(ntd: NiceTreeDecomposition, backs: dict[int, dict]) -> int:
    total = 0
    stack = [(ntd.root, ())]
    while stack:
        t, k = stack.pop()
        kind, ch = ntd.kind[t], ntd.children[t]
        if kind == LEAF:
            continue
        src = backs[t][k]
        if kind == JOIN:
            stack.append((ch[0], src[1]))
            stack.append((ch[1], src[2]))
            continue
        if src[0] == "complete":
            total += 1
        stack.append((ch[0], src[1]))
    return total


def solve_h_packing(g: Graph, ntd: NiceTreeDecomposition, h: Graph, canonical: bool = True,
                    witness: bool = False) -> HResult:
    """Maximum number of vertex-disjoint copies of the connected pattern h."""
    _check(g, ntd, h)
    tables, backs = run_tables(g, ntd, h, canonical, witness)
    value = tables[ntd.root].get((), 0)
    stats = [(t, ntd.kind[t], len(ntd.bags[t]), len(tables[t])) for t in sorted(tables)]
    comp = _count_completions(ntd, backs) if witness else None
    return HResult(value, stats, comp)


def solve_h_partition(g: Graph, ntd: NiceTreeDecomposition, h: Graph) -> bool:
    if g.n % h.n:
        _check(g, ntd, h)
        return False
    return solve_h_packing(g, ntd, h).value == g.n // h.n
