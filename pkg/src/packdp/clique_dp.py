"""Dynamic program over a nice tree decomposition for packing K_d.

A type assigns each bag vertex a coverage in 0..c. The table entry of a type
is the largest number of cliques in a packing of the processed subgraph that
covers bag vertices exactly as the type says, and every vertex at most c
times. A clique is counted when its first vertex is forgotten; at that moment
all of its vertices sit in the child bag.

Tables come in two layouts: a dense numpy array with one axis per bag vertex
(always (c+1)^|bag| cells), and a sparse dict holding only reachable types.
Absent entries are stored as NEG.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .graph import Graph, is_clique
from .oracle import ARB, DIST, VARIANTS
from .treedec import FORGET, INTRODUCE, JOIN, LEAF, NiceTreeDecomposition, check_nice, validate

NEG = -(1 << 40)
DENSE_LIMIT = 1 << 20


class CliqueDPError(ValueError):
    pass


@dataclass
class Table:
    order: tuple[int, ...]  # bag vertices, sorted; axis i belongs to order[i]
    dense: np.ndarray | None = None
    sparse: dict[tuple[int, ...], int] | None = None

    @property
    def is_dense(self) -> bool:
        return self.dense is not None

    def entries(self) -> int:
        """Number of enumerated types."""
        return int(self.dense.size) if self.is_dense else len(self.sparse)

    def present(self) -> int:
        return int((self.dense >= 0).sum()) if self.is_dense else len(self.sparse)

    def get(self, f: tuple[int, ...]) -> int:
        if self.is_dense:
            v = int(self.dense[f])
            return v if v >= 0 else NEG
        return self.sparse.get(f, NEG)

    def items(self) -> Iterable[tuple[tuple[int, ...], int]]:
        if self.is_dense:
            for idx in zip(*np.nonzero(self.dense >= 0)):
                idx = tuple(int(i) for i in idx)
                yield idx, int(self.dense[idx])
        else:
            yield from self.sparse.items()

    def to_sparse(self) -> "Table":
        return self if not self.is_dense else Table(self.order, sparse=dict(self.items()))

    def to_dense(self, c: int) -> "Table":
        if self.is_dense:
            return self
        arr = np.full((c + 1,) * len(self.order), NEG, dtype=np.int64)
        for f, v in self.sparse.items():
            arr[f] = v
        return Table(self.order, dense=arr)


def _clean(arr: np.ndarray) -> np.ndarray:
    arr[arr < 0] = NEG
    return arr


def leaf_table(dense: bool = True) -> Table:
    if dense:
        return Table((), dense=np.zeros((), dtype=np.int64))
    return Table((), sparse={(): 0})


# -- introduce ---------------------------------------------------------------------

def introduce_rule(child: Table, v: int, c: int, literal: bool = False) -> Table:
    """A new vertex has no cliques yet, so only coverage 0 is realizable.

    With literal=True types with nonzero coverage on v get value 0 instead
    of being absent.
    """
    order = tuple(sorted(child.order + (v,)))
    pos = order.index(v)
    if child.is_dense:
        shape = (c + 1,) * len(order)
        arr = np.full(shape, 0 if literal else NEG, dtype=np.int64)
        idx = [slice(None)] * len(order)
        idx[pos] = 0
        arr[tuple(idx)] = child.dense
        return Table(order, dense=arr)
    if literal:
        raise CliqueDPError("the literal introduce rule needs dense tables")
    data = {f[:pos] + (0,) + f[pos:]: val for f, val in child.sparse.items()}
    return Table(order, sparse=data)


# -- forget ------------------------------------------------------------------------

def bag_cliques(g: Graph, bag: Iterable[int], v: int, d: int) -> list[tuple[int, ...]]:
    """d-cliques of g containing v with all vertices in bag."""
    nb = sorted(g.adj[v] & set(bag))
    out = []
    for rest in itertools.combinations(nb, d - 1):
        if is_clique(g, rest):
            out.append(tuple(sorted(rest + (v,))))
    return out


def _shift(arr: np.ndarray, axes: Iterable[int]) -> tuple[tuple, tuple]:
    src = [slice(None)] * arr.ndim
    dst = [slice(None)] * arr.ndim
    for a in axes:
        src[a] = slice(0, arr.shape[a] - 1)
        dst[a] = slice(1, None)
    return tuple(src), tuple(dst)


def forget_rule(child: Table, v: int, g: Graph, c: int, d: int, variant: str,
                exact: bool = False) -> Table:
    """Add every multiset of bag cliques through v, then drop v.

    Each clique may be used once (dist) or up to c times (arb); coverage can
    never pass c. With exact=True v must end with coverage exactly c.
    """
    order = child.order
    pos = order.index(v)
    new_order = order[:pos] + order[pos + 1:]
    cls = bag_cliques(g, order, v, d)
    reps = 1 if variant == DIST else c
    if child.is_dense:
        cur = child.dense.copy()
        for cl in cls:
            axes = [order.index(x) for x in cl]
            src, dst = _shift(cur, axes)
            for _ in range(reps):
                nxt = cur.copy()
                np.maximum(nxt[dst], cur[src] + 1, out=nxt[dst])
                cur = nxt
        cur = _clean(cur)
        if exact:
            out = np.take(cur, c, axis=pos)
        else:
            out = cur.max(axis=pos)
        return Table(new_order, dense=np.array(out, dtype=np.int64, order="C"))
    cpos = [[order.index(x) for x in cl] for cl in cls]
    data: dict[tuple[int, ...], int] = {}
    for f, val in child.sparse.items():
        for g2, add in _clique_extensions(f, cpos, reps, c):
            if exact and g2[pos] != c:
                continue
            key = g2[:pos] + g2[pos + 1:]
            if data.get(key, NEG) < val + add:
                data[key] = val + add
    return Table(new_order, sparse=data)


def _clique_extensions(f: tuple[int, ...], cpos: list[list[int]], reps: int, c: int):
    cur = list(f)

    def rec(i: int, added: int):
        if i == len(cpos):
            yield tuple(cur), added
            return
        axes = cpos[i]
        k = 0
        while True:
            yield from rec(i + 1, added + k)
            if k == reps or any(cur[a] >= c for a in axes):
                break
            for a in axes:
                cur[a] += 1
            k += 1
        for a in axes:
            cur[a] -= k

    yield from rec(0, 0)


# -- join --------------------------------------------------------------------------

def _check_join(left: Table, right: Table) -> None:
    if left.order != right.order:
        raise CliqueDPError("join children have different bags")


def join_rule_naive(left: Table, right: Table, c: int) -> Table:
    """out[f] = max over f1 + f2 = f of left[f1] + right[f2]."""
    _check_join(left, right)
    if not left.is_dense or not right.is_dense:
        data: dict[tuple[int, ...], int] = {}
        ritems = list(right.items())
        for f1, a in left.items():
            for f2, b in ritems:
                f = tuple(x + y for x, y in zip(f1, f2))
                if max(f, default=0) <= c and data.get(f, NEG) < a + b:
                    data[f] = a + b
        return Table(left.order, sparse=data)
    L, R = left.dense, right.dense
    if L.ndim == 0:
        val = int(L) + int(R) if L >= 0 and R >= 0 else NEG
        return Table(left.order, dense=np.array(val, dtype=np.int64))
    out = np.full(L.shape, NEG, dtype=np.int64)
    for idx in zip(*np.nonzero(L >= 0)):
        dst = tuple(slice(int(i), c + 1) for i in idx)
        src = tuple(slice(0, c + 1 - int(i)) for i in idx)
        np.maximum(out[dst], R[src] + L[idx], out=out[dst])
    return Table(left.order, dense=_clean(out))


def join_rule_convolution(left: Table, right: Table, c: int) -> Table:
    """Same result as the naive join, via truncated sum-convolutions of
    per-value indicator arrays."""
    _check_join(left, right)
    L = left.to_dense(c).dense
    R = right.to_dense(c).dense
    k = L.ndim
    if k == 0:
        a, b = int(L), int(R)
        val = a + b if a >= 0 and b >= 0 else NEG
        return Table(left.order, dense=np.array(val, dtype=np.int64))
    if (L < 0).all() or (R < 0).all():
        return Table(left.order, dense=np.full(L.shape, NEG, dtype=np.int64))
    size = (2 * c + 1,) * k
    axes = tuple(range(k))
    lmax, rmax = int(L.max()), int(R.max())
    fl = {i: np.fft.rfftn((L == i).astype(np.float64), s=size, axes=axes)
          for i in range(lmax + 1) if (L == i).any()}
    fr = {j: np.fft.rfftn((R == j).astype(np.float64), s=size, axes=axes)
          for j in range(rmax + 1) if (R == j).any()}
    out = np.full(L.shape, NEG, dtype=np.int64)
    keep = tuple(slice(0, c + 1) for _ in range(k))
    for s in range(lmax + rmax, -1, -1):
        acc = None
        for i, fa in fl.items():
            fb = fr.get(s - i)
            if fb is not None:
                acc = fa * fb if acc is None else acc + fa * fb
        if acc is None:
            continue
        hit = np.fft.irfftn(acc, s=size, axes=axes)[keep] > 0.5
        out[hit & (out < 0)] = s
    return Table(left.order, dense=out)


# -- driver ------------------------------------------------------------------------

@dataclass
class NodeStat:
    node: int
    kind: str
    bag: int
    entries: int
    present: int


@dataclass
class CliqueResult:
    value: int
    witness: list[tuple[tuple[int, ...], int]] | None = None
    stats: list[NodeStat] = field(default_factory=list)


def _check_inputs(g: Graph, ntd: NiceTreeDecomposition, c: int, d: int, variant: str) -> None:
    if variant not in VARIANTS:
        raise CliqueDPError(f"variant must be one of {VARIANTS}")
    if c < 1 or d < 3:
        raise CliqueDPError("need c >= 1 and d >= 3")
    bad = validate(ntd.as_tree_decomposition(), g) or check_nice(ntd)
    if bad:
        raise CliqueDPError(f"invalid decomposition: {bad}")


def run_tables(g: Graph, ntd: NiceTreeDecomposition, c: int, d: int, variant: str,
               join_mode: str = "naive", layout: str = "auto", literal: bool = False,
               exact: bool = False) -> dict[int, Table]:
    """All node tables, bottom-up."""
    if layout == "auto":
        layout = "dense" if (c + 1) ** (ntd.width + 1) <= DENSE_LIMIT else "sparse"
    dense = layout == "dense"
    join = {"naive": join_rule_naive, "convolution": join_rule_convolution}[join_mode]
    tables: dict[int, Table] = {}
    for t in ntd.postorder():
        kind = ntd.kind[t]
        ch = ntd.children[t]
        if kind == LEAF:
            tab = leaf_table(dense)
        elif kind == INTRODUCE:
            tab = introduce_rule(tables[ch[0]], ntd.vertex[t], c, literal)
        elif kind == FORGET:
            tab = forget_rule(tables[ch[0]], ntd.vertex[t], g, c, d, variant, exact)
        else:
            tab = join(tables[ch[0]], tables[ch[1]], c)
            if not dense:
                tab = tab.to_sparse()
        tables[t] = tab
    return tables


def solve_clique_packing(g: Graph, ntd: NiceTreeDecomposition, c: int, d: int, variant: str,
                         join_mode: str = "naive", layout: str = "auto", witness: bool = False,
                         literal: bool = False) -> CliqueResult:
    """Maximum number of K_d copies covering every vertex at most c times."""
    _check_inputs(g, ntd, c, d, variant)
    tables = run_tables(g, ntd, c, d, variant, join_mode, layout, literal)
    root = tables[ntd.root].get(())
    stats = [NodeStat(t, ntd.kind[t], len(ntd.bags[t]), tables[t].entries(), tables[t].present())
             for t in sorted(tables)]
    wit = None
    if witness:
        if literal:
            raise CliqueDPError("witnesses need the default introduce rule")
        wit = reconstruct(g, ntd, tables, c, d, variant)
    return CliqueResult(root, wit, stats)


def solve_clique_partition(g: Graph, ntd: NiceTreeDecomposition, c: int, d: int, variant: str,
                           fast: bool = False) -> bool:
    """Can every vertex be covered exactly c times?

    By default this compares the maximum packing with c*n/d. With fast=True
    the forget rule keeps only types that use the forgotten vertex fully.
    """
    _check_inputs(g, ntd, c, d, variant)
    if (c * g.n) % d:
        return False
    if fast:
        tables = run_tables(g, ntd, c, d, variant, exact=True)
        return tables[ntd.root].get(()) >= 0
    return solve_clique_packing(g, ntd, c, d, variant).value == c * g.n // d


# -- witness -----------------------------------------------------------------------

def _multisets(cls: list[tuple[int, ...]], reps: int, c: int, cover: dict[int, int]):
    """Multisets of cliques with multiplicity <= reps keeping cover <= c."""
    chosen: list[tuple[int, ...]] = []

    def rec(i: int):
        yield list(chosen)
        for j in range(i, len(cls)):
            cl = cls[j]
            if chosen.count(cl) >= reps or any(cover[x] >= c for x in cl):
                continue
            for x in cl:
                cover[x] += 1
            chosen.append(cl)
            yield from rec(j)
            chosen.pop()
            for x in cl:
                cover[x] -= 1

    yield from rec(0)


def reconstruct(g: Graph, ntd: NiceTreeDecomposition, tables: dict[int, Table], c: int, d: int,
                variant: str) -> list[tuple[tuple[int, ...], int]]:
    reps = 1 if variant == DIST else c
    picked: dict[tuple[int, ...], int] = {}
    stack = [(ntd.root, ())]
    while stack:
        t, f = stack.pop()
        kind, ch = ntd.kind[t], ntd.children[t]
        tab = tables[t]
        val = tab.get(f)
        if kind == LEAF:
            continue
        if kind == INTRODUCE:
            pos = tables[ch[0]].order
            cpos = tab.order.index(ntd.vertex[t])
            stack.append((ch[0], f[:cpos] + f[cpos + 1:]))
            del pos
            continue
        if kind == JOIN:
            lt, rt = tables[ch[0]], tables[ch[1]]
            for f1 in itertools.product(*[range(x + 1) for x in f]):
                f2 = tuple(x - y for x, y in zip(f, f1))
                a, b = lt.get(f1), rt.get(f2)
                if a >= 0 and b >= 0 and a + b == val:
                    stack.append((ch[0], f1))
                    stack.append((ch[1], f2))
                    break
            else:
                raise CliqueDPError("witness trace failed at a join node")
            continue
        v = ntd.vertex[t]
        child = tables[ch[0]]
        order = child.order
        pos = order.index(v)
        cls = bag_cliques(g, order, v, d)
        found = False
        for final in range(c + 1):
            full = f[:pos] + (final,) + f[pos:]
            for ms in _multisets(cls, reps, c, {x: 0 for x in order}):
                cnt = [0] * len(order)
                for cl in ms:
                    for x in cl:
                        cnt[order.index(x)] += 1
                f2 = tuple(a - b for a, b in zip(full, cnt))
                if min(f2, default=0) < 0:
                    continue
                a = child.get(f2)
                if a >= 0 and a + len(ms) == val:
                    for cl in ms:
                        picked[cl] = picked.get(cl, 0) + 1
                    stack.append((ch[0], f2))
                    found = True
                    break
            if found:
                break
        if not found:
            raise CliqueDPError("witness trace failed at a forget node")
    return sorted(picked.items())
