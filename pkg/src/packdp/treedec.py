"""Tree decompositions: PACE I/O, validation, heuristics and nicification."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import networkx as nx
from networkx.algorithms.approximation import treewidth_min_degree, treewidth_min_fill_in

from .graph import Graph


class TDError(ValueError):
    pass


@dataclass(frozen=True)
class TreeDecomposition:
    bags: tuple[frozenset[int], ...]
    tree: tuple[tuple[int, int], ...]
    n: int  # vertex count of the decomposed graph

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def neighbours(self) -> list[list[int]]:
        nb: list[list[int]] = [[] for _ in self.bags]
        for a, b in self.tree:
            nb[a].append(b)
            nb[b].append(a)
        return nb


def make_td(bags: Iterable[Iterable[int]], tree: Iterable[Sequence[int]], n: int) -> TreeDecomposition:
    bl = tuple(frozenset(int(v) for v in b) for b in bags)
    edges = tuple((int(a), int(b)) for a, b in tree)
    for a, b in edges:
        if not (0 <= a < len(bl) and 0 <= b < len(bl)):
            raise TDError(f"tree edge ({a},{b}) references an unknown bag")
    return TreeDecomposition(bl, edges, n)


def path_decomposition(bags: Sequence[Iterable[int]], n: int) -> TreeDecomposition:
    return make_td(bags, [(i, i + 1) for i in range(len(bags) - 1)], n)


# -- PACE .td ----------------------------------------------------------------

def parse_td(text: str) -> TreeDecomposition:
    header = None
    bags: dict[int, frozenset[int]] = {}
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        try:
            if parts[0] == "s":
                if header is not None or len(parts) != 5 or parts[1] != "td":
                    raise TDError(f"line {lineno}: malformed header {line!r}")
                header = tuple(int(x) for x in parts[2:])
            elif header is None:
                raise TDError(f"line {lineno}: content before 's td' header")
            elif parts[0] == "b":
                bid = int(parts[1]) - 1
                if bid in bags or not 0 <= bid < header[0]:
                    raise TDError(f"line {lineno}: bad or repeated bag id {bid + 1}")
                vs = [int(x) - 1 for x in parts[2:]]
                for v in vs:
                    if not 0 <= v < header[2]:
                        raise TDError(f"line {lineno}: bag references unknown vertex {v + 1}")
                bags[bid] = frozenset(vs)
            else:
                if len(parts) != 2:
                    raise TDError(f"line {lineno}: expected a tree edge")
                edges.append((int(parts[0]) - 1, int(parts[1]) - 1))
        except (ValueError, IndexError) as exc:
            if isinstance(exc, TDError):
                raise
            raise TDError(f"line {lineno}: {exc}") from None
    if header is None:
        raise TDError("missing 's td' header")
    nbags, _, n = header
    if len(bags) != nbags:
        raise TDError(f"header declares {nbags} bags, found {len(bags)}")
    return make_td([bags[i] for i in range(nbags)], edges, n)


def emit_td(td: TreeDecomposition) -> str:
    lines = [f"s td {len(td.bags)} {td.width + 1} {td.n}"]
    for i, b in enumerate(td.bags):
        lines.append(" ".join(["b", str(i + 1)] + [str(v + 1) for v in sorted(b)]))
    lines += [f"{a + 1} {b + 1}" for a, b in td.tree]
    return "\n".join(lines) + "\n"


# -- validation --------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    kind: str  # not-a-tree | vertex-range | vertex-uncovered | edge-uncovered | disconnected
    detail: str

    def to_dict(self) -> dict:
        return {"kind": self.kind, "detail": self.detail}


def validate(td: TreeDecomposition, g: Graph) -> Violation | None:
    """None when td is a tree decomposition of g, else the first violation."""
    k = len(td.bags)
    if k == 0:
        return Violation("not-a-tree", "no bags")
    t = nx.Graph()
    t.add_nodes_from(range(k))
    t.add_edges_from(td.tree)
    if t.number_of_edges() != len(td.tree) or not nx.is_tree(t):
        return Violation("not-a-tree", "bag graph is not a tree")
    if td.n != g.n:
        return Violation("vertex-range", f"decomposition is for {td.n} vertices, graph has {g.n}")
    where: list[list[int]] = [[] for _ in range(g.n)]
    for i, b in enumerate(td.bags):
        for v in b:
            if not 0 <= v < g.n:
                return Violation("vertex-range", f"bag {i} holds unknown vertex {v}")
            where[v].append(i)
    for v in range(g.n):
        if not where[v]:
            return Violation("vertex-uncovered", f"vertex {v} is in no bag")
    for u, v in g.sorted_edges():
        if not any(v in td.bags[i] for i in where[u]):
            return Violation("edge-uncovered", f"edge ({u},{v}) is in no bag")
    for v in range(g.n):
        if not nx.is_connected(t.subgraph(where[v])):
            return Violation("disconnected", f"bags holding vertex {v} are disconnected: {where[v]}")
    return None


# -- heuristics ----------------------------------------------------------------

def heuristic_treedec(g: Graph, strategy: str = "min-degree") -> TreeDecomposition:
    if g.n == 0:
        return make_td([[]], [], 0)
    fn = {"min-degree": treewidth_min_degree, "min-fill": treewidth_min_fill_in}.get(strategy)
    if fn is None:
        raise TDError(f"unknown strategy {strategy!r}")
    _, dec = fn(g.to_networkx())
    nodes = sorted(dec.nodes, key=lambda b: (sorted(b), len(b)))
    idx = {b: i for i, b in enumerate(nodes)}
    return make_td(nodes, [(idx[a], idx[b]) for a, b in dec.edges], g.n)


def contract_redundant(td: TreeDecomposition) -> TreeDecomposition:
    """Merge every bag that is a subset of a neighbouring bag into it."""
    bags = list(td.bags)
    nb = [set(x) for x in td.neighbours()]
    alive = set(range(len(bags)))
    changed = True
    while changed:
        changed = False
        for i in sorted(alive):
            for j in sorted(nb[i]):
                if bags[i] <= bags[j]:
                    for x in nb[i]:
                        if x != j:
                            nb[x].discard(i)
                            nb[x].add(j)
                            nb[j].add(x)
                    nb[j].discard(i)
                    alive.discard(i)
                    nb[i] = set()
                    changed = True
                    break
    keep = sorted(alive)
    pos = {o: i for i, o in enumerate(keep)}
    edges = sorted({(min(pos[a], pos[b]), max(pos[a], pos[b])) for a in keep for b in nb[a]})
    return make_td([bags[i] for i in keep], edges, td.n)


# -- nice decompositions -------------------------------------------------------

LEAF, INTRODUCE, FORGET, JOIN = "leaf", "introduce", "forget", "join"


@dataclass(frozen=True)
class NiceTreeDecomposition:
    kind: tuple[str, ...]
    vertex: tuple[int, ...]  # introduced/forgotten vertex, -1 otherwise
    children: tuple[tuple[int, ...], ...]
    bags: tuple[frozenset[int], ...]
    root: int
    n: int

    def __len__(self) -> int:
        return len(self.kind)

    @property
    def width(self) -> int:
        return max(len(b) for b in self.bags) - 1

    def postorder(self) -> list[int]:
        out: list[int] = []
        stack = [(self.root, False)]
        while stack:
            t, done = stack.pop()
            if done:
                out.append(t)
                continue
            stack.append((t, True))
            for c in reversed(self.children[t]):
                stack.append((c, False))
        return out

    def as_tree_decomposition(self) -> TreeDecomposition:
        edges = [(t, c) for t in range(len(self)) for c in self.children[t]]
        return make_td(self.bags, edges, self.n)


class _NiceBuilder:
    def __init__(self) -> None:
        self.kind: list[str] = []
        self.vertex: list[int] = []
        self.children: list[tuple[int, ...]] = []
        self.bags: list[frozenset[int]] = []

    def add(self, kind: str, v: int, children: tuple[int, ...], bag: frozenset[int]) -> int:
        self.kind.append(kind)
        self.vertex.append(v)
        self.children.append(children)
        self.bags.append(bag)
        return len(self.kind) - 1

    def leaf(self) -> int:
        return self.add(LEAF, -1, (), frozenset())

    def move(self, node: int, target: frozenset[int]) -> int:
        # forget first so bags never exceed max(|source|, |target|)
        bag = self.bags[node]
        for v in sorted(bag - target):
            bag = bag - {v}
            node = self.add(FORGET, v, (node,), bag)
        for v in sorted(target - bag):
            bag = bag | {v}
            node = self.add(INTRODUCE, v, (node,), bag)
        return node

    def join_all(self, nodes: list[int]) -> int:
        while len(nodes) > 1:
            nxt = []
            for i in range(0, len(nodes) - 1, 2):
                a, b = nodes[i], nodes[i + 1]
                nxt.append(self.add(JOIN, -1, (a, b), self.bags[a]))
            if len(nodes) % 2:
                nxt.append(nodes[-1])
            nodes = nxt
        return nodes[0]


def nicify(td: TreeDecomposition, root: int = 0, *, contract: bool = True) -> NiceTreeDecomposition:
    """Nice decomposition of the same width with empty root and leaf bags."""
    if contract:
        td = contract_redundant(td)
        root = 0
    if not 0 <= root < len(td.bags):
        raise TDError("root out of range")
    nb = td.neighbours()
    parent = {root: -1}
    order = [root]
    for t in order:
        for x in nb[t]:
            if x not in parent:
                parent[x] = t
                order.append(x)
    if len(order) != len(td.bags):
        raise TDError("decomposition tree is disconnected")
    b = _NiceBuilder()
    top: dict[int, int] = {}
    for t in reversed(order):
        kids = [x for x in nb[t] if parent.get(x) == t]
        if not kids:
            top[t] = b.move(b.leaf(), td.bags[t])
        else:
            top[t] = b.join_all([b.move(top[x], td.bags[t]) for x in kids])
    r = b.move(top[root], frozenset())
    return NiceTreeDecomposition(tuple(b.kind), tuple(b.vertex), tuple(b.children),
                                 tuple(b.bags), r, td.n)


def check_nice(ntd: NiceTreeDecomposition) -> str | None:
    """None when every node obeys its kind, else a message."""
    if ntd.bags[ntd.root]:
        return "root bag is not empty"
    for t in range(len(ntd)):
        k, ch, bag = ntd.kind[t], ntd.children[t], ntd.bags[t]
        if k == LEAF:
            if ch or bag:
                return f"leaf {t} has children or a nonempty bag"
        elif k == INTRODUCE:
            if len(ch) != 1 or bag != ntd.bags[ch[0]] | {ntd.vertex[t]} or ntd.vertex[t] in ntd.bags[ch[0]]:
                return f"bad introduce node {t}"
        elif k == FORGET:
            if len(ch) != 1 or bag | {ntd.vertex[t]} != ntd.bags[ch[0]] or ntd.vertex[t] in bag:
                return f"bad forget node {t}"
        elif k == JOIN:
            if len(ch) != 2 or any(ntd.bags[c] != bag for c in ch):
                return f"bad join node {t}"
        else:
            return f"unknown node kind {k!r}"
    return None


def nice_from_graph(g: Graph, strategy: str = "min-degree") -> NiceTreeDecomposition:
    return nicify(heuristic_treedec(g, strategy))


# -- orders ------------------------------------------------------------------

def rcm_order(g: Graph, vertices: Iterable[int] | None = None) -> list[int]:
    """Reverse Cuthill-McKee order of g (or of the subgraph on `vertices`)."""
    import numpy as np
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import reverse_cuthill_mckee

    vs = sorted(set(range(g.n) if vertices is None else vertices))
    if not vs:
        return []
    idx = {v: i for i, v in enumerate(vs)}
    rows, cols = [], []
    for u, v in g.edges:
        if u in idx and v in idx:
            rows += [idx[u], idx[v]]
            cols += [idx[v], idx[u]]
    m = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(len(vs), len(vs)))
    return [vs[i] for i in reverse_cuthill_mckee(m, symmetric_mode=True)]


def order_bags(g: Graph, order: Sequence[int]) -> list[frozenset[int]]:
    """Bags of the path decomposition induced by a linear order: position i
    holds v_i and every earlier vertex with a neighbour at i or later.

    Only edges among the ordered vertices are considered.
    """
    pos = {v: i for i, v in enumerate(order)}
    last = {v: i for i, v in enumerate(order)}
    for v in order:
        for u in g.adj[v]:
            if u in pos and pos[u] > last[v]:
                last[v] = pos[u]
    bags = []
    active: set[int] = set()
    for i, v in enumerate(order):
        active.add(v)
        bags.append(frozenset(active))
        active = {u for u in active if last[u] > i}
    return bags
