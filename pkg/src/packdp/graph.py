"""Undirected simple graphs with dense integer vertices, plus the structural
primitives used by the solvers and gadget builders."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import networkx as nx

MAX_PATTERN = 10


class GraphError(ValueError):
    pass


def _norm_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset[tuple[int, int]]
    labels: tuple[str, ...] | None = None
    adj: tuple[frozenset[int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        nbrs: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        object.__setattr__(self, "adj", tuple(frozenset(s) for s in nbrs))

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def label(self, v: int) -> str:
        if self.labels is None:
            return str(v)
        return self.labels[v]

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph on `vertices`; also returns new->old ids."""
        order = sorted(set(vertices))
        pos = {v: i for i, v in enumerate(order)}
        edges = [(pos[u], pos[v]) for u, v in self.edges if u in pos and v in pos]
        labels = None if self.labels is None else [self.labels[v] for v in order]
        return make_graph(len(order), edges, labels), order

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = {0}
        stack = [0]
        while stack:
            for w in self.adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex v renamed perm[v]."""
        edges = [(perm[u], perm[v]) for u, v in self.edges]
        labels = None
        if self.labels is not None:
            out = [""] * self.n
            for v, lab in enumerate(self.labels):
                out[perm[v]] = lab
            labels = out
        return make_graph(self.n, edges, labels)


def make_graph(n: int, edges: Iterable[Sequence[int]], labels: Sequence[str] | None = None) -> Graph:
    if n < 0:
        raise GraphError("negative vertex count")
    norm = set()
    for e in edges:
        u, v = int(e[0]), int(e[1])
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u},{v}) out of range for n={n}")
        if u == v:
            raise GraphError(f"self-loop at {u}")
        norm.add(_norm_edge(u, v))
    if labels is not None:
        labels = tuple(str(x) for x in labels)
        if len(labels) != n:
            raise GraphError("label count does not match n")
    return Graph(n, frozenset(norm), labels)


# -- named graphs ----------------------------------------------------------

def complete_graph(d: int) -> Graph:
    return make_graph(d, itertools.combinations(range(d), 2))


def path_graph(n: int) -> Graph:
    return make_graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return make_graph(n, [(i, (i + 1) % n) for i in range(n)])


def paw_graph() -> Graph:
    # triangle 0,1,2 with pendant 3 on vertex 2
    return make_graph(4, [(0, 1), (1, 2), (0, 2), (2, 3)])


def named_pattern(name: str) -> Graph:
    key = name.strip().lower()
    if key == "paw":
        return paw_graph()
    kind, num = key[0], key[1:]
    if not num.isdigit():
        raise GraphError(f"unknown pattern name {name!r}")
    k = int(num)
    if kind == "k":
        return complete_graph(k)
    if kind == "p":
        return path_graph(k)
    if kind == "c":
        return cycle_graph(k)
    raise GraphError(f"unknown pattern name {name!r}")


# -- combinators -----------------------------------------------------------

def disjoint_union(g1: Graph, g2: Graph) -> tuple[Graph, int]:
    """Union with g2 shifted by g1.n; returns the offset applied to g2."""
    off = g1.n
    edges = list(g1.edges) + [(u + off, v + off) for u, v in g2.edges]
    labels = None
    if g1.labels is not None or g2.labels is not None:
        labels = [g1.label(v) for v in range(g1.n)] + [g2.label(v) for v in range(g2.n)]
    return make_graph(g1.n + g2.n, edges, labels), off


def identify_vertices(g: Graph, classes: Iterable[Iterable[int]]) -> tuple[Graph, list[int]]:
    """Merge each class into a single vertex.

    Loops created by merging adjacent vertices are dropped and parallel edges
    collapse. The merged vertex keeps the label of the smallest member.
    """
    rep = list(range(g.n))
    seen: set[int] = set()
    for cls in classes:
        members = sorted(set(cls))
        for v in members:
            if not 0 <= v < g.n:
                raise GraphError(f"vertex {v} out of range")
            if v in seen:
                raise GraphError(f"vertex {v} appears in two classes")
            seen.add(v)
        for v in members:
            rep[v] = members[0]
    keep = sorted(set(rep))
    newid = {v: i for i, v in enumerate(keep)}
    mapping = [newid[rep[v]] for v in range(g.n)]
    edges = [(mapping[u], mapping[v]) for u, v in g.edges if mapping[u] != mapping[v]]
    labels = None if g.labels is None else [g.labels[v] for v in keep]
    return make_graph(len(keep), edges, labels), mapping


def blow_up(g: Graph, v: int, t: int) -> tuple[Graph, list[int]]:
    """Replace v by t pairwise non-adjacent twins.

    The first twin keeps id v; the others are appended. Returns the graph and
    the list of twin ids.
    """
    if t < 1:
        raise GraphError("blow_up needs t >= 1")
    twins = [v] + list(range(g.n, g.n + t - 1))
    edges = list(g.edges)
    for w in twins[1:]:
        edges.extend((w, u) for u in g.adj[v])
    labels = None
    if g.labels is not None:
        labels = list(g.labels) + [f"{g.labels[v]}#{i}" for i in range(1, t)]
    return make_graph(g.n + t - 1, edges, labels), twins


# -- copies of a pattern ---------------------------------------------------

@dataclass(frozen=True)
class Copy:
    vertices: frozenset[int]
    edges: frozenset[tuple[int, int]]
    witness: tuple[int, ...]  # pattern vertex i -> host vertex witness[i]


def _search_order(h: Graph) -> list[int]:
    # each vertex after the first of its component has an earlier neighbour
    order: list[int] = []
    placed: set[int] = set()
    for start in sorted(range(h.n), key=lambda x: -h.degree(x)):
        if start in placed:
            continue
        order.append(start)
        placed.add(start)
        while True:
            frontier = [u for u in range(h.n) if u not in placed and h.adj[u] & placed]
            if not frontier:
                break
            u = max(frontier, key=lambda x: (len(h.adj[x] & placed), h.degree(x)))
            order.append(u)
            placed.add(u)
    return order


def injective_homomorphisms(h: Graph, g: Graph) -> Iterator[tuple[int, ...]]:
    """All injective edge-preserving maps V(h) -> V(g)."""
    if h.n > g.n:
        return
    order = _search_order(h)
    back = [[w for w in h.adj[u] if w in set(order[:i])] for i, u in enumerate(order)]
    img = [-1] * h.n
    used: set[int] = set()

    def rec(i: int) -> Iterator[tuple[int, ...]]:
        if i == len(order):
            yield tuple(img)
            return
        u = order[i]
        if back[i]:
            cand = set(g.adj[img[back[i][0]]])
            for w in back[i][1:]:
                cand &= g.adj[img[w]]
        else:
            cand = set(range(g.n))
        need = h.degree(u)
        for x in sorted(cand - used):
            if g.degree(x) < need:
                continue
            img[u] = x
            used.add(x)
            yield from rec(i + 1)
            used.discard(x)
        img[u] = -1

    yield from rec(0)


def automorphisms(h: Graph) -> list[tuple[int, ...]]:
    if h.n > MAX_PATTERN:
        raise GraphError(f"pattern has more than {MAX_PATTERN} vertices")
    return list(injective_homomorphisms(h, h))


def cliques(g: Graph, d: int) -> list[tuple[int, ...]]:
    """All d-cliques of g as increasing vertex tuples."""
    out: list[tuple[int, ...]] = []

    def rec(cur: list[int], cand: list[int]) -> None:
        if len(cur) == d:
            out.append(tuple(cur))
            return
        for i, x in enumerate(cand):
            if len(cur) + 1 + (len(cand) - i - 1) < d:
                break
            rec(cur + [x], [y for y in cand[i + 1:] if y in g.adj[x]])

    rec([], list(range(g.n)))
    return out


def enumerate_copies(g: Graph, h: Graph) -> list[Copy]:
    """Every subgraph of g isomorphic to h, once each, sorted."""
    if h.n > MAX_PATTERN:
        raise GraphError(f"pattern has more than {MAX_PATTERN} vertices")
    if h.n >= 1 and h.m == h.n * (h.n - 1) // 2:
        out = []
        for cl in cliques(g, h.n):
            es = frozenset(itertools.combinations(cl, 2))
            out.append(Copy(frozenset(cl), es, cl))
        return out
    found: dict[tuple[frozenset[int], frozenset[tuple[int, int]]], tuple[int, ...]] = {}
    hedges = h.sorted_edges()
    for phi in injective_homomorphisms(h, g):
        key = (frozenset(phi), frozenset(_norm_edge(phi[a], phi[b]) for a, b in hedges))
        if key not in found:
            found[key] = phi
    copies = [Copy(vs, es, w) for (vs, es), w in found.items()]
    copies.sort(key=lambda c: (sorted(c.vertices), sorted(c.edges)))
    return copies


# -- blocks ----------------------------------------------------------------

@dataclass(frozen=True)
class BlockDecomposition:
    blocks: tuple[frozenset[int], ...]
    cutvertices: frozenset[int]
    tree: tuple[tuple[int, int], ...]  # (block index, cutvertex)


def blocks(h: Graph) -> BlockDecomposition:
    nxg = h.to_networkx()
    bl = [frozenset(b) for b in nx.biconnected_components(nxg)]
    bl += [frozenset([v]) for v in range(h.n) if h.degree(v) == 0]
    bl.sort(key=lambda b: sorted(b))
    cuts = frozenset(nx.articulation_points(nxg))
    tree = tuple((i, v) for i, b in enumerate(bl) for v in sorted(b & cuts))
    return BlockDecomposition(tuple(bl), cuts, tree)


def is_clique(g: Graph, vs: Iterable[int]) -> bool:
    vs = list(vs)
    return all(g.has_edge(a, b) for a, b in itertools.combinations(vs, 2))


def is_block_graph(h: Graph) -> bool:
    return all(is_clique(h, b) for b in blocks(h).blocks)


def min_block_separator(h: Graph, block: Iterable[int]) -> frozenset[int]:
    """Smallest S inside the block whose removal disconnects the block.

    Ties go to the lexicographically first sorted subset.
    """
    members = sorted(set(block))
    if is_clique(h, members):
        raise GraphError("a clique block has no separator")
    sub, _ = h.induced(members)
    for size in range(1, len(members) - 1):
        for s in itertools.combinations(range(len(members)), size):
            rest, _ = sub.induced(set(range(len(members))) - set(s))
            if not rest.is_connected():
                return frozenset(members[i] for i in s)
    raise GraphError("no separator found")  # unreachable for non-clique blocks


# -- I/O -------------------------------------------------------------------

def parse_gr(text: str) -> Graph:
    """PACE .gr text; vertices are 1-indexed on disk."""
    n = m = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] != "tw" or n is not None:
                raise GraphError(f"line {lineno}: bad header {line!r}")
            n, m = int(parts[2]), int(parts[3])
            continue
        if n is None:
            raise GraphError(f"line {lineno}: edge before header")
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected two endpoints")
        try:
            u, v = int(parts[0]) - 1, int(parts[1]) - 1
        except ValueError as exc:
            raise GraphError(f"line {lineno}: {exc}") from None
        edges.append((u, v))
    if n is None:
        raise GraphError("missing 'p tw' header")
    g = make_graph(n, edges)
    if g.m != m:
        raise GraphError(f"header declares {m} edges, found {g.m}")
    return g


def emit_gr(g: Graph) -> str:
    lines = [f"p tw {g.n} {g.m}"]
    lines += [f"{u + 1} {v + 1}" for u, v in g.sorted_edges()]
    return "\n".join(lines) + "\n"


def graph_to_dict(g: Graph) -> dict:
    d = {"n": g.n, "edges": [list(e) for e in g.sorted_edges()]}
    if g.labels is not None:
        d["labels"] = list(g.labels)
    return d


def graph_from_dict(d: dict) -> Graph:
    return make_graph(int(d["n"]), d["edges"], d.get("labels"))


def dumps_graph(g: Graph) -> str:
    return json.dumps(graph_to_dict(g))
