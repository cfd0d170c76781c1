"""Seeded random instance generators used by tests, batch suites and the CLI."""

from __future__ import annotations

import random

import numpy as np

from .graph import Graph, make_graph
from .treedec import TreeDecomposition, make_td


def er_graph(n: int, p: float, rng: random.Random) -> Graph:
    return make_graph(n, [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < p])


def partial_ktree(n: int, k: int, keep: float, rng: random.Random) -> tuple[Graph, TreeDecomposition]:
    """Random k-tree on n vertices with each edge kept with probability keep,
    returned with a width-k decomposition of it."""
    if n <= k + 1:
        edges = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < keep]
        return make_graph(n, edges), make_td([range(n)], [], n)
    perm = list(range(n))
    rng.shuffle(perm)
    base = perm[: k + 1]
    cliques = [tuple(base)]
    bags = [frozenset(base)]
    tree: list[tuple[int, int]] = []
    edges = {(min(a, b), max(a, b)) for i, a in enumerate(base) for b in base[i + 1:]}
    for v in perm[k + 1:]:
        host = rng.randrange(len(cliques))
        sub = rng.sample(cliques[host], k)
        edges |= {(min(v, u), max(v, u)) for u in sub}
        cliques.append(tuple(sub) + (v,))
        bags.append(frozenset(cliques[-1]))
        tree.append((host, len(bags) - 1))
    kept = [e for e in sorted(edges) if rng.random() < keep]
    return make_graph(n, kept), make_td(bags, tree, n)


def random_table(order_len: int, c: int, density: float, rng: np.random.Generator, hi: int = 6) -> np.ndarray:
    """Dense table over (c+1)^order_len with absent entries marked NEG."""
    from .clique_dp import NEG

    shape = (c + 1,) * order_len
    vals = rng.integers(0, hi + 1, size=shape).astype(np.int64)
    vals[rng.random(shape) >= density] = NEG
    return vals
