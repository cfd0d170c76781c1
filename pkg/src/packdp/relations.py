"""Finite relations over {0..c}^l and the operations the gadget builders need."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

Tuple = tuple[int, ...]


class RelationError(ValueError):
    pass


@dataclass(frozen=True)
class Relation:
    arity: int
    bound: int
    tuples: tuple[Tuple, ...]  # sorted, duplicate free

    def __contains__(self, t: object) -> bool:
        return t in set(self.tuples)

    def __len__(self) -> int:
        return len(self.tuples)

    def __iter__(self):
        return iter(self.tuples)

    def as_set(self) -> frozenset[Tuple]:
        return frozenset(self.tuples)

    def with_bound(self, c: int) -> "Relation":
        return make_relation(self.arity, c, self.tuples)

    def to_dict(self) -> dict:
        return {"arity": self.arity, "bound": self.bound, "tuples": [list(t) for t in self.tuples]}


def make_relation(arity: int, bound: int, tuples: Iterable[Sequence[int]]) -> Relation:
    if arity < 0 or bound < 0:
        raise RelationError("arity and bound must be non-negative")
    out = set()
    for t in tuples:
        t = tuple(int(x) for x in t)
        if len(t) != arity:
            raise RelationError(f"tuple {t} does not have arity {arity}")
        if any(x < 0 or x > bound for x in t):
            raise RelationError(f"tuple {t} leaves [0,{bound}]")
        out.add(t)
    return Relation(arity, bound, tuple(sorted(out)))


def relation_from_dict(d: dict) -> Relation:
    return make_relation(int(d["arity"]), int(d["bound"]), d["tuples"])


def dumps_relation(r: Relation) -> str:
    return json.dumps(r.to_dict())


def rel_cover(l: int, y: int) -> Relation:
    if l < 1 or y < 0:
        raise RelationError("cover needs l >= 1 and y >= 0")
    return make_relation(l, y, [(y,) * l])


def rel_eq(l: int, values: Iterable[int]) -> Relation:
    vals = sorted(set(values))
    if not vals:
        raise RelationError("empty value set")
    if l < 1 or vals[0] < 0:
        raise RelationError("eq needs l >= 1 and non-negative values")
    return make_relation(l, vals[-1], [(x,) * l for x in vals])


def rel_sum(l: int, z: int) -> Relation:
    if l < 1 or z < 1:
        raise RelationError("sum needs l >= 1 and z >= 1")
    return make_relation(l, z, (t for t in itertools.product(range(z + 1), repeat=l) if sum(t) == z))


def rel_cneq(z: int) -> Relation:
    if z < 1:
        raise RelationError("cneq needs z >= 1")
    return make_relation(2, z, [(x, z - x) for x in range(z + 1)])


def weight(t: Sequence[int]) -> int:
    return sum(t)


def is_regular(r: Relation, x: int, d: int) -> bool:
    if d < 1:
        raise RelationError("modulus must be positive")
    return all(weight(t) % d == x % d for t in r.tuples)


def regular_residue(r: Relation, d: int) -> int | None:
    """The common weight residue mod d, or None when there is none."""
    res = {weight(t) % d for t in r.tuples}
    if len(res) > 1:
        return None
    return res.pop() if res else 0


def complement_tuple(t: Sequence[int], c: int) -> Tuple:
    if any(x > c or x < 0 for x in t):
        raise RelationError(f"tuple {tuple(t)} leaves [0,{c}]")
    return tuple(c - x for x in t)


def complement(r: Relation, c: int) -> Relation:
    if r.bound > c and any(x > c for t in r.tuples for x in t):
        raise RelationError("relation has entries above c")
    return make_relation(r.arity, c, (complement_tuple(t, c) for t in r.tuples))


def concat(r: Sequence[int], s: Sequence[int]) -> Tuple:
    return tuple(r) + tuple(s)


def stack(vectors: Sequence[Sequence[int]]) -> Tuple:
    if vectors and len({len(v) for v in vectors}) != 1:
        raise RelationError("ragged stack")
    return tuple(x for v in vectors for x in v)


def sel_tuple(w: Sequence[int], x: int, y: int) -> Tuple:
    """Row i (1-based) of length y is zero when i is in w, one otherwise."""
    ws = set(w)
    return stack([(0,) * y if i in ws else (1,) * y for i in range(1, x + 1)])


def rel_sel(parts: Sequence[Iterable[int]], x: int, y: int) -> Relation:
    blocks = [sorted(set(p)) for p in parts]
    flat = [i for b in blocks for i in b]
    if sorted(flat) != list(range(1, x + 1)) or any(not b for b in blocks):
        raise RelationError("parts must partition 1..x into nonempty sets")
    return make_relation(x * y, 1, (sel_tuple(w, x, y) for w in itertools.product(*blocks)))


def rel_sel_full(x: int, y: int) -> Relation:
    return rel_sel([range(1, x + 1)], x, y)


def rel_copy(w: Relation, c: int) -> Relation:
    return make_relation(2 * w.arity, c, (concat(t, complement_tuple(t, c)) for t in w.tuples))


def render(r: Relation) -> str:
    head = f"arity={r.arity} bound={r.bound} size={len(r)}"
    return "\n".join([head] + [" ".join(map(str, t)) for t in r.tuples])
