"""3-dimensional matching instances and an exact desk-scale solver.

A matching is represented as a plain ``frozenset`` of triples.  The exact
solver is a backtracking search over triples with used-coordinate
bitmasks; it is intended for instances small enough to verify by brute
force, and refuses anything larger.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable

Triple = tuple[int, int, int]
Matching = frozenset  # frozenset[Triple]

MAX_ALPHA = 6
MAX_TRIPLES = 20


@dataclass(frozen=True)
class TdmInstance:
    """Ground sets {0..alpha-1} x 3 and a set of candidate triples."""

    alpha: int
    triples: frozenset

    def __post_init__(self) -> None:
        if self.alpha < 1:
            raise ValueError("alpha must be positive")
        for t in self.triples:
            if len(t) != 3 or any(not (0 <= c < self.alpha) for c in t):
                raise ValueError(f"triple {t} outside range [0, {self.alpha})")


def is_matching(instance: TdmInstance, subset: Iterable[Triple]) -> bool:
    """True iff subset is contained in the instance's triples and no two
    members share an x, y, or z coordinate."""
    chosen = list(subset)
    if any(t not in instance.triples for t in chosen):
        return False
    for axis in range(3):
        coords = [t[axis] for t in chosen]
        if len(set(coords)) != len(coords):
            return False
    return True


def max_matching(
    instance: TdmInstance,
    max_alpha: int = MAX_ALPHA,
    max_triples: int = MAX_TRIPLES,
) -> frozenset:
    """Maximum-cardinality matching by exhaustive backtracking.

    Ties between maximum matchings are broken toward the lexicographically
    smallest sorted triple tuple, so results are stable across runs.
    Raises ValueError("search bound exceeded") above the size bounds.
    """
    if instance.alpha > max_alpha or len(instance.triples) > max_triples:
        raise ValueError("search bound exceeded")
    triples = sorted(instance.triples)
    n = len(triples)
    best_size = 0
    best_key: tuple = ()

    def dfs(i: int, used_x: int, used_y: int, used_z: int, chosen: list) -> None:
        nonlocal best_size, best_key
        if len(chosen) + (n - i) < best_size:
            return
        if i == n:
            key = tuple(chosen)
            if len(chosen) > best_size or (len(chosen) == best_size and key < best_key):
                best_size = len(chosen)
                best_key = key
            return
        x, y, z = triples[i]
        if not (used_x >> x & 1 or used_y >> y & 1 or used_z >> z & 1):
            chosen.append(triples[i])
            dfs(i + 1, used_x | 1 << x, used_y | 1 << y, used_z | 1 << z, chosen)
            chosen.pop()
        dfs(i + 1, used_x, used_y, used_z, chosen)

    dfs(0, 0, 0, 0, [])
    return frozenset(best_key)


def gen_random_tdm(
    alpha: int, triple_count: int, seed: int = 0, plant_perfect: bool = True
) -> TdmInstance:
    """Seeded random instance; optionally guarantees a perfect matching.

    With ``plant_perfect`` the instance contains alpha pairwise-disjoint
    triples (random permutations of y and z against the identity on x),
    so its maximum matching has size exactly alpha.
    """
    if alpha < 1:
        raise ValueError("alpha must be positive")
    if triple_count > alpha**3:
        raise ValueError(f"only {alpha ** 3} distinct triples exist")
    if plant_perfect and triple_count < alpha:
        raise ValueError("planting a perfect matching needs at least alpha triples")
    rng = random.Random(seed)
    triples: set[Triple] = set()
    if plant_perfect:
        ys = list(range(alpha))
        zs = list(range(alpha))
        rng.shuffle(ys)
        rng.shuffle(zs)
        triples.update((i, ys[i], zs[i]) for i in range(alpha))
    while len(triples) < triple_count:
        triples.add(
            (rng.randrange(alpha), rng.randrange(alpha), rng.randrange(alpha))
        )
    return TdmInstance(alpha, frozenset(triples))
