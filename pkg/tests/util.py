"""Shared test helpers.

``random_polymatroid`` builds random sums of shifted, truncated uniform
functions min(|A & S|, c). Each summand is a polymatroid, sums of
polymatroids are polymatroids, so the generator provably stays inside the
cone while covering a rich family (every matroid rank function of this
shape, loops, non-matroid integer polymatroids via scaling).
"""

import random

from symcone.polymatroid import RankFunction


def random_polymatroid(rng: random.Random, degree: int,
                       terms: int | None = None) -> RankFunction:
    if terms is None:
        terms = rng.randint(1, 4)
    vals = [0] * (1 << degree)
    for _ in range(terms):
        support = rng.sample(range(degree), rng.randint(1, degree))
        smask = 0
        for i in support:
            smask |= 1 << i
        cap = rng.randint(1, max(1, len(support)))
        weight = rng.randint(1, 3)
        for mask in range(1 << degree):
            vals[mask] += weight * min((mask & smask).bit_count(), cap)
    return RankFunction(degree, vals)


def random_subset(rng: random.Random, pool) -> list:
    pool = list(pool)
    k = rng.randint(0, len(pool))
    return sorted(rng.sample(pool, k))
