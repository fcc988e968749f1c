"""Extreme-ray enumeration for pointed rational cones (double description).

The cone is {s : A s >= 0} for an integer matrix A whose rows span the
whole space, so the only line it contains is the origin and the extreme
rays determine it.  The double description method starts from a simplicial
subcone cut out by a maximal independent set of rows and inserts the
remaining rows one by one: rays on the wrong side of the new hyperplane
are dropped, and every adjacent (positive, negative) pair of rays spawns
one new ray on the hyperplane.  Everything is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from symcone import _kernels as kernels
from symcone.orbits import OrbitStructure
from symcone.polymatroid import uniform
from symcone.shannon import HRep, OrbitVector, primitive

__all__ = [
    "VRep",
    "double_description",
    "verify_extremality",
    "cross_check_brute",
    "uniform_ray_indices",
]

BRUTE_DIM_LIMIT = 9


@dataclass(frozen=True)
class VRep:
    """Extreme rays of the cone cut out by an H-representation.

    ``rays`` are primitive integer vectors in orbit coordinates, sorted
    lexicographically; ``tight[i]`` holds the indices of the H-rep rows
    that vanish on ``rays[i]``.  Construction re-checks the defining
    properties, so a VRep that exists is internally consistent: every ray
    is feasible, its tight rows have rank dimension - 1, and no ray is a
    positive multiple of another.
    """

    hrep: HRep
    rays: tuple
    tight: tuple

    def __post_init__(self):
        rays = tuple(
            r if isinstance(r, OrbitVector)
            else OrbitVector(self.hrep.structure, r)
            for r in self.rays)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "tight", tuple(frozenset(t) for t in self.tight))
        if len(self.tight) != len(rays):
            raise ValueError(
                f"{len(rays)} rays but {len(self.tight)} tight-row sets")
        d = self.hrep.dim
        coords_seen = []
        for vec, t in zip(rays, self.tight):
            c = vec.coords
            if any(not isinstance(x, int) for x in c) or primitive(c) != c or not any(c):
                raise ValueError(f"ray {c} is not a primitive integer vector")
            slacks = self.hrep.slacks(c)
            if any(v < 0 for v in slacks):
                raise ValueError(f"ray {c} violates a defining inequality")
            actual = frozenset(i for i, v in enumerate(slacks) if v == 0)
            if actual != t:
                raise ValueError(f"tight-row set of ray {c} is wrong")
            if kernels.int_rank([self.hrep.rows[i] for i in t]) != d - 1:
                raise ValueError(f"ray {c} is not extreme: tight rows have "
                                 f"rank below {d - 1}")
            coords_seen.append(c)
        if coords_seen != sorted(coords_seen):
            raise ValueError("rays are not in lexicographic order")
        if len(set(coords_seen)) != len(coords_seen):
            raise ValueError("duplicate ray")

    @property
    def structure(self) -> OrbitStructure:
        return self.hrep.structure

    def __len__(self) -> int:
        return len(self.rays)

    def coords(self) -> tuple:
        """The rays as bare coordinate tuples."""
        return tuple(r.coords for r in self.rays)

    def as_dict(self) -> dict:
        """JSON-friendly form with orbit labels as the column header."""
        return {
            "degree": self.structure.degree,
            "columns": list(self.structure.label_strings()),
            "rays": [list(r.coords) for r in self.rays],
            "tight_rows": [sorted(t) for t in self.tight],
        }


def _echelon_insert(basis: list, row: Sequence[int]) -> bool:
    """Reduce ``row`` against the fraction-free echelon ``basis`` and
    append it when independent.  Returns True on growth."""
    v = list(row)
    for pcol, prow in basis:
        b = v[pcol]
        if b:
            a = prow[pcol]
            v = primitive([a * x - b * y for x, y in zip(v, prow)])
    for c, x in enumerate(v):
        if x:
            basis.append((c, list(v)))
            return True
    return False


def _simplicial_rays(rows: Sequence[Sequence[int]]) -> list:
    """Extreme rays of {x : B x >= 0} for an invertible square B.

    These are the columns of the inverse, scaled to primitive integer
    vectors: column j satisfies every row with equality except row j.
    """
    d = len(rows)
    aug = [[Fraction(x) for x in r] + [Fraction(i == j) for j in range(d)]
           for i, r in enumerate(rows)]
    for col in range(d):
        piv = next(i for i in range(col, d) if aug[i][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for i in range(d):
            if i != col and aug[i][col]:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[col])]
    return [primitive([aug[i][d + j] for i in range(d)]) for j in range(d)]


def _insertion_order(rows: Sequence[Sequence[int]]) -> list[int]:
    """Default row order: ascending count of nonzero entries, ties by
    position.  Sparse rows first keeps intermediate ray counts small."""
    return sorted(range(len(rows)), key=lambda i: (sum(1 for x in rows[i] if x), i))


def double_description(hrep: HRep, order: Sequence[int] | None = None) -> VRep:
    """All extreme rays of the cone {s : row . s >= 0 for every row}.

    The result does not depend on ``order`` (a permutation of the row
    indices fixing the insertion sequence); by default rows are inserted
    sparsest first.  The cone must be pointed, i.e. the rows must span
    the full orbit space.
    """
    rows = hrep.rows
    d = hrep.dim
    m = len(rows)
    if order is None:
        order = _insertion_order(rows)
    else:
        order = [int(i) for i in order]
        if sorted(order) != list(range(m)):
            raise ValueError("order must be a permutation of the row indices")
    rank = kernels.int_rank(rows)
    if rank < d:
        raise ValueError(
            f"cone is not pointed: rows span rank {rank} of dimension {d}")

    basis: list = []
    start = [i for i in order if _echelon_insert(basis, rows[i])]
    assert len(start) == d
    started = set(start)
    rest = [i for i in order if i not in started]

    # Ray state: (vector, bitmask of tight rows among the processed ones).
    # Processed rows are numbered 0..k-1 in the order start + rest.
    rays = [(vec, (1 << d) - 1 - (1 << j))
            for j, vec in enumerate(_simplicial_rays([rows[i] for i in start]))]
    for k, i in enumerate(rest, start=d):
        row = rows[i]
        pos, zero, neg = [], [], []
        for vec, mask in rays:
            s = sum(a * x for a, x in zip(row, vec) if x)
            if s > 0:
                pos.append((vec, mask, s))
            elif s < 0:
                neg.append((vec, mask, s))
            else:
                zero.append((vec, mask | (1 << k)))
        if not neg:
            rays = [(v, m) for v, m, _ in pos] + zero
            continue
        masks = [m for _, m, _ in pos + neg] + [m for _, m in zero]
        new = []
        for pv, pm, ps in pos:
            for nv, nm, ns in neg:
                common = pm & nm
                if common.bit_count() < d - 2:
                    continue
                if any(m != pm and m != nm and common & ~m == 0 for m in masks):
                    continue
                vec = primitive([ps * x - ns * y for x, y in zip(nv, pv)])
                new.append((vec, common | (1 << k)))
        rays = [(v, m) for v, m, _ in pos] + zero + new

    out = sorted(vec for vec, _ in rays)
    tight = [hrep.tight_rows(vec) for vec in out]
    return VRep(hrep, tuple(out), tuple(tight))


def verify_extremality(hrep: HRep, ray) -> bool:
    """Independent check that a feasible point spans an extreme ray.

    True exactly when the rows tight at the point have rank
    dimension - 1.  The zero vector is feasible but spans no ray, so it
    returns False; an infeasible point raises ValueError.
    """
    coords = ray.coords if isinstance(ray, OrbitVector) else tuple(ray)
    slacks = hrep.slacks(coords)
    for i, v in enumerate(slacks):
        if v < 0:
            raise ValueError(
                f"point is outside the cone: row {i} gives {v}")
    if not any(coords):
        return False
    tight = [hrep.rows[i] for i, v in enumerate(slacks) if v == 0]
    return kernels.int_rank(tight) == hrep.dim - 1


def cross_check_brute(hrep: HRep) -> VRep:
    """Oracle ray enumeration over all row subsets of size dimension - 1.

    Exhaustive and independent of the double description bookkeeping, but
    exponential in the dimension, hence capped at dimension 9.
    """
    d = hrep.dim
    if d > BRUTE_DIM_LIMIT:
        raise ValueError(
            f"brute-force enumeration is capped at dimension {BRUTE_DIM_LIMIT}, "
            f"got {d}")
    found = kernels.brute_rays(hrep.rows, d)
    tight = [hrep.tight_rows(vec) for vec in found]
    return VRep(hrep, tuple(found), tuple(tight))


def uniform_ray_indices(vrep: VRep) -> dict[int, int]:
    """Map ray index -> rank k for the rays that are uniform matroids."""
    structure = vrep.structure
    n = structure.degree
    lookup = {}
    for k in range(1, n + 1):
        lookup[primitive(OrbitVector.from_rank(uniform(k, n), structure).coords)] = k
    return {i: lookup[r.coords] for i, r in enumerate(vrep.rays)
            if r.coords in lookup}
