"""H-representation of the symmetric Shannon cone of a permutation group.

The Shannon (polymatroidal) cone on n points is cut out by the elemental
inequalities.  Intersecting with the fixed space of a group G collapses
coordinates to one value per subset orbit, and each elemental inequality
collapses to an integer row over those orbit coordinates.  This module
builds that orbit-coordinate H-representation.

Coordinate conventions:
  * full space: 2^n - 1 coordinates, one per nonempty subset of {1..n},
    coordinate index = bitmask - 1.
  * orbit space: one coordinate per orbit, in the canonical orbit order
    of OrbitStructure (ascending cardinality, then lex least member).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from symcone.orbits import OrbitStructure
from symcone.polymatroid import RankFunction, expand, orbit_coords

__all__ = [
    "primitive",
    "OrbitVector",
    "HRep",
    "elemental_inequalities",
    "symmetrize",
    "build_hrep",
]


def primitive(vec: Sequence) -> tuple[int, ...]:
    """Smallest nonnegative integer multiple of a rational vector.

    Scales by the lcm of denominators, then divides out the gcd.  The
    direction is preserved (no sign flip); the zero vector maps to itself.
    """
    den = 1
    for x in vec:
        if isinstance(x, Fraction):
            den = lcm(den, x.denominator)
    ints = [int(x * den) if isinstance(x, Fraction) else int(x) * den for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g <= 1:
        return tuple(ints)
    return tuple(x // g for x in ints)


@dataclass(frozen=True)
class OrbitVector:
    """A point of the orbit coordinate space: one rational per orbit.

    The value on the empty set is 0 by convention and never stored.
    """

    structure: OrbitStructure
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))
        if len(self.coords) != len(self.structure):
            raise ValueError(
                f"need {len(self.structure)} coordinates, got {len(self.coords)}")

    @classmethod
    def from_rank(cls, h: RankFunction, structure: OrbitStructure) -> "OrbitVector":
        """Read the orbit coordinates off a symmetric rank function."""
        return cls(structure, orbit_coords(h, structure))

    def to_rank(self) -> RankFunction:
        """Expand back to a full rank function, constant on each orbit."""
        return expand(self.structure, self.coords)

    def dot(self, row: Sequence) -> Fraction | int:
        assert len(row) == len(self.coords)
        return sum(a * s for a, s in zip(row, self.coords))

    def as_primitive(self) -> "OrbitVector":
        return OrbitVector(self.structure, primitive(self.coords))


@dataclass(frozen=True)
class HRep:
    """Finitely many homogeneous inequalities a . s >= 0 in orbit space.

    Rows are primitive integer vectors, pairwise distinct, no zero row,
    sorted lexicographically.
    """

    structure: OrbitStructure
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(a) for a in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        dim = len(self.structure)
        seen = set()
        for r in rows:
            if len(r) != dim:
                raise ValueError(f"row {r} has length {len(r)}, expected {dim}")
            if not any(r):
                raise ValueError("zero row in H-representation")
            if primitive(r) != r:
                raise ValueError(f"row {r} is not primitive")
            if r in seen:
                raise ValueError(f"duplicate row {r}")
            seen.add(r)
        if list(rows) != sorted(rows):
            raise ValueError("rows are not in lexicographic order")

    @property
    def dim(self) -> int:
        return len(self.structure)

    def slacks(self, coords: Sequence) -> tuple:
        """Value of every row at the given orbit-space point."""
        if len(coords) != self.dim:
            raise ValueError(f"need {self.dim} coordinates, got {len(coords)}")
        return tuple(sum(a * s for a, s in zip(r, coords)) for r in self.rows)

    def contains(self, coords: Sequence) -> bool:
        """True when the point satisfies every inequality."""
        return all(v >= 0 for v in self.slacks(coords))

    def tight_rows(self, coords: Sequence) -> frozenset:
        """Indices of the rows satisfied with equality."""
        return frozenset(i for i, v in enumerate(self.slacks(coords)) if v == 0)

    def as_dict(self) -> dict:
        """JSON-friendly form with orbit labels as the column header."""
        return {
            "degree": self.structure.degree,
            "columns": list(self.structure.label_strings()),
            "rows": [list(r) for r in self.rows],
        }


def elemental_inequalities(n: int) -> list[tuple[int, ...]]:
    """Coefficient vectors of the elemental polymatroid inequalities.

    Two families over the full coordinate space (index = bitmask - 1):

      * h(N) - h(N \\ {i}) >= 0                      for each point i;
      * h(iK) + h(jK) - h(K) - h(ijK) >= 0           for i < j and every
        K contained in N \\ {i, j}; when K is empty the h(K) term is
        absent since h of the empty set is 0.

    The order is deterministic: family one by ascending i, then family two
    by ascending (i, j, K-mask).  Together they cut out exactly the cone
    of polymatroid rank functions.
    """
    if not 1 <= n <= 7:
        raise ValueError(f"degree must be between 1 and 7, got {n}")
    full = (1 << n) - 1
    out: list[tuple[int, ...]] = []
    for i in range(1, n + 1):
        row = [0] * full
        row[full - 1] += 1
        rest = full & ~(1 << (i - 1))
        if rest:
            row[rest - 1] -= 1
        out.append(tuple(row))
    for i in range(1, n + 1):
        bi = 1 << (i - 1)
        for j in range(i + 1, n + 1):
            bj = 1 << (j - 1)
            others = full & ~(bi | bj)
            k = 0
            while True:
                row = [0] * full
                row[(k | bi) - 1] += 1
                row[(k | bj) - 1] += 1
                row[(k | bi | bj) - 1] -= 1
                if k:
                    row[k - 1] -= 1
                out.append(tuple(row))
                if k == others:
                    break
                k = (k - others) & others  # next submask of `others`
    return out


def symmetrize(ineq: Sequence[int], structure: OrbitStructure) -> tuple[int, ...]:
    """Collapse a full-space inequality to orbit coordinates.

    On the fixed space of the group, coordinates within an orbit share one
    value, so the orbit coefficient is the sum of the member coefficients.
    The result is reduced to primitive form; a zero vector stays zero.
    """
    full = (1 << structure.degree) - 1
    if len(ineq) != full:
        raise ValueError(
            f"inequality has {len(ineq)} coordinates, expected {full}")
    sums = [0] * len(structure)
    for mask in range(1, full + 1):
        c = ineq[mask - 1]
        if c:
            sums[structure.orbit_index[mask]] += c
    return primitive(sums)


def build_hrep(structure: OrbitStructure) -> HRep:
    """The symmetric Shannon cone of an orbit structure, as an HRep.

    Symmetrizes every elemental inequality of the structure's degree and
    deduplicates identical primitive rows.  Row order is lexicographic.
    """
    rows = set()
    for e in elemental_inequalities(structure.degree):
        r = symmetrize(e, structure)
        assert any(r), "an elemental inequality symmetrized to zero"
        rows.add(r)
    return HRep(structure, tuple(sorted(rows)))
