"""Rank functions on a small ground set and their standard operations.

A rank function stores one rational value per subset of {1..n}, indexed by
bitmask, with value 0 on the empty set. ``is_polymatroid`` checks the three
polymatroid axioms; minors (restriction, contraction), loop additions,
sums, and uniform functions are the constructions everything downstream is
built from.

Minor operations relabel the surviving ground set to 1..m preserving order
and return the relabeling alongside the result, because certificate
reporting needs to translate back to original point names.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from symcone.orbits import OrbitStructure, mask_from_points, points_from_mask


def _norm(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    if isinstance(x, Fraction) or isinstance(x, int):
        return x
    raise TypeError(f"rank values must be int or Fraction, got {type(x).__name__}")


class RankFunction:
    """Values on all 2^n subsets of {1..n}; values[mask] is h of that subset."""

    __slots__ = ("degree", "values")

    def __init__(self, degree: int, values: Sequence):
        vals = tuple(_norm(v) for v in values)
        if len(vals) != (1 << degree):
            raise ValueError(f"need {1 << degree} values, got {len(vals)}")
        if vals[0] != 0:
            raise ValueError("empty set must have rank 0")
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "values", vals)

    def __setattr__(self, name, value):
        raise AttributeError("RankFunction is immutable")

    def __getitem__(self, mask: int):
        return self.values[mask]

    def of(self, points) -> Fraction | int:
        return self.values[mask_from_points(points)]

    def __eq__(self, other) -> bool:
        return (isinstance(other, RankFunction)
                and self.degree == other.degree and self.values == other.values)

    def __hash__(self) -> int:
        return hash((self.degree, self.values))

    def __add__(self, other: "RankFunction") -> "RankFunction":
        if not isinstance(other, RankFunction):
            return NotImplemented
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        return RankFunction(self.degree,
                            [a + b for a, b in zip(self.values, other.values)])

    def __rmul__(self, c) -> "RankFunction":
        return RankFunction(self.degree, [c * v for v in self.values])

    def __repr__(self) -> str:
        shown = ", ".join(str(v) for v in self.values[1:9])
        return f"<RankFunction deg={self.degree} [{shown}...]>"

    def is_integer_valued(self) -> bool:
        return all(isinstance(v, int) for v in self.values)

    def is_matroid(self) -> bool:
        """Integer polymatroid with unit increments and unit singletons."""
        ok, _ = is_polymatroid(self)
        if not ok or not self.is_integer_valued():
            return False
        n = self.degree
        for mask in range(1 << n):
            for i in range(n):
                if mask & (1 << i):
                    continue
                step = self.values[mask | (1 << i)] - self.values[mask]
                if step not in (0, 1):
                    return False
        return True


def _set_str(mask: int) -> str:
    return "{" + ",".join(map(str, points_from_mask(mask))) + "}"


def is_polymatroid(h: RankFunction) -> tuple[bool, str | None]:
    """Check nonnegativity, monotonicity, and submodularity.

    Monotonicity and submodularity are checked in their local forms (adding
    one point, resp. the two-point exchange), which is equivalent to the
    set-pair forms. Returns (True, None) or (False, description of the
    first violated instance).
    """
    n = h.degree
    vals = h.values
    for mask in range(1, 1 << n):
        if vals[mask] < 0:
            return False, f"negativity: h({_set_str(mask)}) < 0"
    for mask in range(1 << n):
        for i in range(n):
            bi = 1 << i
            if mask & bi:
                continue
            if vals[mask | bi] < vals[mask]:
                return False, (f"monotonicity: h({_set_str(mask | bi)}) < "
                               f"h({_set_str(mask)})")
    for mask in range(1 << n):
        for i in range(n):
            bi = 1 << i
            if mask & bi:
                continue
            for j in range(i + 1, n):
                bj = 1 << j
                if mask & bj:
                    continue
                if (vals[mask | bi] + vals[mask | bj]
                        < vals[mask] + vals[mask | bi | bj]):
                    return False, (
                        f"submodularity: h({_set_str(mask | bi)}) + "
                        f"h({_set_str(mask | bj)}) < h({_set_str(mask)}) + "
                        f"h({_set_str(mask | bi | bj)})")
    return True, None


def expand(structure: OrbitStructure, coords: Sequence) -> RankFunction:
    """Orbit vector -> full rank function (constant on each orbit)."""
    if len(coords) != len(structure.orbits):
        raise ValueError(f"need {len(structure.orbits)} coordinates, "
                         f"got {len(coords)}")
    n = structure.degree
    vals = [0] * (1 << n)
    for mask in range(1, 1 << n):
        vals[mask] = coords[structure.orbit_index[mask]]
    return RankFunction(n, vals)


def orbit_coords(h: RankFunction, structure: OrbitStructure) -> tuple:
    """Full rank function -> orbit vector; errors when h is not constant on
    some orbit (i.e. not actually symmetric under the group)."""
    if h.degree != structure.degree:
        raise ValueError("degree mismatch")
    out = []
    for orb, label in zip(structure.orbits, structure.labels):
        v = h.values[orb[0]]
        for m in orb[1:]:
            if h.values[m] != v:
                raise ValueError(
                    f"not orbit-constant: h differs on the orbit of "
                    f"{{{','.join(map(str, label))}}}")
        out.append(v)
    return tuple(out)


def _relabel(points: Sequence[int]) -> dict[int, int]:
    """Order-preserving map from the given points onto 1..len(points)."""
    return {p: i + 1 for i, p in enumerate(sorted(points))}


def restrict(h: RankFunction, keep: Sequence[int]) -> tuple[RankFunction, dict[int, int]]:
    """Minor on the given points: h'(A) = h(A). Returns (minor, relabeling)."""
    keep = sorted(set(keep))
    if any(not 1 <= p <= h.degree for p in keep):
        raise ValueError(f"points {keep} outside ground set 1..{h.degree}")
    rel = _relabel(keep)
    m = len(keep)
    vals = [0] * (1 << m)
    for sub in range(1 << m):
        orig = 0
        for i, p in enumerate(keep):
            if sub & (1 << i):
                orig |= 1 << (p - 1)
        vals[sub] = h.values[orig]
    return RankFunction(m, vals), rel


def contract(h: RankFunction, away: Sequence[int]) -> tuple[RankFunction, dict[int, int]]:
    """Minor contracting the given points: h'(A) = h(A + away) - h(away),
    on the remaining points relabeled in order. Returns (minor, relabeling)."""
    away = sorted(set(away))
    if any(not 1 <= p <= h.degree for p in away):
        raise ValueError(f"points {away} outside ground set 1..{h.degree}")
    amask = mask_from_points(away)
    base = h.values[amask]
    keep = [p for p in range(1, h.degree + 1) if p not in away]
    rel = _relabel(keep)
    m = len(keep)
    vals = [0] * (1 << m)
    for sub in range(1 << m):
        orig = amask
        for i, p in enumerate(keep):
            if sub & (1 << i):
                orig |= 1 << (p - 1)
        vals[sub] = h.values[orig] - base
    return RankFunction(m, vals), rel


def dual(h: RankFunction) -> RankFunction:
    """Convolution dual: h*(A) = sum of h({i}) over A, plus h(E - A) - h(E).

    Extends matroid duality to polymatroids; the dual of the uniform
    rank-k function on n points is the uniform rank n-k one (k >= 1).
    """
    n = h.degree
    full = (1 << n) - 1
    singles = [h.values[1 << i] for i in range(n)]
    vals = [0] * (1 << n)
    for mask in range(1 << n):
        s = sum(singles[i] for i in range(n) if mask >> i & 1)
        vals[mask] = s + h.values[full ^ mask] - h.values[full]
    return RankFunction(n, vals)


def add_loops(h: RankFunction, degree: int,
              carrier: Sequence[int] | None = None) -> RankFunction:
    """Lift to a larger ground set; new points contribute nothing.

    ``carrier`` lists where the original points go (order-preserving,
    default 1..h.degree): the lifted function is h'(A) = h(A intersected
    with the carrier, pulled back).
    """
    if carrier is None:
        carrier = list(range(1, h.degree + 1))
    carrier = list(carrier)
    if len(carrier) != h.degree:
        raise ValueError("carrier must list one target point per original point")
    if carrier != sorted(set(carrier)):
        raise ValueError("carrier must be strictly increasing")
    if any(not 1 <= p <= degree for p in carrier):
        raise ValueError(f"carrier {carrier} outside 1..{degree}")
    vals = [0] * (1 << degree)
    for mask in range(1 << degree):
        sub = 0
        for i, p in enumerate(carrier):
            if mask & (1 << (p - 1)):
                sub |= 1 << i
        vals[mask] = h.values[sub]
    return RankFunction(degree, vals)


def uniform(rank: int, degree: int) -> RankFunction:
    """The uniform function min(|A|, rank); a matroid when 0<=rank<=degree."""
    if rank < 0:
        raise ValueError("rank must be nonnegative")
    return RankFunction(degree,
                        [min(m.bit_count(), rank) for m in range(1 << degree)])


Case = tuple[Callable[[frozenset], bool], object]


def from_cases(degree: int, cases: Sequence[Case]) -> RankFunction:
    """Piecewise definition: first matching predicate wins; every nonempty
    subset must match some case."""
    vals = [0] * (1 << degree)
    for mask in range(1, 1 << degree):
        pts = frozenset(points_from_mask(mask))
        for pred, value in cases:
            if pred(pts):
                vals[mask] = value
                break
        else:
            raise ValueError(f"no case covers {_set_str(mask)}")
    return RankFunction(degree, vals)
