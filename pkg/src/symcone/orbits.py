"""Orbit structures of a permutation group on the subset lattice.

A group G of degree n acts on subsets of {1..n} by sigma(A) = {sigma(i)}.
The induced partition of the nonempty subsets is the group's orbit
structure; it is all the cone machinery ever needs (two groups with the
same structure have the same symmetric Shannon cone).

Subsets are bitmasks throughout: bit i-1 set means point i is in the set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from symcone.perm import PermGroup, Permutation, all_perm_tbls


def mask_from_points(points: Iterable[int]) -> int:
    m = 0
    for p in points:
        m |= 1 << (p - 1)
    return m


def points_from_mask(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def apply_tbl_to_mask(tbl: bytes, mask: int) -> int:
    """Image of a subset bitmask under a 0-based permutation table."""
    out = 0
    i = 0
    while mask:
        if mask & 1:
            out |= 1 << tbl[i]
        mask >>= 1
        i += 1
    return out


@dataclass(frozen=True)
class SubsetMask:
    """A subset of {1..n} as a bitmask, with its ambient degree."""
    n: int
    bits: int

    def __post_init__(self):
        if not 0 <= self.bits < (1 << self.n):
            raise ValueError(f"mask {self.bits:#x} out of range for degree {self.n}")

    @classmethod
    def of(cls, n: int, points: Iterable[int]) -> "SubsetMask":
        return cls(n, mask_from_points(points))

    def points(self) -> tuple[int, ...]:
        return points_from_mask(self.bits)

    def card(self) -> int:
        return self.bits.bit_count()

    def apply(self, p: Permutation) -> "SubsetMask":
        return SubsetMask(self.n, apply_tbl_to_mask(p.tbl, self.bits))


class OrbitStructure:
    """The orbit partition of the nonempty subsets of {1..n}.

    Orbits are sorted tuples of masks; their order is canonical: ascending
    by (cardinality, lexicographically least member as a point tuple). The
    label of an orbit is that least member.
    """

    __slots__ = ("degree", "orbits", "labels", "orbit_index", "_profile")

    def __init__(self, degree: int, orbits: Sequence[Sequence[int]]):
        full = 1 << degree
        canon = []
        for orb in orbits:
            members = tuple(sorted(orb))
            canon.append(members)
        canon.sort(key=lambda o: (o[0].bit_count(),
                                  min(points_from_mask(m) for m in o)))
        seen = [False] * full
        for orb in canon:
            for m in orb:
                if not 0 < m < full:
                    raise ValueError(f"mask {m} out of range")
                if seen[m]:
                    raise ValueError(f"mask {m} in two orbits")
                seen[m] = True
        if not all(seen[1:]):
            raise ValueError("orbits do not cover all nonempty subsets")

        index = [-1] * full
        labels = []
        for i, orb in enumerate(canon):
            labels.append(min(points_from_mask(m) for m in orb))
            for m in orb:
                index[m] = i
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "orbits", tuple(canon))
        object.__setattr__(self, "labels", tuple(labels))
        object.__setattr__(self, "orbit_index", tuple(index))
        object.__setattr__(self, "_profile", None)

    def __setattr__(self, name, value):
        raise AttributeError("OrbitStructure is immutable")

    def __len__(self) -> int:
        return len(self.orbits)

    def orbit_of(self, mask: int) -> int:
        """Index of the orbit containing a nonempty subset mask."""
        i = self.orbit_index[mask]
        if i < 0:
            raise ValueError(f"mask {mask} has no orbit (empty set?)")
        return i

    def label_strings(self) -> tuple[str, ...]:
        return tuple("".join(map(str, lab)) for lab in self.labels)

    def profile(self) -> tuple[tuple[int, int], ...]:
        """Sorted multiset of (member cardinality, orbit size); an
        isomorphism invariant."""
        if self._profile is None:
            prof = tuple(sorted((o[0].bit_count(), len(o)) for o in self.orbits))
            object.__setattr__(self, "_profile", prof)
        return self._profile

    def order_relation(self) -> tuple[tuple[int, int], ...]:
        """Pairs (i, j), i != j, where some member of orbit i is a subset of
        some member of orbit j. Transitive because orbits are G-closed."""
        rel = []
        for i, oi in enumerate(self.orbits):
            for j, oj in enumerate(self.orbits):
                if i == j:
                    continue
                if any((a & b) == a for a in oi for b in oj):
                    rel.append((i, j))
        return tuple(rel)

    def __eq__(self, other) -> bool:
        return (isinstance(other, OrbitStructure)
                and self.degree == other.degree and self.orbits == other.orbits)

    def __hash__(self) -> int:
        return hash((self.degree, self.orbits))

    def __repr__(self) -> str:
        return (f"<OrbitStructure deg={self.degree} "
                f"orbits={len(self.orbits)} labels={self.label_strings()}>")


def orbit_structure(group: PermGroup) -> OrbitStructure:
    """Orbits of the group on the nonempty subsets of its ground set."""
    n = group.degree
    full = 1 << n
    gens = [g.tbl for g in group.generators]
    index = [-1] * full
    orbits = []
    for start in range(1, full):
        if index[start] >= 0:
            continue
        orb = {start}
        queue = [start]
        index[start] = len(orbits)
        while queue:
            m = queue.pop()
            for g in gens:
                im = apply_tbl_to_mask(g, m)
                if index[im] < 0:
                    index[im] = len(orbits)
                    orb.add(im)
                    queue.append(im)
        orbits.append(sorted(orb))
    return OrbitStructure(n, orbits)


def _masks_by_top_bit(n: int) -> list[list[int]]:
    """For k in 1..n, the masks whose highest set bit is k-1 (support in 1..k)."""
    buckets: list[list[int]] = [[] for _ in range(n + 1)]
    for m in range(1, 1 << n):
        buckets[m.bit_length()].append(m)
    return buckets


def _structure_map_search(a: OrbitStructure, b: OrbitStructure,
                          onto: bool) -> bytes | None:
    """Backtracking search for sigma with sigma(a-orbits) compatible with b.

    onto=True demands sigma maps each a-orbit onto a b-orbit of the same
    size (isomorphism); onto=False only demands each a-orbit lands inside a
    single b-orbit (labeled refinement after relabeling).
    """
    n = a.degree
    if b.degree != n:
        return None
    buckets = _masks_by_top_bit(n)
    a_index, b_index = a.orbit_index, b.orbit_index
    a_sizes = [len(o) for o in a.orbits]
    b_sizes = [len(o) for o in b.orbits]

    img = [-1] * n          # 0-based point images
    used = [False] * n
    # assign[k]: orbit mapping decisions made at depth k, for undo
    fmap: dict[int, int] = {}

    def extend(depth: int) -> bytes | None:
        if depth == n:
            return bytes(img)
        k = depth  # assigning image of point k+1
        for cand in range(n):
            if used[cand]:
                continue
            img[k] = cand
            used[cand] = True
            added: list[int] = []
            ok = True
            for m in buckets[k + 1]:
                sm = apply_tbl_to_mask_partial(img, m)
                ai, bi = a_index[m], b_index[sm]
                prev = fmap.get(ai)
                if prev is None:
                    if onto and a_sizes[ai] != b_sizes[bi]:
                        ok = False
                        break
                    if not onto and a_sizes[ai] > b_sizes[bi]:
                        ok = False
                        break
                    fmap[ai] = bi
                    added.append(ai)
                elif prev != bi:
                    ok = False
                    break
            if ok:
                res = extend(depth + 1)
                if res is not None:
                    return res
            for ai in added:
                del fmap[ai]
            used[cand] = False
            img[k] = -1
        return None

    return extend(0)


def apply_tbl_to_mask_partial(img: list[int], mask: int) -> int:
    out = 0
    i = 0
    while mask:
        if mask & 1:
            out |= 1 << img[i]
        mask >>= 1
        i += 1
    return out


def structures_isomorphic(a: OrbitStructure, b: OrbitStructure) -> Permutation | None:
    """A point permutation carrying the orbits of a onto the orbits of b,
    or None. Prefilters on the (cardinality, orbit size) profile."""
    if a.degree != b.degree or a.profile() != b.profile():
        return None
    tbl = _structure_map_search(a, b, onto=True)
    return Permutation.from_tbl(tbl) if tbl is not None else None


def refines(a: OrbitStructure, b: OrbitStructure) -> bool:
    """True when every orbit of a is contained in an orbit of b (same
    labeling of the ground set; no relabeling is attempted here)."""
    if a.degree != b.degree:
        raise ValueError("degree mismatch")
    for orb in a.orbits:
        target = b.orbit_index[orb[0]]
        if any(b.orbit_index[m] != target for m in orb):
            return False
    return True


def refines_up_to_iso(a: OrbitStructure, b: OrbitStructure) -> Permutation | None:
    """A relabeling sigma such that sigma(a) refines b, or None.

    This is the order used between structure classes: finer <= coarser.
    """
    if a.degree != b.degree:
        return None
    if len(a.orbits) < len(b.orbits):
        return None
    # necessary: per cardinality, a has at least as many orbits as b
    def card_counts(s: OrbitStructure) -> dict[int, int]:
        cc: dict[int, int] = {}
        for o in s.orbits:
            c = o[0].bit_count()
            cc[c] = cc.get(c, 0) + 1
        return cc

    ca, cb = card_counts(a), card_counts(b)
    if any(ca.get(c, 0) < k for c, k in cb.items()):
        return None
    tbl = _structure_map_search(a, b, onto=False)
    return Permutation.from_tbl(tbl) if tbl is not None else None


@dataclass(frozen=True)
class StructurePoset:
    """Isomorphism classes of orbit structures, ordered by refinement.

    ``leq[i][j]`` means class i is finer than or equal to class j. ``hasse``
    holds the covering pairs (i, j) with i strictly finer than j and nothing
    in between.
    """
    degree: int
    classes: tuple[OrbitStructure, ...]
    members: tuple[tuple[str, ...], ...]
    leq: tuple[tuple[bool, ...], ...]
    hasse: tuple[tuple[int, int], ...]

    def class_of(self, s: OrbitStructure) -> int | None:
        for i, rep in enumerate(self.classes):
            if structures_isomorphic(s, rep) is not None:
                return i
        return None


def _structure_sort_key(s: OrbitStructure):
    return (len(s.orbits), s.profile(), s.labels, s.orbits)


def build_poset(groups: Sequence[PermGroup]) -> StructurePoset:
    """Bucket the groups' orbit structures into isomorphism classes and
    compute the refinement order between class representatives."""
    if not groups:
        raise ValueError("no groups given")
    degree = groups[0].degree
    if any(g.degree != degree for g in groups):
        raise ValueError("groups of mixed degree")

    structures = [orbit_structure(g) for g in groups]
    buckets: list[list[int]] = []     # indices into groups
    reps: list[OrbitStructure] = []
    for gi, s in enumerate(structures):
        for bi, rep in enumerate(reps):
            if structures_isomorphic(s, rep) is not None:
                buckets[bi].append(gi)
                break
        else:
            reps.append(s)
            buckets.append([gi])

    # canonical class order, representative = least member structure
    packed = []
    for rep, bucket in zip(reps, buckets):
        cands = sorted((structures[gi] for gi in bucket), key=_structure_sort_key)
        packed.append((cands[0], bucket))
    packed.sort(key=lambda t: _structure_sort_key(t[0]))

    def group_label(g: PermGroup) -> str:
        return g.name or " ".join(str(p) for p in g.generators) or "trivial"

    classes = tuple(p[0] for p in packed)
    members = tuple(tuple(group_label(groups[gi]) for gi in sorted(p[1]))
                    for p in packed)

    k = len(classes)
    leq = [[False] * k for _ in range(k)]
    for i in range(k):
        for j in range(k):
            if i == j:
                leq[i][j] = True
            else:
                leq[i][j] = refines_up_to_iso(classes[i], classes[j]) is not None

    hasse = []
    for i in range(k):
        for j in range(k):
            if i == j or not leq[i][j]:
                continue
            if any(leq[i][m] and leq[m][j] for m in range(k) if m != i and m != j):
                continue
            hasse.append((i, j))

    return StructurePoset(degree, classes,
                          members,
                          tuple(tuple(row) for row in leq),
                          tuple(hasse))


def hasse_dot(poset: StructurePoset,
              colors: Sequence[str] | None = None,
              extra_labels: Sequence[str] | None = None) -> str:
    """Deterministic DOT source for the Hasse diagram (finer -> coarser).

    ``colors``/``extra_labels`` are optional per-class annotations, used by
    the classification report.
    """
    lines = ["digraph structure_poset {", "  rankdir=BT;",
             "  node [shape=box, fontname=\"Helvetica\"];"]
    for i, cls in enumerate(poset.classes):
        names = ", ".join(poset.members[i]) if poset.members[i] else ""
        label = f"C{i}: {names}" if names else f"C{i}"
        label += f"\\norbits={len(cls.orbits)}"
        if extra_labels is not None and extra_labels[i]:
            label += f"\\n{extra_labels[i]}"
        attrs = [f"label=\"{label}\""]
        if colors is not None and colors[i]:
            attrs.append(f"style=filled, fillcolor=\"{colors[i]}\"")
        lines.append(f"  n{i} [{', '.join(attrs)}];")
    for i, j in poset.hasse:
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
