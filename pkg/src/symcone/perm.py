"""Permutations, permutation groups, and subgroup-class enumeration.

Permutations carry 1-based image tuples in the public API. Internally every
hot loop works on ``bytes`` tables of 0-based images, because composing two
such tables is a single ``bytes.translate`` call and runs at C speed.

Composition convention: ``compose(p, q)`` applies ``q`` first, so
``compose(p, q)(i) == p(q(i))``.
"""

from __future__ import annotations

import itertools
import re
import time
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence


@lru_cache(maxsize=32)
def _pad_suffix(n: int) -> bytes:
    return bytes(range(n, 256))


def _pad(tbl: bytes) -> bytes:
    """Extend an n-byte image table to the 256 bytes ``translate`` wants."""
    return tbl + _pad_suffix(len(tbl))


class Permutation:
    """A permutation of {1, ..., n}, stored as its tuple of images.

    ``images[i-1]`` is the image of point ``i``. Instances are immutable
    and hashable.
    """

    __slots__ = ("images", "_tbl")

    def __init__(self, images: Sequence[int]):
        imgs = tuple(images)
        n = len(imgs)
        if sorted(imgs) != list(range(1, n + 1)):
            raise ValueError(f"not a permutation of 1..{n}: {imgs!r}")
        object.__setattr__(self, "images", imgs)
        object.__setattr__(self, "_tbl", bytes(i - 1 for i in imgs))

    def __setattr__(self, name, value):
        raise AttributeError("Permutation is immutable")

    @classmethod
    def from_tbl(cls, tbl: bytes) -> "Permutation":
        """Build from a 0-based image table (the internal representation)."""
        p = object.__new__(cls)
        object.__setattr__(p, "images", tuple(b + 1 for b in tbl))
        object.__setattr__(p, "_tbl", bytes(tbl))
        return p

    @property
    def degree(self) -> int:
        return len(self.images)

    @property
    def tbl(self) -> bytes:
        """0-based image table (n bytes; pad before use as a translate arg)."""
        return self._tbl

    def __call__(self, point: int) -> int:
        return self.images[point - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def inverse(self) -> "Permutation":
        return Permutation.from_tbl(_inv_tbl(self._tbl))

    def is_identity(self) -> bool:
        return all(v == i + 1 for i, v in enumerate(self.images))

    def cycles(self) -> tuple[tuple[int, ...], ...]:
        """Disjoint cycles of length >= 2, each starting at its least point."""
        seen = [False] * self.degree
        out = []
        for start in range(1, self.degree + 1):
            if seen[start - 1]:
                continue
            cyc = [start]
            seen[start - 1] = True
            nxt = self(start)
            while nxt != start:
                cyc.append(nxt)
                seen[nxt - 1] = True
                nxt = self(nxt)
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return tuple(out)

    def cycle_type(self) -> tuple[int, ...]:
        """Cycle lengths including fixed points, sorted descending."""
        return _cycle_type_tbl(self._tbl)

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __str__(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycs)

    def __repr__(self) -> str:
        return f"Permutation({list(self.images)})"


def identity(degree: int) -> Permutation:
    return Permutation(range(1, degree + 1))


def compose(p: Permutation, q: Permutation) -> Permutation:
    """p after q: the result maps i to p(q(i))."""
    if p.degree != q.degree:
        raise ValueError(f"degree mismatch: {p.degree} vs {q.degree}")
    return Permutation.from_tbl(q.tbl.translate(_pad(p.tbl)))


def _inv_tbl(tbl: bytes) -> bytes:
    out = bytearray(len(tbl))
    for i, v in enumerate(tbl):
        out[v] = i
    return bytes(out)


def _conj_tbl(sigma: bytes, g: bytes, sigma_inv: bytes) -> bytes:
    # sigma o g o sigma^{-1}
    return sigma_inv.translate(_pad(g)).translate(_pad(sigma))


def _cycle_type_tbl(tbl: bytes) -> tuple[int, ...]:
    n = len(tbl)
    seen = [False] * n
    lengths = []
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            length += 1
            j = tbl[j]
        lengths.append(length)
    lengths.sort(reverse=True)
    return tuple(lengths)


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_perm(text: str, degree: int) -> Permutation:
    """Parse cycle notation like ``(123)(456)``, ``(1 2 3)`` or ``(1,2,3)``.

    A cycle body with no separators is read digit by digit (points must then
    be single digits, which covers every degree this package supports). The
    identity is written ``()``. Raises ValueError on a repeated point, a
    point outside 1..degree, or malformed parentheses.
    """
    if not 1 <= degree <= 9:
        raise ValueError(f"degree out of supported range 1..9: {degree}")
    s = text.strip()
    if not s:
        raise ValueError("empty permutation string")
    # Everything outside the parenthesized cycles must be whitespace.
    leftover = _CYCLE_RE.sub("", s).strip()
    if leftover:
        raise ValueError(f"malformed permutation {text!r}: stray {leftover!r}")
    if s.count("(") != s.count(")") or s.count("(") != len(_CYCLE_RE.findall(s)):
        raise ValueError(f"malformed permutation {text!r}: unbalanced parentheses")

    images = list(range(1, degree + 1))
    used: set[int] = set()
    for body in _CYCLE_RE.findall(s):
        body = body.strip()
        if not body:
            continue  # "()" inside a product is a harmless no-op
        if "," in body or " " in body:
            tokens = [t for t in re.split(r"[,\s]+", body) if t]
        else:
            tokens = list(body)
        pts = []
        for t in tokens:
            if not t.isdigit():
                raise ValueError(f"malformed cycle ({body}) in {text!r}")
            pts.append(int(t))
        for pt in pts:
            if not 1 <= pt <= degree:
                raise ValueError(f"point {pt} out of range 1..{degree} in {text!r}")
            if pt in used:
                raise ValueError(f"point {pt} repeated in {text!r}")
            used.add(pt)
        for a, b in zip(pts, pts[1:] + pts[:1]):
            images[a - 1] = b
    return Permutation(images)


def parse_gens(text: str, degree: int) -> tuple[Permutation, ...]:
    """Split a generator list on commas at parenthesis depth 0 and parse each."""
    parts: list[str] = []
    depth = 0
    cur = []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return tuple(parse_perm(p, degree) for p in parts if p.strip())


@lru_cache(maxsize=None)
def all_perm_tbls(degree: int) -> tuple[bytes, ...]:
    """All degree! permutation tables, in lexicographic order."""
    return tuple(bytes(p) for p in itertools.permutations(range(degree)))


def _closure_tbls(gen_tbls: Iterable[bytes], degree: int) -> set[bytes]:
    """Elements of the generated group, as 0-based tables."""
    ident = bytes(range(degree))
    gens = [g for g in gen_tbls if g != ident]
    elems = {ident}
    elems.update(gens)
    padded = [_pad(g) for g in gens]
    frontier = list(elems)
    while frontier:
        nxt = []
        for f in frontier:
            for g in padded:
                h = f.translate(g)  # g after f
                if h not in elems:
                    elems.add(h)
                    nxt.append(h)
        frontier = nxt
    return elems


def group_closure(gens: Iterable[Permutation], degree: int | None = None) -> frozenset[Permutation]:
    """The set of all elements of the group generated by ``gens``."""
    gens = list(gens)
    if degree is None:
        if not gens:
            raise ValueError("degree required for an empty generating set")
        degree = gens[0].degree
    if any(g.degree != degree for g in gens):
        raise ValueError("generators of mixed degree")
    tbls = _closure_tbls([g.tbl for g in gens], degree)
    return frozenset(Permutation.from_tbl(t) for t in tbls)


class PermGroup:
    """A permutation group of fixed degree, given by generators.

    The element set is computed on first use and cached; the group is
    hashable and compares equal by (degree, element set).
    """

    __slots__ = ("degree", "generators", "_elems", "name")

    def __init__(self, generators: Iterable[Permutation], degree: int | None = None,
                 name: str | None = None):
        gens = tuple(generators)
        if degree is None:
            if not gens:
                raise ValueError("degree required for an empty generating set")
            degree = gens[0].degree
        if any(g.degree != degree for g in gens):
            raise ValueError("generators of mixed degree")
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "_elems", None)
        object.__setattr__(self, "name", name)

    def __setattr__(self, name, value):
        raise AttributeError("PermGroup is immutable")

    @classmethod
    def from_gen_strings(cls, gens: Sequence[str], degree: int,
                         name: str | None = None) -> "PermGroup":
        return cls([parse_perm(g, degree) for g in gens], degree, name=name)

    @classmethod
    def _from_tbls(cls, gen_tbls: Sequence[bytes], elem_tbls: frozenset[bytes],
                   degree: int, name: str | None = None) -> "PermGroup":
        g = cls([Permutation.from_tbl(t) for t in gen_tbls], degree, name=name)
        object.__setattr__(g, "_elems", frozenset(elem_tbls))
        return g

    def element_tbls(self) -> frozenset[bytes]:
        if self._elems is None:
            tbls = _closure_tbls([g.tbl for g in self.generators], self.degree)
            object.__setattr__(self, "_elems", frozenset(tbls))
        return self._elems

    def elements(self) -> frozenset[Permutation]:
        return frozenset(Permutation.from_tbl(t) for t in self.element_tbls())

    def order(self) -> int:
        return len(self.element_tbls())

    def __contains__(self, p: Permutation) -> bool:
        return p.tbl in self.element_tbls()

    def __eq__(self, other) -> bool:
        return (isinstance(other, PermGroup) and self.degree == other.degree
                and self.element_tbls() == other.element_tbls())

    def __hash__(self) -> int:
        return hash((self.degree, self.element_tbls()))

    def __repr__(self) -> str:
        label = self.name or ", ".join(str(g) for g in self.generators) or "()"
        return f"<PermGroup deg={self.degree} order={self.order()} gens=[{label}]>"

    def conjugate(self, sigma: Permutation) -> "PermGroup":
        """The group sigma * self * sigma^{-1}."""
        si = _inv_tbl(sigma.tbl)
        gens = [Permutation.from_tbl(_conj_tbl(sigma.tbl, g.tbl, si))
                for g in self.generators]
        return PermGroup(gens, self.degree)

    def cycle_type_counter(self) -> Counter:
        return Counter(_cycle_type_tbl(t) for t in self.element_tbls())

    def point_orbits(self) -> tuple[tuple[int, ...], ...]:
        """Orbits of the natural action on points, each sorted, ordered by min."""
        n = self.degree
        seen = [False] * n
        orbits = []
        gens = [g.tbl for g in self.generators]
        for start in range(n):
            if seen[start]:
                continue
            orb = {start}
            queue = [start]
            seen[start] = True
            while queue:
                x = queue.pop()
                for g in gens:
                    y = g[x]
                    if not seen[y]:
                        seen[y] = True
                        orb.add(y)
                        queue.append(y)
            orbits.append(tuple(sorted(p + 1 for p in orb)))
        return tuple(orbits)

    def restrict(self, points: Sequence[int]) -> "PermGroup":
        """Image of the restriction to an invariant point set, relabeled.

        ``points`` must be setwise invariant; they are relabeled to
        1..len(points) preserving order. The result is the image group (the
        restriction map need not be injective).
        """
        pts = sorted(points)
        pos = {p: i + 1 for i, p in enumerate(pts)}
        gens = []
        for g in self.generators:
            if any((g(p) in pos) != (p in pos) for p in pts):
                raise ValueError(f"point set {pts} not invariant under {g}")
            gens.append(Permutation([pos[g(p)] for p in pts]))
        return PermGroup(gens, len(pts))


def are_conjugate(g1: PermGroup, g2: PermGroup) -> Permutation | None:
    """A witness sigma with sigma * g1 * sigma^{-1} == g2, or None.

    Prefilters by order and by the multiset of element cycle types, then
    scans candidate witnesses; checking the images of a generating set of g1
    suffices because conjugation preserves group order.
    """
    if g1.degree != g2.degree:
        return None
    e1, e2 = g1.element_tbls(), g2.element_tbls()
    if len(e1) != len(e2):
        return None
    if e1 == e2:
        return identity(g1.degree)
    if g1.cycle_type_counter() != g2.cycle_type_counter():
        return None
    gen_tbls = [g.tbl for g in g1.generators if not g.is_identity()]
    if not gen_tbls:  # trivial group, e1 == e2 would have caught it
        return None
    for sigma in all_perm_tbls(g1.degree):
        si = _inv_tbl(sigma)
        if all(_conj_tbl(sigma, g, si) in e2 for g in gen_tbls):
            return Permutation.from_tbl(sigma)
    return None


@dataclass
class SubgroupEnumeration:
    """Result of conjugacy-class enumeration; ``complete`` is False when the
    time budget ran out and ``representatives`` is only a partial list."""
    degree: int
    representatives: list[PermGroup]
    complete: bool = True


@dataclass
class _ClassRec:
    elems: frozenset[bytes]
    gen_tbls: tuple[bytes, ...]
    invariant: tuple = field(default=())


def _group_invariant(elems: frozenset[bytes]) -> tuple:
    counts = Counter(_cycle_type_tbl(t) for t in elems)
    return (len(elems), tuple(sorted(counts.items())))


def _conjugacy_witness_tbl(rec_a: _ClassRec, elems_b: frozenset[bytes],
                           degree: int) -> bytes | None:
    ident = bytes(range(degree))
    gens = [g for g in rec_a.gen_tbls if g != ident]
    if not gens:
        return ident if rec_a.elems == elems_b else None
    for sigma in all_perm_tbls(degree):
        si = _inv_tbl(sigma)
        if all(_conj_tbl(sigma, g, si) in elems_b for g in gens):
            return sigma
    return None


def enumerate_subgroup_classes(degree: int,
                               time_budget: float | None = None) -> SubgroupEnumeration:
    """Conjugacy classes of subgroups of the symmetric group of ``degree``.

    Breadth-first: seed with every cyclic subgroup, then repeatedly extend
    each class representative H by one element g outside H and classify the
    closure. Extension candidates are pruned to one representative per
    H-conjugation orbit (conjugating the new generator by an element of H
    yields a conjugate subgroup). Deduplication is exact-element-set first,
    then conjugacy with an (order, cycle-type multiset) prefilter.

    With a ``time_budget`` (seconds) the search may stop early and returns
    the partial list flagged incomplete.
    """
    if degree < 1:
        raise ValueError("degree must be positive")
    start = time.monotonic()

    def out_of_time() -> bool:
        return time_budget is not None and time.monotonic() - start > time_budget

    ident = bytes(range(degree))
    everything = all_perm_tbls(degree)

    classes: list[_ClassRec] = []
    by_invariant: dict[tuple, list[int]] = {}
    seen_sets: set[frozenset[bytes]] = set()

    def register(elems: frozenset[bytes], gen_tbls: tuple[bytes, ...]) -> bool:
        """Record a subgroup; returns True when it starts a new class."""
        if elems in seen_sets:
            return False
        seen_sets.add(elems)
        inv = _group_invariant(elems)
        for idx in by_invariant.get(inv, ()):
            if _conjugacy_witness_tbl(classes[idx], elems, degree) is not None:
                return False
        classes.append(_ClassRec(elems, gen_tbls, inv))
        by_invariant.setdefault(inv, []).append(len(classes) - 1)
        return True

    # Seed: the trivial group and every cyclic subgroup.
    register(frozenset([ident]), ())
    for g in everything:
        if g == ident:
            continue
        elems = frozenset(_closure_tbls([g], degree))
        register(elems, (g,))
        if out_of_time():
            reps = [PermGroup._from_tbls(r.gen_tbls, r.elems, degree)
                    for r in classes]
            return SubgroupEnumeration(degree, reps, complete=False)

    queue = deque(range(len(classes)))
    complete = True
    while queue:
        if out_of_time():
            complete = False
            break
        idx = queue.popleft()
        rec = classes[idx]
        helems = rec.elems
        conj_pairs = [(_inv_tbl(h), _pad(h)) for h in helems]
        visited: set[bytes] = set()
        for g in everything:
            if g in helems or g in visited:
                continue
            # one closure per H-conjugation orbit of candidates
            gp = _pad(g)
            orbit = {hi.translate(gp).translate(hp) for hi, hp in conj_pairs}
            visited.update(orbit)
            gen_tbls = rec.gen_tbls + (g,)
            elems = frozenset(_closure_tbls(gen_tbls, degree))
            if register(elems, gen_tbls):
                queue.append(len(classes) - 1)
            if out_of_time():
                complete = False
                queue.clear()
                break

    reps = [PermGroup._from_tbls(r.gen_tbls, r.elems, degree) for r in classes]
    reps.sort(key=lambda g: (g.order(), sorted(t for t in g.element_tbls())))
    return SubgroupEnumeration(degree, reps, complete)
