"""Shannon-tightness classification over the poset of orbit structures.

Every group with a given orbit structure carves the same symmetric slice
out of the polymatroid cone, so tightness (the closed entropic part fills
the whole symmetric cone) is a property of the structure class.  This
module assembles per-class verdicts from three sources and closes them
under the refinement order:

* a small knowledge base of facts consumed as axioms: degrees up to three
  are always tight; a product of full symmetric groups on a partition of
  the points (degree at least four) is tight exactly for the one-part and
  point-plus-rest partitions; cyclic and dihedral groups, plain or with
  one extra fixed point, are never tight from degree six on; and a direct
  product with a factor that is not tight is itself not tight;
* direct certification: enumerate the extreme rays of a class's cone and
  certify each one almost entropic (uniform or matrix-represented) or
  non-entropic (a four-point minor violates the Zhang-Yeung inequality);
* monotonicity along refinement: a tight class makes every coarser class
  tight, a class that is not tight makes every finer class not tight.

The end product is a report carrying the statuses, the two critical
antichains (minimal tight and maximal not-tight classes), a comparison
against the shipped reference lists, and renderings as JSON, plain text,
and DOT (green for tight, red for not tight).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from itertools import combinations

from symcone.certificates import (ALMOST_ENTROPIC, NON_ENTROPIC, RayStatus,
                                  best_evidence, certify_ray,
                                  shipped_certificates)
from symcone.orbits import (OrbitStructure, StructurePoset, build_poset,
                            hasse_dot, orbit_structure, structures_isomorphic)
from symcone.perm import PermGroup, Permutation, enumerate_subgroup_classes
from symcone.rayenum import double_description
from symcone.shannon import build_hrep

__all__ = [
    "TIGHT",
    "NOT_TIGHT",
    "UNKNOWN",
    "TightnessStatus",
    "ContradictionError",
    "ClassCertification",
    "ClassificationReport",
    "catalog_groups",
    "class_members",
    "seed_known",
    "certify_structure",
    "seed_certificates",
    "propagate",
    "critical_classes",
    "classify_degree",
]

TIGHT = "tight"
NOT_TIGHT = "not tight"
UNKNOWN = "unknown"

# Largest cone dimension (orbit count) direct certification will attempt.
# Classes above it must be settled by the knowledge base or by propagation.
MAX_CERT_DIM = 24


@dataclass(frozen=True)
class TightnessStatus:
    """Verdict for one structure class with its justification records."""

    value: str
    provenance: tuple[str, ...] = ()

    def __post_init__(self):
        if self.value not in (TIGHT, NOT_TIGHT, UNKNOWN):
            raise ValueError(f"bad status value {self.value!r}")
        if self.value != UNKNOWN and not self.provenance:
            raise ValueError(f"{self.value} verdict needs a justification")

    def as_dict(self) -> dict:
        return {"status": self.value, "provenance": list(self.provenance)}


class ContradictionError(ValueError):
    """A class was forced both tight and not tight.

    Monotonicity makes this impossible for correct inputs, so hitting it
    means a certificate or knowledge-base entry is wrong; the message
    carries both justification chains.
    """


def _assign(statuses: list, idx: int, value: str, reason: str) -> None:
    cur = statuses[idx]
    if cur.value == UNKNOWN:
        statuses[idx] = TightnessStatus(value, (reason,))
    elif cur.value == value:
        if reason not in cur.provenance:
            statuses[idx] = TightnessStatus(value, cur.provenance + (reason,))
    else:
        raise ContradictionError(
            f"class {idx} already {cur.value} via "
            f"[{'; '.join(cur.provenance)}] but now forced {value} via "
            f"[{reason}]")


# ---------------------------------------------------------------------------
# knowledge base


def _catalog() -> dict:
    path = resources.files("symcone.data").joinpath("groups.json")
    return json.loads(path.read_text())


def catalog_groups(degree: int) -> tuple[PermGroup, ...]:
    """The shipped groups of one degree, one per conjugacy class."""
    table = _catalog()["groups"].get(str(degree))
    if table is None:
        raise ValueError(f"no catalog for degree {degree}")
    return tuple(PermGroup.from_gen_strings(gens, degree, name=name)
                 for name, gens in table.items())


def _partitions(n: int) -> tuple[tuple[int, ...], ...]:
    """Integer partitions of n, parts descending."""
    if n == 0:
        return ((),)
    out = []

    def rec(rest: int, biggest: int, acc: tuple[int, ...]):
        if rest == 0:
            out.append(acc)
            return
        for part in range(min(rest, biggest), 0, -1):
            rec(rest - part, part, acc + (part,))

    rec(n, n, ())
    return tuple(out)


def _symmetric_product(n: int, parts: tuple[int, ...]) -> PermGroup:
    """Product of full symmetric groups on consecutive blocks of sizes parts."""
    gens = []
    start = 1
    for size in parts:
        if size >= 2:
            swap = list(range(1, n + 1))
            swap[start - 1], swap[start] = swap[start], swap[start - 1]
            gens.append(Permutation(swap))
        if size >= 3:
            cyc = list(range(1, n + 1))
            for k in range(size):
                cyc[start - 1 + k] = start + (k + 1) % size
            gens.append(Permutation(cyc))
        start += size
    return PermGroup(gens, n)


@lru_cache(maxsize=None)
def _young_table(n: int) -> tuple:
    """(parts, structure, verdict) for every partition of n (n >= 4 only)."""
    assert n >= 4
    rows = []
    for parts in _partitions(n):
        tight = parts == (n,) or parts == (n - 1, 1)
        st = orbit_structure(_symmetric_product(n, parts))
        rows.append((parts, st, TIGHT if tight else NOT_TIGHT))
    return tuple(rows)


@lru_cache(maxsize=None)
def _cyclic_dihedral_table(n: int) -> tuple:
    """(description, structure) for the four never-tight rotation groups."""
    assert n >= 6
    full_cycle = Permutation([i % n + 1 for i in range(1, n + 1)])
    reflection = Permutation([1] + list(range(n, 1, -1)))
    sub_cycle = Permutation([1] + [(i - 1) % (n - 1) + 2 for i in range(2, n + 1)])
    sub_reflection = Permutation([1, 2] + list(range(n, 2, -1)))
    rows = (
        ("cyclic group", PermGroup([full_cycle], n)),
        ("dihedral group", PermGroup([full_cycle, reflection], n)),
        ("fixed point plus cyclic group", PermGroup([sub_cycle], n)),
        ("fixed point plus dihedral group",
         PermGroup([sub_cycle, sub_reflection], n)),
    )
    return tuple((desc, orbit_structure(g)) for desc, g in rows)


def _group_verdict(g: PermGroup, lower: dict | None) -> tuple[str, str]:
    """Knowledge-base verdict for one group on its own points.

    Sources, in order: the low-degree identity, a completed classification
    of the same degree (when supplied in ``lower``), the symmetric-product
    table, the cyclic/dihedral table, and recursively a direct-product
    split with a not-tight factor.  Returns (verdict, reason), with
    verdict ``UNKNOWN`` when nothing applies.
    """
    m = g.degree
    if m <= 3:
        return TIGHT, (f"degree {m}: every polymatroid on at most three "
                       "points is a limit of entropy functions")
    st = orbit_structure(g)
    if lower and m in lower:
        report = lower[m]
        ci = report.poset.class_of(st)
        if ci is not None and report.statuses[ci].value != UNKNOWN:
            v = report.statuses[ci].value
            return v, f"degree-{m} classification: its class C{ci} is {v}"
    for parts, yst, verdict in _young_table(m):
        if structures_isomorphic(st, yst) is not None:
            return verdict, ("product of full symmetric groups on part "
                             f"sizes {list(parts)}")
    if m >= 6:
        for desc, cst in _cyclic_dihedral_table(m):
            if structures_isomorphic(st, cst) is not None:
                return NOT_TIGHT, f"{desc} of degree {m}"
    split = _product_split(g, lower)
    if split is not None:
        return NOT_TIGHT, split
    return UNKNOWN, ""


def _product_split(g: PermGroup, lower: dict | None) -> str | None:
    """Reason string when g is a direct product with a not-tight factor.

    Tries every two-sided split of the point orbits; g decomposes along a
    split when its order equals the product of the two restriction orders.
    """
    blocks = g.point_orbits()
    if len(blocks) < 2:
        return None
    order = g.order()
    k = len(blocks)
    for r in range(1, k):
        for combo in combinations(range(1, k), r):
            right = frozenset(combo)
            pts_a = sorted(p for i in range(k) if i not in right
                           for p in blocks[i])
            pts_b = sorted(p for i in right for p in blocks[i])
            ga = g.restrict(pts_a)
            gb = g.restrict(pts_b)
            if ga.order() * gb.order() != order:
                continue
            for pts, factor in ((pts_a, ga), (pts_b, gb)):
                verdict, why = _group_verdict(factor, lower)
                if verdict == NOT_TIGHT:
                    return (f"direct product whose factor on points {pts} "
                            f"is not tight ({why})")
    return None


# ---------------------------------------------------------------------------
# seeding and propagation


def class_members(poset: StructurePoset,
                  groups) -> tuple[tuple[PermGroup, ...], ...]:
    """Bucket the groups that built the poset by their structure class."""
    buckets: list[list[PermGroup]] = [[] for _ in poset.classes]
    by_profile: dict = {}
    for i, rep in enumerate(poset.classes):
        by_profile.setdefault(rep.profile(), []).append(i)
    for g in groups:
        st = orbit_structure(g)
        for i in by_profile.get(st.profile(), ()):
            if structures_isomorphic(st, poset.classes[i]) is not None:
                buckets[i].append(g)
                break
        else:
            raise ValueError(f"group {g!r} fits no class of the poset")
    return tuple(tuple(b) for b in buckets)


def seed_known(poset: StructurePoset, members,
               lower: dict | None = None) -> list:
    """Statuses derivable from the knowledge base alone.

    ``members`` is the per-class group list from :func:`class_members`
    (the structural rules need actual groups only for the direct-product
    split; everything else matches on the class structure).  ``lower``
    optionally maps a smaller degree to its finished report so factors of
    that degree can be looked up.
    """
    n = poset.degree
    k = len(poset.classes)
    statuses = [TightnessStatus(UNKNOWN) for _ in range(k)]
    if n <= 3:
        reason = (f"degree {n}: every polymatroid on at most three points "
                  "is a limit of entropy functions")
        return [TightnessStatus(TIGHT, (reason,)) for _ in range(k)]

    for parts, yst, verdict in _young_table(n):
        ci = poset.class_of(yst)
        if ci is None:
            continue
        pattern = ("single part" if len(parts) == 1
                   else "point plus the rest" if parts == (n - 1, 1)
                   else "any other pattern, never tight")
        _assign(statuses, ci, verdict,
                "product of full symmetric groups on part sizes "
                f"{list(parts)} ({pattern})")

    if n >= 6:
        for desc, cst in _cyclic_dihedral_table(n):
            ci = poset.class_of(cst)
            if ci is not None:
                _assign(statuses, ci, NOT_TIGHT,
                        f"{desc} of degree {n} is never tight")

    for ci in range(k):
        if statuses[ci].value != UNKNOWN:
            continue
        for g in members[ci]:
            why = _product_split(g, lower)
            if why is not None:
                _assign(statuses, ci, NOT_TIGHT, why)
                break
    return statuses


def propagate(poset: StructurePoset, statuses) -> list:
    """Close the statuses under the refinement order (fixpoint).

    A tight class forces every coarser class tight; a not-tight class
    forces every finer class not tight.  A class forced both ways raises
    :class:`ContradictionError` with the two justification chains.
    """
    out = list(statuses)
    leq = poset.leq
    k = len(out)
    changed = True
    while changed:
        changed = False
        for i in range(k):
            v = out[i].value
            if v == UNKNOWN:
                continue
            display = ", ".join(poset.members[i]) or f"class {i}"
            if v == TIGHT:
                targets = [j for j in range(k) if j != i and leq[i][j]]
                reason = f"coarsening of tight class C{i} ({display})"
            else:
                targets = [j for j in range(k) if j != i and leq[j][i]]
                reason = f"refinement of not-tight class C{i} ({display})"
            for j in targets:
                if out[j].value == UNKNOWN:
                    out[j] = TightnessStatus(v, (reason,))
                    changed = True
                elif out[j].value != v:
                    raise ContradictionError(
                        f"class {j} already {out[j].value} via "
                        f"[{'; '.join(out[j].provenance)}] but class {i} "
                        f"({display}, {v}) forces {v} via [{reason}]")
    return out


# ---------------------------------------------------------------------------
# direct certification


@dataclass(frozen=True)
class ClassCertification:
    """Ray-by-ray certification outcome for one structure class."""

    class_index: int
    rays: tuple
    ray_statuses: tuple
    value: str
    reason: str

    def as_dict(self) -> dict:
        return {
            "class": self.class_index,
            "status": self.value,
            "reason": self.reason,
            "rays": [list(r) for r in self.rays],
            "ray_statuses": [s.as_dict() for s in self.ray_statuses],
        }


def certify_structure(structure: OrbitStructure,
                      certs=None) -> tuple[str, str, tuple, tuple]:
    """Enumerate the cone's extreme rays and certify every one.

    Returns (verdict, reason, rays, ray_statuses): tight when every ray is
    almost entropic, not tight when some ray is non-entropic, unknown
    otherwise.
    """
    if certs is None:
        certs = shipped_certificates()
    hrep = build_hrep(structure)
    vrep = double_description(hrep)
    rays = vrep.coords()
    stats = []
    for ray in vrep.rays:
        ev = best_evidence(structure, ray, certs)
        stats.append(certify_ray(structure, ray, evidence=ev))
    for ray, rs in zip(rays, stats):
        if rs.kind == NON_ENTROPIC:
            return (NOT_TIGHT,
                    f"extreme ray {list(ray)} is non-entropic ({rs.reason})",
                    rays, tuple(stats))
    if all(rs.kind == ALMOST_ENTROPIC for rs in stats):
        uniform = sum("uniform matroid" in rs.reason for rs in stats)
        reason = (f"all {len(rays)} extreme rays almost entropic "
                  f"({uniform} uniform, {len(rays) - uniform} "
                  "matrix-represented)")
        return TIGHT, reason, rays, tuple(stats)
    open_count = sum(rs.kind not in (ALMOST_ENTROPIC, NON_ENTROPIC)
                     for rs in stats)
    return (UNKNOWN,
            f"{open_count} of {len(rays)} extreme rays lack a certificate",
            rays, tuple(stats))


def seed_certificates(poset: StructurePoset, statuses, targets=None,
                      certs=None) -> tuple[list, tuple]:
    """Run direct certification on the target classes.

    ``targets`` defaults to every class still unknown.  Classes whose cone
    dimension exceeds ``MAX_CERT_DIM`` are recorded as skipped instead of
    attempted.  Returns the updated statuses and the per-class outcomes.
    """
    out = list(statuses)
    if targets is None:
        targets = [i for i, s in enumerate(out) if s.value == UNKNOWN]
    if certs is None:
        certs = shipped_certificates()
    outcomes = []
    for ci in targets:
        structure = poset.classes[ci]
        dim = len(structure.orbits)
        if dim > MAX_CERT_DIM:
            outcomes.append(ClassCertification(
                ci, (), (), UNKNOWN,
                f"skipped: cone dimension {dim} exceeds the "
                f"direct-certification limit {MAX_CERT_DIM}"))
            continue
        verdict, reason, rays, stats = certify_structure(structure, certs)
        outcomes.append(ClassCertification(ci, rays, stats, verdict, reason))
        if verdict != UNKNOWN:
            _assign(out, ci, verdict, f"direct certification: {reason}")
    return out, tuple(outcomes)


# ---------------------------------------------------------------------------
# critical classes and the end-to-end driver


def critical_classes(poset: StructurePoset, statuses) -> tuple[tuple, tuple]:
    """The two critical antichains: minimal tight, maximal not tight."""
    tight = [i for i, s in enumerate(statuses) if s.value == TIGHT]
    nott = [i for i, s in enumerate(statuses) if s.value == NOT_TIGHT]
    minimal = tuple(i for i in tight
                    if not any(j != i and poset.leq[j][i] for j in tight))
    maximal = tuple(i for i in nott
                    if not any(j != i and poset.leq[i][j] for j in nott))
    return minimal, maximal


@dataclass(frozen=True)
class ClassificationReport:
    """Everything classify_degree established for one degree."""

    degree: int
    mode: str
    poset: StructurePoset
    statuses: tuple
    minimal_tight: tuple
    maximal_not_tight: tuple
    complete: bool
    certifications: tuple
    discrepancies: tuple

    def tight_classes(self) -> tuple:
        return tuple(i for i, s in enumerate(self.statuses)
                     if s.value == TIGHT)

    def not_tight_classes(self) -> tuple:
        return tuple(i for i, s in enumerate(self.statuses)
                     if s.value == NOT_TIGHT)

    def as_dict(self) -> dict:
        classes = []
        for i, rep in enumerate(self.poset.classes):
            classes.append({
                "index": i,
                "members": list(self.poset.members[i]),
                "orbits": len(rep.orbits),
                "status": self.statuses[i].value,
                "provenance": list(self.statuses[i].provenance),
            })
        return {
            "degree": self.degree,
            "mode": self.mode,
            "complete": self.complete,
            "classes": classes,
            "minimal_tight": list(self.minimal_tight),
            "maximal_not_tight": list(self.maximal_not_tight),
            "discrepancies": list(self.discrepancies),
            "certifications": [c.as_dict() for c in self.certifications],
        }

    def to_text(self) -> str:
        lines = [f"degree {self.degree} classification ({self.mode} mode): "
                 f"{len(self.poset.classes)} classes, "
                 f"{'complete' if self.complete else 'INCOMPLETE'}"]

        def names(i):
            return ", ".join(self.poset.members[i]) or f"class {i}"

        for i in range(len(self.poset.classes)):
            st = self.statuses[i]
            lines.append(f"  C{i:<3d} [{st.value:>9s}]  {names(i)}")
            for rec in st.provenance:
                lines.append(f"        <- {rec}")
        lines.append("minimal tight classes: "
                     + (", ".join(f"C{i}" for i in self.minimal_tight) or "none"))
        lines.append("maximal not-tight classes: "
                     + (", ".join(f"C{i}" for i in self.maximal_not_tight) or "none"))
        if self.discrepancies:
            lines.append("discrepancies against the reference lists:")
            for d in self.discrepancies:
                lines.append(f"  ! {d}")
        else:
            lines.append("reference lists: all comparisons match")
        return "\n".join(lines) + "\n"

    def to_dot(self) -> str:
        palette = {TIGHT: "palegreen", NOT_TIGHT: "lightcoral", UNKNOWN: ""}
        colors = [palette[s.value] for s in self.statuses]
        labels = [s.value for s in self.statuses]
        return hasse_dot(self.poset, colors=colors, extra_labels=labels)


@lru_cache(maxsize=None)
def _fixture_structures(degree: int) -> tuple:
    from symcone.fixtures import fixture_names, fixture_structure, load_fixture
    out = []
    for name in fixture_names():
        fix = load_fixture(name)
        if fix["degree"] == degree:
            out.append((name, fixture_structure(fix)))
    return tuple(out)


def _reference_classes(poset: StructurePoset, degree: int,
                       key: str, notes: list) -> set | None:
    """Map one shipped reference name list onto poset class indices."""
    cat = _catalog()
    names = cat.get(key, {}).get(str(degree))
    if not names:
        return None
    table = cat["groups"][str(degree)]
    out = set()
    for nm in names:
        g = PermGroup.from_gen_strings(table[nm], degree, name=nm)
        ci = poset.class_of(orbit_structure(g))
        if ci is None:
            notes.append(f"reference group {nm} fits no class of the poset")
            continue
        out.add(ci)
    return out


def _compare_reference(poset, degree, statuses, minimal, maximal) -> tuple:
    notes: list[str] = []

    def names(i):
        return ", ".join(poset.members[i]) or f"class {i}"

    checks = (
        ("tight_groups", "tight classes",
         {i for i, s in enumerate(statuses) if s.value == TIGHT}),
        ("critical_tight_groups", "minimal tight antichain", set(minimal)),
        ("critical_nottight_groups", "maximal not-tight antichain",
         set(maximal)),
    )
    for key, label, computed in checks:
        expected = _reference_classes(poset, degree, key, notes)
        if expected is None:
            continue
        for i in sorted(computed - expected):
            notes.append(f"{label}: computed class C{i} ({names(i)}) "
                         "is absent from the reference list")
        for i in sorted(expected - computed):
            notes.append(f"{label}: reference class C{i} ({names(i)}) "
                         "is absent from the computed set")
    return tuple(notes)


def classify_degree(n: int, mode: str = "catalog",
                    time_budget: float | None = None) -> ClassificationReport:
    """End-to-end classification for degree n (2, 3, 6 or 7).

    ``catalog`` mode uses the shipped group list (one representative per
    conjugacy class); ``enumerate`` discovers the subgroup classes from
    scratch, honouring ``time_budget`` seconds when given.  The pipeline
    is: poset build, knowledge-base seeding, refinement closure, direct
    certification of whatever is left (fixture-matched classes first),
    and critical-antichain extraction.  Degree 7 classifies degree 6
    first so product factors of degree 6 can be looked up.
    """
    if n not in (2, 3, 6, 7):
        raise ValueError(f"degree {n} not supported; choose 2, 3, 6 or 7")
    if mode not in ("catalog", "enumerate"):
        raise ValueError(f"unknown mode {mode!r}; choose catalog or enumerate")

    if mode == "catalog":
        groups = catalog_groups(n)
    else:
        enum = enumerate_subgroup_classes(n, time_budget=time_budget)
        if not enum.complete:
            raise ValueError(
                f"subgroup enumeration for degree {n} ran out of time; "
                "raise the budget or use catalog mode")
        groups = tuple(enum.representatives)

    poset = build_poset(groups)
    members = class_members(poset, groups)

    lower = {}
    if n == 7:
        lower[6] = classify_degree(6, "catalog")

    statuses = seed_known(poset, members, lower)
    statuses = propagate(poset, statuses)

    certifications: tuple = ()
    unknown = [i for i, s in enumerate(statuses) if s.value == UNKNOWN]
    if unknown:
        fixture_first = [
            i for i in unknown
            if any(structures_isomorphic(poset.classes[i], st) is not None
                   for _, st in _fixture_structures(n))]
        if fixture_first:
            statuses, certifications = seed_certificates(
                poset, statuses, targets=fixture_first)
            statuses = propagate(poset, statuses)
        unknown = [i for i, s in enumerate(statuses) if s.value == UNKNOWN]
        if unknown:
            statuses, more = seed_certificates(poset, statuses,
                                               targets=unknown)
            statuses = propagate(poset, statuses)
            certifications += more

    minimal, maximal = critical_classes(poset, statuses)
    complete = all(s.value != UNKNOWN for s in statuses)
    discrepancies = _compare_reference(poset, n, statuses, minimal, maximal)

    return ClassificationReport(
        degree=n,
        mode=mode,
        poset=poset,
        statuses=tuple(statuses),
        minimal_tight=minimal,
        maximal_not_tight=maximal,
        complete=complete,
        certifications=certifications,
        discrepancies=discrepancies,
    )
