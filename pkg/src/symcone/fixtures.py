"""Reference cone tables and the machinery to compare against them.

Six validation fixtures ship with the package, each recording a group, the
column order of its table, an H-representation, and a V-representation as
published in the reference tables.  Comparisons are set-based: columns are
matched by orbit content (the orbit containing the label subset), rows by
primitive-vector identity, so row order and positive scaling never matter.

One fixture (s1xpsl2_5) prints 14 columns for a 15-orbit structure; its
table folded the coefficient of the absent orbit into a sibling column, and
the fixture declares that fold so the comparison can reproduce it.

When a comparison fails, the report itemizes every differing row and, for
rows that look like corrupted near-duplicates (differing from a computed
row in exactly one column), names the column and the delta, and records
whether the printed row is even satisfiable by uniform matroids.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from itertools import permutations

from symcone.orbits import OrbitStructure, mask_from_points, orbit_structure
from symcone.perm import PermGroup
from symcone.polymatroid import orbit_coords, uniform
from symcone.shannon import HRep, build_hrep, primitive

__all__ = [
    "fixture_names",
    "load_fixture",
    "fixture_group",
    "fixture_structure",
    "HRepComparison",
    "compare_hrep",
    "VRepComparison",
    "compare_vrep",
]

_NAMES = ("psl2_5", "s3wr2c2", "s2wr3s3", "agl1_7", "pgl3_2", "s1xpsl2_5")


def fixture_names() -> tuple[str, ...]:
    return _NAMES


def load_fixture(name: str) -> dict:
    if name not in _NAMES:
        raise ValueError(f"unknown fixture {name!r}; have {', '.join(_NAMES)}")
    path = resources.files("symcone.data").joinpath(f"fixtures/{name}.json")
    return json.loads(path.read_text())


def fixture_group(fix: dict) -> PermGroup:
    return PermGroup.from_gen_strings(fix["generators"], fix["degree"],
                                      name=fix["group"])


def fixture_structure(fix: dict) -> OrbitStructure:
    return orbit_structure(fixture_group(fix))


def _content_colmap(fix: dict, structure: OrbitStructure) -> list[int]:
    """Printed column position -> orbit index, by label content."""
    out = []
    for lab in fix["columns"]:
        mask = mask_from_points(int(c) for c in lab)
        out.append(structure.orbit_of(mask))
    if len(set(out)) != len(out):
        raise ValueError("column labels do not name distinct orbits")
    return out


def _printed_rows(fix: dict, structure: OrbitStructure,
                  colmap: list[int], width: int,
                  key: str = "hrep") -> frozenset:
    rows = set()
    for r in fix[key]:
        out = [0] * width
        for k, v in enumerate(r):
            out[colmap[k]] = v
        rows.add(primitive(tuple(out)))
    return frozenset(rows)


@dataclass
class HRepComparison:
    """Outcome of comparing a computed H-rep against a fixture table."""

    fixture: str
    computed_count: int
    printed_count: int
    matched: frozenset
    computed_only: frozenset
    printed_only: frozenset
    columns: tuple                    # label per compared coordinate
    projection: str | None = None    # description of any applied fold
    label_swaps: tuple = ()          # ((label, label), ...) improving the match
    diagnoses: list = field(default_factory=list)

    @property
    def equal(self) -> bool:
        return not self.computed_only and not self.printed_only

    def lines(self) -> list[str]:
        """Human-readable itemization of the comparison."""
        out = [f"{self.fixture}: computed {self.computed_count} rows, "
               f"table {self.printed_count} rows, "
               f"{'EQUAL' if self.equal else 'MISMATCH'}"]
        if self.projection:
            out.append(f"  comparison projection: {self.projection}")
        if self.label_swaps:
            swaps = ", ".join(f"O({a})<->O({b})" for a, b in self.label_swaps)
            out.append(f"  stated column labels inconsistent with data; "
                       f"best match swaps {swaps}")
        for row in sorted(self.computed_only):
            out.append(f"  computed row missing from table: {row}")
        for d in self.diagnoses:
            out.append("  " + d)
        return out


def _uniform_verdict(row, structure: OrbitStructure) -> str:
    """Whether a row is satisfied by every uniform matroid of the degree."""
    n = structure.degree
    for k in range(1, n + 1):
        coords = orbit_coords(uniform(k, n), structure)
        v = sum(a * s for a, s in zip(row, coords))
        if v < 0:
            return (f"violated by the rank-{k} uniform matroid "
                    f"(value {v}); not a valid cone inequality")
    return "satisfied by all uniform matroids (redundant for the cone)"


def _diagnose(printed_only, computed_rows, labels, structure) -> list[str]:
    """Explain each unmatched printed row against the computed rows."""
    out = []
    for row in sorted(printed_only):
        partners = []
        for c in computed_rows:
            diff = [i for i in range(len(row)) if row[i] != c[i]]
            if len(diff) == 1:
                partners.append((c, diff[0], row[diff[0]] - c[diff[0]]))
        if partners:
            c, i, delta = partners[0]
            out.append(
                f"table row {row} = computed row {c} with "
                f"{delta:+d} in the O({labels[i]}) column; "
                f"{_uniform_verdict(row, structure)}")
        else:
            out.append(f"table row {row} matches no computed row; "
                       f"{_uniform_verdict(row, structure)}")
    return out


def _best_cardinality_permutation(fix, structure, computed, width,
                                  key: str = "hrep"):
    """Search within-cardinality column permutations for the best match.

    The stated label list of a table can be internally inconsistent; labels
    can only ever be confused within one subset cardinality, so the search
    space is the product of per-cardinality permutations.  Returns
    (colmap, swaps) for the mapping maximizing the row overlap.
    """
    strict = _content_colmap(fix, structure)
    by_card: dict[int, list[int]] = {}
    for pos, lab in enumerate(fix["columns"]):
        by_card.setdefault(len(lab), []).append(pos)
    groups = [v for v in by_card.values() if len(v) > 1]
    for g in groups:
        if len(g) > 3:  # keep the search tiny; tables never need more
            return strict, ()

    best = (None, -1)
    def assignments(i, current):
        nonlocal best
        if i == len(groups):
            rows = _printed_rows(fix, structure, current, width, key)
            overlap = len(rows & computed)
            if overlap > best[1]:
                best = (tuple(current), overlap)
            return
        for perm in permutations(groups[i]):
            nxt = list(current)
            for src, dst in zip(groups[i], perm):
                nxt[src] = strict[dst]
            assignments(i + 1, nxt)
    assignments(0, list(strict))

    colmap = list(best[0])
    swaps = []
    for pos in range(len(colmap)):
        if colmap[pos] != strict[pos]:
            src = strict.index(colmap[pos])
            pair = tuple(sorted((fix["columns"][pos], fix["columns"][src])))
            if pair not in swaps:
                swaps.append(pair)
    return colmap, tuple(swaps)


def compare_hrep(name_or_fix, hrep: HRep | None = None) -> HRepComparison:
    """Compare a computed H-representation against a fixture table.

    Builds the structure and H-rep from the fixture's own group when not
    supplied.  Applies the fixture's declared fold for tables printed with
    an absent column.  On mismatch under strict content matching, searches
    within-cardinality label permutations and itemizes what remains.
    """
    fix = load_fixture(name_or_fix) if isinstance(name_or_fix, str) else name_or_fix
    structure = hrep.structure if hrep is not None else fixture_structure(fix)
    if hrep is None:
        hrep = build_hrep(structure)

    projection = None
    if "missing_orbit" in fix:
        miss = structure.orbit_of(
            mask_from_points(int(c) for c in fix["missing_orbit"]))
        into = structure.orbit_of(
            mask_from_points(int(c) for c in fix["fold_into"]))
        folded = set()
        for r in hrep.rows:
            row = list(r)
            row[into] += row[miss]
            folded.add(primitive(tuple(row[:miss] + row[miss + 1:])))
        computed = frozenset(folded)
        # coordinates after dropping the absent orbit
        keep = [i for i in range(len(structure)) if i != miss]
        labels = tuple(structure.label_strings()[i] for i in keep)
        reindex = {orig: new for new, orig in enumerate(keep)}
        colmap = [reindex[i] for i in _content_colmap(fix, structure)]
        width = len(keep)
        projection = (f"computed O({fix['missing_orbit']}) coefficient folded "
                      f"into the O({fix['fold_into']}) column")
        printed = _printed_rows(fix, structure, colmap, width)
        swaps = ()
        # structure for uniform verdicts must match the compared width; the
        # folded space evaluates uniforms identically on the kept orbits, so
        # verdicts are computed in the full space and projected rows are
        # diagnosed without them when no partner exists.
        diag_structure = None
    else:
        computed = frozenset(hrep.rows)
        labels = structure.label_strings()
        width = len(structure)
        colmap = _content_colmap(fix, structure)
        printed = _printed_rows(fix, structure, colmap, width)
        swaps = ()
        diag_structure = structure
        if printed != computed:
            best_map, swaps = _best_cardinality_permutation(
                fix, structure, computed, width)
            if swaps:
                printed = _printed_rows(fix, structure, best_map, width)

    printed_only = printed - computed
    computed_only = computed - printed
    diagnoses = []
    if printed_only and diag_structure is not None:
        diagnoses = _diagnose(printed_only, sorted(computed),
                              labels, diag_structure)
    elif printed_only:
        diagnoses = [f"table row {row} matches no computed row"
                     for row in sorted(printed_only)]

    return HRepComparison(
        fixture=fix["name"],
        computed_count=len(computed),
        printed_count=len(printed),
        matched=frozenset(printed & computed),
        computed_only=computed_only,
        printed_only=printed_only,
        columns=labels,
        projection=projection,
        label_swaps=swaps,
        diagnoses=diagnoses,
    )


@dataclass
class VRepComparison:
    """Outcome of comparing computed extreme rays against a fixture table.

    Ray identity is up to positive scaling: both sides are reduced to
    primitive vectors before the set comparison.  The printed side is the
    table's numeric rows plus the uniform matroids it lists by rank.
    """

    fixture: str
    computed_count: int
    printed_count: int
    matched: frozenset
    computed_only: frozenset
    printed_only: frozenset
    columns: tuple
    projection: str | None = None
    label_swaps: tuple = ()
    diagnoses: list = field(default_factory=list)

    @property
    def equal(self) -> bool:
        return not self.computed_only and not self.printed_only

    def lines(self) -> list[str]:
        """Human-readable itemization of the comparison."""
        out = [f"{self.fixture}: computed {self.computed_count} rays, "
               f"table {self.printed_count} rays, "
               f"{'EQUAL' if self.equal else 'MISMATCH'}"]
        if self.projection:
            out.append(f"  comparison projection: {self.projection}")
        if self.label_swaps:
            swaps = ", ".join(f"O({a})<->O({b})" for a, b in self.label_swaps)
            out.append(f"  stated column labels inconsistent with data; "
                       f"best match swaps {swaps}")
        for ray in sorted(self.computed_only):
            out.append(f"  computed ray missing from table: {ray}")
        for d in self.diagnoses:
            out.append("  " + d)
        return out


def _uniform_coords(fix: dict, structure: OrbitStructure) -> list:
    """Primitive coordinate vectors of the uniform matroids the table lists."""
    n = structure.degree
    return [primitive(orbit_coords(uniform(k, n), structure))
            for k in fix["uniform_rays"]]


def _diagnose_rays(printed_only, hrep, computed, labels) -> list[str]:
    """Explain each unmatched printed ray against the computed rays.

    Looks for a computed ray that, at some small integer scale, differs
    from the printed row in exactly one coordinate, then states whether
    the printed row lies in the cone at all.
    """
    out = []
    for row in sorted(printed_only):
        if hrep is not None:
            slacks = hrep.slacks(row)
            j = next((j for j, v in enumerate(slacks) if v < 0), None)
            if j is None:
                tight = [hrep.rows[i] for i, v in enumerate(slacks) if v == 0]
                from symcone import _kernels as kernels
                extreme = kernels.int_rank(tight) == hrep.dim - 1
                verdict = ("satisfies the inequalities and is extreme; "
                           "missing from the enumeration (FATAL)"
                           if extreme else
                           "satisfies the inequalities but is not extreme")
            else:
                verdict = (f"violates computed inequality row {hrep.rows[j]} "
                           f"(value {slacks[j]}); not in the cone")
        else:
            verdict = "not comparable against inequalities in projected coordinates"
        partner = None
        for c in computed:
            for scale in (1, 2, 3, 4):
                diff = [i for i in range(len(row))
                        if row[i] != scale * c[i]]
                if len(diff) == 1:
                    partner = (c, scale, diff[0])
                    break
            if partner:
                break
        if partner:
            c, scale, i = partner
            mult = f"{scale} x " if scale != 1 else ""
            out.append(
                f"table ray {row} = {mult}computed ray {c} except in the "
                f"O({labels[i]}) column ({row[i]} vs {scale * c[i]}); {verdict}")
        else:
            out.append(f"table ray {row} matches no computed ray; {verdict}")
    return out


def compare_vrep(name_or_fix, vrep=None) -> VRepComparison:
    """Compare computed extreme rays against a fixture's printed list.

    Enumerates the rays from the fixture's own group when not supplied.
    A fixture whose table omits an orbit column compares in the projected
    coordinates (the absent coordinate is dropped from computed rays).  On
    mismatch under strict content matching, searches within-cardinality
    label permutations and itemizes what remains.
    """
    from symcone.rayenum import double_description

    fix = load_fixture(name_or_fix) if isinstance(name_or_fix, str) else name_or_fix
    if vrep is None:
        structure = fixture_structure(fix)
        vrep = double_description(build_hrep(structure))
    else:
        structure = vrep.structure
    hrep = vrep.hrep

    uniform_rows = _uniform_coords(fix, structure)
    projection = None
    swaps = ()
    if "missing_orbit" in fix:
        miss = structure.orbit_of(
            mask_from_points(int(c) for c in fix["missing_orbit"]))
        keep = [i for i in range(len(structure)) if i != miss]
        labels = tuple(structure.label_strings()[i] for i in keep)
        reindex = {orig: new for new, orig in enumerate(keep)}
        colmap = [reindex[i] for i in _content_colmap(fix, structure)]
        width = len(keep)
        computed = frozenset(
            primitive(tuple(r.coords[i] for i in keep)) for r in vrep.rays)
        printed = set(_printed_rows(fix, structure, colmap, width, "vrep"))
        printed.update(primitive(tuple(u[i] for i in keep))
                       for u in uniform_rows)
        projection = (f"the O({fix['missing_orbit']}) coordinate is absent "
                      f"from the table and dropped from computed rays")
        feas_hrep = None  # inequalities live in the unprojected space
    else:
        labels = structure.label_strings()
        width = len(structure)
        colmap = _content_colmap(fix, structure)
        computed = frozenset(r.coords for r in vrep.rays)
        printed = set(_printed_rows(fix, structure, colmap, width, "vrep"))
        printed.update(uniform_rows)
        feas_hrep = hrep
        if not printed <= computed:
            best_map, swaps = _best_cardinality_permutation(
                fix, structure, computed, width, "vrep")
            if swaps:
                printed = set(_printed_rows(fix, structure, best_map, width,
                                            "vrep"))
                printed.update(uniform_rows)

    printed = frozenset(printed)
    printed_only = printed - computed
    computed_only = computed - printed
    diagnoses = []
    if printed_only:
        diagnoses = _diagnose_rays(printed_only, feas_hrep,
                                   sorted(computed), labels)

    return VRepComparison(
        fixture=fix["name"],
        computed_count=len(computed),
        printed_count=len(printed),
        matched=frozenset(printed & computed),
        computed_only=computed_only,
        printed_only=printed_only,
        columns=labels,
        projection=projection,
        label_swaps=swaps,
        diagnoses=diagnoses,
    )
