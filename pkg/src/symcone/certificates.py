"""Certificates settling whether a cone ray is almost entropic.

Positive evidence is a matrix over a prime field whose column blocks
reproduce the ray's rank function (multilinear representability makes the
ray a limit of entropy vectors). Negative evidence is a four-point minor
on which the Zhang-Yeung information inequality takes a negative value.
Rays matching no certificate of either kind stay unknown.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from itertools import combinations, permutations
from typing import Mapping, Sequence

from symcone.orbits import OrbitStructure, mask_from_points, points_from_mask
from symcone.polymatroid import RankFunction, contract, expand, orbit_coords, restrict, uniform
from symcone.shannon import OrbitVector, primitive

__all__ = [
    "GFMatrix",
    "gf_rank",
    "induced_rank",
    "verify_multilinear_rep",
    "match_relabeling",
    "zy_value",
    "ZYCertificate",
    "zy_minor_search",
    "zy_violation_search",
    "RayStatus",
    "certify_ray",
    "fano_rank_function",
    "fano_sum_decomposition",
    "CertificateFile",
    "shipped_certificates",
    "best_evidence",
    "ALMOST_ENTROPIC",
    "NON_ENTROPIC",
    "UNKNOWN",
]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class GFMatrix:
    """Matrix over GF(p) whose columns are grouped into per-point blocks.

    ``blocks[i]`` lists the column indices belonging to ground point i+1;
    together the blocks partition the columns. The rank function induced on
    subsets A of the ground set is the rank of the columns in A's blocks.
    """

    p: int
    entries: tuple
    blocks: tuple

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")
        entries = tuple(tuple(int(v) for v in row) for row in self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries or not entries[0]:
            raise ValueError("matrix needs at least one row and one column")
        width = len(entries[0])
        for row in entries:
            if len(row) != width:
                raise ValueError("rows have unequal lengths")
            for v in row:
                if not 0 <= v < self.p:
                    raise ValueError(f"entry {v} outside [0, {self.p})")
        blocks = tuple(tuple(int(c) for c in b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        flat = sorted(c for b in blocks for c in b)
        if flat != list(range(width)):
            raise ValueError("blocks do not partition the columns")

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    @property
    def degree(self) -> int:
        return len(self.blocks)

    def block_columns(self, points) -> tuple:
        """All column indices labeled by the given ground points."""
        cols = []
        for p in points:
            if not 1 <= p <= self.degree:
                raise ValueError(f"point {p} outside ground set 1..{self.degree}")
            cols.extend(self.blocks[p - 1])
        return tuple(sorted(cols))

    def permuted(self, mapping: Mapping[int, int]) -> "GFMatrix":
        """Relabel ground points: new point mapping[i] gets point i's block."""
        pts = range(1, self.degree + 1)
        if sorted(mapping) != list(pts) or sorted(mapping.values()) != list(pts):
            raise ValueError("mapping is not a permutation of the ground set")
        blocks = [()] * self.degree
        for i in pts:
            blocks[mapping[i] - 1] = self.blocks[i - 1]
        return GFMatrix(self.p, self.entries, tuple(blocks))

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "rows": self.rows,
            "cols": self.cols,
            "block_map": {str(i + 1): list(b) for i, b in enumerate(self.blocks)},
            "entries": [v for row in self.entries for v in row],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GFMatrix":
        rows, cols = int(d["rows"]), int(d["cols"])
        flat = list(d["entries"])
        if len(flat) != rows * cols:
            raise ValueError(f"need {rows * cols} entries, got {len(flat)}")
        entries = tuple(tuple(flat[r * cols:(r + 1) * cols]) for r in range(rows))
        block_map = d["block_map"]
        degree = len(block_map)
        try:
            blocks = tuple(tuple(block_map[str(i)]) for i in range(1, degree + 1))
        except KeyError as e:
            raise ValueError(f"block_map is missing point {e}") from None
        return cls(int(d["p"]), entries, blocks)


def gf_rank(matrix: GFMatrix, cols: Sequence[int]) -> int:
    """Rank over GF(p) of the submatrix on the given columns."""
    p = matrix.p
    for c in cols:
        if not 0 <= c < matrix.cols:
            raise ValueError(f"column {c} outside 0..{matrix.cols - 1}")
    work = [[row[c] % p for c in cols] for row in matrix.entries]
    rank = 0
    for col in range(len(cols)):
        piv = next((r for r in range(rank, len(work)) if work[r][col]), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = pow(work[rank][col], p - 2, p)
        work[rank] = [v * inv % p for v in work[rank]]
        for r in range(len(work)):
            if r != rank and work[r][col]:
                f = work[r][col]
                work[r] = [(a - f * b) % p for a, b in zip(work[r], work[rank])]
        rank += 1
    return rank


def induced_rank(matrix: GFMatrix) -> RankFunction:
    """The rank function A -> rank of the columns labeled by A."""
    n = matrix.degree
    vals = [0] * (1 << n)
    for mask in range(1, 1 << n):
        vals[mask] = gf_rank(matrix, matrix.block_columns(points_from_mask(mask)))
    return RankFunction(n, vals)


def kernel_representation(matrix: GFMatrix) -> GFMatrix:
    """Null space basis of the matrix, arranged as rows, same column blocks.

    When every point's column block is independent, the induced rank of the
    result is the dual polymatroid A -> sum of the singleton ranks over A
    plus the rank of the complement minus the total rank.
    """
    p = matrix.p
    work = [[v % p for v in row] for row in matrix.entries]
    ncols = matrix.cols
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(work)) if work[r][col]), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = pow(work[rank][col], p - 2, p)
        work[rank] = [v * inv % p for v in work[rank]]
        for r in range(len(work)):
            if r != rank and work[r][col]:
                f = work[r][col]
                work[r] = [(a - f * b) % p for a, b in zip(work[r], work[rank])]
        pivots.append(col)
        rank += 1
    if rank == ncols:
        raise ValueError("matrix has full column rank; its kernel is trivial")
    basis = []
    free = [c for c in range(ncols) if c not in pivots]
    for f in free:
        vec = [0] * ncols
        vec[f] = 1
        for r, pc in enumerate(pivots):
            vec[pc] = (-work[r][f]) % p
        basis.append(tuple(vec))
    return GFMatrix(p=p, entries=tuple(basis), blocks=matrix.blocks)


def verify_multilinear_rep(matrix: GFMatrix, h: RankFunction):
    """Check that block ranks reproduce h on every nonempty subset.

    Returns (True, None) on success, else (False, first mismatching subset)
    scanning subsets by cardinality and then lexicographically.
    """
    if matrix.degree != h.degree:
        raise ValueError(
            f"matrix labels {matrix.degree} points, rank function has {h.degree}")
    order = sorted(range(1, 1 << h.degree),
                   key=lambda m: (m.bit_count(), points_from_mask(m)))
    for mask in order:
        pts = points_from_mask(mask)
        if gf_rank(matrix, matrix.block_columns(pts)) != h.values[mask]:
            return False, frozenset(pts)
    return True, None


def match_relabeling(matrix: GFMatrix, h: RankFunction) -> GFMatrix | None:
    """Search for a ground relabeling under which the matrix represents h.

    The identity is tried first; on success returns the relabeled matrix
    (whose induced rank function equals h), otherwise None.
    """
    if matrix.degree != h.degree:
        raise ValueError(
            f"matrix labels {matrix.degree} points, rank function has {h.degree}")
    base = induced_rank(matrix)
    if base == h:
        return matrix
    n = h.degree
    masks = sorted(range(1, 1 << n), key=lambda m: (m.bit_count(), m))
    for sigma in permutations(range(1, n + 1)):
        ok = True
        for m in masks:
            img = 0
            rem = m
            while rem:
                low = rem & -rem
                img |= 1 << (sigma[low.bit_length() - 1] - 1)
                rem ^= low
            if base.values[m] != h.values[img]:
                ok = False
                break
        if ok:
            return matrix.permuted({i: sigma[i - 1] for i in range(1, n + 1)})
    return None


# Coefficients of the Zhang-Yeung expression over subsets of the four roles,
# collected from the information combination
#     I(1;2) + I(1;34) + 3 I(3;4|1) + I(3;4|2) - 2 I(3;4).
# The expression is nonnegative at every point of the closed entropy region,
# so a negative value certifies that a rank function is not entropic.
_ZY_COEFFS = (
    ((1,), -1),
    ((3,), -2),
    ((4,), -2),
    ((1, 2), -1),
    ((1, 3), 3),
    ((1, 4), 3),
    ((2, 3), 1),
    ((2, 4), 1),
    ((3, 4), 3),
    ((1, 3, 4), -4),
    ((2, 3, 4), -1),
)


def zy_value(h: RankFunction, roles: Mapping[int, int]):
    """Evaluate the Zhang-Yeung expression on a four-point rank function.

    ``roles`` assigns each ground point of h a role in {1,2,3,4}; the value
    is nonnegative whenever h is entropic, and symmetric in roles 3 and 4.
    """
    if h.degree != 4:
        raise ValueError(f"rank function lives on {h.degree} points, need 4")
    roles = dict(roles)
    if sorted(roles) != [1, 2, 3, 4] or sorted(roles.values()) != [1, 2, 3, 4]:
        raise ValueError(f"roles {roles} are not a bijection on {{1,2,3,4}}")
    point_of = {role: pt for pt, role in roles.items()}
    total = 0
    for role_set, coeff in _ZY_COEFFS:
        mask = 0
        for role in role_set:
            mask |= 1 << (point_of[role] - 1)
        total += coeff * h.values[mask]
    return total


def _minor(h: RankFunction, contract_pts, restrict_pts):
    """Contract, then restrict; returns the minor and the original->minor map."""
    inner, cmap = contract(h, sorted(contract_pts))
    sub, rmap = restrict(inner, sorted(cmap[p] for p in restrict_pts))
    rel = {p: rmap[cmap[p]] for p in restrict_pts}
    return sub, rel


@dataclass(frozen=True)
class ZYCertificate:
    """Witness that a rank function lies outside the closed entropy region.

    The minor is formed by contracting ``contract_set`` and restricting to
    ``restrict_set`` (both in the original labels); ``role_assignment`` maps
    each restricted point to its role and ``value`` is the resulting
    Zhang-Yeung value, always negative.
    """

    contract_set: frozenset
    restrict_set: frozenset
    role_assignment: tuple
    value: object

    def __post_init__(self):
        object.__setattr__(self, "contract_set", frozenset(self.contract_set))
        object.__setattr__(self, "restrict_set", frozenset(self.restrict_set))
        assignment = tuple(sorted((int(p), int(r)) for p, r in self.role_assignment))
        object.__setattr__(self, "role_assignment", assignment)
        if len(self.restrict_set) != 4:
            raise ValueError("restriction must keep exactly four points")
        if self.contract_set & self.restrict_set:
            raise ValueError("contracted and restricted points overlap")
        if {p for p, _ in assignment} != self.restrict_set:
            raise ValueError("roles must be assigned to the restricted points")
        if sorted(r for _, r in assignment) != [1, 2, 3, 4]:
            raise ValueError("roles must be a bijection onto {1,2,3,4}")
        if not self.value < 0:
            raise ValueError(f"certificate value {self.value} is not negative")

    @property
    def roles(self) -> dict:
        return dict(self.role_assignment)

    def verify(self, h: RankFunction) -> bool:
        """Recompute the minor of h and confirm the recorded value."""
        sub, rel = _minor(h, self.contract_set, self.restrict_set)
        roles = {rel[p]: r for p, r in self.role_assignment}
        return zy_value(sub, roles) == self.value

    def describe(self) -> str:
        con = "{" + ",".join(str(p) for p in sorted(self.contract_set)) + "}"
        res = "{" + ",".join(str(p) for p in sorted(self.restrict_set)) + "}"
        roles = " ".join(f"{p}->X{r}" for p, r in self.role_assignment)
        return f"contract {con}, restrict {res}, roles {roles}, value {self.value}"

    def as_dict(self) -> dict:
        return {
            "contract": sorted(self.contract_set),
            "restrict": sorted(self.restrict_set),
            "roles": {str(p): r for p, r in self.role_assignment},
            "value": str(self.value),
        }


def zy_minor_search(h: RankFunction, contract_pts, restrict_pts) -> ZYCertificate | None:
    """Best (most negative) role assignment on one specific minor, if any.

    Role assignments equivalent under swapping roles 3 and 4 are searched
    only once; ties keep the first assignment in lexicographic order.
    """
    contract_pts = frozenset(contract_pts)
    restrict_pts = frozenset(restrict_pts)
    if len(restrict_pts) != 4:
        raise ValueError("restriction must keep exactly four points")
    if contract_pts & restrict_pts:
        raise ValueError("contracted and restricted points overlap")
    sub, rel = _minor(h, contract_pts, restrict_pts)
    best = None
    best_roles = None
    for perm in permutations((1, 2, 3, 4)):
        if perm.index(3) > perm.index(4):
            continue
        roles = {i + 1: perm[i] for i in range(4)}
        v = zy_value(sub, roles)
        if v < 0 and (best is None or v < best):
            best, best_roles = v, roles
    if best is None:
        return None
    back = {new: old for old, new in rel.items()}
    assignment = tuple(sorted((back[pt], role) for pt, role in best_roles.items()))
    return ZYCertificate(contract_pts, restrict_pts, assignment, best)


def zy_violation_search(h: RankFunction) -> ZYCertificate | None:
    """Search every contract-then-restrict four-point minor of h.

    Returns the minimum-value certificate over all disjoint (X, Y) with
    |Y| = 4 and all role assignments, or None when no minor goes negative.
    Ties keep the first minor in (contraction size, lexicographic) order.
    """
    n = h.degree
    if n < 4:
        raise ValueError(f"need at least four points, have {n}")
    best = None
    for csize in range(0, n - 3):
        for x in combinations(range(1, n + 1), csize):
            rest = [p for p in range(1, n + 1) if p not in x]
            for y in combinations(rest, 4):
                cert = zy_minor_search(h, x, y)
                if cert is not None and (best is None or cert.value < best.value):
                    best = cert
    return best


ALMOST_ENTROPIC = "almost entropic"
NON_ENTROPIC = "non-entropic"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class RayStatus:
    """Outcome of certifying one extreme ray."""

    kind: str
    reason: str
    certificate: ZYCertificate | None = None

    def as_dict(self) -> dict:
        d = {"status": self.kind, "reason": self.reason}
        if self.certificate is not None:
            d["certificate"] = self.certificate.as_dict()
        return d


def certify_ray(structure: OrbitStructure, ray,
                evidence: GFMatrix | None = None) -> RayStatus:
    """Decide the entropicness status of an extreme ray.

    Checks in order: recognition as a uniform matroid (representable, hence
    almost entropic); a supplied matrix whose block ranks must reproduce the
    ray's polymatroid; a Zhang-Yeung violation search over all four-point
    minors. When nothing applies the status is unknown.
    """
    coords = ray.coords if isinstance(ray, OrbitVector) else tuple(ray)
    if len(coords) != len(structure):
        raise ValueError(
            f"need {len(structure)} coordinates, got {len(coords)}")
    prim = primitive(coords)
    n = structure.degree
    for k in range(1, n + 1):
        if prim == primitive(orbit_coords(uniform(k, n), structure)):
            return RayStatus(
                ALMOST_ENTROPIC,
                f"uniform matroid of rank {k} on {n} points (representable)")
    h = expand(structure, prim)
    evidence_failed = False
    if evidence is not None:
        ok, _ = verify_multilinear_rep(evidence, h)
        if ok:
            return RayStatus(
                ALMOST_ENTROPIC,
                f"matrix representation over GF({evidence.p})")
        evidence_failed = True
    cert = zy_violation_search(h)
    if cert is not None:
        return RayStatus(NON_ENTROPIC,
                         f"Zhang-Yeung violation: {cert.describe()}", cert)
    reason = "no certificate found"
    if evidence_failed:
        reason = "supplied matrix does not reproduce the ray; " + reason
    return RayStatus(UNKNOWN, reason)


def fano_rank_function(lines: Sequence, degree: int) -> RankFunction:
    """Rank function min(|A|, 3) dropping by one exactly on the given lines."""
    line_masks = set()
    for ln in lines:
        pts = sorted(ln)
        if len(pts) != 3 or len(set(pts)) != 3:
            raise ValueError(f"line {ln} is not a three-point set")
        if any(not 1 <= p <= degree for p in pts):
            raise ValueError(f"line {ln} outside ground set 1..{degree}")
        line_masks.add(mask_from_points(pts))
    vals = [min(m.bit_count(), 3) - (1 if m in line_masks else 0)
            for m in range(1 << degree)]
    return RankFunction(degree, vals)


def _pair_cover(lines_masks, n: int) -> bool:
    """True when every pair of points lies in exactly one of the lines."""
    count = {}
    for m in lines_masks:
        pts = points_from_mask(m)
        for a, b in combinations(pts, 2):
            key = mask_from_points((a, b))
            count[key] = count.get(key, 0) + 1
    return (len(count) == n * (n - 1) // 2
            and all(c == 1 for c in count.values()))


def fano_sum_decomposition(h: RankFunction):
    """Split h into two line matroids when such a decomposition exists.

    Looks for the triples where h drops below 2*min(|A|,3), partitions them
    into two families each covering every pair of points exactly once, and
    returns the two families as tuples of point-tuples once both induced
    rank functions are matroids summing to h. Returns None otherwise.
    """
    n = h.degree
    deficient = []
    for mask in range(1, 1 << n):
        gap = 2 * min(mask.bit_count(), 3) - h.values[mask]
        if gap == 0:
            continue
        if gap == 1 and mask.bit_count() == 3:
            deficient.append(mask)
        else:
            return None
    deficient.sort()
    all_pairs = [mask_from_points(p) for p in combinations(range(1, n + 1), 2)]

    def extend(chosen, covered):
        if len(covered) == len(all_pairs):
            rest = [m for m in deficient if m not in chosen]
            if not _pair_cover(rest, n):
                return None
            f1 = fano_rank_function([points_from_mask(m) for m in chosen], n)
            f2 = fano_rank_function([points_from_mask(m) for m in rest], n)
            if f1.is_matroid() and f2.is_matroid() and f1 + f2 == h:
                return chosen, rest
            return None
        target = next(p for p in all_pairs if p not in covered)
        for m in deficient:
            if m in chosen or (m & target) != target:
                continue
            new_pairs = [mask_from_points(q)
                         for q in combinations(points_from_mask(m), 2)]
            if any(q in covered for q in new_pairs):
                continue
            got = extend(chosen + [m], covered | set(new_pairs))
            if got is not None:
                return got
        return None

    got = extend([], set())
    if got is None:
        return None
    first, second = got
    return (tuple(points_from_mask(m) for m in sorted(first)),
            tuple(points_from_mask(m) for m in sorted(second)))


@dataclass(frozen=True)
class CertificateFile:
    """A matrix certificate bundled with the package, plus its target ray."""

    name: str
    group: str
    degree: int
    columns: tuple
    ray: tuple
    matrix: GFMatrix
    notes: str = ""
    verified: bool = True


def shipped_certificates(group: str | None = None) -> tuple:
    """Load bundled matrix certificates, optionally for one group only."""
    root = resources.files("symcone.data").joinpath("certs")
    out = []
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if not entry.name.endswith(".json"):
            continue
        d = json.loads(entry.read_text())
        if group is not None and d["group"] != group:
            continue
        out.append(CertificateFile(
            name=entry.name[:-len(".json")],
            group=d["group"],
            degree=int(d["degree"]),
            columns=tuple(d["columns"]),
            ray=tuple(int(v) for v in d["ray"]),
            matrix=GFMatrix.from_dict(d),
            notes=d.get("notes", ""),
            verified=bool(d.get("verified", True)),
        ))
    return tuple(out)


def best_evidence(structure: OrbitStructure, ray, certs) -> GFMatrix | None:
    """Pick, and relabel if necessary, a certificate matrix for the ray.

    A certificate whose recorded coordinates match the ray under the same
    column labels is used as is; otherwise each matrix of the right degree
    is tried under ground relabelings. Certificates flagged as unverified
    are records of findings, not evidence, and are never offered. Every
    returned matrix reproduces the ray's rank function exactly.
    """
    coords = ray.coords if isinstance(ray, OrbitVector) else tuple(ray)
    prim = primitive(coords)
    labels = structure.label_strings()
    h = expand(structure, prim)
    for cf in certs:
        if not cf.verified:
            continue
        if cf.degree == structure.degree and cf.columns == labels and cf.ray == prim:
            ok, _ = verify_multilinear_rep(cf.matrix, h)
            if ok:
                return cf.matrix
    for cf in certs:
        if not cf.verified or cf.degree != structure.degree:
            continue
        found = match_relabeling(cf.matrix, h)
        if found is not None:
            return found
    return None
