"""Extreme-ray enumeration tests.

The double description output is checked three ways: against an exhaustive
row-subset search (an independent oracle), against the shipped reference
tables, and for invariance under the row insertion order.  Random cones
give the oracle comparison breadth beyond the reference fixtures.
"""

import random
from fractions import Fraction

import pytest

from symcone import _kernels as kernels
from symcone.fixtures import (compare_vrep, fixture_names, load_fixture,
                              fixture_structure)
from symcone.orbits import orbit_structure
from symcone.perm import PermGroup
from symcone.polymatroid import orbit_coords, uniform
from symcone.rayenum import (VRep, cross_check_brute, double_description,
                             uniform_ray_indices, verify_extremality)
from symcone.shannon import HRep, build_hrep, primitive


def _sn_structure(n):
    gens = [] if n == 1 else (["(12)"] if n == 2 else
                              ["(12)", "(" + "".join(map(str, range(1, n + 1))) + ")"])
    return orbit_structure(PermGroup.from_gen_strings(gens, n))


def _fixture_hrep(name):
    return build_hrep(fixture_structure(load_fixture(name)))


def _uniform_coords(structure):
    n = structure.degree
    return sorted(primitive(orbit_coords(uniform(k, n), structure))
                  for k in range(1, n + 1))


def test_toy_quadrant():
    """The positive quadrant has the two unit vectors as its rays."""
    st = _sn_structure(2)
    h = HRep(st, ((0, 1), (1, 0)))
    v = double_description(h)
    assert v.coords() == ((0, 1), (1, 0))
    assert cross_check_brute(h).coords() == v.coords()
    assert v.tight == (frozenset({1}), frozenset({0}))


def test_simplicial_cone_rays_read_off_the_inverse():
    st = _sn_structure(3)
    h = HRep(st, ((0, 1, 1), (1, 0, 1), (1, 1, 0)))
    v = double_description(h)
    # inverse of the all-ones-minus-identity matrix, column by column
    assert v.coords() == ((-1, 1, 1), (1, -1, 1), (1, 1, -1))
    assert cross_check_brute(h).coords() == v.coords()


def test_full_symmetric_cone_rays_are_the_uniform_matroids():
    for n in range(2, 8):
        st = _sn_structure(n)
        v = double_description(build_hrep(st))
        assert v.coords() == tuple(_uniform_coords(st))


def test_fixture_ray_and_uniform_counts():
    """Ray counts for the six reference cones, with how many are uniform."""
    expected = {
        "psl2_5": (8, 6),
        "s3wr2c2": (19, 6),
        "s2wr3s3": (17, 6),
        "agl1_7": (13, 7),
        "pgl3_2": (13, 7),
        "s1xpsl2_5": (72, 6),
    }
    for name, (nrays, nuni) in expected.items():
        v = double_description(_fixture_hrep(name))
        assert len(v) == nrays, name
        uni = uniform_ray_indices(v)
        assert len(uni) == nuni, name
        assert sorted(uni.values()) == list(range(1, nuni + 1)), name


def test_psl2_5_nonuniform_rays():
    """The two non-uniform rays of the degree-6 cone with 7 orbits."""
    v = double_description(_fixture_hrep("psl2_5"))
    uni = uniform_ray_indices(v)
    extra = {r.coords for i, r in enumerate(v.rays) if i not in uni}
    assert extra == {(2, 4, 5, 6, 6, 6, 6), (2, 4, 6, 5, 6, 6, 6)}


def test_dd_matches_brute_oracle_on_fixtures():
    for name in fixture_names():
        h = _fixture_hrep(name)
        if h.dim > 9:
            continue
        v = double_description(h)
        b = cross_check_brute(h)
        assert v.coords() == b.coords(), name
        assert v.tight == b.tight, name


@pytest.mark.slow
def test_support_scan_matches_dd_in_dimension_15():
    """Exhaustive rank-14 row-subset scan of the largest fixture cone.

    The scan visits every 14-subset of the 28 inequality rows, so it is
    the same oracle as cross_check_brute without the dimension cap.  Pure
    Python would take hours here, hence the compiled-backend gate.
    """
    if kernels.BACKEND != "compiled":
        pytest.skip("needs the compiled kernel backend")
    h = _fixture_hrep("s1xpsl2_5")
    assert h.dim == 15
    v = double_description(h)
    scan = kernels.brute_rays(h.rows, h.dim)
    assert tuple(scan) == v.coords()


def test_dd_invariant_under_insertion_order():
    rng = random.Random(211)
    for name in fixture_names():
        h = _fixture_hrep(name)
        base = double_description(h)
        for _ in range(3):
            order = list(range(len(h.rows)))
            rng.shuffle(order)
            again = double_description(h, order=order)
            assert again.coords() == base.coords(), name
            assert again.tight == base.tight, name


def test_dd_rejects_bad_order_argument():
    h = _fixture_hrep("psl2_5")
    with pytest.raises(ValueError):
        double_description(h, order=[0, 1, 2])
    with pytest.raises(ValueError):
        double_description(h, order=[0] * len(h.rows))


def test_dd_rejects_unpointed_cone():
    st = _sn_structure(3)
    h = HRep(st, ((0, 1, 1), (1, 0, 1)))
    with pytest.raises(ValueError):
        double_description(h)


def test_brute_dimension_cap():
    h = _fixture_hrep("s1xpsl2_5")
    with pytest.raises(ValueError):
        cross_check_brute(h)


def test_verify_extremality():
    h = _fixture_hrep("psl2_5")
    v = double_description(h)
    st = h.structure
    for r in v.rays:
        assert verify_extremality(h, r)
    # interior point of a 2-face: the sum of two distinct rays
    a, b = v.coords()[0], v.coords()[1]
    assert not verify_extremality(h, tuple(x + y for x, y in zip(a, b)))
    assert not verify_extremality(h, (0,) * h.dim)
    with pytest.raises(ValueError):
        verify_extremality(h, (-1,) * h.dim)
    # scaling does not change the verdict, fractions included
    r = v.coords()[3]
    assert verify_extremality(h, tuple(Fraction(x, 7) for x in r))


def test_vrep_validation():
    h = _fixture_hrep("psl2_5")
    v = double_description(h)
    coords = list(v.coords())
    tight = list(v.tight)
    with pytest.raises(ValueError):
        VRep(h, tuple(coords), tuple(tight[1:]))      # length mismatch
    with pytest.raises(ValueError):
        VRep(h, tuple(coords[1:] + coords[:1]), tuple(tight[1:] + tight[:1]))
    doubled = [tuple(2 * x for x in coords[0])] + coords[1:]
    with pytest.raises(ValueError):
        VRep(h, tuple(doubled), tuple(tight))         # not primitive
    wrong_tight = [frozenset({0})] + tight[1:]
    with pytest.raises(ValueError):
        VRep(h, tuple(coords), tuple(wrong_tight))
    # a feasible non-extreme point fails the rank requirement
    mid = primitive(tuple(x + y for x, y in zip(coords[0], coords[1])))
    bad = sorted(coords + [mid])
    bad_tight = [h.tight_rows(c) for c in bad]
    with pytest.raises(ValueError):
        VRep(h, tuple(bad), tuple(bad_tight))


def test_tight_sets_have_rank_dimension_minus_one():
    """Recompute every tight set and its rank with plain fractions."""
    for name in ("psl2_5", "agl1_7"):
        h = _fixture_hrep(name)
        v = double_description(h)
        for vec, t in zip(v.coords(), v.tight):
            slacks = h.slacks(vec)
            assert frozenset(i for i, s in enumerate(slacks) if s == 0) == t
            assert all(s >= 0 for s in slacks)
            mat = [[Fraction(x) for x in h.rows[i]] for i in sorted(t)]
            rank = 0
            for col in range(h.dim):
                piv = next((r for r in range(rank, len(mat)) if mat[r][col]), None)
                if piv is None:
                    continue
                mat[rank], mat[piv] = mat[piv], mat[rank]
                inv = 1 / mat[rank][col]
                mat[rank] = [x * inv for x in mat[rank]]
                for r in range(len(mat)):
                    if r != rank and mat[r][col]:
                        f = mat[r][col]
                        mat[r] = [a - f * b for a, b in zip(mat[r], mat[rank])]
                rank += 1
            assert rank == h.dim - 1


def test_rays_are_nonnegative_in_every_coordinate():
    for name in fixture_names():
        v = double_description(_fixture_hrep(name))
        for vec in v.coords():
            assert min(vec) >= 0, name


def test_random_cones_match_brute_oracle():
    """Double description against the subset-search oracle on random cones."""
    rng = random.Random(3061)
    agree = 0
    for trial in range(220):
        d = rng.randint(3, 5)
        st = _sn_structure(d)
        rows = set()
        while len(rows) < d + rng.randint(0, 5):
            cand = tuple(rng.randint(-3, 3) for _ in range(d))
            if any(cand):
                rows.add(primitive(cand))
        rows = tuple(sorted(rows))
        if kernels.int_rank(rows) < d:
            continue
        h = HRep(st, rows)
        v = double_description(h)
        b = cross_check_brute(h)
        assert v.coords() == b.coords(), (trial, rows)
        assert v.tight == b.tight
        agree += 1
        for vec in v.coords():
            assert verify_extremality(h, vec)
    assert agree >= 180


def test_vrep_as_dict_roundtrip():
    v = double_description(_fixture_hrep("psl2_5"))
    d = v.as_dict()
    assert d["degree"] == 6
    assert len(d["columns"]) == 7
    assert d["rays"] == [list(r) for r in v.coords()]
    assert d["tight_rows"] == [sorted(t) for t in v.tight]


def test_compare_vrep_matching_fixtures():
    """Four reference tables list exactly the computed rays."""
    for name in ("psl2_5", "s3wr2c2", "pgl3_2"):
        cmp = compare_vrep(name)
        assert cmp.equal, cmp.lines()
        assert cmp.label_swaps == ()
        assert cmp.projection is None
    cmp = compare_vrep("s1xpsl2_5")
    assert cmp.equal, cmp.lines()
    assert cmp.computed_count == 72
    assert "O(234567)" in cmp.projection


def test_compare_vrep_diagnoses_altered_rows():
    """The two tables with corrupted value rows are itemized, not hidden.

    One table repeats a ray at double scale with a digit changed; the
    other overwrote one column of every numeric row with its neighbor.
    Each altered row violates the inequalities, so none of them can be a
    ray, and the diagnosis says so.
    """
    cmp = compare_vrep("s2wr3s3")
    assert not cmp.equal
    assert cmp.computed_only == frozenset()
    assert cmp.printed_only == {(2, 4, 2, 5, 4, 6, 4, 6, 6)}
    assert len(cmp.diagnoses) == 1
    assert "2 x computed ray" in cmp.diagnoses[0]
    assert "O(123)" in cmp.diagnoses[0]
    assert "not in the cone" in cmp.diagnoses[0]

    cmp = compare_vrep("agl1_7")
    assert not cmp.equal
    assert len(cmp.printed_only) == 6
    assert cmp.computed_only == {
        (2, 4, 5, 6, 6, 6, 6, 6, 6),
        (2, 4, 6, 5, 6, 6, 6, 6, 6),
        (2, 4, 6, 6, 7, 8, 8, 8, 8),
        (2, 4, 6, 6, 8, 7, 8, 8, 8),
        (3, 6, 8, 9, 10, 9, 10, 10, 10),
        (3, 6, 9, 8, 10, 11, 11, 11, 11),
    }
    for line in cmp.diagnoses:
        assert "O(123)" in line
        assert "not in the cone" in line


def test_uniform_ray_indices_map_is_correct():
    for name in ("psl2_5", "agl1_7"):
        v = double_description(_fixture_hrep(name))
        st = v.structure
        for idx, k in uniform_ray_indices(v).items():
            expect = primitive(orbit_coords(uniform(k, st.degree), st))
            assert v.coords()[idx] == expect
