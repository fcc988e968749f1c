"""Finite-field matrix evidence and Zhang-Yeung violation certificates."""

import random
from itertools import combinations

import pytest

from symcone.certificates import (
    ALMOST_ENTROPIC,
    NON_ENTROPIC,
    UNKNOWN,
    GFMatrix,
    ZYCertificate,
    best_evidence,
    certify_ray,
    fano_rank_function,
    fano_sum_decomposition,
    gf_rank,
    induced_rank,
    kernel_representation,
    match_relabeling,
    shipped_certificates,
    verify_multilinear_rep,
    zy_minor_search,
    zy_value,
    zy_violation_search,
)
from symcone.fixtures import fixture_structure, load_fixture
from symcone.polymatroid import (
    RankFunction,
    contract,
    dual,
    expand,
    from_cases,
    orbit_coords,
    restrict,
    uniform,
)
from symcone.shannon import primitive
from util import random_polymatroid


def _structure(name):
    return fixture_structure(load_fixture(name))


def _cert(name, group=None):
    for cf in shipped_certificates(group):
        if cf.name == name:
            return cf
    raise AssertionError(f"no shipped certificate named {name}")


def _h2_tilde():
    # Contract {6} then restrict to {1,2,3,4} of the degree-6 wreath ray:
    # singletons 2, pairs 3 except {1,4} at 4, larger sets 4.
    return from_cases(4, [
        (lambda a: len(a) == 1, 2),
        (lambda a: a == frozenset({1, 4}), 4),
        (lambda a: len(a) == 2, 3),
        (lambda a: True, 4),
    ])


def _ray_function(name):
    fx = load_fixture(name)
    st = fixture_structure(fx)
    coords = tuple(fx["zy_target"]["ray"])
    return st, expand(st, coords), fx["zy_target"]


def test_gfmatrix_validation():
    with pytest.raises(ValueError):
        GFMatrix(4, ((1, 0), (0, 1)), ((0,), (1,)))  # modulus not prime
    with pytest.raises(ValueError):
        GFMatrix(2, ((1, 0), (0,)), ((0,), (1,)))  # ragged rows
    with pytest.raises(ValueError):
        GFMatrix(2, ((1, 2),), ((0,), (1,)))  # entry outside the field
    with pytest.raises(ValueError):
        GFMatrix(2, ((1, 0),), ((0,),))  # blocks miss a column
    with pytest.raises(ValueError):
        GFMatrix(2, ((1, 0),), ((0, 0), (1,)))  # duplicated column
    m = GFMatrix(5, ((1, 2, 3), (0, 4, 1)), ((0, 2), (1,)))
    assert m.rows == 2 and m.cols == 3 and m.degree == 2
    assert m.block_columns([2, 1]) == (0, 1, 2)
    with pytest.raises(ValueError):
        m.block_columns([3])
    with pytest.raises(ValueError):
        m.permuted({1: 1, 2: 1})
    swapped = m.permuted({1: 2, 2: 1})
    assert swapped.blocks == ((1,), (0, 2))
    assert GFMatrix.from_dict(m.as_dict()).entries == m.entries


def test_gf_rank_small_cases():
    ident = GFMatrix(2, ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
                     ((0,), (1,), (2,)))
    assert gf_rank(ident, [0, 1, 2]) == 3
    assert gf_rank(ident, [1]) == 1
    assert gf_rank(ident, []) == 0
    zero = GFMatrix(3, ((0, 0),), ((0,), (1,)))
    assert gf_rank(zero, [0, 1]) == 0
    with pytest.raises(ValueError):
        gf_rank(ident, [5])
    # column 2 is 7 times column 0 mod 11 (7*2 = 14 = 3), hence dependent
    m = GFMatrix(11, ((1, 0, 7), (2, 1, 3)), ((0,), (1,), (2,)))
    assert gf_rank(m, [0, 2]) == 1
    m2 = GFMatrix(11, ((1, 0, 7), (2, 1, 4)), ((0,), (1,), (2,)))
    assert gf_rank(m2, [0, 2]) == 2


def test_induced_rank_uniform():
    ident = GFMatrix(2, ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
                     ((0,), (1,), (2,)))
    assert induced_rank(ident).values == uniform(3, 3).values
    fano = GFMatrix(
        2,
        ((0, 1, 0, 1, 1, 1, 0),
         (1, 0, 1, 1, 1, 0, 0),
         (0, 0, 1, 0, 1, 1, 1)),
        tuple((i,) for i in range(7)))
    h = induced_rank(fano)
    assert h.is_matroid()
    lines = [c for c in combinations(range(1, 8), 3) if h.of(c) == 2]
    assert len(lines) == 7


def test_kernel_representation_properties():
    rng = random.Random(20260817)
    for _ in range(40):
        p = rng.choice([2, 3, 5])
        rows = rng.randint(1, 4)
        cols = rng.randint(rows + 1, 7)
        entries = tuple(tuple(rng.randrange(p) for _ in range(cols))
                        for _ in range(rows))
        blocks = tuple((i,) for i in range(cols))
        m = GFMatrix(p, entries, blocks)
        r = gf_rank(m, range(cols))
        try:
            k = kernel_representation(m)
        except ValueError:
            assert r == cols
            continue
        assert k.rows == cols - r
        assert gf_rank(k, range(cols)) == cols - r
        # every kernel row is orthogonal to every matrix row
        for krow in k.entries:
            for mrow in m.entries:
                assert sum(a * b for a, b in zip(krow, mrow)) % p == 0
    full = GFMatrix(2, ((1, 0), (0, 1)), ((0,), (1,)))
    with pytest.raises(ValueError):
        kernel_representation(full)


def test_kernel_gives_dual_rank_function():
    # With one independent column per point the kernel induces the dual.
    rng = random.Random(7)
    done = 0
    for _ in range(300):
        if done == 25:
            break
        p = rng.choice([2, 3])
        n = rng.randint(3, 6)
        rows = rng.randint(1, n - 1)
        entries = tuple(tuple(rng.randrange(p) for _ in range(n))
                        for _ in range(rows))
        m = GFMatrix(p, entries, tuple((i,) for i in range(n)))
        h = induced_rank(m)
        if any(h.values[1 << i] == 0 for i in range(n)):
            continue  # zero column: not a loopless representation
        k = kernel_representation(m)
        assert induced_rank(k).values == dual(h).values
        done += 1
    assert done == 25


def test_gf11_matrix_verifies_degree6_ray():
    cf = _cert("psl2_5_m1")
    assert cf.group == "PSL2(5)" and cf.matrix.p == 11 and cf.verified
    st = _structure("psl2_5")
    h = expand(st, cf.ray)
    ok, bad = verify_multilinear_rep(cf.matrix, h)
    assert ok and bad is None
    # spot check the claim subset by subset as well
    for k in range(1, 7):
        for sub in combinations(range(1, 7), k):
            cols = cf.matrix.block_columns(sub)
            assert gf_rank(cf.matrix, cols) == h.of(sub)


def test_printed_gf2_matrices():
    st = _structure("agl1_7")
    m1 = _cert("agl1_7_m1")
    assert m1.ray == (2, 4, 5, 6, 6, 6, 6, 6, 6) and m1.verified
    h1m = expand(st, m1.ray)
    ok, _ = verify_multilinear_rep(m1.matrix, h1m)
    assert not ok  # the listing labels points in a different order
    rel = match_relabeling(m1.matrix, h1m)
    assert rel is not None
    # the relabeling is the cycle (4 5 6) on ground points
    assert rel.blocks == ((0, 1), (2, 3), (4, 5), (10, 11), (6, 7), (8, 9),
                          (12, 13))
    ok, _ = verify_multilinear_rep(rel, h1m)
    assert ok

    for name, ray in (("agl1_7_m3", (3, 6, 8, 9, 10, 9, 10, 10, 10)),
                      ("agl1_7_m4", (3, 6, 9, 8, 10, 11, 11, 11, 11))):
        cf = _cert(name)
        assert cf.ray == ray and cf.verified
        ok, bad = verify_multilinear_rep(cf.matrix, expand(st, ray))
        assert ok, (name, bad)


def test_garbled_gf2_listing_is_flagged():
    # The 8x14 listing does not reproduce its ray: three triples have rank 5
    # where every cone ray needs 6. It ships as a finding, not as evidence.
    st = _structure("agl1_7")
    cf = _cert("agl1_7_m2")
    assert not cf.verified
    assert cf.ray == (2, 4, 6, 6, 7, 8, 8, 8, 8)
    h = induced_rank(cf.matrix)
    bad3 = sorted(c for c in combinations(range(1, 8), 3) if h.of(c) == 5)
    assert bad3 == [(1, 2, 7), (3, 4, 7), (3, 5, 7)]
    assert match_relabeling(cf.matrix, expand(st, cf.ray)) is None
    mirror = (2, 4, 6, 6, 8, 7, 8, 8, 8)
    assert match_relabeling(cf.matrix, expand(st, mirror)) is None


def test_kernel_duality_of_shipped_listings():
    st = _structure("agl1_7")
    m1 = _cert("agl1_7_m1").matrix
    m7 = _cert("agl1_7_m7")
    assert m7.verified and m7.ray == (2, 4, 6, 6, 7, 8, 8, 8, 8)
    assert induced_rank(m7.matrix).values == dual(induced_rank(m1)).values
    assert match_relabeling(m7.matrix, expand(st, m7.ray)) is not None
    # cross check: the kernel of the 10x21 listing verifies the 11-rank ray
    k3 = kernel_representation(_cert("agl1_7_m3").matrix)
    ok, _ = verify_multilinear_rep(
        k3, expand(st, (3, 6, 9, 8, 10, 11, 11, 11, 11)))
    assert ok


def test_nonuniform_ray_duality_pairing():
    st = _structure("agl1_7")
    pairs = [
        ((2, 4, 6, 5, 6, 6, 6, 6, 6), (2, 4, 6, 6, 8, 7, 8, 8, 8)),
        ((2, 4, 5, 6, 6, 6, 6, 6, 6), (2, 4, 6, 6, 7, 8, 8, 8, 8)),
        ((3, 6, 8, 9, 10, 9, 10, 10, 10), (3, 6, 9, 8, 10, 11, 11, 11, 11)),
    ]
    for a, b in pairs:
        ha, hb = expand(st, a), expand(st, b)
        assert dual(ha).values == hb.values
        assert dual(hb).values == ha.values


def test_fano_sum_decomposition_frozen():
    st = _structure("agl1_7")
    h1 = expand(st, (2, 4, 6, 5, 6, 6, 6, 6, 6))
    dec = fano_sum_decomposition(h1)
    assert dec is not None
    lines1, lines2 = dec
    assert lines1 == ((1, 2, 4), (2, 3, 5), (3, 4, 6), (1, 5, 6), (1, 3, 7),
                      (4, 5, 7), (2, 6, 7))
    assert lines2 == ((1, 3, 4), (2, 4, 5), (1, 2, 6), (3, 5, 6), (2, 3, 7),
                      (1, 5, 7), (4, 6, 7))
    # both families are cyclic translates: x -> x + 1 mod 7 maps each onto
    # itself, and the two families partition the 14-member triple orbit
    def _shift(line):
        return tuple(sorted(p % 7 + 1 for p in line))
    for fam in (lines1, lines2):
        shifted = {tuple(sorted(_shift(l))) for l in fam}
        assert shifted == {tuple(sorted(l)) for l in fam}
    f1 = fano_rank_function(lines1, 7)
    f2 = fano_rank_function(lines2, 7)
    assert f1.is_matroid() and f2.is_matroid()
    assert (f1 + f2).values == h1.values


def test_rank_plus_rank_equals_degree7_ray():
    st = _structure("agl1_7")
    h2 = expand(st, (2, 4, 6, 6, 8, 7, 8, 8, 8))
    r1_sets = (frozenset({1, 2, 3, 5}), frozenset({1, 2, 4, 7}),
               frozenset({1, 3, 6, 7}), frozenset({1, 4, 5, 6}),
               frozenset({2, 3, 4, 6}), frozenset({2, 5, 6, 7}),
               frozenset({3, 4, 5, 7}))
    r2_sets = (frozenset({1, 2, 3, 6}), frozenset({1, 2, 5, 7}),
               frozenset({1, 3, 4, 5}), frozenset({1, 4, 6, 7}),
               frozenset({2, 3, 4, 7}), frozenset({2, 4, 5, 6}),
               frozenset({3, 5, 6, 7}))

    def _rank(sets):
        return from_cases(7, [
            (lambda a: len(a) == 1, 1),
            (lambda a: len(a) == 2, 2),
            (lambda a, s=sets: len(a) == 3 or a in s, 3),
            (lambda a: True, 4),
        ])

    r1, r2 = _rank(r1_sets), _rank(r2_sets)
    assert r1.is_matroid() and r2.is_matroid()
    assert (r1 + r2).values == h2.values
    # the two dependent-set families partition one 14-member 4-set orbit
    orbit = st.orbit_of(sum(1 << (p - 1) for p in (1, 2, 3, 5)))
    members = {frozenset(_points(m)) for m in st.orbits[orbit]}
    assert members == set(r1_sets) | set(r2_sets)
    assert not set(r1_sets) & set(r2_sets)
    # the complements of the dependent sets are the two line families
    dec = fano_sum_decomposition(expand(st, (2, 4, 6, 5, 6, 6, 6, 6, 6)))
    lines1, lines2 = dec
    comp1 = {frozenset(range(1, 8)) - s for s in r1_sets}
    assert comp1 == {frozenset(l) for l in lines2}


def _points(mask):
    return [i + 1 for i in range(7) if mask >> i & 1]


def test_zy_value_anchors():
    h = _h2_tilde()
    assert zy_value(h, {1: 1, 4: 2, 2: 3, 3: 4}) == -1
    assert zy_value(h, {1: 1, 4: 2, 2: 4, 3: 3}) == -1  # roles 3,4 symmetric
    assert zy_value(uniform(2, 4), {i: i for i in range(1, 5)}) == 5
    assert zy_value(RankFunction(4, [0] * 16), {i: i for i in range(1, 5)}) == 0
    with pytest.raises(ValueError):
        zy_value(uniform(2, 3), {1: 1, 2: 2, 3: 3})  # needs degree 4
    with pytest.raises(ValueError):
        zy_value(uniform(2, 4), {1: 1, 2: 2, 3: 3, 4: 3})  # roles collide


def test_zy_value_linearity_and_symmetry():
    rng = random.Random(31415)
    roles = {1: 1, 2: 2, 3: 3, 4: 4}
    swapped = {1: 1, 2: 2, 3: 4, 4: 3}
    for _ in range(60):
        g = random_polymatroid(rng, 4)
        k = random_polymatroid(rng, 4)
        assert zy_value(g, roles) >= 0  # entropic family: never violated
        assert zy_value(g, roles) == zy_value(g, swapped)
        assert zy_value(3 * g, roles) == 3 * zy_value(g, roles)
        assert zy_value(g + k, roles) == zy_value(g, roles) + zy_value(k, roles)


def test_zy_certificate_validation():
    good = ZYCertificate(frozenset({5}), frozenset({1, 2, 3, 4}),
                         ((1, 1), (2, 2), (3, 3), (4, 4)), -1)
    assert good.roles == {1: 1, 2: 2, 3: 3, 4: 4}
    assert "contract {5}" in good.describe()
    assert good.as_dict()["value"] == "-1"
    with pytest.raises(ValueError):
        ZYCertificate(frozenset({1}), frozenset({1, 2, 3, 4}),
                      ((1, 1), (2, 2), (3, 3), (4, 4)), -1)  # overlap
    with pytest.raises(ValueError):
        ZYCertificate(frozenset(), frozenset({1, 2, 3}),
                      ((1, 1), (2, 2), (3, 3)), -1)  # not four points
    with pytest.raises(ValueError):
        ZYCertificate(frozenset(), frozenset({1, 2, 3, 4}),
                      ((1, 1), (2, 2), (3, 3), (4, 4)), 0)  # not negative
    with pytest.raises(ValueError):
        ZYCertificate(frozenset(), frozenset({1, 2, 3, 4}),
                      ((1, 1), (2, 1), (3, 3), (4, 4)), -1)  # roles collide


def test_named_minor_searches():
    expected_roles = {
        "s3wr2c2": ((1, 1), (2, 3), (3, 4), (4, 2)),
        "s2wr3s3": ((2, 1), (3, 3), (4, 4), (5, 2)),
        "pgl3_2": ((2, 3), (3, 1), (4, 2), (5, 4)),
        "s1xpsl2_5": ((1, 3), (3, 1), (4, 4), (5, 2)),
    }
    for name, roles in expected_roles.items():
        st, h, target = _ray_function(name)
        cert = zy_minor_search(h, target["contract"], target["restrict"])
        assert cert is not None, name
        assert cert.value == -1, name
        assert cert.contract_set == frozenset(target["contract"])
        assert cert.restrict_set == frozenset(target["restrict"])
        assert cert.role_assignment == roles, name
        assert cert.verify(h)


def test_global_violation_searches():
    frozen = {
        "s3wr2c2": (frozenset({1}), frozenset({2, 3, 4, 6})),
        "s2wr3s3": (frozenset(), frozenset({1, 2, 3, 4})),
        "pgl3_2": (frozenset({1}), frozenset({2, 3, 4, 5})),
        "s1xpsl2_5": (frozenset({2}), frozenset({1, 3, 4, 5})),
    }
    for name, (con, res) in frozen.items():
        st, h, _ = _ray_function(name)
        cert = zy_violation_search(h)
        assert cert is not None, name
        assert cert.value == -1, name
        assert (cert.contract_set, cert.restrict_set) == (con, res), name
        assert cert.verify(h)


def test_zy_search_degree4_and_errors():
    h = _h2_tilde()
    cert = zy_violation_search(h)
    assert cert is not None and cert.value == -1
    assert cert.contract_set == frozenset()
    with pytest.raises(ValueError):
        zy_violation_search(uniform(2, 3))
    assert zy_minor_search(uniform(3, 6), [], [1, 2, 3, 4]) is None


def test_no_violation_on_representable():
    rng = random.Random(424242)
    assert zy_violation_search(uniform(3, 6)) is None
    for _ in range(30):
        p = rng.choice([2, 3])
        n = rng.randint(4, 5)
        rows = rng.randint(2, 4)
        entries = tuple(tuple(rng.randrange(p) for _ in range(n))
                        for _ in range(rows))
        m = GFMatrix(p, entries, tuple((i,) for i in range(n)))
        assert zy_violation_search(induced_rank(m)) is None


def test_certify_ray_statuses():
    st6 = _structure("psl2_5")
    uni = orbit_coords(uniform(3, 6), st6)
    status = certify_ray(st6, uni)
    assert status.kind == ALMOST_ENTROPIC and "uniform" in status.reason

    cf = _cert("psl2_5_m1")
    status = certify_ray(st6, cf.ray, evidence=cf.matrix)
    assert status.kind == ALMOST_ENTROPIC and "GF(11)" in status.reason

    st, h4, target = _ray_function("pgl3_2")
    status = certify_ray(st, tuple(target["ray"]))
    assert status.kind == NON_ENTROPIC
    assert status.certificate is not None and status.certificate.verify(h4)

    st7 = _structure("agl1_7")
    status = certify_ray(st7, (2, 4, 6, 5, 6, 6, 6, 6, 6))
    assert status.kind == UNKNOWN  # representable, but no evidence supplied

    wrong = _cert("agl1_7_m2").matrix
    status = certify_ray(st7, (2, 4, 6, 6, 7, 8, 8, 8, 8), evidence=wrong)
    assert status.kind == UNKNOWN
    assert "does not reproduce" in status.reason

    with pytest.raises(ValueError):
        certify_ray(st7, (1, 2, 3))


def test_shipped_certificates_and_coverage():
    all_certs = shipped_certificates()
    assert len(all_certs) == 8
    assert [cf.verified for cf in all_certs].count(False) == 1
    agl = shipped_certificates("AGL1(7)")
    assert {cf.name for cf in agl} == {f"agl1_7_m{i}" for i in range(1, 8)}
    assert shipped_certificates("PSL2(5)")[0].name == "psl2_5_m1"
    assert shipped_certificates("nonexistent") == ()

    # every non-uniform ray of both groups has working evidence on file
    for gname, fname, nonuni in (
        ("PSL2(5)", "psl2_5",
         [(2, 4, 5, 6, 6, 6, 6), (2, 4, 6, 5, 6, 6, 6)]),
        ("AGL1(7)", "agl1_7",
         [(2, 4, 5, 6, 6, 6, 6, 6, 6), (2, 4, 6, 5, 6, 6, 6, 6, 6),
          (2, 4, 6, 6, 7, 8, 8, 8, 8), (2, 4, 6, 6, 8, 7, 8, 8, 8),
          (3, 6, 8, 9, 10, 9, 10, 10, 10),
          (3, 6, 9, 8, 10, 11, 11, 11, 11)]),
    ):
        st = _structure(fname)
        certs = shipped_certificates(gname)
        for ray in nonuni:
            ev = best_evidence(st, ray, certs)
            assert ev is not None, (gname, ray)
            ok, _ = verify_multilinear_rep(ev, expand(st, ray))
            assert ok, (gname, ray)
            assert certify_ray(st, ray, evidence=ev).kind == ALMOST_ENTROPIC


def test_best_evidence_relabels_mirror_ray():
    st = _structure("psl2_5")
    certs = shipped_certificates("PSL2(5)")
    mirror = (2, 4, 6, 5, 6, 6, 6)
    ev = best_evidence(st, mirror, certs)
    assert ev is not None and ev.p == 11
    assert ev.blocks != certs[0].matrix.blocks  # genuinely relabeled
    ok, _ = verify_multilinear_rep(ev, expand(st, mirror))
    assert ok


def test_match_relabeling_basics():
    ident = GFMatrix(2, ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
                     ((0,), (1,), (2,)))
    h = induced_rank(ident)
    assert match_relabeling(ident, h) is ident  # identity fast path
    m = GFMatrix(2, ((1, 1, 0), (0, 1, 0)), ((0,), (1,), (2,)))
    g = induced_rank(m)
    # relabel the target by the cycle (1 2 3) and ask for the permutation
    perm_vals = [0] * 8
    cyc = {1: 2, 2: 3, 3: 1}
    for mask in range(8):
        tgt = 0
        for i in range(3):
            if mask >> i & 1:
                tgt |= 1 << (cyc[i + 1] - 1)
        perm_vals[tgt] = g.values[mask]
    moved = match_relabeling(m, RankFunction(3, perm_vals))
    assert moved is not None
    assert moved.blocks == ((2,), (0,), (1,))
    assert match_relabeling(ident, uniform(2, 3)) is None


def test_verify_multilinear_rep_reports_first_mismatch():
    ident = GFMatrix(2, ((1, 0), (0, 1)), ((0,), (1,)))
    ok, bad = verify_multilinear_rep(ident, uniform(1, 2))
    assert not ok and bad == frozenset({1, 2})
    ok, bad = verify_multilinear_rep(ident, RankFunction(2, [0, 2, 1, 2]))
    assert not ok and bad == frozenset({1})
    with pytest.raises(ValueError):
        verify_multilinear_rep(ident, uniform(1, 3))


def test_fano_rank_function_validation():
    with pytest.raises(ValueError):
        fano_rank_function([(1, 2)], 7)
    with pytest.raises(ValueError):
        fano_rank_function([(1, 2, 9)], 7)
    h = fano_rank_function([(1, 2, 3)], 4)
    assert h.of([1, 2, 3]) == 2 and h.of([1, 2, 4]) == 3


def test_fano_sum_decomposition_rejections():
    st = _structure("agl1_7")
    # h2 has pair gaps of 2: not a sum of two Fano-profile matroids
    h2 = expand(st, (2, 4, 6, 6, 8, 7, 8, 8, 8))
    assert fano_sum_decomposition(h2) is None
    assert fano_sum_decomposition(2 * uniform(3, 7)) is None


def test_zy_minors_commute_with_search():
    # a certificate found on the full function can be replayed on the minor
    rng = random.Random(99)
    st, h, target = _ray_function("s3wr2c2")
    cert = zy_violation_search(h)
    inner, cmap = contract(h, sorted(cert.contract_set))
    keep = sorted(cmap[p] for p in cert.restrict_set)
    sub, rmap = restrict(inner, keep)
    roles = {rmap[cmap[p]]: r for p, r in cert.role_assignment}
    assert zy_value(sub, roles) == cert.value
    for _ in range(10):
        g = random_polymatroid(rng, rng.randint(4, 6))
        found = zy_violation_search(g)
        assert found is None  # the family is entropic by construction
