import itertools

import pytest

from clubcat.errors import InputError
from clubcat.simpset import (MonotoneMap, NormalForm, all_monotone_maps,
                             apply_operator, boundary, compose_maps,
                             degeneracy_map, diag, disjoint_union,
                             enumerate_smaps, external_product_bisimplicial,
                             ez_factor, face_map, horn, identity_map,
                             identity_smap, is_injective, is_kan_fibration,
                             iso_sset, nf_id, nondeg, one_point, product,
                             simplex_category, smap_functor, standard_simplex,
                             surjections, SimplicialMap, validate_bisimplicial,
                             validate_smap, validate_sset)
from clubcat.fincat import validate_category, validate_functor


# ---------------------------------------------------------------------------
# monotone maps and EZ factorization

def test_ez_factor_identity():
    i = identity_map(3)
    d, s = ez_factor(i)
    assert d.is_identity() and s.is_identity()


def test_ez_factor_surjection():
    t = degeneracy_map(1, 0)   # [2] ->> [1]
    d, s = ez_factor(t)
    assert d.is_identity()
    assert s == t


def test_ez_factor_example_and_uniqueness():
    theta = MonotoneMap(2, [0, 0, 2])
    d, s = ez_factor(theta)
    assert d.values == (0, 2)
    assert s.values == (0, 0, 1)
    assert compose_maps(d, s) == theta
    # uniqueness by enumeration: any injective∘surjective factorization agrees
    found = []
    for mid in range(3):
        for dv in itertools.combinations(range(3), mid + 1):
            dcand = MonotoneMap(2, dv)
            for scand in surjections(2, mid):
                if compose_maps(dcand, scand) == theta:
                    found.append((dcand, scand))
    assert found == [(d, s)]


def test_surjection_counts():
    # #surj([m] ->> [j]) = C(m, m-j)
    from math import comb
    for m in range(5):
        for j in range(m + 1):
            assert len(surjections(m, j)) == comb(m, m - j)


# ---------------------------------------------------------------------------
# standard complexes and operators

def test_standard_simplex_counts():
    from math import comb
    d2 = standard_simplex(2, 3)
    assert validate_sset(d2) == []
    assert [len(d2.nondeg[k]) for k in range(4)] == [3, 3, 1, 0]
    for k in range(3):
        assert len(d2.nondeg[k]) == comb(3, k + 1)


def test_apply_identity_is_noop():
    d2 = standard_simplex(2, 2)
    x = nondeg("012", 2)
    assert apply_operator(d2, x, identity_map(2)) == x


def test_faces_of_top_simplex():
    d2 = standard_simplex(2, 2)
    x = nondeg("012", 2)
    got = [apply_operator(d2, x, face_map(2, i)) for i in range(3)]
    assert [nf_id(nf) for nf in got] == ["12", "02", "01"]


def test_degenerate_of_degenerate_composes():
    d1 = standard_simplex(1, 3)
    e = nondeg("01", 1)
    s0e = apply_operator(d1, e, degeneracy_map(1, 0))
    assert s0e == NormalForm(degeneracy_map(1, 0), "01")
    s1s0e = apply_operator(d1, s0e, degeneracy_map(2, 1))
    assert s1s0e.base == "01"
    assert s1s0e.eta == compose_maps(degeneracy_map(1, 0), degeneracy_map(2, 1))


def test_operator_functoriality_exhaustive_small():
    s = boundary(2, 2)
    assert validate_sset(s) == []
    for k in range(3):
        for x in s.all_simplices(k):
            for m in range(3):
                for theta in all_monotone_maps(m, k):
                    y = apply_operator(s, x, theta)
                    for l in range(3):
                        for theta2 in all_monotone_maps(l, m):
                            lhs = apply_operator(s, y, theta2)
                            rhs = apply_operator(s, x, compose_maps(theta, theta2))
                            assert lhs == rhs


def test_validate_rejects_secretly_degenerate():
    # a fake edge whose two faces coincide with itself collapsed
    s = one_point(1)
    bad = type(s)(1, {0: ["pt"], 1: ["loop"]},
                  {"loop": [nondeg("pt", 0), nondeg("pt", 0)]})
    # loop is a genuine non-degenerate circle edge; should validate fine
    assert validate_sset(bad) == []
    # but an "edge" equal to the degeneracy of pt must be rejected: that edge
    # cannot be expressed with honest face data... simulate via simplicial
    # identity breakage instead at dimension 2
    d2 = standard_simplex(2, 2)
    faces = dict(d2.faces)
    faces["012"] = [faces["012"][0], faces["012"][0], faces["012"][2]]
    bad2 = type(s)(2, d2.nondeg, faces)
    assert validate_sset(bad2) != []


def test_simplex_counts_closed_form():
    # total k-simplices = sum_j #nondeg_j * #surj([k] ->> [j])
    from math import comb
    s = standard_simplex(2, 3)
    for k in range(4):
        expected = sum(len(s.nondeg[j]) * comb(k, k - j) for j in range(k + 1))
        assert s.simplex_count(k) == expected


# ---------------------------------------------------------------------------
# the category of simplices

def test_simplex_category_point_trunc1():
    s = one_point(1)
    cat = simplex_category(s)
    assert validate_category(cat) == []
    assert len(cat.objects) == 2
    s1 = nf_id(apply_operator(s, nondeg("pt", 0), degeneracy_map(0, 0)))
    assert len(cat.hom_set(s1, s1)) == len(all_monotone_maps(1, 1)) == 3


def test_simplex_category_two_points():
    s = disjoint_union(one_point(0), one_point(0))
    cat = simplex_category(s)
    assert validate_category(cat) == []
    assert len(cat.objects) == 2
    assert len(cat.mor_ids) == 2


def test_simplex_category_interval_trunc1():
    s = standard_simplex(1, 1)
    cat = simplex_category(s)
    assert validate_category(cat) == []
    assert len(cat.objects) == 5  # 2 vertices + nondeg edge + 2 degenerate edges


def test_smap_functor_is_functor():
    s = standard_simplex(1, 1)
    t = one_point(1)
    collapse = SimplicialMap(s, t, {"0": nondeg("pt", 0), "1": nondeg("pt", 0),
                                    "01": NormalForm(degeneracy_map(0, 0), "pt")})
    assert validate_smap(collapse) == []
    f = smap_functor(collapse)
    assert validate_functor(f) == []


# ---------------------------------------------------------------------------
# products, unions

def test_product_with_point_is_identity():
    s = boundary(2, 2)
    p = product(one_point(2), s)
    assert validate_sset(p) == []
    iso = iso_sset(p, s)
    assert iso is not None
    assert validate_smap(iso) == []


def test_square_counts_match_joint_oracle():
    # independent oracle: count jointly non-degenerate pairs of monotone maps
    d1 = standard_simplex(1, 2)
    p = product(d1, d1)
    assert validate_sset(p) == []

    def oracle(k):
        count = 0
        for x in itertools.product(*[all_monotone_maps(k, 1)] * 2):
            a, b = x
            jointly = all(not (a.values[i] == a.values[i + 1]
                               and b.values[i] == b.values[i + 1])
                          for i in range(k))
            count += jointly
        return count

    # vertices are pairs of vertices: 4; edges: 5; triangles: 2
    assert [len(p.nondeg[k]) for k in range(3)] == [4, 5, 2]
    assert [oracle(k) for k in range(3)] == [4, 5, 2]


def test_disjoint_union_counts():
    s = standard_simplex(1, 1)
    u = disjoint_union(s, s)
    assert validate_sset(u) == []
    assert [len(u.nondeg[k]) for k in range(2)] == [4, 2]


# ---------------------------------------------------------------------------
# bisimplicial sets and the diagonal

def test_external_product_diag_is_product():
    for (a, b) in [(standard_simplex(1, 2), standard_simplex(1, 2)),
                   (standard_simplex(2, 2), one_point(2)),
                   (boundary(2, 2), standard_simplex(1, 2))]:
        bis = external_product_bisimplicial(a, b)
        assert validate_bisimplicial(bis) == []
        d, _ = diag(bis)
        assert validate_sset(d) == []
        p = product(a, b)
        iso = iso_sset(d, p)
        assert iso is not None, (d, p)
        assert validate_smap(iso) == []


def test_diag_of_constant_point():
    bis = external_product_bisimplicial(one_point(2), one_point(2))
    d, _ = diag(bis)
    iso = iso_sset(d, one_point(2))
    assert iso is not None


def test_diag_commutes_with_disjoint_union():
    a = standard_simplex(1, 2)
    b = boundary(2, 2)
    t = one_point(2)
    left, _ = diag(external_product_bisimplicial(disjoint_union(a, b), t))
    right = disjoint_union(diag(external_product_bisimplicial(a, t))[0],
                           diag(external_product_bisimplicial(b, t))[0])
    assert iso_sset(left, right) is not None


# ---------------------------------------------------------------------------
# injectivity and Kan fibrations

def test_identity_is_injective():
    s = standard_simplex(2, 2)
    assert is_injective(identity_smap(s))


def test_collapse_is_not_injective():
    s = standard_simplex(1, 1)
    t = one_point(1)
    collapse = SimplicialMap(s, t, {"0": nondeg("pt", 0), "1": nondeg("pt", 0),
                                    "01": NormalForm(degeneracy_map(0, 0), "pt")})
    assert not is_injective(collapse)


def test_boundary_inclusion_is_injective():
    b = boundary(2, 2)
    d2 = standard_simplex(2, 2)
    incl = SimplicialMap(b, d2, {x: nondeg(x, k)
                                 for k in range(3) for x in b.nondeg[k]})
    assert validate_smap(incl) == []
    assert is_injective(incl)


def test_point_to_point_is_fibration():
    p = one_point(3)
    ok, witness = is_kan_fibration(identity_smap(p), 2)
    assert ok and witness is None


def test_discrete_over_point_is_fibration():
    s = disjoint_union(one_point(3), one_point(3))
    t = one_point(3)
    f = SimplicialMap(s, t, {"0:pt": nondeg("pt", 0), "1:pt": nondeg("pt", 0)})
    assert validate_smap(f) == []
    ok, witness = is_kan_fibration(f, 2)
    assert ok


def test_interval_over_point_fails_with_witness():
    s = standard_simplex(1, 3)
    t = one_point(3)
    f = SimplicialMap(s, t, {"0": nondeg("pt", 0), "1": nondeg("pt", 0),
                             "01": NormalForm(degeneracy_map(0, 0), "pt")})
    assert validate_smap(f) == []
    ok, witness = is_kan_fibration(f, 2)
    assert not ok
    assert witness["horn"][0] == 2  # inner dimension-1 horns lift; a 2-horn fails
    # frozen expected failing square, derived by hand: the outer horn whose
    # two edges would need the non-monotone chain 0 -> 1 -> 0
    assert witness["horn"] == (2, 0)


def test_iso_sset_on_renamed_square():
    p = product(standard_simplex(1, 2), standard_simplex(1, 2))
    q = product(standard_simplex(1, 2), standard_simplex(1, 2))
    iso = iso_sset(p, q)
    assert iso is not None
    assert is_injective(iso)


def test_enumerate_smaps_count_interval_to_point():
    s = standard_simplex(1, 1)
    assert len(enumerate_smaps(s, one_point(1))) == 1
    assert len(enumerate_smaps(one_point(1), s)) == 2


def test_normalization_idempotent_on_all_simplices():
    s = boundary(2, 3)
    for k in range(4):
        for x in s.all_simplices(k):
            again = apply_operator(s, x, identity_map(k))
            assert again == x
            # re-normalizing the stored face tables is also stable
            if x.is_nondegenerate() and k >= 1:
                for i in range(k + 1):
                    face = s.faces[x.base][i]
                    assert apply_operator(s, face, identity_map(k - 1)) == face


def test_random_fiber_semidirect_validates():
    import random
    from clubcat.generate import random_diagram
    from clubcat.semidirect import fiber_semidirect
    from clubcat.fincat import enumerate_functors, validate_category
    rng = random.Random(17)
    checked = 0
    while checked < 6:
        left = random_diagram(rng)
        right = random_diagram(rng)
        d = left.base.objects[0]
        cands = enumerate_functors(left.fiber_obj[d], right.base)
        if not cands:
            continue
        psi = cands[rng.randrange(len(cands))]
        cat = fiber_semidirect(left, d, psi, right)
        assert validate_category(cat) == []
        checked += 1
