import pytest

from clubcat.fincat import validate_category, validate_functor
from clubcat.simpset import (SimplicialMap, apply_operator, boundary,
                             degeneracy_map, face_map, identity_smap,
                             is_injective, iso_sset, nf_id, nondeg, one_point,
                             product, standard_simplex, validate_bisimplicial,
                             validate_smap, validate_sset)
from clubcat.sset_club import (ClubMorphismSSet, ClubObjectSSet,
                               SimplexFamily, TwoLevelFamily,
                               associativity_check, bisimplicial_of, compose,
                               compose_club_morphisms, compose_morphism,
                               constant_family, constant_two_level,
                               delta_functor, delta_is_isomorphism,
                               delta_naturality_check, identity_club_morphism,
                               pair_category_sset, point_family, sset_equal,
                               unit_law_check, validate_club_morphism,
                               validate_family, validate_two_level)


def collapse_map(s, t):
    """The unique map to the point complex."""
    images = {}
    for k in range(s.trunc + 1):
        for x in s.nondeg[k]:
            nf = nondeg("pt", 0)
            for j in range(k):
                nf = apply_operator(t, nf, degeneracy_map(j, 0))
            images[x] = nf
    return SimplicialMap(s, t, images)


def chain_sset(trunc, sizes):
    """Disjoint points of the given sizes with collapse-to-first maps."""
    from clubcat.simpset import disjoint_union
    out = []
    for size in sizes:
        s = one_point(trunc)
        for _ in range(size - 1):
            s = disjoint_union(one_point(trunc), s)
        out.append(s)
    return out


def minvertex_of(simplex_id):
    return int(simplex_id[0])


def minvertex_family(s, chain, chain_maps):
    """Values by least vertex of the base simplex, maps along a chain.

    ``chain[i]`` is the value at least-vertex i; ``chain_maps[i]`` maps
    chain[i] to chain[i+1].  Valid for the subset-named standard complexes.
    """
    def step(i, j):
        m = identity_smap(chain[i])
        for l in range(i, j):
            m_next = chain_maps[l]
            m = SimplicialMap(chain[i], chain[j
                              ] if l + 1 == j else chain[l + 1],
                              {x: m_next.apply(nf) for x, nf in m.images.items()})
        return m

    values, face_maps = {}, {}
    for k in range(s.trunc + 1):
        for y in s.nondeg[k]:
            values[y] = chain[minvertex_of(y)]
    for k in range(1, s.trunc + 1):
        for y in s.nondeg[k]:
            for i in range(k + 1):
                a = minvertex_of(y)
                b = minvertex_of(s.faces[y][i].base)
                values[y] = chain[a]
                face_maps[(y, i)] = step(a, b)
    return SimplexFamily(s, values, face_maps, name="minv")


# ---------------------------------------------------------------------------
# families

def test_constant_family_is_valid():
    s = standard_simplex(1, 2)
    fam = constant_family(s, standard_simplex(1, 2))
    assert validate_family(fam) == []


def test_minvertex_family_is_valid():
    s = standard_simplex(1, 2)
    k0 = standard_simplex(1, 2)
    k1 = one_point(2)
    fam = minvertex_family(s, [k0, k1], [collapse_map(k0, k1)])
    assert validate_family(fam) == []


def test_invalid_family_is_rejected():
    s = standard_simplex(1, 2)
    k0 = standard_simplex(1, 2)
    k1 = one_point(2)
    fam = minvertex_family(s, [k0, k1], [collapse_map(k0, k1)])
    # corrupt one face map: swap in an identity with wrong endpoints
    fam.face_maps[("01", 0)] = identity_smap(k0)
    assert validate_family(fam) != []


# ---------------------------------------------------------------------------
# the pair bisimplicial set and composition

def test_bidegree_counts_match_enumeration():
    s = standard_simplex(2, 2)
    k0 = standard_simplex(1, 2)
    k1 = one_point(2)
    fam = minvertex_family(s, [k0, k1, k1], [collapse_map(k0, k1),
                                             identity_smap(k1)])
    assert validate_family(fam) == []
    b = bisimplicial_of(ClubObjectSSet(s, fam))
    assert validate_bisimplicial(b) == []
    for m in range(3):
        for n in range(3):
            expected = sum(len(fam.value(x.base).all_simplices(n))
                           for x in s.all_simplices(m))
            assert len(b.elements[(m, n)]) == expected


def test_compose_constant_family_is_product():
    for (s, t) in [(standard_simplex(1, 2), standard_simplex(1, 2)),
                   (standard_simplex(2, 2), standard_simplex(1, 2)),
                   (boundary(2, 2), one_point(2))]:
        res = compose(ClubObjectSSet(s, constant_family(s, t)))
        assert validate_sset(res.sset) == []
        p = product(s, t)
        assert iso_sset(res.sset, p) is not None


def test_compose_square_counts():
    s = standard_simplex(1, 3)
    res = compose(ClubObjectSSet(s, constant_family(s, standard_simplex(1, 3))))
    assert [len(res.sset.nondeg[k]) for k in range(3)] == [4, 5, 2]


def test_unit_laws_small():
    assert unit_law_check(s=standard_simplex(1, 2)) == []
    assert unit_law_check(s=boundary(2, 2)) == []
    assert unit_law_check(value=standard_simplex(1, 2)) == []
    assert unit_law_check(value=one_point(2)) == []


def test_compose_nonconstant_family():
    s = standard_simplex(1, 2)
    k0 = standard_simplex(1, 2)
    k1 = one_point(2)
    fam = minvertex_family(s, [k0, k1], [collapse_map(k0, k1)])
    res = compose(ClubObjectSSet(s, fam))
    assert validate_sset(res.sset) == []
    # vertices: (vertex, vertex-of-value): 2 over "0", 1 over "1"
    assert len(res.sset.nondeg[0]) == 3


# ---------------------------------------------------------------------------
# the comparison functor

def test_delta_is_functor_but_not_iso():
    s = one_point(1)
    fam = constant_family(s, standard_simplex(1, 1))
    res = compose(ClubObjectSSet(s, fam))
    pairs = pair_category_sset(res.source)
    assert validate_category(pairs.cat) == []
    f = delta_functor(res, pairs)
    assert validate_functor(f) == []
    assert not delta_is_isomorphism(res, pairs)


# ---------------------------------------------------------------------------
# morphisms of club objects

def test_identity_morphism_composes_to_identity():
    s = standard_simplex(1, 2)
    x = ClubObjectSSet(s, constant_family(s, standard_simplex(1, 2)))
    m = identity_club_morphism(x)
    assert validate_club_morphism(m) == []
    res = compose(x)
    g = compose_morphism(m, res, res)
    assert validate_smap(g) == []
    assert g.images == identity_smap(res.sset).images


def test_constant_inclusion_morphism():
    s = standard_simplex(1, 2)
    t_small = one_point(2)
    t_big = standard_simplex(1, 2)
    incl = SimplicialMap(t_small, t_big, {"pt": nondeg("0", 0)})
    assert validate_smap(incl) == []
    x = ClubObjectSSet(s, constant_family(s, t_small))
    y = ClubObjectSSet(s, constant_family(s, t_big))
    phi = {z: incl for k in range(3) for z in s.nondeg[k]}
    m = ClubMorphismSSet(x, y, identity_smap(s), phi)
    assert validate_club_morphism(m) == []
    g = compose_morphism(m)
    assert validate_smap(g) == []
    assert is_injective(g)


def test_compose_morphism_functorial():
    s = standard_simplex(1, 2)
    t0, t1 = one_point(2), standard_simplex(1, 2)
    incl0 = SimplicialMap(t0, t1, {"pt": nondeg("0", 0)})
    x = ClubObjectSSet(s, constant_family(s, t0))
    y = ClubObjectSSet(s, constant_family(s, t1))
    m1 = ClubMorphismSSet(x, y, identity_smap(s),
                          {z: incl0 for k in range(3) for z in s.nondeg[k]})
    m2 = identity_club_morphism(y)
    both = compose_club_morphisms(m2, m1)
    rx, ry = compose(x), compose(y)
    lhs = compose_morphism(both, rx, ry)
    from clubcat.simpset import compose_smaps
    rhs = compose_smaps(compose_morphism(m2, ry, ry), compose_morphism(m1, rx, ry))
    assert lhs.images == rhs.images


def test_delta_naturality_on_samples():
    s = standard_simplex(1, 2)
    t0, t1 = one_point(2), standard_simplex(1, 2)
    incl0 = SimplicialMap(t0, t1, {"pt": nondeg("0", 0)})
    x = ClubObjectSSet(s, constant_family(s, t0))
    y = ClubObjectSSet(s, constant_family(s, t1))
    m1 = ClubMorphismSSet(x, y, identity_smap(s),
                          {z: incl0 for k in range(3) for z in s.nondeg[k]})
    samples = [identity_club_morphism(x), m1]
    assert delta_naturality_check(samples) == []


# ---------------------------------------------------------------------------
# associativity

def test_constant_two_level_is_valid():
    tlf = constant_two_level(standard_simplex(1, 2), one_point(2),
                             standard_simplex(1, 2))
    assert validate_two_level(tlf) == []


def test_associativity_all_points():
    s = standard_simplex(1, 2)
    tlf = constant_two_level(s, one_point(2), one_point(2))
    assert associativity_check(tlf) == []


def test_associativity_constant_is_triple_product():
    s = standard_simplex(1, 2)
    t = standard_simplex(1, 2)
    u = one_point(2)
    tlf = constant_two_level(s, t, u)
    assert associativity_check(tlf) == []
    # both orders agree with the three-fold product
    res1 = compose(ClubObjectSSet(s, tlf.psi))
    from clubcat.sset_club import _flattened_family
    flat = _flattened_family(tlf, res1)
    left = compose(ClubObjectSSet(res1.sset, flat))
    triple = product(product(s, t), u)
    assert iso_sset(left.sset, triple) is not None


def grid_two_level(s, t, chain, chain_maps):
    """Constant psi at t; inner values varying by least vertices of s and t."""
    psi = constant_family(s, t)

    def level(i):
        return min(i, len(chain) - 1)

    def step(i, j):
        i, j = level(i), level(j)
        m = identity_smap(chain[i])
        for l in range(i, j):
            nxt = chain_maps[l]
            m = SimplicialMap(chain[i], nxt.tgt,
                              {x: nxt.apply(nf) for x, nf in m.images.items()})
        return m

    chi = {}
    s_maps = {}
    for k in range(s.trunc + 1):
        for y in s.nondeg[k]:
            off = minvertex_of(y)
            values = {z: chain[level(off + minvertex_of(z))]
                      for kk in range(t.trunc + 1) for z in t.nondeg[kk]}
            face_maps = {}
            for kk in range(1, t.trunc + 1):
                for z in t.nondeg[kk]:
                    for i in range(kk + 1):
                        a = level(off + minvertex_of(z))
                        b = level(off + minvertex_of(t.faces[z][i].base))
                        face_maps[(z, i)] = step(a, b)
            chi[y] = SimplexFamily(t, values, face_maps, name=f"chi{y}")
    for k in range(1, s.trunc + 1):
        for y in s.nondeg[k]:
            for i in range(k + 1):
                a = minvertex_of(y)
                b = minvertex_of(s.faces[y][i].base)
                for kk in range(t.trunc + 1):
                    for z in t.nondeg[kk]:
                        s_maps[(y, i, z)] = step(a + minvertex_of(z),
                                                 b + minvertex_of(z))
    return TwoLevelFamily(s, psi, chi, s_maps, name="grid")


def test_grid_two_level_valid_and_associative():
    s = standard_simplex(1, 2)
    t = standard_simplex(1, 2)
    k0 = standard_simplex(1, 2)
    k1 = one_point(2)
    tlf = grid_two_level(s, t, [k0, k1, k1],
                         [collapse_map(k0, k1), identity_smap(k1)])
    assert validate_two_level(tlf) == []
    assert associativity_check(tlf, validate=False) == []


def test_sset_equal_detects_difference():
    a = standard_simplex(1, 2)
    b = boundary(2, 2)
    assert not sset_equal(a, b)
    assert sset_equal(a, standard_simplex(1, 2))


def test_two_level_full_pair_functoriality():
    """The generator-wise transport checks pin down the full composition law:
    verify it directly on the materialized pair category of a small family."""
    from clubcat.simpset import apply_operator, compose_smaps, smap_equal
    from clubcat.sset_club import pair_category_sset

    s = standard_simplex(1, 1)
    t = standard_simplex(1, 1)
    k0 = standard_simplex(1, 1)
    k1 = one_point(1)
    tlf = grid_two_level(s, t, [k0, k1, k1],
                         [collapse_map(k0, k1), identity_smap(k1)])
    assert validate_two_level(tlf) == []
    pairs = pair_category_sset(ClubObjectSSet(s, tlf.psi))

    def chi_of(mid):
        th, tv = pairs.mor_data[mid]
        pid = pairs.cat.src[mid]
        snf, tnf = pairs.obj_data[pid]
        m1, moved = tlf.s_transport(snf, tnf, th)
        s2 = apply_operator(s, snf, th)
        m2 = tlf.chi[s2.base].transport(moved, tv)
        return compose_smaps(m2, m1)

    tables = {mid: chi_of(mid) for mid in pairs.cat.mor_ids}
    for (m2, m1), m12 in pairs.cat.comp.items():
        assert smap_equal(tables[m12], compose_smaps(tables[m2], tables[m1]))


def test_family_with_empty_value():
    from clubcat.simpset import SimplicialSet
    s = standard_simplex(1, 2)
    empty = SimplicialSet(2, {}, {}, name="empty")
    k1 = one_point(2)
    fam = minvertex_family(s, [empty, k1], [SimplicialMap(empty, k1, {})])
    assert validate_family(fam) == []
    res = compose(ClubObjectSSet(s, fam))
    assert validate_sset(res.sset) == []
    # only the pairs over the vertex with a point fiber survive
    assert len(res.sset.nondeg[0]) == 1
