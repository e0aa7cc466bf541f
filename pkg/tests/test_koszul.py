import random
from math import comb

import pytest

from momentangle.fields import GF, QQ
from momentangle.koszul import (
    BettiTable,
    Cochain,
    KoszulMonomial,
    MalformedCochainError,
    betti_table,
    face_ring_hilbert,
    koszul_differential,
    strand_basis,
    strand_cohomology_dims,
    strand_complex,
    verify_nonsquarefree,
)
from momentangle.simplicial import (
    SimplicialComplex,
    disjoint_points,
    polygon,
    random_complex,
    simplex,
    simplex_boundary,
)


def mono(m, vs=(), us=()):
    return KoszulMonomial.build(m, vs=vs, us=us)


def one_term(field, m, vs=(), us=(), coeff=1):
    return Cochain.from_monomial(field, mono(m, vs, us), coeff)


# -- gradings -----------------------------------------------------------------


def test_monomial_gradings():
    x = mono(4, vs=[1, 1, 3], us=[2, 4])
    assert x.multidegree == (2, 1, 1, 1)
    assert x.bidegree == (2, 10)
    assert x.total_degree == 8
    assert x.v_support == frozenset({1, 3})
    assert not x.is_squarefree()
    assert str(x) == "v1^2*v3*u2*u4"


def test_cochain_requires_homogeneity():
    with pytest.raises(ValueError):
        Cochain(QQ, [(mono(2, vs=[1]), 1), (mono(2, vs=[2]), 1)])
    with pytest.raises(ValueError):
        # same multidegree but different exterior degree
        Cochain(QQ, [(mono(2, vs=[1], us=[2]), 1), (mono(2, us=[1, 2]), 1)])


# -- differential -------------------------------------------------------------


def test_differential_of_u1():
    K = simplex(2)
    d = koszul_differential(one_term(QQ, 2, us=[1]), K)
    assert d == one_term(QQ, 2, vs=[1])


def test_differential_drops_non_face_support():
    K = disjoint_points(2)
    d = koszul_differential(one_term(QQ, 2, vs=[1], us=[2]), K)
    assert d.is_zero()


def test_differential_leibniz_expansion():
    K = simplex(2)
    d = koszul_differential(one_term(QQ, 2, us=[1, 2]), K)
    expected = one_term(QQ, 2, vs=[1], us=[2]) - one_term(QQ, 2, vs=[2], us=[1])
    assert d == expected


def test_differential_rejects_non_face_input():
    K = disjoint_points(2)
    bad = one_term(QQ, 2, vs=[1, 2])
    with pytest.raises(MalformedCochainError):
        koszul_differential(bad, K)


def test_differential_squares_to_zero_randomized():
    rng = random.Random(23)
    fields = (QQ, GF(2), GF(3))
    for trial in range(60):
        K = random_complex(5, 0.5, seed=trial)
        field = fields[trial % 3]
        a = tuple(rng.randrange(0, 3) for _ in range(5))
        bases = strand_basis(K, a)
        level = [i for i, monos in bases.items() if monos]
        if not level:
            continue
        i = level[rng.randrange(len(level))]
        terms = {}
        for x in bases[i]:
            c = rng.randrange(-3, 4)
            if c:
                terms[x] = c
        z = Cochain(field, terms)
        dz = koszul_differential(z, K)
        assert koszul_differential(dz, K).is_zero()
        for t in dz.terms:
            assert t.multidegree == a


# -- strands ------------------------------------------------------------------


def test_strand_zero_multidegree():
    K = disjoint_points(3)
    bases = strand_basis(K, (0, 0, 0))
    assert bases[0] == [mono(3)]
    mats = strand_complex(K, (0, 0, 0), QQ)
    assert mats[0].rows == 0 and mats[0].cols == 1


def test_strand_two_points():
    K = disjoint_points(2)
    bases = strand_basis(K, (1, 1))
    assert bases[0] == []  # v1*v2 has non-face support
    assert bases[1] == [mono(2, vs=[2], us=[1]), mono(2, vs=[1], us=[2])]
    assert bases[2] == [mono(2, us=[1, 2])]
    dims = strand_cohomology_dims(K, (1, 1), QQ)
    assert dims == {1: 1}
    mats = strand_complex(K, (1, 1), QQ)
    # d(u1*u2) = v1*u2 - v2*u1: column (-1, +1) in the ordered basis
    assert mats[2].dense() == [[-1], [1]]


def test_strand_triangle_boundary_top():
    K = simplex_boundary(3)
    dims = strand_cohomology_dims(K, (1, 1, 1), QQ)
    assert dims == {1: 1}


def test_betti_simplex_is_trivial():
    for m in (1, 2, 3, 4):
        t = betti_table(simplex(m), QQ)
        assert t.entries == {(0, 0): 1}


def test_betti_simplex_boundary():
    for m in (2, 3, 4, 5):
        t = betti_table(simplex_boundary(m), QQ)
        assert t.entries == {(0, 0): 1, (1, 2 * m): 1}
        assert t.total_degree_dims() == {0: 1, 2 * m - 1: 1}


def test_betti_three_points():
    t = betti_table(disjoint_points(3), QQ)
    dims = t.total_degree_dims()
    assert dims == {0: 1, 3: 3, 4: 2}


def test_betti_ghost_vertices_give_exterior_algebra():
    # {emptyset} with m = 2: the complement is (C*)^2
    t = betti_table(SimplicialComplex(2, []), QQ)
    assert t.total_degree_dims() == {0: 1, 1: 2, 2: 1}
    assert t.entries == {(0, 0): 1, (1, 2): 2, (2, 4): 1}


def test_betti_table_normalization_invariants():
    for K in (polygon(5), disjoint_points(4), random_complex(5, 0.6, 3)):
        t = betti_table(K, QQ)
        assert t.get(0, 0) == 1
        for (i, j2), dim in t.entries.items():
            assert dim > 0
            assert i <= K.m
            assert i <= j2 // 2
            if i == 0:
                assert j2 == 0


def test_total_degree_dims_points_formula():
    for m in (3, 4, 5):
        dims = betti_table(disjoint_points(m), QQ).total_degree_dims()
        expected = {0: 1}
        for k in range(2, m + 1):
            val = m * comb(m - 1, k - 1) - comb(m, k)
            if val:
                expected[k + 1] = val
        assert dims == expected


def test_total_degree_dims_polygon_formula():
    for m in (4, 5, 6):
        dims = betti_table(polygon(m), QQ).total_degree_dims()
        expected = {0: 1, m + 2: 1}
        for k in range(3, m):
            val = (m - 2) * comb(m - 2, k - 2) - comb(m - 2, k - 1) - comb(m - 2, k - 3)
            if val:
                expected[k] = val
        assert dims == expected


def test_multigraded_refinement_sums_to_entries():
    K = polygon(5)
    t = betti_table(K, QQ, multigraded=True)
    sums = {}
    for (i, subset), dim in t.refined.items():
        key = (i, 2 * len(subset))
        sums[key] = sums.get(key, 0) + dim
    assert sums == t.entries


def test_threaded_table_matches_sequential():
    K = polygon(6)
    assert betti_table(K, QQ, threads=4) == betti_table(K, QQ)


def test_nonsquarefree_strands_vanish():
    for K in (disjoint_points(3), polygon(4), simplex_boundary(3)):
        assert verify_nonsquarefree(K, QQ, K.m + 2) == []
        assert verify_nonsquarefree(K, GF(2), K.m) == []


def test_betti_all_mode_matches_squarefree():
    K = disjoint_points(3)
    full = betti_table(K, QQ, mode="all", bound=5)
    assert full == betti_table(K, QQ)


def test_face_ring_hilbert_empty_complex():
    assert face_ring_hilbert(SimplicialComplex(2, []), 4) == [1, 0, 0, 0, 0]


def test_face_ring_hilbert_edge():
    K = simplex(2)
    assert face_ring_hilbert(K, 5) == [1, 2, 3, 4, 5, 6]


def test_face_ring_hilbert_pentagon():
    coeffs = face_ring_hilbert(polygon(5), 2)
    assert coeffs[1] == 5
    assert coeffs[2] == 10


def test_betti_diff_reports_mismatches():
    a = BettiTable({(0, 0): 1, (1, 4): 2})
    b = BettiTable({(0, 0): 1, (1, 4): 3, (2, 6): 1})
    assert a.diff(b) == [(1, 4, 2, 3), (2, 6, 0, 1)]
    assert a.diff(a) == []
