import random

import pytest

from momentangle.fields import GF, QQ
from momentangle.koszul import (
    Cochain,
    KoszulMonomial,
    betti_table,
    koszul_differential,
    strand_basis,
)
from momentangle.ring import (
    CohomologyBasis,
    LsopCandidate,
    LsopFieldError,
    NonCocycleError,
    NotHomologySphereError,
    find_regular_lsop,
    lsop_reduction,
    monomial_class_filter,
    multiply,
    poincare_check,
    random_lsop,
    reduce_to_basis,
    structure_constants,
)
from momentangle.simplicial import (
    disjoint_points,
    polygon,
    random_complex,
    simplex,
    simplex_boundary,
)


def mono(m, vs=(), us=()):
    return KoszulMonomial.build(m, vs=vs, us=us)


def one(field, m, vs=(), us=(), coeff=1):
    return Cochain.from_monomial(field, mono(m, vs, us), coeff)


# -- products ------------------------------------------------------------------


def test_multiply_exterior_sign():
    K = simplex(2)
    u1, u2 = one(QQ, 2, us=[1]), one(QQ, 2, us=[2])
    u12 = one(QQ, 2, us=[1, 2])
    assert multiply(u1, u2, K) == u12
    assert multiply(u2, u1, K) == -u12
    assert multiply(u1, u1, K).is_zero()


def test_multiply_kills_non_face_support():
    K = disjoint_points(2)
    assert multiply(one(QQ, 2, vs=[1], us=[2]), one(QQ, 2, vs=[2], us=[1]), K).is_zero()


def test_multiply_pentagon_examples():
    K = polygon(5)
    x = one(QQ, 5, vs=[1], us=[3])
    # v4*u6*u7 wraps to v4*u1*u2; the v-support {1, 4} is a non-edge
    y_bad = one(QQ, 5, vs=[4], us=[1, 2])
    assert multiply(x, y_bad, K).is_zero()
    y_good = one(QQ, 5, vs=[2], us=[4, 5])
    prod = multiply(x, y_good, K)
    assert not prod.is_zero()
    assert set(prod.terms) == {mono(5, vs=[1, 2], us=[3, 4, 5])}


def test_multiply_respects_bidegrees():
    K = polygon(5)
    x = one(QQ, 5, vs=[1], us=[3])
    y = one(QQ, 5, vs=[2], us=[4, 5])
    prod = multiply(x, y, K)
    assert prod.bidegree == (
        x.homological_degree + y.homological_degree,
        x.terms and 4 + 6,
    ) or prod.bidegree == (3, 10)


def test_multiply_leibniz_randomized():
    rng = random.Random(31)
    fields = (QQ, GF(3))
    for trial in range(50):
        K = random_complex(5, 0.5, seed=100 + trial)
        field = fields[trial % 2]
        strands = []
        for _ in range(2):
            a = tuple(rng.randrange(0, 2) for _ in range(5))
            bases = strand_basis(K, a)
            level = [i for i, monos in bases.items() if monos]
            if not level:
                strands = []
                break
            i = level[rng.randrange(len(level))]
            terms = {}
            for x in bases[i]:
                c = rng.randrange(-2, 3)
                if c:
                    terms[x] = c
            strands.append(Cochain(field, terms))
        if len(strands) != 2:
            continue
        x, y = strands
        lhs = koszul_differential(multiply(x, y, K), K)
        sign = 1 if (x.homological_degree or 0) % 2 == 0 else -1
        rhs = multiply(koszul_differential(x, K), y, K) + multiply(
            x, koszul_differential(y, K), K
        ).scale(sign)
        assert lhs == rhs


# -- reduction -----------------------------------------------------------------


def test_reduce_coboundary_is_zero():
    K = disjoint_points(3)
    basis = CohomologyBasis(K, QQ)
    z = one(QQ, 3, vs=[1], us=[2, 3]) - one(QQ, 3, vs=[2], us=[1, 3]) + one(
        QQ, 3, vs=[3], us=[1, 2]
    )
    coords = basis.reduce(z)
    assert coords == [0, 0]  # beta(2, 6) = 2 for three points


def test_reduce_relation_v1u2_equals_v2u1():
    K = disjoint_points(3)
    basis = CohomologyBasis(K, QQ)
    a = basis.reduce(one(QQ, 3, vs=[1], us=[2]))
    b = basis.reduce(one(QQ, 3, vs=[2], us=[1]))
    assert a == b
    assert any(c != 0 for c in a)


def test_reduce_rejects_non_cocycle():
    K = simplex(2)
    basis = CohomologyBasis(K, QQ)
    with pytest.raises(NonCocycleError):
        basis.reduce(one(QQ, 2, us=[1]))


def test_reduce_to_basis_wrapper_and_zero():
    K = disjoint_points(3)
    basis = CohomologyBasis(K, QQ)
    assert reduce_to_basis(Cochain.zero(QQ), basis, bidegree=(1, 4)) == [0, 0, 0]
    with pytest.raises(ValueError):
        reduce_to_basis(Cochain.zero(QQ), basis)


def test_basis_counts_match_betti():
    for K in (disjoint_points(4), polygon(5), simplex_boundary(4)):
        basis = CohomologyBasis(K, QQ)
        assert basis.table == betti_table(K, QQ)
        for e in basis.elements():
            rep = basis.cochain(e)
            assert koszul_differential(rep, K).is_zero()
            coords = basis.reduce(rep)
            # the representative reduces to its own unit coordinate
            block = [
                k for k, other in enumerate(basis.elements())
                if other.i == e.i and other.j2 == e.j2
            ]
            position = [basis.elements()[k] for k in block].index(e)
            assert coords[position] == QQ.one
            assert all(
                c == 0 for k, c in enumerate(coords) if k != position
            )


def test_monomial_filter():
    K = polygon(5)
    assert monomial_class_filter(K, mono(5, vs=[1, 1], us=[2])) == pytest.approx(
        monomial_class_filter(K, mono(5, vs=[1, 1], us=[2]))
    )
    v = monomial_class_filter(K, mono(5, vs=[1, 1], us=[2]))
    assert not v.potentially_nontrivial and "squarefree" in v.reason
    v = monomial_class_filter(K, mono(5, vs=[1], us=[1, 2]))
    assert not v.potentially_nontrivial and "overlap" in v.reason
    v = monomial_class_filter(K, mono(5, vs=[1, 3]))
    assert not v.potentially_nontrivial and "face" in v.reason
    v = monomial_class_filter(K, mono(5, vs=[1], us=[3]))
    assert v.potentially_nontrivial and v.reason is None


def test_filter_is_conservative():
    # any monomial cocycle with nonzero reduced coordinates must pass the screen
    K = polygon(5)
    basis = CohomologyBasis(K, QQ)
    for a in ((1, 0, 1, 0, 0), (1, 1, 1, 1, 1), (0, 1, 0, 1, 1)):
        for i, monos in strand_basis(K, a).items():
            for x in monos:
                z = Cochain.from_monomial(QQ, x)
                if not koszul_differential(z, K).is_zero():
                    continue
                coords = basis.reduce(z)
                if any(c != 0 for c in coords):
                    assert monomial_class_filter(K, x).potentially_nontrivial


# -- structure constants ---------------------------------------------------------


def test_structure_constants_points_all_zero():
    K = disjoint_points(4)
    elements, products = structure_constants(K, QQ)
    for (p, q), coords in products.items():
        if elements[p].total_degree > 0 and elements[q].total_degree > 0:
            assert all(c == 0 for c in coords)


def test_structure_constants_exact_mode_agrees():
    K = disjoint_points(3)
    _, fast = structure_constants(K, QQ)
    _, slow = structure_constants(K, QQ, assume_squarefree_vanishing=False)
    assert fast == slow


def test_structure_constants_sphere_unit_only():
    K = simplex_boundary(3)
    elements, products = structure_constants(K, QQ)
    assert len(elements) == 2  # the unit and the top class
    unit = [e for e in elements if e.total_degree == 0][0]
    top = [e for e in elements if e.total_degree > 0][0]
    p, q = elements.index(unit), elements.index(top)
    assert products[(p, q)] == [1]
    assert products[(q, q)] == []  # lands above the top bidegree: beta = 0


def test_structure_constants_graded_commutativity():
    K = polygon(5)
    elements, products = structure_constants(K, QQ)
    for p, x in enumerate(elements):
        for q, y in enumerate(elements):
            sign = -1 if (x.total_degree % 2) and (y.total_degree % 2) else 1
            left = products[(p, q)]
            right = [sign * c for c in products[(q, p)]]
            assert left == right


def test_pentagon_pairing_partition_condition():
    K = polygon(5)
    basis = CohomologyBasis(K, QQ)

    def wrap(i):
        return (i - 1) % 5 + 1

    for i in range(1, 6):
        x = one(QQ, 5, vs=[i], us=[wrap(i + 2)])
        nonzero_partners = []
        for j in range(1, 6):
            y = one(QQ, 5, vs=[j], us=[wrap(j + 2), wrap(j + 3)])
            prod = multiply(x, y, K)
            coords = basis.reduce(prod, bidegree=(3, 10))
            indices = {i, wrap(i + 2), j, wrap(j + 2), wrap(j + 3)}
            if any(c != 0 for c in coords):
                nonzero_partners.append(j)
                assert indices == {1, 2, 3, 4, 5}
            else:
                assert indices != {1, 2, 3, 4, 5}
        assert len(nonzero_partners) == 1


# -- Poincare duality -------------------------------------------------------------


def test_poincare_simplex_boundary():
    for m in (3, 4, 5):
        report = poincare_check(simplex_boundary(m), QQ)
        assert report.passed
        assert report.n == m - 1
        assert report.top_dimension == 1


def test_poincare_pentagon_and_hexagon():
    for m in (5, 6):
        report = poincare_check(polygon(m), QQ)
        assert report.passed
        assert report.symmetric
        for pairing in report.pairings:
            assert pairing.nondegenerate
        assert report.flips and all(fl.ok for fl in report.flips)


def test_poincare_rejects_non_spheres():
    with pytest.raises(NotHomologySphereError):
        poincare_check(disjoint_points(3), QQ)
    with pytest.raises(NotHomologySphereError):
        poincare_check(simplex(3), QQ)


# -- regular sequences -------------------------------------------------------------


def test_lsop_candidate_validation():
    with pytest.raises(ValueError):
        LsopCandidate([[1, 1, 1], [2, 2, 2]], QQ)
    cand = LsopCandidate([[1, 0, -1], [0, 1, -1]], QQ)
    assert (cand.n, cand.m) == (2, 3)


def test_lsop_triangle_boundary_explicit():
    # lambda_i = v_i - v_m is the classical linear system for the sphere
    for m in (3, 4):
        K = simplex_boundary(m)
        rows = []
        for i in range(m - 1):
            row = [0] * m
            row[i] = 1
            row[m - 1] = -1
            rows.append(row)
        report = lsop_reduction(K, LsopCandidate(rows, QQ), QQ)
        assert report.regular
        assert report.total_dims == {0: 1, 2 * m - 1: 1}
        assert report.matches_betti


def test_lsop_pentagon_random():
    K = polygon(5)
    candidate, report, _seed = find_regular_lsop(K, QQ, seed=0)
    assert report.regular
    assert report.total_dims == {0: 1, 3: 5, 4: 5, 7: 1}
    assert report.matches_betti
    assert report.quotient_dims == [1, 3, 1, 0]  # h-vector of the pentagon


def test_lsop_detects_non_regular():
    K = polygon(5)
    rows = [[1, 0, 0, 0, 0], [1, 0, 0, 0, 0]]
    with pytest.raises(ValueError):
        LsopCandidate(rows, QQ)  # equal rows are malformed, not non-regular
    # a dependent-in-the-quotient choice: both forms miss most vertices
    bad = LsopCandidate([[1, 0, 0, 0, 0], [0, 1, 0, 0, 0]], QQ)
    report = lsop_reduction(K, bad, QQ)
    assert not report.regular
    assert report.first_failing_degree is not None


def test_lsop_requires_full_length():
    K = polygon(5)
    with pytest.raises(ValueError):
        lsop_reduction(K, LsopCandidate([[1, 1, 1, 1, 1]], QQ), QQ)


def test_lsop_small_prime_rejected():
    K = polygon(4)
    cand = random_lsop(4, 2, GF(3), random.Random(0))
    with pytest.raises(LsopFieldError):
        lsop_reduction(K, cand, GF(3))


def test_lsop_large_prime_warns():
    K = polygon(4)
    candidate, report, _ = find_regular_lsop(K, QQ, seed=1)
    with pytest.warns(UserWarning):
        cand = LsopCandidate([list(r) for r in candidate.rows], GF(1009))
        report_p = lsop_reduction(K, cand, GF(1009))
    if report_p.regular:
        assert report_p.total_dims == report.total_dims
