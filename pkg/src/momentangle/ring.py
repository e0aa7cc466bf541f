"""Multiplicative structure of the cohomology of an arrangement complement.

Products are computed at cochain level in the Koszul algebra: exterior parts
anticommute (sign of the merge permutation), polynomial parts multiply, and
any monomial whose v-support leaves the complex is zero in the face ring.
Cohomology classes are reduced to coordinates against deterministic
representatives, strand by strand: within one multidegree a cocycle is
expressed over [image columns | representatives] and the representative part
of the solution is unique even when the image columns are dependent.

Coordinates respect the N^m-grading, so the coordinate vector of a class of
multidegree a is supported on the block of strand a alone.  That makes the
duality pairing block-anti-diagonal (only complementary subsets can pair
into the top class) and it is what lets products with a repeated coordinate
be recognized as landing in strands whose cohomology the vanishing check
certifies to be zero.

The module also hosts the two structural verifications:

* poincare_check: for complexes whose reduced homology is that of a sphere,
  the Betti table must be centrally symmetric, every complementary-degree
  pairing must be nondegenerate, and the two top monomials attached to a
  pair of adjacent facets must agree in cohomology (their difference is the
  visible coboundary of one cochain).
* lsop_reduction: quotient the face ring by n independent linear forms,
  certify regularity degree by degree against the Hilbert series scaled by
  (1 - t^2)^n, and recompute the cohomology from the finite quotient complex
  with d(u_i) = lambda_i; total-degree dimensions must reproduce the Betti
  table.
"""

from __future__ import annotations

import itertools
import random
import warnings
from dataclasses import dataclass
from math import comb

from .fields import (
    ExactMatrix,
    Field,
    FieldMismatchError,
    PrimeField,
    SpanTracker,
)
from .hochster import is_sphere_profile, reduced_homology
from .koszul import (
    BettiTable,
    Cochain,
    KoszulMonomial,
    MalformedCochainError,
    _subset_multidegrees,
    betti_table,
    face_ring_hilbert,
    koszul_differential,
    strand_basis,
    strand_complex,
)
from .simplicial import SimplicialComplex


class NonCocycleError(ValueError):
    """reduce_to_basis was handed a cochain with nonzero differential."""


class NotHomologySphereError(ValueError):
    """Poincare checks require the homology profile of a sphere."""


class LsopFieldError(ValueError):
    """The prime field is too small for a trustworthy regularity check."""


# -- products -----------------------------------------------------------------


def _merge_sign_is_even(left, right) -> bool:
    inversions = 0
    for s in left:
        for t in right:
            if s > t:
                inversions += 1
    return inversions % 2 == 0


def multiply(x: Cochain, y: Cochain, K: SimplicialComplex) -> Cochain:
    """Product in the Koszul algebra of K.

    Monomials with a shared exterior index multiply to zero; otherwise the
    exterior parts merge with the sign of the sorting permutation and the
    result is dropped when the combined v-support is not a face.
    """
    if x.field != y.field:
        raise FieldMismatchError(f"{x.field!r} vs {y.field!r}")
    f = x.field
    if x.is_zero() or y.is_zero():
        return Cochain.zero(f)
    out = {}
    for mx, cx in x.terms.items():
        sx = sorted(mx.sigma)
        for my, cy in y.terms.items():
            if mx.sigma & my.sigma:
                continue
            alpha = [a + b for a, b in zip(mx.alpha, my.alpha)]
            support = frozenset(i + 1 for i, a in enumerate(alpha) if a)
            if not K.is_face(support):
                continue
            coeff = f.mul(cx, cy)
            if not _merge_sign_is_even(sx, sorted(my.sigma)):
                coeff = f.neg(coeff)
            mono = KoszulMonomial(alpha, mx.sigma | my.sigma)
            acc = f.add(out.get(mono, f.zero), coeff)
            if f.is_zero(acc):
                out.pop(mono, None)
            else:
                out[mono] = acc
    return Cochain(f, out)


@dataclass(frozen=True)
class FilterVerdict:
    """Outcome of the monomial cocycle screen; reason is None when the
    monomial is allowed to represent a nontrivial class."""

    potentially_nontrivial: bool
    reason: str | None = None


def monomial_class_filter(K: SimplicialComplex, mono: KoszulMonomial) -> FilterVerdict:
    """Necessary conditions for a monomial to represent a nonzero class.

    A nontrivial monomial class must be squarefree in the v part, have face
    v-support, and keep v- and u-supports disjoint; anything else is trivial
    in cohomology.  The screen is conservative: passing it proves nothing.
    """
    if not mono.is_squarefree():
        return FilterVerdict(False, "non-squarefree v-exponent")
    if not K.is_face(mono.v_support):
        return FilterVerdict(False, "v-support is not a face")
    if mono.v_support & mono.sigma:
        return FilterVerdict(False, "v- and u-supports overlap")
    return FilterVerdict(True)


# -- cohomology bases ----------------------------------------------------------


class _StrandRecord:
    """Per-multidegree reduction data, built lazily level by level."""

    __slots__ = ("a", "bases", "index", "mats", "dims", "_levels")

    def __init__(self, K: SimplicialComplex, a, field: Field):
        self.a = a
        self.bases = strand_basis(K, a)
        self.index = {
            i: {mono: k for k, mono in enumerate(monos)}
            for i, monos in self.bases.items()
        }
        self.mats = strand_complex(K, a, field)
        top = max(self.bases) if self.bases else -1
        ranks = {i: self.mats[i].rank() for i in self.mats}
        self.dims = {}
        for i in range(top + 1):
            d = len(self.bases[i]) - ranks.get(i, 0) - ranks.get(i + 1, 0)
            if d:
                self.dims[i] = d
        self._levels = {}

    def level(self, i: int, field: Field):
        """(image columns, representative vectors, solve matrix) at degree i."""
        cached = self._levels.get(i)
        if cached is not None:
            return cached
        count = len(self.bases.get(i, ()))
        image = []
        up = self.mats.get(i + 1)
        if up is not None and up.cols:
            image = up.columns()
        reps = []
        if self.dims.get(i, 0):
            tracker = SpanTracker(field, count)
            for col in image:
                tracker.add(col)
            for vec in self.mats[i].kernel_basis():
                if tracker.add(vec):
                    reps.append(vec)
            if len(reps) != self.dims[i]:
                raise RuntimeError(
                    f"representative count {len(reps)} != cohomology dim "
                    f"{self.dims[i]} in strand {self.a} degree {i}"
                )
        solver = ExactMatrix.from_columns(image + reps, field, rows=count)
        cached = (len(image), reps, solver)
        self._levels[i] = cached
        return cached


@dataclass(frozen=True)
class BasisElement:
    """Address of one basis class: bidegree, strand multidegree, position."""

    i: int
    j2: int
    multidegree: tuple
    position: int

    @property
    def total_degree(self) -> int:
        return self.j2 - self.i


class CohomologyBasis:
    """Cocycle representatives for every bidegree, with reduction data.

    Representatives are the lexicographically earliest kernel vectors that
    extend the image span, taken strand by strand with the strands in
    (size, lexicographic) subset order; this pins every coordinate a golden
    test might look at.
    """

    def __init__(self, K: SimplicialComplex, field: Field):
        self.K = K
        self.field = field
        self._records: dict[tuple, _StrandRecord] = {}
        self._blocks: dict[tuple, list] = {}
        self.table = BettiTable()
        for a, _subset in _subset_multidegrees(K.m):
            rec = self._record(a)
            j2 = 2 * sum(a)
            for i, dim in sorted(rec.dims.items()):
                self.table.add(i, j2, dim)
                self._blocks.setdefault((i, j2), []).append((a, dim))
        for blocks in self._blocks.values():
            blocks.sort(key=lambda pair: pair[0])  # keep reduce() and elements() aligned

    def _record(self, a) -> _StrandRecord:
        rec = self._records.get(a)
        if rec is None:
            rec = _StrandRecord(self.K, a, self.field)
            self._records[a] = rec
        return rec

    def dimension(self, i: int, j2: int) -> int:
        return self.table.get(i, j2)

    def elements(self, max_total_degree: int | None = None):
        """All basis classes ordered by (total degree, i, strand, position)."""
        out = []
        for (i, j2), blocks in self._blocks.items():
            for a, dim in blocks:
                for k in range(dim):
                    out.append(BasisElement(i, j2, a, k))
        out.sort(key=lambda e: (e.total_degree, e.i, e.multidegree, e.position))
        if max_total_degree is not None:
            out = [e for e in out if e.total_degree <= max_total_degree]
        return out

    def cochain(self, element: BasisElement) -> Cochain:
        """Materialize the representative cocycle of a basis element."""
        rec = self._record(element.multidegree)
        _, reps, _ = rec.level(element.i, self.field)
        vec = reps[element.position]
        monos = rec.bases[element.i]
        return Cochain(
            self.field,
            [(mono, c) for mono, c in zip(monos, vec) if not self.field.is_zero(c)],
        )

    def representatives(self, i: int, j2: int):
        return [
            self.cochain(e)
            for e in self.elements()
            if e.i == i and e.j2 == j2
        ]

    def reduce(self, z: Cochain, bidegree=None):
        """Coordinates of the class [z] in the basis of its bidegree.

        z must be a cocycle; the result has one coefficient per basis class
        at the bidegree, ordered like elements().  A zero cochain needs the
        intended bidegree passed explicitly.
        """
        f = self.field
        if z.field != f:
            raise FieldMismatchError(f"{z.field!r} vs {f!r}")
        if z.is_zero():
            if bidegree is None:
                raise ValueError("zero cochain: pass the intended bidegree")
            i, j2 = bidegree
            return [f.zero] * self.dimension(i, j2)
        if not koszul_differential(z, self.K).is_zero():
            raise NonCocycleError("cochain has nonzero differential")
        a = z.multidegree
        i = z.homological_degree
        j2 = 2 * sum(a)
        rec = self._record(a)
        idx = rec.index.get(i, {})
        vec = [f.zero] * len(rec.bases.get(i, ()))
        for mono, c in z.terms.items():
            pos = idx.get(mono)
            if pos is None:
                raise MalformedCochainError(
                    f"monomial {mono} is not in the strand basis (non-face support)"
                )
            vec[pos] = c
        n_image, reps, solver = rec.level(i, f)
        x = solver.solve_in_span(vec)
        if x is None:
            raise RuntimeError(
                f"cocycle not spanned by image + representatives in strand {a}"
            )
        local = x[n_image:]
        blocks = self._blocks.get((i, j2), [])
        out = []
        placed = False
        for block_a, dim in blocks:
            if block_a == a:
                out.extend(local)
                placed = True
            else:
                out.extend([f.zero] * dim)
        if not placed and local:
            # a strand outside the squarefree blocks produced representatives:
            # the vanishing property failed, which is a genuine inconsistency
            raise RuntimeError(
                f"nonzero class in strand {a} outside the squarefree basis"
            )
        return out


def reduce_to_basis(z: Cochain, basis: CohomologyBasis, bidegree=None):
    return basis.reduce(z, bidegree=bidegree)


def structure_constants(
    K: SimplicialComplex,
    field: Field,
    max_total_degree: int | None = None,
    assume_squarefree_vanishing: bool = True,
):
    """All pairwise products of basis classes in basis coordinates.

    Returns (elements, products) where products maps (p, q) to the
    coordinate vector of elements[p] * elements[q] in the bidegree of the
    product.  With assume_squarefree_vanishing (the default) a product whose
    multidegree has a repeated coordinate is recorded as zero without
    solving: its class lives in a strand the non-squarefree check certifies
    to be acyclic.  Pass False to reduce every product honestly.
    """
    basis = CohomologyBasis(K, field)
    elements = basis.elements(max_total_degree)
    cochains = [basis.cochain(e) for e in elements]
    products = {}
    for p, x in enumerate(elements):
        for q, y in enumerate(elements):
            i, j2 = x.i + y.i, x.j2 + y.j2
            if max_total_degree is not None and j2 - i > max_total_degree:
                continue
            prod = multiply(cochains[p], cochains[q], K)
            target_dim = basis.dimension(i, j2)
            if prod.is_zero():
                products[(p, q)] = [field.zero] * target_dim
                continue
            a = prod.multidegree
            if assume_squarefree_vanishing and max(a) >= 2:
                products[(p, q)] = [field.zero] * target_dim
                continue
            products[(p, q)] = basis.reduce(prod, bidegree=(i, j2))
    return elements, products


# -- Poincare duality ----------------------------------------------------------


@dataclass(frozen=True)
class PairingCheck:
    degree: int
    dimension: int
    dual_dimension: int
    rank: int

    @property
    def nondegenerate(self) -> bool:
        return self.dimension == self.dual_dimension == self.rank


@dataclass(frozen=True)
class FlipCheck:
    facet: tuple
    adjacent_facet: tuple
    ok: bool


@dataclass
class PoincareReport:
    m: int
    n: int
    field_spec: str
    symmetric: bool
    asymmetries: list
    top_dimension: int
    pairings: list
    flips: list

    @property
    def passed(self) -> bool:
        return (
            self.symmetric
            and self.top_dimension == 1
            and all(p.nondegenerate for p in self.pairings)
            and all(fl.ok for fl in self.flips)
        )


def poincare_check(K: SimplicialComplex, field: Field) -> PoincareReport:
    """Verify the duality package on a field homology sphere.

    Raises NotHomologySphereError unless the reduced homology of K matches
    the (n-1)-sphere, n being the maximal facet size.  Then checks table
    symmetry beta(i, 2j) = beta((m-n)-i, 2(m-j)), nondegeneracy of every
    complementary-degree pairing into the one-dimensional top class, and the
    adjacent-facet relation between top monomials.
    """
    n = K.max_face_size
    profile = reduced_homology(K, field)
    if not is_sphere_profile(profile, n):
        raise NotHomologySphereError(
            f"homology profile {profile} is not that of a {n - 1}-sphere"
        )
    m = K.m
    basis = CohomologyBasis(K, field)
    table = basis.table

    asymmetries = []
    for (i, j2), dim in sorted(table.entries.items()):
        dual = ((m - n) - i, 2 * m - j2)
        if table.get(*dual) != dim:
            asymmetries.append((i, j2, dim, table.get(*dual)))

    top_bidegree = (m - n, 2 * m)
    top_dim = table.get(*top_bidegree)

    elements = basis.elements()
    by_total = {}
    for idx, e in enumerate(elements):
        by_total.setdefault(e.total_degree, []).append(e)

    ones = tuple([1] * m)
    pairings = []
    top_total = m + n
    for k in range(0, top_total + 1):
        row_elems = by_total.get(k, [])
        col_elems = by_total.get(top_total - k, [])
        if not row_elems and not col_elems:
            continue
        entries = {}
        for r, x in enumerate(row_elems):
            xc = None
            for c, y in enumerate(col_elems):
                summed = tuple(
                    ax + ay for ax, ay in zip(x.multidegree, y.multidegree)
                )
                if summed != ones:
                    continue  # graded: no component on the top strand
                if xc is None:
                    xc = basis.cochain(x)
                prod = multiply(xc, basis.cochain(y), K)
                if prod.is_zero():
                    continue
                coeff = basis.reduce(prod, bidegree=top_bidegree)
                if coeff and not field.is_zero(coeff[0]):
                    entries[(r, c)] = coeff[0]
        mat = ExactMatrix(len(row_elems), len(col_elems), entries, field)
        pairings.append(
            PairingCheck(k, len(row_elems), len(col_elems), mat.rank())
        )

    flips = []
    facets = [tuple(sorted(f)) for f in K.facets if len(f) == n]
    full = set(range(1, m + 1))
    for fa, fb in itertools.combinations(sorted(facets), 2):
        shared = set(fa) & set(fb)
        if len(shared) != n - 1:
            continue
        x_vertex = next(iter(set(fa) - shared))
        w_vertex = next(iter(set(fb) - shared))
        complement = full - set(fa)
        bridge = Cochain.from_monomial(
            field,
            KoszulMonomial.build(m, vs=sorted(shared), us=sorted(complement | {x_vertex})),
        )
        boundary = koszul_differential(bridge, K)
        mono_a = KoszulMonomial.build(m, vs=fa, us=sorted(complement))
        mono_b = KoszulMonomial.build(
            m, vs=sorted(shared | {w_vertex}), us=sorted((complement - {w_vertex}) | {x_vertex})
        )
        ok = set(boundary.terms) == {mono_a, mono_b}
        if ok:
            ca = boundary.terms[mono_a]
            cb = boundary.terms[mono_b]
            ra = basis.reduce(Cochain.from_monomial(field, mono_a), bidegree=top_bidegree)
            rb = basis.reduce(Cochain.from_monomial(field, mono_b), bidegree=top_bidegree)
            if len(ra) != 1 or field.is_zero(ra[0]) or field.is_zero(rb[0]):
                ok = False
            else:
                # [d(bridge)] = 0 forces ca*[A] + cb*[B] = 0
                residue = field.add(field.mul(ca, ra[0]), field.mul(cb, rb[0]))
                ok = field.is_zero(residue)
        flips.append(FlipCheck(fa, fb, ok))

    return PoincareReport(
        m=m,
        n=n,
        field_spec=field.spec(),
        symmetric=not asymmetries,
        asymmetries=asymmetries,
        top_dimension=top_dim,
        pairings=pairings,
        flips=flips,
    )


# -- regular sequence reduction -------------------------------------------------


class LsopCandidate:
    """A length-n system of linear forms lambda_i = sum_t c_it v_t.

    Rows must be linearly independent over the field; dependent input is a
    malformed candidate rather than a non-regular one.
    """

    def __init__(self, rows, field: Field):
        self.field = field
        norm = [tuple(field.normalize(x) for x in row) for row in rows]
        if not norm:
            raise ValueError("empty candidate")
        widths = {len(r) for r in norm}
        if len(widths) != 1:
            raise ValueError("ragged candidate rows")
        self.m = widths.pop()
        self.n = len(norm)
        self.rows = norm
        mat = ExactMatrix.from_rows([list(r) for r in norm], field)
        if mat.rank() != self.n:
            raise ValueError("candidate rows are linearly dependent")

    def __repr__(self):
        return f"LsopCandidate(n={self.n}, m={self.m}, rows={self.rows})"


def random_lsop(m: int, n: int, field: Field, rng: random.Random) -> LsopCandidate:
    """Small random integer forms, redrawn until the rows are independent."""
    for _ in range(64):
        rows = [[rng.randrange(-4, 5) for _ in range(m)] for _ in range(n)]
        try:
            return LsopCandidate(rows, field)
        except ValueError:
            continue
    raise RuntimeError("could not draw independent linear forms")


@dataclass
class LsopReport:
    regular: bool
    first_failing_degree: int | None
    quotient_dims: list
    expected_dims: list
    total_dims: dict | None = None
    bigraded_dims: dict | None = None
    betti_total_dims: dict | None = None

    @property
    def matches_betti(self):
        if self.total_dims is None or self.betti_total_dims is None:
            return None
        return self.total_dims == self.betti_total_dims


def _graded_monomials(K: SimplicialComplex, d: int):
    """Face-supported exponent vectors of total degree d, in a fixed order."""
    if d == 0:
        return [tuple([0] * K.m)]
    out = []
    for mask in K.face_masks():
        verts = [i + 1 for i in range(K.m) if mask >> i & 1]
        s = len(verts)
        if s == 0 or s > d:
            continue
        # compositions of d into s positive parts, lexicographic
        for bars in itertools.combinations(range(1, d), s - 1):
            cuts = (0,) + bars + (d,)
            alpha = [0] * K.m
            for v, (lo, hi) in zip(verts, itertools.pairwise(cuts)):
                alpha[v - 1] = hi - lo
            out.append(tuple(alpha))
    return out


class _QuotientLevel:
    """One graded piece of the face ring modulo the candidate ideal.

    Stores the degree-d monomials, reduced rows spanning the ideal piece
    (pivots normalized), and the non-pivot monomials that descend to a basis
    of the quotient."""

    __slots__ = ("monomials", "index", "pivot_rows", "basis_positions")

    def __init__(self, monomials, index, pivot_rows, basis_positions):
        self.monomials = monomials
        self.index = index
        self.pivot_rows = pivot_rows
        self.basis_positions = basis_positions

    @property
    def dimension(self):
        return len(self.basis_positions)

    def reduce(self, vec, field: Field):
        """Quotient coordinates of a vector over the monomial basis."""
        vec = list(vec)
        for pivot, row in self.pivot_rows:
            c = vec[pivot]
            if not field.is_zero(c):
                vec = [field.sub(a, field.mul(c, b)) for a, b in zip(vec, row)]
        return [vec[k] for k in self.basis_positions]


def _build_quotient_level(K, candidate, field, d, prev_level):
    monomials = _graded_monomials(K, d)
    index = {a: k for k, a in enumerate(monomials)}
    tracker = SpanTracker(field, len(monomials))
    if d > 0 and prev_level is not None:
        for lam in candidate.rows:
            for mu in prev_level.monomials:
                vec = [field.zero] * len(monomials)
                hit = False
                for t in range(K.m):
                    c = lam[t]
                    if field.is_zero(c):
                        continue
                    shifted = list(mu)
                    shifted[t] += 1
                    pos = index.get(tuple(shifted))
                    if pos is not None:
                        vec[pos] = field.add(vec[pos], c)
                        hit = True
                if hit:
                    tracker.add(vec)
    pivot_rows = sorted(tracker._rows.items())
    pivots = {p for p, _ in pivot_rows}
    basis_positions = [k for k in range(len(monomials)) if k not in pivots]
    return _QuotientLevel(monomials, index, pivot_rows, basis_positions)


def _expected_quotient_dims(K: SimplicialComplex, n: int):
    """Coefficients of hilbert(K) * (1 - t^2)^n through degree n + 1."""
    hilb = face_ring_hilbert(K, n + 1)
    out = []
    for d in range(n + 2):
        total = 0
        for k in range(0, min(n, d) + 1):
            total += (-1) ** k * comb(n, k) * hilb[d - k]
        out.append(total)
    return out


def lsop_reduction(
    K: SimplicialComplex,
    candidate: LsopCandidate,
    field: Field,
    betti: BettiTable | None = None,
    bigraded: bool = False,
    compare: bool = True,
) -> LsopReport:
    """Regularity certificate and finite-complex cohomology for a candidate.

    The candidate is regular exactly when the quotient dimensions match the
    Hilbert series of the face ring times (1 - t^2)^n degree by degree and
    both vanish at degree n + 1 (n must be the maximal facet size).  When
    the certificate holds, the cohomology of quotient x exterior algebra on
    m - n generators with d(u_i) = lambda_i is computed and reported by
    total degree; it must reproduce the Betti table totals, and a failure
    there is flagged as an internal inconsistency by the caller.
    """
    if candidate.field != field:
        raise FieldMismatchError("candidate was built over a different field")
    if candidate.m != K.m:
        raise ValueError("candidate width differs from the vertex count")
    n = candidate.n
    if n != K.max_face_size:
        raise ValueError(
            f"need n = max facet size = {K.max_face_size}, got {n} forms"
        )
    expected = _expected_quotient_dims(K, n)
    if isinstance(field, PrimeField):
        bound = sum(e for e in expected if e > 0)
        if field.p <= bound:
            raise LsopFieldError(
                f"characteristic {field.p} <= total quotient dimension {bound}; "
                "use the rationals or a larger prime"
            )
        warnings.warn(
            f"regularity over GF({field.p}) is only as generic as the prime allows",
            stacklevel=2,
        )

    levels = []
    quotient_dims = []
    prev = None
    first_fail = None
    for d in range(n + 2):
        if d == 0 or (prev is not None and prev.dimension > 0):
            level = _build_quotient_level(K, candidate, field, d, prev)
        else:
            level = _QuotientLevel([], {}, [], [])
        levels.append(level)
        quotient_dims.append(level.dimension)
        if level.dimension != expected[d]:
            first_fail = d
            break
        prev = level

    if first_fail is not None:
        return LsopReport(
            regular=False,
            first_failing_degree=first_fail,
            quotient_dims=quotient_dims,
            expected_dims=expected[: len(quotient_dims)],
        )

    total_dims, bigraded_dims = _reduced_complex_dims(
        K, candidate, field, levels[: n + 1]
    )
    betti_totals = None
    if compare:
        table = betti if betti is not None else betti_table(K, field)
        betti_totals = table.total_degree_dims()
    return LsopReport(
        regular=True,
        first_failing_degree=None,
        quotient_dims=quotient_dims,
        expected_dims=expected[: len(quotient_dims)],
        total_dims=total_dims,
        bigraded_dims=bigraded_dims if bigraded else None,
        betti_total_dims=betti_totals,
    )


def _reduced_complex_dims(K, candidate, field, levels):
    """Cohomology of quotient x Lambda[u_1..u_{m-n}] with d(u_i) = lambda_i.

    Levels are indexed by (exterior degree i, quotient degree d); the
    differential sends (b, sigma) to sum over t in sigma of the reduction of
    lambda_t * b against the next quotient level, tensored with sigma - t,
    with the alternating sign of the position of t.
    """
    n_ext = K.m - candidate.n
    max_d = len(levels) - 1

    bases = {}
    for i in range(n_ext + 1):
        combos = list(itertools.combinations(range(1, n_ext + 1), i))
        for d in range(max_d + 1):
            level = levels[d]
            if level.dimension == 0 or not combos:
                continue
            bases[(i, d)] = [
                (b, sigma) for b in range(level.dimension) for sigma in combos
            ]

    index = {
        key: {pair: k for k, pair in enumerate(entries)}
        for key, entries in bases.items()
    }

    # cache reductions of lambda_t * (quotient basis monomial)
    reduction_cache = {}

    def reduced_product(t, d, b):
        key = (t, d, b)
        got = reduction_cache.get(key)
        if got is None:
            level = levels[d]
            target = levels[d + 1]
            mu = level.monomials[level.basis_positions[b]]
            vec = [field.zero] * len(target.monomials)
            lam = candidate.rows[t - 1]
            for s in range(K.m):
                c = lam[s]
                if field.is_zero(c):
                    continue
                shifted = list(mu)
                shifted[s] += 1
                pos = target.index.get(tuple(shifted))
                if pos is not None:
                    vec[pos] = field.add(vec[pos], c)
            got = target.reduce(vec, field)
            reduction_cache[key] = got
        return got

    ranks = {}
    for (i, d), entries in bases.items():
        if i == 0:
            continue
        target_key = (i - 1, d + 1)
        target = index.get(target_key)
        rows = len(bases.get(target_key, ()))
        triples = {}
        if target and d + 1 <= max_d:
            for col, (b, sigma) in enumerate(entries):
                for t_pos, t in enumerate(sigma):
                    coords = reduced_product(t, d, b)
                    rest = sigma[:t_pos] + sigma[t_pos + 1:]
                    for b2, c in enumerate(coords):
                        if field.is_zero(c):
                            continue
                        row = target.get((b2, rest))
                        if row is None:
                            continue
                        signed = c if t_pos % 2 == 0 else field.neg(c)
                        prev = triples.get((row, col), field.zero)
                        acc = field.add(prev, signed)
                        if field.is_zero(acc):
                            triples.pop((row, col), None)
                        else:
                            triples[(row, col)] = acc
        mat = ExactMatrix(rows, len(entries), triples, field)
        ranks[(i, d)] = mat.rank()

    total_dims = {}
    bigraded_dims = {}
    for (i, d), entries in bases.items():
        incoming = ranks.get((i + 1, d - 1), 0)
        outgoing = ranks.get((i, d), 0)
        dim = len(entries) - incoming - outgoing
        if dim:
            j2 = 2 * (d + i)
            total = j2 - i
            total_dims[total] = total_dims.get(total, 0) + dim
            bigraded_dims[(i, j2)] = bigraded_dims.get((i, j2), 0) + dim
    return dict(sorted(total_dims.items())), dict(sorted(bigraded_dims.items()))


def find_regular_lsop(
    K: SimplicialComplex,
    field: Field,
    seed: int = 0,
    attempts: int = 5,
    betti: BettiTable | None = None,
    bigraded: bool = False,
):
    """Draw random candidates until the regularity certificate holds.

    Returns (candidate, report, seed_used); after the last attempt the
    failing pair is returned so callers can surface the verdict.
    """
    n = K.max_face_size
    last = None
    for k in range(attempts):
        rng = random.Random(seed + k)
        candidate = random_lsop(K.m, n, field, rng)
        report = lsop_reduction(K, candidate, field, betti=betti, bigraded=bigraded)
        last = (candidate, report, seed + k)
        if report.regular:
            return last
    return last
