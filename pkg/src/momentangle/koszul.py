"""The Koszul cochain algebra of a face ring and its bigraded Betti table.

The face ring of K is the polynomial ring on v_1, .., v_m modulo the
monomials of non-faces; tensoring with the exterior algebra on u_1, .., u_m
and differentiating by d(u_i) = v_i, d(v_i) = 0 (extended as a derivation)
gives a differential bigraded algebra whose cohomology is the Tor algebra of
the face ring, i.e. the cohomology of the arrangement complement.

Gradings: bideg v_i = (0, 2) and bideg u_i = (-1, 2).  Internally the
homological degree is stored as i = |sigma| >= 0 and only printed as -i.
Each monomial v^alpha u_sigma also carries the multidegree alpha + chi_sigma
in N^m, and d preserves it (it trades a u_i for a v_i).  The complex
therefore splits into finite strands, one per multidegree; the squarefree
strands are indexed by vertex subsets and carry all the cohomology, which the
non-squarefree verification mode checks rather than assumes.

Sign conventions, fixed once for stable goldens: with sigma listed
increasingly as j_1 < .. < j_k,

    d(v^alpha u_sigma) = sum_t (-1)^(t-1) v^(alpha + e_{j_t}) u_(sigma - j_t),

dropping any term whose v-support is not a face.  Strand bases are ordered
by (sorted sigma, alpha).
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from math import comb

from .fields import ExactMatrix, Field, FieldMismatchError, rank_of_dense_rows
from .simplicial import SimplicialComplex


class MalformedCochainError(ValueError):
    """A cochain carried a monomial whose v-support is not a face."""


class KoszulMonomial:
    """Basis monomial v^alpha u_sigma.

    alpha is an exponent vector of length m, sigma a subset of {1..m}.  The
    pair is free data; face conditions on the support of alpha are enforced
    by the operations that need them.
    """

    __slots__ = ("alpha", "sigma", "_hash")

    def __init__(self, alpha, sigma):
        self.alpha = tuple(alpha)
        if any(a < 0 for a in self.alpha):
            raise ValueError("exponents must be nonnegative")
        m = len(self.alpha)
        self.sigma = frozenset(sigma)
        for i in self.sigma:
            if not (1 <= i <= m):
                raise ValueError(f"u-index {i} outside 1..{m}")
        self._hash = hash((self.alpha, self.sigma))

    @classmethod
    def build(cls, m: int, vs=(), us=()) -> "KoszulMonomial":
        """Convenience constructor: vs lists v-indices with multiplicity."""
        alpha = [0] * m
        for i in vs:
            alpha[i - 1] += 1
        return cls(alpha, us)

    @property
    def m(self) -> int:
        return len(self.alpha)

    @property
    def v_support(self) -> frozenset:
        return frozenset(i + 1 for i, a in enumerate(self.alpha) if a)

    @property
    def multidegree(self):
        return tuple(
            a + (1 if i + 1 in self.sigma else 0) for i, a in enumerate(self.alpha)
        )

    @property
    def homological_degree(self) -> int:
        return len(self.sigma)

    @property
    def internal_degree(self) -> int:
        return 2 * (sum(self.alpha) + len(self.sigma))

    @property
    def bidegree(self):
        """(i, 2j) with the first grading stored nonnegative."""
        return (self.homological_degree, self.internal_degree)

    @property
    def total_degree(self) -> int:
        return self.internal_degree - self.homological_degree

    def is_squarefree(self) -> bool:
        return all(a <= 1 for a in self.alpha)

    def sort_key(self):
        return (tuple(sorted(self.sigma)), self.alpha)

    def __eq__(self, other):
        return (
            isinstance(other, KoszulMonomial)
            and self.alpha == other.alpha
            and self.sigma == other.sigma
        )

    def __hash__(self):
        return self._hash

    def __str__(self):
        parts = []
        for i, a in enumerate(self.alpha):
            if a == 1:
                parts.append(f"v{i + 1}")
            elif a > 1:
                parts.append(f"v{i + 1}^{a}")
        for i in sorted(self.sigma):
            parts.append(f"u{i}")
        return "*".join(parts) if parts else "1"

    def __repr__(self):
        return f"KoszulMonomial({self})"


class Cochain:
    """A field-linear combination of Koszul monomials, homogeneous in both
    the multidegree and the exterior degree.  The zero cochain has no terms
    and no degree."""

    __slots__ = ("field", "terms")

    def __init__(self, field: Field, terms=()):
        self.field = field
        data = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for mono, coeff in items:
            coeff = field.normalize(coeff)
            if field.is_zero(coeff):
                continue
            if mono in data:
                raise ValueError(f"duplicate monomial {mono}")
            data[mono] = coeff
        if data:
            monos = list(data)
            a0 = monos[0].multidegree
            s0 = monos[0].homological_degree
            for mono in monos[1:]:
                if mono.multidegree != a0 or mono.homological_degree != s0:
                    raise ValueError("cochain is not homogeneous")
        self.terms = data

    @classmethod
    def zero(cls, field: Field) -> "Cochain":
        return cls(field, ())

    @classmethod
    def from_monomial(cls, field: Field, mono: KoszulMonomial, coeff=1) -> "Cochain":
        return cls(field, [(mono, coeff)])

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def multidegree(self):
        if not self.terms:
            return None
        return next(iter(self.terms)).multidegree

    @property
    def homological_degree(self):
        if not self.terms:
            return None
        return next(iter(self.terms)).homological_degree

    @property
    def bidegree(self):
        if not self.terms:
            return None
        return next(iter(self.terms)).bidegree

    @property
    def total_degree(self):
        if not self.terms:
            return None
        return next(iter(self.terms)).total_degree

    def _check_field(self, other: "Cochain"):
        if self.field != other.field:
            raise FieldMismatchError(f"{self.field!r} vs {other.field!r}")

    def __add__(self, other: "Cochain") -> "Cochain":
        self._check_field(other)
        f = self.field
        data = dict(self.terms)
        for mono, c in other.terms.items():
            acc = f.add(data.get(mono, f.zero), c)
            if f.is_zero(acc):
                data.pop(mono, None)
            else:
                data[mono] = acc
        return Cochain(f, data)

    def __neg__(self) -> "Cochain":
        f = self.field
        return Cochain(f, {mono: f.neg(c) for mono, c in self.terms.items()})

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self + (-other)

    def scale(self, coeff) -> "Cochain":
        f = self.field
        coeff = f.normalize(coeff)
        return Cochain(f, {mono: f.mul(coeff, c) for mono, c in self.terms.items()})

    def __eq__(self, other):
        return (
            isinstance(other, Cochain)
            and self.field == other.field
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.field, frozenset(self.terms.items())))

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for mono in sorted(self.terms, key=KoszulMonomial.sort_key):
            c = self.terms[mono]
            bits.append(f"({c})*{mono}")
        return " + ".join(bits)

    def __repr__(self):
        return f"Cochain({self})"


def koszul_differential(c: Cochain, K: SimplicialComplex) -> Cochain:
    """Apply d; terms whose new v-support leaves K are dropped.

    Raises MalformedCochainError when an input monomial already has non-face
    v-support (such monomials are zero in the face ring and may not be
    stored).  The output lives in the same multidegree with the exterior
    degree lowered by one, and d(d(c)) = 0.
    """
    f = c.field
    out = {}
    for mono, coeff in c.terms.items():
        if mono.m != K.m:
            raise MalformedCochainError(
                f"monomial on {mono.m} vertices against complex with m={K.m}"
            )
        if not K.is_face(mono.v_support):
            raise MalformedCochainError(
                f"monomial {mono} has non-face v-support {sorted(mono.v_support)}"
            )
        sigma = sorted(mono.sigma)
        for t, j in enumerate(sigma):
            alpha = list(mono.alpha)
            alpha[j - 1] += 1
            if not K.is_face(frozenset(i + 1 for i, a in enumerate(alpha) if a)):
                continue
            new = KoszulMonomial(alpha, mono.sigma - {j})
            sign_coeff = coeff if t % 2 == 0 else f.neg(coeff)
            acc = f.add(out.get(new, f.zero), sign_coeff)
            if f.is_zero(acc):
                out.pop(new, None)
            else:
                out[new] = acc
    return Cochain(f, out)


# -- strands ------------------------------------------------------------------


@lru_cache(maxsize=4096)
def _strand_structure(K: SimplicialComplex, a: tuple):
    """Monomial bases and integer differential matrices of one strand.

    Returns (bases, matrices) where bases[i] is the ordered tuple of sigma
    tuples at exterior degree i (alpha is determined by alpha = a - chi_sigma)
    and matrices[i] is (rows, cols, entries) for d from degree i to i - 1,
    entries being (row, col, +-1) triples.  Field independent, so shared
    between ground fields.
    """
    m = K.m
    supp1 = tuple(i + 1 for i, x in enumerate(a) if x >= 1)
    ones_mask = 0
    multi_mask = 0
    for i, x in enumerate(a):
        if x == 1:
            ones_mask |= 1 << i
        elif x >= 2:
            multi_mask |= 1 << i
    bases = []
    indexes = []
    for i in range(len(supp1) + 1):
        level = []
        for combo in itertools.combinations(supp1, i):
            smask = 0
            for j in combo:
                smask |= 1 << (j - 1)
            support = multi_mask | (ones_mask & ~smask)
            if K._is_face_mask(support):
                level.append(combo)
        bases.append(tuple(level))
        indexes.append({sig: k for k, sig in enumerate(level)})
    matrices = []
    for i in range(len(bases)):
        rows = len(bases[i - 1]) if i >= 1 else 0
        cols = len(bases[i])
        entries = []
        if i >= 1 and rows and cols:
            lower = indexes[i - 1]
            for col, sigma in enumerate(bases[i]):
                for t in range(len(sigma)):
                    target = sigma[:t] + sigma[t + 1:]
                    row = lower.get(target)
                    if row is not None:
                        entries.append((row, col, 1 if t % 2 == 0 else -1))
        matrices.append((rows, cols, tuple(entries)))
    return tuple(bases), tuple(matrices)


def strand_basis(K: SimplicialComplex, a):
    """Monomial bases {v^alpha u_sigma : alpha + chi_sigma = a} by degree."""
    a = tuple(a)
    if len(a) != K.m:
        raise ValueError("multidegree length must equal m")
    bases, _ = _strand_structure(K, a)
    out = {}
    for i, level in enumerate(bases):
        monos = []
        for sigma in level:
            alpha = list(a)
            for j in sigma:
                alpha[j - 1] -= 1
            monos.append(KoszulMonomial(alpha, sigma))
        out[i] = monos
    return out


def strand_complex(K: SimplicialComplex, a, field: Field):
    """Differential matrices of the strand, one per exterior degree.

    Entry i maps the degree-i basis to the degree-(i-1) basis; the matrix at
    i = 0 has zero rows.
    """
    a = tuple(a)
    if len(a) != K.m:
        raise ValueError("multidegree length must equal m")
    _, matrices = _strand_structure(K, a)
    return {
        i: ExactMatrix(rows, cols, entries, field)
        for i, (rows, cols, entries) in enumerate(matrices)
    }


def _dense_from_triples(rows, cols, triples):
    out = [[0] * cols for _ in range(rows)]
    for r, c, v in triples:
        out[r][c] = v
    return out


def strand_cohomology_dims(K: SimplicialComplex, a, field: Field):
    """dim ker/im per exterior degree in one strand; zero entries omitted."""
    a = tuple(a)
    bases, matrices = _strand_structure(K, a)
    sizes = [len(level) for level in bases]
    n = len(sizes)
    ranks = [0] * (n + 1)
    for i in range(1, n):
        rows, cols, triples = matrices[i]
        if rows and cols and triples:
            dense = _dense_from_triples(rows, cols, triples)
            ranks[i] = rank_of_dense_rows(dense, field)
    dims = {}
    for i in range(n):
        d = sizes[i] - ranks[i] - ranks[i + 1]
        if d:
            dims[i] = d
    return dims


def multidegrees_up_to(m: int, bound: int):
    """All exponent vectors in N^m of total degree <= bound, lexicographic."""

    def rec(prefix, remaining, slots):
        if slots == 0:
            yield tuple(prefix)
            return
        for x in range(remaining + 1):
            yield from rec(prefix + [x], remaining - x, slots - 1)

    yield from rec([], bound, m)


class BettiTable:
    """Bigraded Betti numbers: (homological degree i, internal degree 2j) ->
    dimension, with optional refinement by multidegree subset."""

    __slots__ = ("entries", "refined")

    def __init__(self, entries=None, refined=None):
        self.entries = dict(entries or {})
        self.refined = dict(refined) if refined is not None else None

    def add(self, i: int, j2: int, dim: int, subset=None):
        if dim == 0:
            return
        self.entries[(i, j2)] = self.entries.get((i, j2), 0) + dim
        if subset is not None:
            if self.refined is None:
                self.refined = {}
            key = (i, frozenset(subset))
            self.refined[key] = self.refined.get(key, 0) + dim

    def get(self, i: int, j2: int) -> int:
        return self.entries.get((i, j2), 0)

    def bidegrees(self):
        return sorted(self.entries)

    def total_degree_dims(self):
        """Collapse to the single grading: degree 2j - i."""
        out = {}
        for (i, j2), dim in self.entries.items():
            k = j2 - i
            out[k] = out.get(k, 0) + dim
        return dict(sorted(out.items()))

    def diff(self, other: "BettiTable"):
        """Mismatched bidegrees as (i, 2j, self dim, other dim), sorted."""
        keys = set(self.entries) | set(other.entries)
        out = []
        for key in sorted(keys):
            a = self.entries.get(key, 0)
            b = other.entries.get(key, 0)
            if a != b:
                out.append((key[0], key[1], a, b))
        return out

    def __eq__(self, other):
        return isinstance(other, BettiTable) and self.entries == other.entries

    def __repr__(self):
        cells = ", ".join(
            f"(-{i},{j2}):{d}" for (i, j2), d in sorted(self.entries.items())
        )
        return f"BettiTable({cells})"


def total_degree_dims(table: BettiTable):
    return table.total_degree_dims()


def _subset_multidegrees(m: int):
    """Indicator vectors of all subsets of {1..m} in (size, lex) order."""
    universe = list(range(1, m + 1))
    for size in range(m + 1):
        for combo in itertools.combinations(universe, size):
            a = [0] * m
            for i in combo:
                a[i - 1] = 1
            yield tuple(a), frozenset(combo)


def betti_table(
    K: SimplicialComplex,
    field: Field,
    mode: str = "squarefree",
    bound: int | None = None,
    multigraded: bool = False,
    threads: int = 1,
) -> BettiTable:
    """Bigraded Betti table of the face ring over the given field.

    mode "squarefree" sums strand cohomology over the 2^m subset strands
    (which is the whole table once non-squarefree strands vanish; use
    verify_nonsquarefree or mode "all" to check that instead of assuming
    it).  mode "all" sums every multidegree of total degree <= bound, so it
    reports a table truncated at internal degree 2*bound.
    """
    if mode == "squarefree":
        degrees = [(a, subset) for a, subset in _subset_multidegrees(K.m)]
    elif mode == "all":
        if bound is None:
            raise ValueError('mode "all" requires a total degree bound')
        degrees = [(a, None) for a in multidegrees_up_to(K.m, bound)]
    else:
        raise ValueError(f"unknown mode {mode!r}")

    def work(item):
        a, subset = item
        return a, subset, strand_cohomology_dims(K, a, field)

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, degrees))
    else:
        results = [work(item) for item in degrees]

    table = BettiTable(refined={} if multigraded else None)
    for a, subset, dims in results:
        j2 = 2 * sum(a)
        for i, dim in sorted(dims.items()):
            table.add(i, j2, dim, subset if multigraded else None)
    return table


def verify_nonsquarefree(K: SimplicialComplex, field: Field, bound: int):
    """Nonzero cohomology found in strands with a repeated exponent.

    Scans every multidegree of total degree <= bound having some entry >= 2;
    the returned list of (multidegree, degree, dim) violations is empty
    exactly when the squarefree concentration holds in that range.
    """
    violations = []
    for a in multidegrees_up_to(K.m, bound):
        if max(a, default=0) < 2:
            continue
        dims = strand_cohomology_dims(K, a, field)
        for i, dim in sorted(dims.items()):
            violations.append((a, i, dim))
    return violations


def face_ring_hilbert(K: SimplicialComplex, bound: int):
    """Coefficients of the face ring Hilbert series at t^0, t^2, .., t^(2*bound).

    Monomials of v-degree d with support exactly a face J number
    C(d-1, |J|-1), so the coefficient is a weighted f-vector sum.
    """
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    fv = K.f_vector()
    out = [1]
    for d in range(1, bound + 1):
        total = 0
        for s in range(1, len(fv)):
            if s <= d:
                total += fv[s] * comb(d - 1, s - 1)
        out.append(total)
    return out
