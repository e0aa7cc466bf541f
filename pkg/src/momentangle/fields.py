"""Exact linear algebra over the rationals and over prime fields.

Scalars are `fractions.Fraction` values (rationals, automatically kept in
lowest terms with positive denominator) or plain ints in ``[0, p)`` (prime
field residues).  Matrices are sparse maps ``(row, col) -> value``.

Rank computations over the rationals clear denominators row by row and run
fraction-free (Bareiss) elimination on integers, so intermediate entries are
minors of the input rather than arbitrarily long fractions.  Prime fields use
ordinary modular elimination; for p = 2 rows are packed into ints and reduced
with xor.  Pivoting is always "first nonzero from the top", which makes
kernel bases and solved coordinates reproducible.
"""

from __future__ import annotations

import math
from fractions import Fraction


class FieldMismatchError(ValueError):
    """Values from two different coefficient fields met in one computation."""


class DimensionMismatchError(ValueError):
    """Vector length does not match the matrix shape."""


def _is_prime(n: int) -> bool:
    # deterministic Miller-Rabin; the witness set below is exact for n < 3.3e24
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Field:
    """Common interface of the two supported coefficient fields."""

    characteristic: int

    def normalize(self, value):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def spec(self) -> str:
        raise NotImplementedError


class RationalField(Field):
    """The field Q; elements are fractions.Fraction."""

    characteristic = 0
    zero = Fraction(0)
    one = Fraction(1)

    def normalize(self, value):
        if isinstance(value, bool):
            raise FieldMismatchError("booleans are not rational scalars")
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, Fraction):
            return value
        raise FieldMismatchError(f"not a rational scalar: {value!r}")

    def is_zero(self, a) -> bool:
        return a == 0

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def spec(self) -> str:
        return "q"

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


class PrimeField(Field):
    """The field F_p; elements are ints in [0, p)."""

    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"prime field modulus must be prime, got {p}")
        self.p = p
        self.characteristic = p
        self.zero = 0
        self.one = 1 % p

    def normalize(self, value):
        if isinstance(value, bool):
            raise FieldMismatchError("booleans are not prime field scalars")
        if isinstance(value, int):
            return value % self.p
        raise FieldMismatchError(
            f"not an F_{self.p} scalar: {value!r} (rationals cannot be reduced implicitly)"
        )

    def is_zero(self, a) -> bool:
        return a % self.p == 0

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def spec(self) -> str:
        return f"fp:{self.p}"

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


QQ = RationalField()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_spec(spec: str) -> Field:
    """Parse a field descriptor: "q" for the rationals, "fp:<p>" for F_p."""
    spec = spec.strip().lower()
    if spec == "q":
        return QQ
    if spec.startswith("fp:"):
        try:
            p = int(spec[3:])
        except ValueError:
            raise ValueError(f"bad field spec {spec!r}") from None
        return PrimeField(p)
    raise ValueError(f"bad field spec {spec!r} (expected 'q' or 'fp:<p>')")


def _check_same_field(a: Field, b: Field):
    if a != b:
        raise FieldMismatchError(f"mixed fields: {a!r} vs {b!r}")


# --- elimination kernels ----------------------------------------------------


def _clear_denominators(row):
    """Scale a row of Fractions to coprime integers (sign preserved)."""
    den = 1
    for x in row:
        if x:
            den = den * x.denominator // math.gcd(den, x.denominator)
    return [int(x * den) for x in row]


def _bareiss_echelon(rows):
    """Fraction-free row echelon form of integer rows, in place.

    Returns (rows, pivot_columns).  After step k every entry is a (k+1)x(k+1)
    minor of the original matrix, so the exact integer divisions below never
    truncate.
    """
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    piv_cols = []
    prev = 1
    r = 0
    for c in range(nc):
        piv = None
        for rr in range(r, nr):
            if rows[rr][c]:
                piv = rr
                break
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        prow = rows[r]
        for rr in range(r + 1, nr):
            cur = rows[rr]
            f = cur[c]
            new = [0] * nc
            for j in range(c + 1, nc):
                new[j] = (p * cur[j] - f * prow[j]) // prev
            rows[rr] = new
        prev = p
        piv_cols.append(c)
        r += 1
        if r == nr:
            break
    return rows, piv_cols


def _rank_rational(dense_fraction_rows) -> int:
    ints = [_clear_denominators(row) for row in dense_fraction_rows]
    _, pivs = _bareiss_echelon(ints)
    return len(pivs)


def _rank_mod(rows, p: int) -> int:
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    r = 0
    for c in range(nc):
        piv = None
        for rr in range(r, nr):
            if rows[rr][c]:
                piv = rr
                break
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        prow = [x * inv % p for x in rows[r]]
        rows[r] = prow
        for rr in range(r + 1, nr):
            f = rows[rr][c]
            if f:
                cur = rows[rr]
                rows[rr] = [(a - f * b) % p for a, b in zip(cur, prow)]
        r += 1
        if r == nr:
            break
    return r


def _rank_gf2(packed_rows) -> int:
    """Rank over F_2 of rows packed as ints (bit j = column j)."""
    pivots = []
    rank = 0
    for row in packed_rows:
        for bit, prow in pivots:
            if row & bit:
                row ^= prow
        if row:
            pivots.append((row & -row, row))
            rank += 1
    return rank


def _rref_rational(dense_fraction_rows):
    ints = [_clear_denominators(row) for row in dense_fraction_rows]
    ech, pivs = _bareiss_echelon(ints)
    k = len(pivs)
    reduced = [[Fraction(x) for x in ech[i]] for i in range(k)]
    for idx in reversed(range(k)):
        c = pivs[idx]
        p = reduced[idx][c]
        reduced[idx] = [x / p for x in reduced[idx]]
        prow = reduced[idx]
        for up in range(idx):
            f = reduced[up][c]
            if f:
                reduced[up] = [a - f * b for a, b in zip(reduced[up], prow)]
    return reduced, pivs


def _rref_mod(dense_int_rows, p: int):
    rows = [[x % p for x in row] for row in dense_int_rows]
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    pivs = []
    r = 0
    for c in range(nc):
        piv = None
        for rr in range(r, nr):
            if rows[rr][c]:
                piv = rr
                break
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [x * inv % p for x in rows[r]]
        prow = rows[r]
        for rr in range(nr):
            if rr != r and rows[rr][c]:
                f = rows[rr][c]
                cur = rows[rr]
                rows[rr] = [(a - f * b) % p for a, b in zip(cur, prow)]
        pivs.append(c)
        r += 1
        if r == nr:
            break
    return rows[:r], pivs


def rank_of_dense_rows(dense_rows, field: Field) -> int:
    """Rank of prebuilt dense rows of normalized field values.

    Fast path shared with ExactMatrix.rank; callers that already hold dense
    integer rows avoid building a sparse matrix first.
    """
    if not dense_rows or not dense_rows[0]:
        return 0
    if isinstance(field, PrimeField):
        p = field.p
        if p == 2:
            packed = []
            for row in dense_rows:
                acc = 0
                for j, x in enumerate(row):
                    if x & 1:
                        acc |= 1 << j
                packed.append(acc)
            return _rank_gf2(packed)
        return _rank_mod([[x % p for x in row] for row in dense_rows], p)
    return _rank_rational([[Fraction(x) for x in row] for row in dense_rows])


class ExactMatrix:
    """Sparse exact matrix over one coefficient field.

    Entries are stored as ``{(row, col): value}`` with no explicit zeros and
    at most one entry per position.  All values are normalized through the
    field on construction, so feeding a Fraction into a prime-field matrix
    raises FieldMismatchError instead of silently truncating.
    """

    __slots__ = ("rows", "cols", "field", "entries")

    def __init__(self, rows: int, cols: int, entries, field: Field):
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix dimensions")
        self.rows = rows
        self.cols = cols
        self.field = field
        data = {}
        if isinstance(entries, dict):
            items = entries.items()
        else:
            items = (((r, c), v) for (r, c, v) in entries)
        for (r, c), v in items:
            if not (0 <= r < rows and 0 <= c < cols):
                raise ValueError(f"entry ({r}, {c}) outside {rows}x{cols} matrix")
            if (r, c) in data:
                raise ValueError(f"duplicate entry at ({r}, {c})")
            v = field.normalize(v)
            if not field.is_zero(v):
                data[(r, c)] = v
        self.entries = data

    @classmethod
    def from_rows(cls, dense, field: Field, cols: int | None = None) -> "ExactMatrix":
        nr = len(dense)
        if nr:
            widths = {len(row) for row in dense}
            if len(widths) != 1:
                raise ValueError("ragged rows")
            nc = widths.pop()
        else:
            nc = 0 if cols is None else cols
        entries = {}
        for r, row in enumerate(dense):
            for c, v in enumerate(row):
                entries[(r, c)] = v
        return cls(nr, nc, entries, field)

    @classmethod
    def from_columns(cls, columns, field: Field, rows: int) -> "ExactMatrix":
        entries = {}
        for c, col in enumerate(columns):
            if len(col) != rows:
                raise DimensionMismatchError("column length mismatch")
            for r, v in enumerate(col):
                entries[(r, c)] = v
        return cls(rows, len(columns), entries, field)

    @classmethod
    def identity(cls, n: int, field: Field) -> "ExactMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)}, field)

    def dense(self):
        z = self.field.zero
        out = [[z] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def column(self, j: int):
        z = self.field.zero
        col = [z] * self.rows
        for (r, c), v in self.entries.items():
            if c == j:
                col[r] = v
        return col

    def columns(self):
        z = self.field.zero
        cols = [[z] * self.rows for _ in range(self.cols)]
        for (r, c), v in self.entries.items():
            cols[c][r] = v
        return cols

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(
            self.cols, self.rows,
            {(c, r): v for (r, c), v in self.entries.items()},
            self.field,
        )

    def rank(self) -> int:
        if self.rows == 0 or self.cols == 0 or not self.entries:
            return 0
        return rank_of_dense_rows(self.dense(), self.field)

    def _rref(self):
        dense = self.dense()
        if isinstance(self.field, PrimeField):
            return _rref_mod(dense, self.field.p)
        return _rref_rational(dense)

    def kernel_basis(self):
        """Basis of the right kernel, one vector per free column.

        Vector k has a 1 in its free column and the negated reduced-echelon
        coefficients in the pivot columns; the list is ordered by free column
        index, which pins the basis for golden tests.
        """
        f = self.field
        if self.cols == 0:
            return []
        if self.rows == 0 or not self.entries:
            return [
                [f.one if j == i else f.zero for j in range(self.cols)]
                for i in range(self.cols)
            ]
        reduced, pivs = self._rref()
        pivset = set(pivs)
        basis = []
        for free in range(self.cols):
            if free in pivset:
                continue
            v = [f.zero] * self.cols
            v[free] = f.one
            for k, pc in enumerate(pivs):
                coeff = reduced[k][free]
                if not f.is_zero(coeff):
                    v[pc] = f.neg(coeff)
            basis.append(v)
        return basis

    def solve_in_span(self, b):
        """Solve ``M x = b`` if b lies in the column span, else None.

        Free variables are set to zero, so the answer is reproducible.
        """
        f = self.field
        if len(b) != self.rows:
            raise DimensionMismatchError(
                f"vector of length {len(b)} against {self.rows} rows"
            )
        b = [f.normalize(x) for x in b]
        if self.rows == 0:
            return [f.zero] * self.cols
        dense = self.dense()
        for r in range(self.rows):
            dense[r] = dense[r] + [b[r]]
        if isinstance(f, PrimeField):
            reduced, pivs = _rref_mod(dense, f.p)
        else:
            reduced, pivs = _rref_rational(dense)
        if pivs and pivs[-1] == self.cols:
            return None
        x = [f.zero] * self.cols
        for k, pc in enumerate(pivs):
            x[pc] = reduced[k][self.cols]
        return x

    def __eq__(self, other):
        return (
            isinstance(other, ExactMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.field == other.field
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.field, frozenset(self.entries.items())))

    def __repr__(self):
        return f"ExactMatrix({self.rows}x{self.cols} over {self.field!r}, {len(self.entries)} entries)"


class SpanTracker:
    """Incrementally maintained row space with membership queries.

    add() reduces the vector against the rows collected so far and keeps the
    normalized residual when it is nonzero; the return value says whether the
    span grew.  Used to pick cohomology representatives extending an image
    space and monomial bases of graded quotients, always greedily and in
    input order.
    """

    def __init__(self, field: Field, width: int):
        self.field = field
        self.width = width
        self._rows = {}  # pivot index -> row with that pivot normalized to 1

    def residual(self, vec):
        f = self.field
        vec = [f.normalize(x) for x in vec]
        if len(vec) != self.width:
            raise DimensionMismatchError("vector width mismatch")
        for pivot in sorted(self._rows):
            c = vec[pivot]
            if not f.is_zero(c):
                row = self._rows[pivot]
                vec = [f.sub(a, f.mul(c, b)) for a, b in zip(vec, row)]
        return vec

    def add(self, vec) -> bool:
        f = self.field
        res = self.residual(vec)
        for j, x in enumerate(res):
            if not f.is_zero(x):
                inv = f.inv(x)
                self._rows[j] = [f.mul(inv, y) for y in res]
                return True
        return False

    def contains(self, vec) -> bool:
        f = self.field
        return all(f.is_zero(x) for x in self.residual(vec))

    @property
    def rank(self) -> int:
        return len(self._rows)
