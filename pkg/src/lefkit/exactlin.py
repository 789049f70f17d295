"""Exact dense linear algebra over a prime field or the rationals.

Every verdict in this package reduces to a rank, a nullspace or a
membership test computed here.  Prime-field matrices are stored as int64
arrays and reduced modulo p after each elimination step; rational
matrices hold ``fractions.Fraction`` entries.  Both paths are exact --
there is no floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import CharacteristicError, DimensionMismatch, FieldError

DEFAULT_PRIME = 2147483647
SECOND_PRIME = 1000000007

# The int64 backend needs (p-1)^2 to stay below 2^63.
MAX_PRIME = 3037000499

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test, exact for every n < 2**64."""
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for b in _MR_BASES:
        x = pow(b, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """A coefficient field: GF(p) for an explicit prime p, or the rationals."""

    kind: str
    p: int | None = None

    def __post_init__(self) -> None:
        if self.kind == "prime":
            if not isinstance(self.p, int) or not is_prime(self.p):
                raise FieldError(f"not a prime: {self.p!r}")
            if self.p > MAX_PRIME:
                raise FieldError(
                    f"prime {self.p} exceeds the int64 backend limit {MAX_PRIME}"
                )
        elif self.kind == "rational":
            if self.p is not None:
                raise FieldError("the rational field takes no modulus")
        else:
            raise FieldError(f"unknown field kind: {self.kind!r}")

    @staticmethod
    def prime(p: int = DEFAULT_PRIME) -> "FieldSpec":
        return FieldSpec("prime", p)

    @staticmethod
    def rational() -> "FieldSpec":
        return FieldSpec("rational")

    @property
    def is_prime_field(self) -> bool:
        return self.kind == "prime"

    @property
    def tag(self) -> str:
        return f"prime:{self.p}" if self.kind == "prime" else "rational"

    def coerce(self, x):
        """Map an int or Fraction to the canonical representative in the field."""
        if self.kind == "prime":
            if isinstance(x, Fraction):
                if x.denominator % self.p == 0:
                    raise ZeroDivisionError(f"denominator divisible by {self.p}")
                return x.numerator * pow(x.denominator, -1, self.p) % self.p
            return int(x) % self.p
        if isinstance(x, Fraction):
            return x
        return Fraction(x)

    def invert(self, x):
        x = self.coerce(x)
        if x == 0:
            raise ZeroDivisionError("inverting the zero field element")
        if self.kind == "prime":
            return pow(x, -1, self.p)
        return 1 / x

    def negate(self, x):
        x = self.coerce(x)
        return -x % self.p if self.kind == "prime" else -x


def ensure_characteristic_exceeds(field: FieldSpec, bound: int) -> None:
    """Guard for operations that invert factorials up to ``bound``."""
    if field.is_prime_field and field.p <= bound:
        raise CharacteristicError(
            f"characteristic {field.p} too small for working degree {bound}"
        )


def _rref_prime(a: np.ndarray, p: int):
    """In-place-style RREF mod p; returns (reduced array, pivot columns)."""
    a = a % p
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), -1, p)
        if inv != 1:
            a[r] = a[r] * inv % p
        col = a[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            # factor * pivot row stays below 2^63 because p <= MAX_PRIME
            a[rows] = (a[rows] - col[rows, None] * a[r][None, :]) % p
        pivots.append(c)
        r += 1
    return a, tuple(pivots)


def _echelon_rank_prime(a: np.ndarray, p: int) -> int:
    """Rank only: forward elimination, no reduction above pivots."""
    a = a % p
    nrows, ncols = a.shape
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), -1, p)
        if inv != 1:
            a[r] = a[r] * inv % p
        col = a[r + 1:, c]
        rows = np.flatnonzero(col) + r + 1
        if rows.size:
            a[rows] = (a[rows] - a[rows, c][:, None] * a[r][None, :]) % p
        r += 1
    return r


def _rref_rational(rows):
    rows = [list(r) for r in rows]
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pivot_row = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if pivot_row is None:
            continue
        if pivot_row != r:
            rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        pv = rows[r][c]
        if pv != 1:
            rows[r] = [x / pv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return [tuple(row) for row in rows], tuple(pivots)


class ExactMatrix:
    """Immutable dense matrix over a :class:`FieldSpec`.

    RREF data (reduced form, pivot columns, rank) is computed once and
    cached; all derived queries reuse it.
    """

    __slots__ = ("field", "nrows", "ncols", "_a", "_frows", "_rref_cache", "_rank_cache")

    def __init__(self, field: FieldSpec, nrows: int, ncols: int, store, _raw=False):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        self._rref_cache = None
        self._rank_cache = None
        if field.is_prime_field:
            self._frows = None
            if _raw:
                self._a = store
            else:
                a = np.zeros((nrows, ncols), dtype=np.int64)
                for i, row in enumerate(store):
                    for j, x in enumerate(row):
                        a[i, j] = field.coerce(x)
                self._a = a
        else:
            self._a = None
            if _raw:
                self._frows = store
            else:
                self._frows = tuple(
                    tuple(field.coerce(x) for x in row) for row in store
                )

    # -- construction -------------------------------------------------

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence], ncols: int | None = None):
        rows = list(rows)
        if ncols is None:
            if not rows:
                raise DimensionMismatch("ncols required for an empty matrix")
            ncols = len(rows[0])
        for row in rows:
            if len(row) != ncols:
                raise DimensionMismatch("ragged rows")
        return cls(field, len(rows), ncols, rows)

    @classmethod
    def from_dict_rows(cls, field: FieldSpec, ncols: int, dict_rows: Iterable[dict]):
        dict_rows = list(dict_rows)
        if field.is_prime_field:
            p = field.p
            a = np.zeros((len(dict_rows), ncols), dtype=np.int64)
            for i, d in enumerate(dict_rows):
                for j, x in d.items():
                    a[i, j] = x % p if isinstance(x, int) else field.coerce(x)
            return cls(field, len(dict_rows), ncols, a, _raw=True)
        rows = []
        for d in dict_rows:
            row = [Fraction(0)] * ncols
            for j, x in d.items():
                row[j] = field.coerce(x)
            rows.append(tuple(row))
        return cls(field, len(rows), ncols, tuple(rows), _raw=True)

    @classmethod
    def zeros(cls, field: FieldSpec, nrows: int, ncols: int):
        if field.is_prime_field:
            return cls(field, nrows, ncols,
                       np.zeros((nrows, ncols), dtype=np.int64), _raw=True)
        zero = Fraction(0)
        return cls(field, nrows, ncols,
                   tuple(tuple(zero for _ in range(ncols)) for _ in range(nrows)),
                   _raw=True)

    @classmethod
    def identity(cls, field: FieldSpec, n: int):
        if field.is_prime_field:
            return cls(field, n, n, np.eye(n, dtype=np.int64), _raw=True)
        rows = tuple(
            tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n)
        )
        return cls(field, n, n, rows, _raw=True)

    # -- element access -----------------------------------------------

    def entry(self, i: int, j: int):
        if self.field.is_prime_field:
            return int(self._a[i, j])
        return self._frows[i][j]

    def row(self, i: int) -> tuple:
        if self.field.is_prime_field:
            return tuple(int(x) for x in self._a[i])
        return self._frows[i]

    def rows(self) -> list[tuple]:
        return [self.row(i) for i in range(self.nrows)]

    # -- shape surgery ------------------------------------------------

    def stack(self, other: "ExactMatrix") -> "ExactMatrix":
        if other.ncols != self.ncols or other.field != self.field:
            raise DimensionMismatch("stack: incompatible matrices")
        if self.field.is_prime_field:
            a = np.vstack([self._a, other._a])
            return ExactMatrix(self.field, a.shape[0], self.ncols, a, _raw=True)
        return ExactMatrix(self.field, self.nrows + other.nrows, self.ncols,
                           self._frows + other._frows, _raw=True)

    def stack_rows(self, rows: Sequence[Sequence]) -> "ExactMatrix":
        return self.stack(ExactMatrix.from_rows(self.field, rows, self.ncols))

    def with_column(self, column: Sequence) -> "ExactMatrix":
        if len(column) != self.nrows:
            raise DimensionMismatch(
                f"column of length {len(column)} against {self.nrows} rows"
            )
        if self.field.is_prime_field:
            v = np.array([self.field.coerce(x) for x in column],
                         dtype=np.int64).reshape(-1, 1)
            a = np.hstack([self._a, v])
            return ExactMatrix(self.field, self.nrows, self.ncols + 1, a, _raw=True)
        rows = tuple(
            row + (self.field.coerce(x),) for row, x in zip(self._frows, column)
        )
        return ExactMatrix(self.field, self.nrows, self.ncols + 1, rows, _raw=True)

    def transpose(self) -> "ExactMatrix":
        if self.field.is_prime_field:
            return ExactMatrix(self.field, self.ncols, self.nrows,
                               self._a.T.copy(), _raw=True)
        rows = tuple(
            tuple(self._frows[i][j] for i in range(self.nrows))
            for j in range(self.ncols)
        )
        return ExactMatrix(self.field, self.ncols, self.nrows, rows, _raw=True)

    # -- elimination --------------------------------------------------

    def rref(self) -> tuple["ExactMatrix", tuple[int, ...]]:
        """Reduced row echelon form and the (strictly increasing) pivot columns."""
        if self._rref_cache is None:
            if self.nrows == 0 or self.ncols == 0:
                self._rref_cache = (self, ())
            elif self.field.is_prime_field:
                a, piv = _rref_prime(self._a, self.field.p)
                self._rref_cache = (
                    ExactMatrix(self.field, self.nrows, self.ncols, a, _raw=True),
                    piv,
                )
            else:
                rows, piv = _rref_rational(self._frows)
                self._rref_cache = (
                    ExactMatrix(self.field, self.nrows, self.ncols,
                                tuple(rows), _raw=True),
                    piv,
                )
        return self._rref_cache

    def rank(self) -> int:
        if self._rank_cache is None:
            if self._rref_cache is not None:
                self._rank_cache = len(self._rref_cache[1])
            elif self.field.is_prime_field and self.nrows and self.ncols:
                # rank alone is cheaper than the full reduced form
                self._rank_cache = _echelon_rank_prime(self._a, self.field.p)
            else:
                self._rank_cache = len(self.rref()[1])
        return self._rank_cache

    def rref_nonzero(self) -> "ExactMatrix":
        """The first rank(M) rows of the RREF: a canonical row-space basis."""
        red, piv = self.rref()
        r = len(piv)
        if self.field.is_prime_field:
            return ExactMatrix(self.field, r, self.ncols, red._a[:r].copy(), _raw=True)
        return ExactMatrix(self.field, r, self.ncols, red._frows[:r], _raw=True)

    def nullspace_basis(self) -> list[tuple]:
        """Independent vectors v with M v = 0; count = ncols - rank."""
        red, piv = self.rref()
        pivset = set(piv)
        free = [c for c in range(self.ncols) if c not in pivset]
        basis = []
        for fc in free:
            if self.field.is_prime_field:
                p = self.field.p
                v = [0] * self.ncols
                v[fc] = 1
                for ri, pc in enumerate(piv):
                    v[pc] = (-int(red._a[ri, fc])) % p
            else:
                v = [Fraction(0)] * self.ncols
                v[fc] = Fraction(1)
                for ri, pc in enumerate(piv):
                    v[pc] = -red._frows[ri][fc]
            basis.append(tuple(v))
        return basis

    def row_space_contains(self, vector: Sequence) -> bool:
        if len(vector) != self.ncols:
            raise DimensionMismatch("vector length does not match column count")
        return self.stack_rows([vector]).rank() == self.rank()

    # -- misc ----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if (self.field, self.nrows, self.ncols) != (other.field, other.nrows, other.ncols):
            return False
        if self.field.is_prime_field:
            return bool(np.array_equal(self._a, other._a))
        return self._frows == other._frows

    def __hash__(self):
        return hash((self.field, self.nrows, self.ncols, tuple(self.rows())))

    def __repr__(self) -> str:
        return f"ExactMatrix({self.nrows}x{self.ncols} over {self.field.tag})"


# Functional aliases matching the operation names used throughout the docs.

def rref(m: ExactMatrix) -> tuple[ExactMatrix, tuple[int, ...]]:
    return m.rref()


def rank(m: ExactMatrix) -> int:
    return m.rank()


def nullspace_basis(m: ExactMatrix) -> list[tuple]:
    return m.nullspace_basis()


def in_column_space(m: ExactMatrix, v: Sequence) -> bool:
    """True iff v lies in the span of M's columns: rank([M | v]) == rank(M)."""
    return m.with_column(v).rank() == m.rank()
