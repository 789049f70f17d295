"""Sparse homogeneous polynomials in n+1 variables with exact coefficients.

Coefficients are Python ints or Fractions -- a characteristic-zero lift.
Reduction into a concrete field happens only when coefficient vectors or
values are extracted, so one polynomial is reusable over the primary
prime, the confirmation prime and the rationals.

Monomials are exponent tuples.  The global term order is graded
lexicographic with x0 > x1 > ... > xn, so matrix column indices are
reproducible across runs.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import (
    DimensionMismatch,
    NonHomogeneousError,
    PolyParseError,
    UnknownVariableError,
)
from .exactlin import FieldSpec

Monomial = tuple  # exponent tuple of length nvars


def ring_dim(nvars: int, t: int) -> int:
    """dim of the degree-t piece of a polynomial ring in ``nvars`` variables.

    Equals C(nvars-1+t, nvars-1); zero for t < 0 by convention.
    """
    if t < 0:
        return 0
    return math.comb(nvars - 1 + t, nvars - 1)


@lru_cache(maxsize=4096)
def monomial_basis(nvars: int, t: int) -> tuple[Monomial, ...]:
    """All degree-t monomials in graded-lex order (x0 > x1 > ... > xn)."""
    if t < 0:
        return ()
    if nvars == 1:
        return ((t,),)

    def gen(total, parts):
        if parts == 1:
            yield (total,)
            return
        for first in range(total, -1, -1):
            for rest in gen(total - first, parts - 1):
                yield (first,) + rest

    return tuple(gen(t, nvars))


@lru_cache(maxsize=4096)
def basis_index(nvars: int, t: int) -> dict:
    """Monomial -> column index for the degree-t basis."""
    return {m: i for i, m in enumerate(monomial_basis(nvars, t))}


def monomial_factorial(m: Monomial) -> int:
    """Product of factorials of the exponents (the apolar pairing weight)."""
    out = 1
    for e in m:
        out *= math.factorial(e)
    return out


def default_var_names(nvars: int) -> tuple[str, ...]:
    if nvars <= 4:
        return ("x", "y", "z", "t")[:nvars]
    return tuple(f"x{i}" for i in range(nvars))


class HPoly:
    """A homogeneous polynomial: nonzero terms only, all of one degree."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: dict):
        clean = {}
        degree = None
        for mono, coeff in terms.items():
            if coeff == 0:
                continue
            if len(mono) != nvars or any(e < 0 for e in mono):
                raise DimensionMismatch(f"bad exponent tuple {mono!r}")
            d = sum(mono)
            if degree is None:
                degree = d
            elif d != degree:
                raise NonHomogeneousError(
                    f"mixed degrees {degree} and {d} in one polynomial"
                )
            clean[tuple(mono)] = coeff
        self.nvars = nvars
        self.terms = clean
        self._hash = None

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "HPoly":
        return cls(nvars, {})

    @classmethod
    def one(cls, nvars: int) -> "HPoly":
        return cls(nvars, {(0,) * nvars: 1})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "HPoly":
        expo = [0] * nvars
        expo[index] = 1
        return cls(nvars, {tuple(expo): 1})

    @classmethod
    def from_monomial(cls, nvars: int, expo: Sequence[int], coeff=1) -> "HPoly":
        return cls(nvars, {tuple(expo): coeff})

    @classmethod
    def linear(cls, coeffs: Sequence) -> "HPoly":
        """Linear form with the given coefficient vector."""
        nvars = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            if c != 0:
                expo = [0] * nvars
                expo[i] = 1
                terms[tuple(expo)] = c
        return cls(nvars, terms)

    # -- basic queries ----------------------------------------------------

    @property
    def degree(self):
        """Common degree of the terms, or None for the zero polynomial."""
        if not self.terms:
            return None
        return sum(next(iter(self.terms)))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def linear_coefficients(self) -> tuple:
        """Coefficient vector of a degree-1 form."""
        if self.degree != 1:
            raise DimensionMismatch("not a linear form")
        out = [0] * self.nvars
        for mono, c in self.terms.items():
            out[mono.index(1)] = c
        return tuple(out)

    # -- arithmetic -------------------------------------------------------

    def _check_compat(self, other: "HPoly"):
        if self.nvars != other.nvars:
            raise DimensionMismatch("polynomials in different rings")

    def __add__(self, other: "HPoly") -> "HPoly":
        self._check_compat(other)
        terms = dict(self.terms)
        for mono, c in other.terms.items():
            terms[mono] = terms.get(mono, 0) + c
        return HPoly(self.nvars, terms)

    def __sub__(self, other: "HPoly") -> "HPoly":
        return self + (-other)

    def __neg__(self) -> "HPoly":
        return HPoly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, HPoly):
            self._check_compat(other)
            terms = {}
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    m = tuple(a + b for a, b in zip(m1, m2))
                    terms[m] = terms.get(m, 0) + c1 * c2
            return HPoly(self.nvars, terms)
        return HPoly(self.nvars, {m: c * other for m, c in self.terms.items()})

    def __rmul__(self, scalar) -> "HPoly":
        return self * scalar

    def power(self, k: int) -> "HPoly":
        if k < 0:
            raise ValueError("negative power")
        out = HPoly.one(self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def partial_derivative(self, var_index: int, order: int = 1) -> "HPoly":
        """Formal partial derivative of the given order (exact, over Z/Q)."""
        if order < 0:
            raise ValueError("negative derivative order")
        if not 0 <= var_index < self.nvars:
            raise DimensionMismatch(f"no variable {var_index}")
        terms = {}
        for mono, c in self.terms.items():
            e = mono[var_index]
            if e < order:
                continue
            factor = 1
            for j in range(order):
                factor *= e - j
            m = list(mono)
            m[var_index] = e - order
            terms[tuple(m)] = terms.get(tuple(m), 0) + c * factor
        return HPoly(self.nvars, terms)

    def evaluate(self, point: Sequence, field: FieldSpec):
        """Value at a point with coordinates in the given field."""
        if len(point) != self.nvars:
            raise DimensionMismatch(
                f"point of length {len(point)} in a {self.nvars}-variable ring"
            )
        coords = [field.coerce(x) for x in point]
        if field.is_prime_field:
            p = field.p
            total = 0
            for mono, c in self.terms.items():
                term = field.coerce(c)
                for x, e in zip(coords, mono):
                    if e:
                        term = term * pow(x, e, p) % p
                total = (total + term) % p
            return total
        total = Fraction(0)
        for mono, c in self.terms.items():
            term = field.coerce(c)
            for x, e in zip(coords, mono):
                if e:
                    term *= x**e
            total += term
        return total

    # -- field views --------------------------------------------------------

    def reduce(self, field: FieldSpec) -> "HPoly":
        """Canonical representative with coefficients coerced into the field."""
        return HPoly(self.nvars, {m: field.coerce(c) for m, c in self.terms.items()})

    def coefficient_row(self, field: FieldSpec, degree: int | None = None) -> dict:
        """Sparse column-index -> field coefficient row for matrix building."""
        d = self.degree if degree is None else degree
        if d is None:
            raise DimensionMismatch("zero polynomial needs an explicit degree")
        if self.degree is not None and self.degree != d:
            raise DimensionMismatch("degree mismatch")
        idx = basis_index(self.nvars, d)
        return {idx[m]: field.coerce(c) for m, c in self.terms.items()}

    def coefficient_vector(self, field: FieldSpec, degree: int | None = None) -> list:
        d = self.degree if degree is None else degree
        row = self.coefficient_row(field, d)
        zero = 0 if field.is_prime_field else Fraction(0)
        out = [zero] * ring_dim(self.nvars, d)
        for j, c in row.items():
            out[j] = c
        return out

    # -- dunder -----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, HPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"HPoly({format_poly(self)})"


def multiply(f: HPoly, g: HPoly) -> HPoly:
    return f * g


def power(f: HPoly, k: int) -> HPoly:
    return f.power(k)


def shift_monomial(f: HPoly, mono: Monomial) -> dict:
    """Terms of ``m * f`` as a dict, without building an HPoly."""
    return {tuple(a + b for a, b in zip(m, mono)): c for m, c in f.terms.items()}


def random_linear_form(nvars: int, rng: random.Random, field: FieldSpec) -> HPoly:
    """Linear form with every coefficient uniform over the nonzero elements.

    Over the rationals the draw range mirrors the default prime so that
    identical seeds give identical integer coefficients in either field.
    """
    bound = field.p - 1 if field.is_prime_field else DEFAULT_RANDOM_BOUND
    return HPoly.linear([rng.randint(1, bound) for _ in range(nvars)])


DEFAULT_RANDOM_BOUND = 2147483646


# ---------------------------------------------------------------------------
# Text format: canonical printer and the (parenthesis-free) parser.
# ---------------------------------------------------------------------------


def format_poly(
    f: HPoly,
    var_names: Sequence[str] | None = None,
    field: FieldSpec | None = None,
) -> str:
    """Canonical string: graded-lex term order, ``c*x^a*y^b`` pieces.

    Coefficient 1 is elided.  Over a prime field coefficients print as the
    balanced residue (so -2 rather than p-2), which round-trips through
    the parser.
    """
    if var_names is None:
        var_names = default_var_names(f.nvars)
    if len(var_names) != f.nvars:
        raise DimensionMismatch("wrong number of variable names")
    if f.is_zero:
        return "0"

    def balanced(c):
        if field is not None and field.is_prime_field:
            c = field.coerce(c)
            if c > field.p // 2:
                c -= field.p
        return c

    pieces = []
    for mono in sorted(f.terms, reverse=True):
        c = balanced(f.terms[mono])
        factors = []
        for name, e in zip(var_names, mono):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        body = "*".join(factors)
        if not body:
            piece = str(abs(c))
        elif abs(c) == 1:
            piece = body
        else:
            piece = f"{abs(c)}*{body}"
        sign = "-" if c < 0 else "+"
        pieces.append((sign, piece))
    first_sign, first_piece = pieces[0]
    out = ("-" if first_sign == "-" else "") + first_piece
    for sign, piece in pieces[1:]:
        out += sign + piece
    return out


class _Parser:
    """expr := term (('+'|'-') term)*
    term := coeff? ('*'? factor)*
    factor := var ('^' uint)?
    coeff := int or int/int (optionally negative); whitespace ignored.
    """

    def __init__(self, text: str, var_names: Sequence[str]):
        self.text = text
        self.pos = 0
        self.names = {name: i for i, name in enumerate(var_names)}
        self.nvars = len(var_names)

    def error(self, message: str):
        raise PolyParseError(message, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take_uint(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            self.error("expected an integer")
        return int(self.text[start:self.pos])

    def take_name(self) -> str:
        self.skip_ws()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos].isalpha():
            self.pos += 1
            while self.pos < len(self.text) and (
                self.text[self.pos].isalnum() or self.text[self.pos] == "_"
            ):
                self.pos += 1
        if self.pos == start:
            self.error("expected a variable name")
        return self.text[start:self.pos]

    def parse_term(self):
        coeff = 1
        expo = [0] * self.nvars
        saw_anything = False
        ch = self.peek()
        if ch == "-":
            self.pos += 1
            coeff = -1
            ch = self.peek()
        if ch.isdigit():
            num = self.take_uint()
            if self.peek() == "/":
                self.pos += 1
                den = self.take_uint()
                if den == 0:
                    self.error("zero denominator")
                coeff *= Fraction(num, den)
            else:
                coeff *= num
            saw_anything = True
        while True:
            ch = self.peek()
            if ch == "*":
                self.pos += 1
                ch = self.peek()
                if not ch.isalpha():
                    self.error("expected a variable after '*'")
            if not ch.isalpha():
                break
            name_pos = self.pos
            name = self.take_name()
            if name not in self.names:
                raise UnknownVariableError(f"unknown variable {name!r}", name_pos)
            e = 1
            if self.peek() == "^":
                self.pos += 1
                e = self.take_uint()
            expo[self.names[name]] += e
            saw_anything = True
        if not saw_anything:
            self.error("empty term")
        return tuple(expo), coeff

    def parse(self) -> list[tuple[Monomial, object]]:
        terms = [self.parse_term()]
        while True:
            ch = self.peek()
            if ch == "":
                break
            if ch == "+":
                self.pos += 1
                terms.append(self.parse_term())
            elif ch == "-":
                # leave the sign for parse_term
                terms.append(self.parse_term())
            else:
                self.error(f"unexpected character {ch!r}")
        return terms


def parse_poly(text: str, var_names: Sequence[str]) -> HPoly:
    """Parse a homogeneous polynomial expression.

    Raises :class:`PolyParseError` (with position) on bad syntax,
    :class:`UnknownVariableError` for names outside ``var_names`` and
    :class:`NonHomogeneousError` when term degrees differ.
    """
    parsed = _Parser(text, var_names).parse()
    degrees = {sum(m) for m, _ in parsed}
    if len(degrees) > 1:
        raise NonHomogeneousError(
            f"terms of degrees {sorted(degrees)} in {text!r}"
        )
    terms: dict = {}
    for mono, c in parsed:
        terms[mono] = terms.get(mono, 0) + c
    return HPoly(len(var_names), terms)
