"""Linear systems of forms with multiplicity conditions at points.

A multiplicity-m condition at a point P means: every partial derivative
of order <= m-1 vanishes at P.  All such derivatives are imposed (not
just a spanning subset); the eliminations absorb the redundancy.  This
is the geometric side of the verdict engine: cokernels of multiplication
maps are, by apolarity, spaces of forms in the inverse system with a fat
point at the dual point of the multiplier.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import DimensionMismatch, InputError, ProportionalFormsError
from .exactlin import ExactMatrix, FieldSpec, ensure_characteristic_exceeds
from .gradedideal import GradedIdeal, proportional
from .lefschetz import DEFAULT_SEED, DEFAULT_TRIALS, derive_rng
from .polyring import HPoly, monomial_basis, ring_dim


@dataclass(frozen=True)
class FatPointCondition:
    """Vanishing to order >= multiplicity at a projective point.

    Imposes C(n + m - 1, n) linear conditions on degree-t forms in n+1
    variables (independent or not).
    """

    point: tuple
    multiplicity: int

    def __post_init__(self):
        if self.multiplicity < 1:
            raise InputError("multiplicity must be >= 1")

    def condition_count(self, nvars: int) -> int:
        return ring_dim(nvars, self.multiplicity - 1)


@dataclass(frozen=True)
class LinearSystem:
    """A subspace of the degree-t forms, as a row-reduced basis matrix."""

    field: FieldSpec
    nvars: int
    degree: int
    basis: ExactMatrix  # rows = forms in monomial coordinates, RREF
    conditions: tuple[FatPointCondition, ...] = ()

    @property
    def dim(self) -> int:
        return self.basis.nrows

    @classmethod
    def full(cls, field: FieldSpec, nvars: int, degree: int) -> "LinearSystem":
        return cls(field, nvars, degree,
                   ExactMatrix.identity(field, ring_dim(nvars, degree)))

    @classmethod
    def from_rows(cls, field: FieldSpec, nvars: int, degree: int, rows) -> "LinearSystem":
        m = ExactMatrix.from_rows(field, rows, ring_dim(nvars, degree)).rref_nonzero()
        return cls(field, nvars, degree, m)

    def polynomials(self) -> list[HPoly]:
        basis = monomial_basis(self.nvars, self.degree)
        return [
            HPoly(self.nvars, {m: c for m, c in zip(basis, row) if c != 0})
            for row in self.basis.rows()
        ]

    def contains(self, f: HPoly) -> bool:
        if f.is_zero:
            return True
        if f.degree != self.degree:
            return False
        return self.basis.row_space_contains(f.coefficient_vector(self.field))


def _derivative_row(nvars, degree, beta, point, field):
    """Ambient row w with w[alpha] = (d^beta x^alpha)(P)."""
    if field.is_prime_field:
        p = field.p
        coords = [field.coerce(x) for x in point]
        row = {}
        for j, alpha in enumerate(monomial_basis(nvars, degree)):
            if any(a < b for a, b in zip(alpha, beta)):
                continue
            val = 1
            for a, b, x in zip(alpha, beta, coords):
                for step in range(b):
                    val = val * (a - step) % p
                rest = a - b
                if rest:
                    val = val * pow(x, rest, p) % p
            if val:
                row[j] = val
        return row
    coords = [field.coerce(x) for x in point]
    row = {}
    for j, alpha in enumerate(monomial_basis(nvars, degree)):
        if any(a < b for a, b in zip(alpha, beta)):
            continue
        val = field.coerce(1)
        for a, b, x in zip(alpha, beta, coords):
            for step in range(b):
                val *= a - step
            rest = a - b
            if rest:
                val *= x**rest
        if val:
            row[j] = val
    return row


def fat_point_subspace(system: LinearSystem, conditions) -> LinearSystem:
    """Forms of the system vanishing to the required orders at the points.

    Solved in ambient coordinates: the subspace is the joint nullspace of
    (a) the dual description of the system's row space and (b) one row
    per derivative condition, so no basis-change products are needed.
    """
    conditions = tuple(conditions)
    field, nvars, degree = system.field, system.nvars, system.degree
    max_mult = max((c.multiplicity for c in conditions), default=1)
    ensure_characteristic_exceeds(field, max(degree, max_mult - 1))
    for cond in conditions:
        if len(cond.point) != nvars:
            raise DimensionMismatch("point has wrong length")
        if all(field.coerce(x) == 0 for x in cond.point):
            raise InputError("fat point at the zero vector")

    cols = ring_dim(nvars, degree)
    rows = []
    full_ambient = system.dim == cols
    if not full_ambient:
        rows.extend({j: v for j, v in enumerate(vec) if v != 0}
                    for vec in system.basis.nullspace_basis())
    for cond in conditions:
        for order in range(cond.multiplicity):
            for beta in monomial_basis(nvars, order):
                rows.append(_derivative_row(nvars, degree, beta, cond.point, field))

    constraint = ExactMatrix.from_dict_rows(field, cols, rows)
    solution = constraint.nullspace_basis()
    basis = ExactMatrix.from_rows(field, solution, cols).rref_nonzero()
    return LinearSystem(field, nvars, degree, basis,
                        system.conditions + conditions)


def perp_fat_dim(I: GradedIdeal, t: int, point, multiplicity: int) -> int:
    """dim of the degree-t inverse system of I with a fat point at ``point``."""
    perp = I.perp_basis(t)
    system = LinearSystem(I.field, I.nvars, t, perp.matrix)
    return fat_point_subspace(
        system, [FatPointCondition(tuple(point), multiplicity)]
    ).dim


def dual_point(L: HPoly) -> tuple:
    """Coefficient vector of a linear form, read as a point in the dual space."""
    return L.linear_coefficients()


def power_perp_dim(
    linear_forms,
    d: int,
    i: int,
    extra: FatPointCondition | None = None,
    field: FieldSpec | None = None,
) -> int:
    """Inverse-system dimension for (L_1^d, ..., L_r^d) in degree d+i,
    computed purely from fat points: forms of degree d+i with
    multiplicity i+1 at each dual point [L_j], plus an optional extra
    condition.  Never builds the ideal's graded pieces, so it serves as
    an independent oracle against :func:`perp_fat_dim`.
    """
    forms = list(linear_forms)
    if not forms:
        raise InputError("no linear forms")
    fld = field if field is not None else FieldSpec.prime()
    nvars = forms[0].nvars
    for a in range(len(forms)):
        for b in range(a + 1, len(forms)):
            if proportional(forms[a], forms[b], fld):
                raise ProportionalFormsError(f"forms {a} and {b} are proportional")
    conditions = [FatPointCondition(dual_point(L), i + 1) for L in forms]
    if extra is not None:
        conditions.append(extra)
    return fat_point_subspace(LinearSystem.full(fld, nvars, d + i), conditions).dim


def generic_fat_dim(
    system: LinearSystem,
    multiplicity: int,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
) -> int:
    """Dimension with a multiplicity condition at a generic point.

    Fat-point dimensions are upper semicontinuous in the point, so the
    generic value is the minimum over random points (all coordinates
    uniform nonzero) -- the polarity opposite to generic rank.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if system.dim == 0:
        return 0
    best = None
    bound = system.field.p - 1 if system.field.is_prime_field else 2147483646
    for t in range(1, trials + 1):
        rng = derive_rng(seed, "fatpoint", system.degree, multiplicity, t)
        point = tuple(rng.randint(1, bound) for _ in range(system.nvars))
        dim = fat_point_subspace(
            system, [FatPointCondition(point, multiplicity)]
        ).dim
        best = dim if best is None else min(best, dim)
    return best


def random_point(nvars: int, rng: random.Random, field: FieldSpec) -> tuple:
    bound = field.p - 1 if field.is_prime_field else 2147483646
    return tuple(rng.randint(1, bound) for _ in range(nvars))
