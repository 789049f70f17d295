"""Graded ideals from homogeneous generators.

Provides degreewise graded pieces I_t, the Hilbert function of A = R/I,
an artinian test with an explicit bound, the inverse-system perp of a
graded piece, degreewise ideal membership and syzygy-space dimensions.

Graded pieces are computed independently per degree (no reuse of
lower-degree eliminations) and memoised on the ideal instance.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import (
    DimensionMismatch,
    InputError,
    MixedDegreeError,
    ProportionalFormsError,
)
from .exactlin import (
    ExactMatrix,
    FieldSpec,
    ensure_characteristic_exceeds,
)
from .polyring import (
    HPoly,
    basis_index,
    default_var_names,
    monomial_basis,
    monomial_factorial,
    parse_poly,
    ring_dim,
    shift_monomial,
)


@dataclass(frozen=True)
class GradedPiece:
    """Row-reduced basis of a degree-t subspace of R_t, in monomial coordinates."""

    degree: int
    matrix: ExactMatrix  # RREF, exactly `dim` rows
    dim: int
    pivots: tuple[int, ...]

    def contains(self, f: HPoly, field: FieldSpec) -> bool:
        if f.is_zero:
            return True
        if f.degree != self.degree:
            return False
        if self.dim == 0:
            return False
        return self.matrix.row_space_contains(f.coefficient_vector(field))


@dataclass(frozen=True)
class HilbertData:
    """Values h_A(t) for t = 0..t_max and the socle degree when it is visible."""

    values: tuple[int, ...]
    socle_degree: int | None  # None when h_A(t_max) > 0 (socle not reached)

    @property
    def reached_zero(self) -> bool:
        return self.socle_degree is not None or (self.values and self.values[-1] == 0)


@dataclass(frozen=True)
class ArtinianVerdict:
    """Three-valued artinian test result.

    ``status`` is "artinian" when the quotient is provably finite
    dimensional, "not-artinian" when it provably is not (structural
    criteria for monomial and power ideals), and "unknown-beyond-bound"
    when the bounded Hilbert scan stayed positive -- deliberately
    distinct from a plain False.
    """

    status: str
    bound: int

    def __bool__(self) -> bool:
        return self.status == "artinian"


class GradedIdeal:
    """Homogeneous ideal given by generators, with degreewise machinery.

    ``power_forms``, when given, records that the generators are d-th
    powers of those linear forms; it unlocks the cheap structural
    artinian criterion.
    """

    def __init__(self, field: FieldSpec, nvars: int, generators, power_forms=None):
        gens = tuple(generators)
        for g in gens:
            if not isinstance(g, HPoly) or g.nvars != nvars:
                raise DimensionMismatch("generator in the wrong ring")
            if g.is_zero or g.reduce(field).is_zero:
                raise InputError("generator vanishes over the chosen field")
        self.field = field
        self.nvars = nvars
        self.generators = gens
        self.power_forms = tuple(power_forms) if power_forms is not None else None
        self._pieces: dict[int, GradedPiece] = {}
        self._dims: dict[int, int] = {}
        self._perps: dict[int, GradedPiece] = {}
        self._variants: dict[FieldSpec, "GradedIdeal"] = {field: self}
        self._artinian: ArtinianVerdict | None = None
        self._socle: tuple[int | None] | None = None
        self._caveats: list[str] | None = None

    # -- bookkeeping ---------------------------------------------------

    @property
    def ngens(self) -> int:
        return len(self.generators)

    @property
    def generator_degrees(self) -> tuple[int, ...]:
        return tuple(g.degree for g in self.generators)

    @property
    def common_degree(self) -> int | None:
        degs = set(self.generator_degrees)
        return degs.pop() if len(degs) == 1 else None

    def duplicate_generator_pairs(self) -> list[tuple[int, int]]:
        """Index pairs of generators that are proportional over the field."""
        monic = []
        for g in self.generators:
            red = g.reduce(self.field)
            lead = max(red.terms)
            inv = self.field.invert(red.terms[lead])
            monic.append((inv * red).reduce(self.field))
        out = []
        for i in range(len(monic)):
            for j in range(i + 1, len(monic)):
                if monic[i] == monic[j]:
                    out.append((i, j))
        return out

    def caveats(self) -> list[str]:
        if self._caveats is None:
            flags = []
            if self.duplicate_generator_pairs():
                flags.append("duplicate-generators")
            verdict = self.artinian_verdict()
            if verdict.status == "not-artinian":
                flags.append("not-artinian")
            elif verdict.status == "unknown-beyond-bound":
                flags.append(f"not-artinian-up-to-bound-{verdict.bound}")
            self._caveats = flags
        return list(self._caveats)

    def with_field(self, field: FieldSpec) -> "GradedIdeal":
        """The same generators viewed over another field (pieces cached per field)."""
        if field not in self._variants:
            other = GradedIdeal(field, self.nvars, self.generators,
                                power_forms=self.power_forms)
            other._variants = self._variants
            self._variants[field] = other
        return self._variants[field]

    @property
    def is_monomial(self) -> bool:
        return all(len(g.terms) == 1 for g in self.generators)

    # -- graded pieces ---------------------------------------------------

    def _product_matrix(self, t: int) -> ExactMatrix:
        cols = ring_dim(self.nvars, t)
        rows = []
        for g in self.generators:
            e = t - g.degree
            if e < 0:
                continue
            idx = basis_index(self.nvars, t)
            for mono in monomial_basis(self.nvars, e):
                rows.append(
                    {idx[m]: c for m, c in shift_monomial(g, mono).items()}
                )
        return ExactMatrix.from_dict_rows(self.field, cols, rows)

    def graded_piece(self, t: int) -> GradedPiece:
        """Row-reduced basis of I_t = sum_j R_{t - deg g_j} * g_j."""
        if t in self._pieces:
            return self._pieces[t]
        matrix = self._product_matrix(t)
        reduced = matrix.rref_nonzero()
        piece = GradedPiece(t, reduced, reduced.nrows, matrix.rref()[1])
        self._pieces[t] = piece
        self._dims[t] = piece.dim
        return piece

    def piece_dim(self, t: int) -> int:
        """dim I_t without materializing the reduced basis (rank only)."""
        if t not in self._dims:
            if t in self._pieces:
                self._dims[t] = self._pieces[t].dim
            else:
                self._dims[t] = self._product_matrix(t).rank()
        return self._dims[t]

    def product_row_count(self, t: int) -> int:
        """Number of monomial-times-generator products spanning I_t."""
        return sum(ring_dim(self.nvars, t - d) for d in self.generator_degrees)

    def hilbert_value(self, t: int) -> int:
        if t < 0:
            return 0
        return ring_dim(self.nvars, t) - self.piece_dim(t)

    def hilbert_function(self, t_max: int) -> HilbertData:
        values = tuple(self.hilbert_value(t) for t in range(t_max + 1))
        socle = None
        for t, h in enumerate(values):
            if h == 0:
                socle = t - 1
                break
        return HilbertData(values, socle)

    def artinian_bound(self) -> int:
        dmax = max(self.generator_degrees, default=1)
        return self.nvars * (dmax - 1) + 1

    def _structural_artinian(self) -> bool | None:
        """Exact artinian criteria that avoid any elimination.

        Monomial ideals are artinian iff a pure power of every variable
        appears among the generators; ideals of d-th powers of linear
        forms are artinian iff the forms span the space of linear forms.
        Returns None when neither structure applies.
        """
        if self.power_forms is not None:
            matrix = ExactMatrix.from_rows(
                self.field,
                [f.linear_coefficients() for f in self.power_forms],
                self.nvars,
            )
            return matrix.rank() == self.nvars
        if self.is_monomial:
            covered = set()
            for g in self.generators:
                mono = next(iter(g.terms))
                support = [v for v, e in enumerate(mono) if e]
                if len(support) == 1:
                    covered.add(support[0])
            return len(covered) == self.nvars
        return None

    def artinian_verdict(self) -> ArtinianVerdict:
        """Structural criteria first; otherwise h_A is scanned up to
        (n+1)(d_max - 1) + 1, which suffices whenever the generators
        contain a full system of parameters.  Past the bound we report
        "unknown-beyond-bound" rather than guessing.
        """
        if self._artinian is None:
            bound = self.artinian_bound()
            structural = self._structural_artinian()
            if structural is True:
                self._artinian = ArtinianVerdict("artinian", bound)
            elif structural is False:
                self._artinian = ArtinianVerdict("not-artinian", bound)
            else:
                status = "unknown-beyond-bound"
                for t in range(bound + 1):
                    # stop at the first zero: once h vanishes it stays zero
                    if self.hilbert_value(t) == 0:
                        status = "artinian"
                        break
                self._artinian = ArtinianVerdict(status, bound)
        return self._artinian

    def socle_degree(self) -> int | None:
        """Largest t with h_A(t) > 0, or None if not (known) artinian."""
        if self._socle is None:
            if not self.artinian_verdict():
                self._socle = (None,)
            else:
                t = 0
                while self.hilbert_value(t) > 0:
                    t += 1
                self._socle = (t - 1,)
        return self._socle[0]

    # -- inverse system ----------------------------------------------------

    def perp_basis(self, t: int) -> GradedPiece:
        """Basis of the degree-t inverse system: forms killed by every
        element of I_t under the differentiation (apolarity) pairing.

        For a monomial ideal this is exactly the complement monomials.
        Requires characteristic > t so the pairing weights are invertible.
        """
        if t in self._perps:
            return self._perps[t]
        ensure_characteristic_exceeds(self.field, t)
        piece = self.graded_piece(t)
        cols = ring_dim(self.nvars, t)
        if piece.dim == 0:
            matrix = ExactMatrix.identity(self.field, cols)
            perp = GradedPiece(t, matrix, cols, tuple(range(cols)))
        else:
            weights = [
                self.field.coerce(monomial_factorial(m))
                for m in monomial_basis(self.nvars, t)
            ]
            scaled_rows = []
            for i in range(piece.dim):
                row = piece.matrix.row(i)
                scaled_rows.append(
                    [self.field.coerce(a * w) for a, w in zip(row, weights)]
                )
            scaled = ExactMatrix.from_rows(self.field, scaled_rows, cols)
            null = scaled.nullspace_basis()
            matrix = ExactMatrix.from_rows(self.field, null, cols).rref_nonzero()
            perp = GradedPiece(t, matrix, matrix.nrows, matrix.rref()[1])
        self._perps[t] = perp
        return perp

    def perp_polys(self, t: int, var_names=None) -> list[HPoly]:
        """The perp basis as polynomials (rows of the reduced basis matrix)."""
        perp = self.perp_basis(t)
        basis = monomial_basis(self.nvars, t)
        out = []
        for i in range(perp.dim):
            row = perp.matrix.row(i)
            out.append(HPoly(self.nvars, {m: c for m, c in zip(basis, row) if c != 0}))
        return out

    # -- membership and syzygies -------------------------------------------

    def membership_in_degree(self, f: HPoly) -> bool:
        """True iff the homogeneous f lies in I_{deg f}."""
        if f.is_zero:
            return True
        return self.graded_piece(f.degree).contains(f, self.field)

    def syzygy_dim(self, i: int) -> int:
        """dim of degree-i syzygies: kernel of (R_i)^r -> R_{d+i}, (G_j) -> sum G_j g_j.

        Requires all generators of one degree d.  Equals
        r * dim R_i  -  dim I_{d+i}  by rank-nullity on the product matrix.
        """
        d = self.common_degree
        if d is None:
            raise MixedDegreeError("syzygy_dim needs equal-degree generators")
        if i < 0:
            raise ValueError("negative degree")
        return self.ngens * ring_dim(self.nvars, i) - self.graded_piece(d + i).dim

    def __repr__(self) -> str:
        return (
            f"GradedIdeal({self.ngens} generators of degrees "
            f"{self.generator_degrees} over {self.field.tag})"
        )


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------


def proportional(f: HPoly, g: HPoly, field: FieldSpec) -> bool:
    fr, gr = f.reduce(field), g.reduce(field)
    if fr.is_zero or gr.is_zero:
        return fr.is_zero and gr.is_zero
    if set(fr.terms) != set(gr.terms):
        return False
    lead = max(fr.terms)
    ratio = field.coerce(gr.terms[lead] * field.invert(fr.terms[lead]))
    return all(
        field.coerce(c * ratio) == gr.terms[m] for m, c in fr.terms.items()
    )


def power_ideal(linear_forms, d: int, field: FieldSpec) -> GradedIdeal:
    """The ideal (L_1^d, ..., L_r^d) for pairwise non-proportional linear forms."""
    forms = list(linear_forms)
    if not forms:
        raise InputError("no linear forms")
    nvars = forms[0].nvars
    for f in forms:
        if f.degree != 1:
            raise InputError("power_ideal takes linear forms")
    for i in range(len(forms)):
        for j in range(i + 1, len(forms)):
            if proportional(forms[i], forms[j], field):
                raise ProportionalFormsError(
                    f"forms {i} and {j} are proportional"
                )
    return GradedIdeal(field, nvars, [f.power(d) for f in forms],
                       power_forms=forms)


# ---------------------------------------------------------------------------
# JSON input schema
# ---------------------------------------------------------------------------


def field_from_obj(obj) -> FieldSpec:
    if obj is None:
        return FieldSpec.prime()
    if obj == "rational":
        return FieldSpec.rational()
    if isinstance(obj, dict) and "prime" in obj:
        return FieldSpec.prime(obj["prime"])
    raise InputError(f"bad field spec: {obj!r}")


def ideal_from_obj(obj: dict, field: FieldSpec | None = None) -> tuple[GradedIdeal, tuple[str, ...]]:
    """Build an ideal from the JSON schema; returns (ideal, variable names).

    Schema::

        {"vars": ["x","y","z"], "field": {"prime": P},
         "generators": ["x^3", "y^3", "z^3", "x*y*z"]}

    or::

        {"field": ..., "power_ideal":
            {"linear_forms": [[1,0,0],[0,1,0],[0,0,1]], "exponent": 4}}
    """
    if not isinstance(obj, dict):
        raise InputError("ideal file must contain a JSON object")
    fld = field if field is not None else field_from_obj(obj.get("field"))
    if "power_ideal" in obj:
        spec = obj["power_ideal"]
        try:
            coeff_lists = spec["linear_forms"]
            exponent = spec["exponent"]
        except (TypeError, KeyError) as exc:
            raise InputError(f"bad power_ideal spec: missing {exc}") from exc
        forms = [HPoly.linear(c) for c in coeff_lists]
        nvars = forms[0].nvars if forms else 0
        names = tuple(obj.get("vars", default_var_names(nvars)))
        return power_ideal(forms, exponent, fld), names
    if "generators" in obj:
        if "vars" not in obj:
            raise InputError("ideal file needs a 'vars' list")
        names = tuple(obj["vars"])
        gens = [parse_poly(text, names) for text in obj["generators"]]
        return GradedIdeal(fld, len(names), gens), names
    raise InputError("ideal file needs 'generators' or 'power_ideal'")


def load_ideal(path, field: FieldSpec | None = None):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from exc
    return ideal_from_obj(obj, field)
