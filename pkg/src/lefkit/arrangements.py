"""Line arrangements in the projective plane.

An arrangement is a set of distinct lines with product polynomial f.
Its derivation bundle is the rank-2 kernel of the Jacobian map
(g0, g1, g2) -> g0 f_x + g1 f_y + g2 f_z, realized here degreewise.

Convention note: the Euler derivation sends f to (deg f) f, so it is not
a section of that kernel; Saito's determinant criterion is applied to
the full derivation module, i.e. the 3x3 matrix with rows (x, y, z),
theta_1, theta_2 whose determinant must equal c * f with c != 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import (
    InputError,
    NotASectionError,
    ProportionalFormsError,
)
from .exactlin import ExactMatrix, FieldSpec
from .fatpoints import FatPointCondition, LinearSystem, fat_point_subspace, random_point
from .gradedideal import GradedIdeal, power_ideal, proportional
from .lefschetz import (
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    MultMapReport,
    derive_rng,
    generic_mult_rank,
)
from .polyring import (
    HPoly,
    basis_index,
    monomial_basis,
    ring_dim,
    shift_monomial,
)


class LineArrangement:
    """Distinct (pairwise non-proportional) lines in the plane."""

    def __init__(self, field: FieldSpec, lines):
        lines = tuple(lines)
        if not lines:
            raise InputError("empty arrangement")
        for l in lines:
            if not isinstance(l, HPoly) or l.nvars != 3 or l.degree != 1:
                raise InputError("arrangement lines must be plane linear forms")
            if l.reduce(field).is_zero:
                raise InputError("line vanishes over the field")
        for i in range(len(lines)):
            for j in range(i + 1, len(lines)):
                if proportional(lines[i], lines[j], field):
                    raise ProportionalFormsError(f"lines {i} and {j} coincide")
        self.field = field
        self.lines = lines
        f = lines[0]
        for l in lines[1:]:
            f = f * l
        self.f = f
        self._sections: dict[int, list] = {}

    @property
    def size(self) -> int:
        return len(self.lines)

    def dual_points(self) -> list[tuple]:
        """The lines read as points of the dual plane."""
        return [l.linear_coefficients() for l in self.lines]

    def jacobian(self) -> tuple[HPoly, HPoly, HPoly]:
        return tuple(self.f.partial_derivative(v) for v in range(3))

    # -- sections of the derivation bundle ------------------------------

    def derivation_sections(self, e: int):
        """Basis of degree-e triples (g0, g1, g2) with sum g_v f_v = 0."""
        if e < 0:
            return []
        if e in self._sections:
            return self._sections[e]
        partials = self.jacobian()
        target = e + self.size - 1
        idx = basis_index(3, target)
        cols = []
        for partial in partials:
            for mono in monomial_basis(3, e):
                cols.append(
                    {idx[m]: c for m, c in shift_monomial(partial, mono).items()}
                )
        # transpose: build the matrix with one row per target monomial
        nrows = ring_dim(3, target)
        rows = [dict() for _ in range(nrows)]
        for j, col in enumerate(cols):
            for r, c in col.items():
                rows[r][j] = c
        matrix = ExactMatrix.from_dict_rows(self.field, len(cols), rows)
        null = matrix.nullspace_basis()
        canonical = ExactMatrix.from_rows(
            self.field, null, len(cols)
        ).rref_nonzero() if null else None

        basis_e = monomial_basis(3, e)
        r_e = ring_dim(3, e)
        sections = []
        vectors = canonical.rows() if canonical is not None else []
        for vec in vectors:
            triple = []
            for s in range(3):
                chunk = vec[s * r_e:(s + 1) * r_e]
                triple.append(
                    HPoly(3, {m: c for m, c in zip(basis_e, chunk) if c != 0})
                )
            sections.append(tuple(triple))
        self._sections[e] = sections
        return sections

    def section_dims(self, e_max: int) -> list[int]:
        return [len(self.derivation_sections(e)) for e in range(e_max + 1)]

    def is_section(self, triple) -> bool:
        g0, g1, g2 = triple
        fx, fy, fz = self.jacobian()
        combo = g0 * fx + g1 * fy + g2 * fz
        return combo.reduce(self.field).is_zero

    def __repr__(self) -> str:
        return f"LineArrangement({self.size} lines over {self.field.tag})"


def arrangement_from_obj(obj: dict, field: FieldSpec | None = None) -> LineArrangement:
    """Schema: {"lines": [[1,0,0],[0,1,0], ...], "field": ...?}."""
    if not isinstance(obj, dict) or "lines" not in obj:
        raise InputError("arrangement file needs a 'lines' list")
    from .gradedideal import field_from_obj

    fld = field if field is not None else field_from_obj(obj.get("field"))
    lines = [HPoly.linear(c) for c in obj["lines"]]
    for l in lines:
        if l.nvars != 3:
            raise InputError("lines need three coefficients")
    return LineArrangement(fld, lines)


def load_arrangement(path, field: FieldSpec | None = None) -> LineArrangement:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from exc
    return arrangement_from_obj(obj, field)


# ---------------------------------------------------------------------------
# Generic splitting on a line
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SplittingType:
    """Generic splitting pair (a, b), a <= b, a + b = |Z| - 1."""

    a: int
    b: int
    size: int
    caveats: tuple[str, ...] = ()


def _min_jump_degree(arr: LineArrangement, point) -> int:
    """Least a >= 0 admitting a degree-(a+1) curve through the dual points
    of the arrangement with multiplicity >= a at ``point``."""
    z = arr.size
    conditions_z = [FatPointCondition(p, 1) for p in arr.dual_points()]
    for a in range(z + 1):
        conds = list(conditions_z)
        if a >= 1:
            conds.append(FatPointCondition(tuple(point), a))
        system = LinearSystem.full(arr.field, 3, a + 1)
        if fat_point_subspace(system, conds).dim > 0:
            return a
    raise AssertionError("splitting search did not terminate")  # unreachable


def generic_splitting(
    arr: LineArrangement,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
) -> SplittingType:
    """Splitting of the derivation bundle on a generic line.

    The jump degree a* at a point is found by the fat-point search above;
    existence of a low-degree curve is a closed condition, so the generic
    value is the MAXIMUM of a* over random points (opposite polarity to
    generic rank).
    """
    best = 0
    for t in range(1, trials + 1):
        rng = derive_rng(seed, "splitting", arr.size, t)
        point = random_point(3, rng, arr.field)
        best = max(best, _min_jump_degree(arr, point))
    caveats = ()
    if best == 0:
        caveats = ("collinear-dual-points",)
    return SplittingType(best, arr.size - 1 - best, arr.size, caveats)


def is_unstable(
    arr: LineArrangement,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
) -> bool:
    """Rank-2 unstability: the generic splitting gap is |a - b| >= 2."""
    s = generic_splitting(arr, trials, seed)
    return s.b - s.a >= 2


# ---------------------------------------------------------------------------
# Freeness via the determinant criterion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FreenessCertificate:
    status: str  # "free" | "not_free"
    exponents: tuple[int, int] | None
    witnesses: tuple | None  # (theta1, theta2) as triples of HPoly
    scalar: object | None  # det == scalar * f
    section_dims: tuple[int, ...] | None
    caveats: tuple[str, ...] = ()

    @property
    def is_free(self) -> bool:
        return self.status == "free"


def _det3(rows) -> HPoly:
    (a, b, c), (d, e, f_), (g, h, i) = rows
    return (
        a * (e * i - f_ * h)
        - b * (d * i - f_ * g)
        + c * (d * h - e * g)
    )


def _triple_degree(triple) -> int:
    degs = {g.degree for g in triple if not g.is_zero}
    if len(degs) != 1:
        raise NotASectionError("triple components of mixed or void degree")
    return degs.pop()


def saito_check(arr: LineArrangement, theta1, theta2) -> FreenessCertificate:
    """Determinant criterion for one candidate pair of sections.

    Builds the 3x3 matrix with rows (x, y, z), theta1, theta2 and asks
    whether its determinant equals c * f with c != 0 (coefficientwise
    over the arrangement's field).
    """
    a = _triple_degree(theta1)
    b = _triple_degree(theta2)
    if a + b + 1 != arr.size:
        raise InputError(
            f"exponent degrees {a}+{b}+1 != {arr.size} lines"
        )
    for triple in (theta1, theta2):
        if not arr.is_section(triple):
            raise NotASectionError("triple does not annihilate the jacobian")
    euler = tuple(HPoly.variable(3, v) for v in range(3))
    det = _det3([euler, tuple(theta1), tuple(theta2)]).reduce(arr.field)
    if det.is_zero:
        return FreenessCertificate("not_free", None, None, None, None,
                                   ("determinant-vanishes",))
    f_red = arr.f.reduce(arr.field)
    lead = max(f_red.terms)
    if lead not in det.terms:
        return FreenessCertificate("not_free", None, None, None, None,
                                   ("determinant-not-multiple",))
    c = arr.field.coerce(det.terms[lead] * arr.field.invert(f_red.terms[lead]))
    if (det - c * f_red).reduce(arr.field).is_zero:
        return FreenessCertificate("free", (min(a, b), max(a, b)),
                                   (tuple(theta1), tuple(theta2)), c, None)
    return FreenessCertificate("not_free", None, None, None, None,
                               ("determinant-not-multiple",))


def free_search(
    arr: LineArrangement,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
) -> FreenessCertificate:
    """Look for a Saito witness pair in the degrees the splitting dictates.

    The determinant is bilinear in the pair, so random combinations from
    the section bases find a witness with overwhelming probability when
    one exists; failure returns the section-dimension table as evidence.
    """
    split = generic_splitting(arr, trials, seed)
    a, b = split.a, split.b
    dims = tuple(arr.section_dims(a + b))
    sections_a = arr.derivation_sections(a)
    sections_b = arr.derivation_sections(b)
    if not sections_a or not sections_b:
        return FreenessCertificate("not_free", None, None, None, dims,
                                   split.caveats + ("no-sections-in-exponent-degree",))

    bound = arr.field.p - 1 if arr.field.is_prime_field else 2147483646

    def combine(sections, rng):
        coeffs = [rng.randint(0, bound) for _ in sections]
        if all(c == 0 for c in coeffs):
            coeffs[0] = 1
        triple = [HPoly.zero(3), HPoly.zero(3), HPoly.zero(3)]
        for c, sec in zip(coeffs, sections):
            for v in range(3):
                triple[v] = triple[v] + c * sec[v]
        return tuple(g.reduce(arr.field) for g in triple)

    for t in range(1, trials + 1):
        rng = derive_rng(seed, "saito", arr.size, t)
        theta1 = combine(sections_a, rng)
        theta2 = combine(sections_b, rng)
        if all(g.is_zero for g in theta1) or all(g.is_zero for g in theta2):
            continue
        cert = saito_check(arr, theta1, theta2)
        if cert.is_free:
            return FreenessCertificate(
                "free", cert.exponents, cert.witnesses, cert.scalar, dims,
                split.caveats,
            )
    return FreenessCertificate(
        "not_free", (a, b), None, None, dims,
        split.caveats + ("no-witness-pair-found",),
    )


# ---------------------------------------------------------------------------
# Bridge: range-2 failure of the power ideal vs. unstability
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BridgeReport:
    d: int
    fails_slp2: bool
    unstable: bool
    agree: bool
    hypothesis_met: bool  # the d-th powers of the lines are independent
    splitting: SplittingType
    mult_report: MultMapReport


def slp2_bridge(
    arr: LineArrangement,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    **kwargs,
) -> BridgeReport:
    """For |Z| = 2d+1 lines: compare two independent computations --
    failure at range 2 in degree d-2 for the ideal of d-th powers, and
    unstability of the derivation bundle.

    The equivalence of the two sides assumes the 2d+1 power forms are
    linearly independent.  Special positions (e.g. d+2 of the dual
    points on a line) force a dependency, the section map degenerates
    for reasons unrelated to the quotient algebra, and the two sides may
    legitimately differ; ``hypothesis_met`` records whether ``agree`` is
    a theorem for this input.
    """
    z = arr.size
    if z % 2 == 0:
        raise InputError("bridge needs an odd number of lines")
    d = (z - 1) // 2
    if d < 2:
        raise InputError("bridge needs at least 5 lines (d >= 2)")
    ideal = power_ideal(arr.lines, d, arr.field)
    hypothesis_met = ideal.syzygy_dim(0) == 0
    rep = generic_mult_rank(ideal, d - 2, 2, trials, seed, **kwargs)
    split = generic_splitting(arr, trials, seed)
    fails = rep.verdict == "fails"
    unstable = split.b - split.a >= 2
    return BridgeReport(d, fails, unstable, fails == unstable,
                        hypothesis_met, split, rep)


# ---------------------------------------------------------------------------
# Same-shape comparison experiment
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TeraoReport:
    exponents: tuple[int, int]
    pad_count: int
    reference_fails: bool
    candidate_fails: bool
    same_verdict: bool
    reference_report: MultMapReport
    candidate_report: MultMapReport


def terao_experiment(
    arr_free: LineArrangement,
    arr_same_shape: LineArrangement,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    **kwargs,
) -> TeraoReport:
    """Given a certified-free arrangement with exponents (a, b) and a
    second arrangement the caller asserts has the same combinatorics
    (lattice isomorphism is NOT checked here), pad both dual point sets
    with the same b-a general points, build the two ideals of b-th
    powers, and report the range-2, degree-(b-2) verdict for each.

    Observational only: the verdicts are reported side by side.
    """
    cert = free_search(arr_free, trials, seed)
    if not cert.is_free:
        raise InputError("reference arrangement did not certify as free")
    a, b = cert.exponents
    if b < 2:
        raise InputError("exponent b must be at least 2")
    if arr_same_shape.size != arr_free.size:
        raise InputError("arrangements have different sizes")

    field = arr_free.field
    bound = field.p - 1 if field.is_prime_field else 2147483646
    pads: list[HPoly] = []
    rng = derive_rng(seed, "terao-pad", arr_free.size, a, b)
    existing = list(arr_free.lines) + list(arr_same_shape.lines)
    while len(pads) < b - a:
        cand = HPoly.linear([rng.randint(1, bound) for _ in range(3)])
        if any(proportional(cand, l, field) for l in existing + pads):
            continue
        pads.append(cand)

    ref_ideal = power_ideal(list(arr_free.lines) + pads, b, field)
    cand_ideal = power_ideal(list(arr_same_shape.lines) + pads, b, field)
    ref_rep = generic_mult_rank(ref_ideal, b - 2, 2, trials, seed, **kwargs)
    cand_rep = generic_mult_rank(cand_ideal, b - 2, 2, trials, seed, **kwargs)
    ref_fails = ref_rep.verdict == "fails"
    cand_fails = cand_rep.verdict == "fails"
    return TeraoReport(
        (a, b), b - a, ref_fails, cand_fails, ref_fails == cand_fails,
        ref_rep, cand_rep,
    )


# ---------------------------------------------------------------------------
# Random arrangements for property suites
# ---------------------------------------------------------------------------


def random_simple_arrangement(
    nlines: int,
    rng,
    field: FieldSpec,
    max_attempts: int = 200,
) -> LineArrangement:
    """Rejection-sample lines that are pairwise non-proportional with all
    pairwise intersection points distinct (no three concurrent)."""
    bound = field.p - 1 if field.is_prime_field else 2147483646
    for _ in range(max_attempts):
        lines = [
            HPoly.linear([rng.randint(1, bound) for _ in range(3)])
            for _ in range(nlines)
        ]
        try:
            arr = LineArrangement(field, lines)
        except ProportionalFormsError:
            continue
        points = set()
        simple = True
        for i in range(nlines):
            a = lines[i].linear_coefficients()
            for j in range(i + 1, nlines):
                b = lines[j].linear_coefficients()
                cross = (
                    field.coerce(a[1] * b[2] - a[2] * b[1]),
                    field.coerce(a[2] * b[0] - a[0] * b[2]),
                    field.coerce(a[0] * b[1] - a[1] * b[0]),
                )
                first = next((x for x in cross if x != 0), None)
                if first is None:
                    simple = False
                    break
                inv = field.invert(first)
                normalized = tuple(field.coerce(x * inv) for x in cross)
                if normalized in points:
                    simple = False
                    break
                points.add(normalized)
            if not simple:
                break
        if simple:
            return arr
    raise AssertionError("could not sample a simple arrangement")
