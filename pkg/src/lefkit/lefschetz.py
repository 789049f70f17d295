"""Multiplication-map verdicts for graded quotient algebras.

The core question: for A = R/I and a linear form L, does
x L^k : A_i -> A_{i+k} have maximal rank?  Ranks are computed exactly
over the ideal's field.  Genericity is randomized: rank is lower
semicontinuous in L, so one witness reaching the expected rank certifies
maximality, while failure is re-confirmed over a second prime (and over
the rationals when the matrices are small) before it is reported.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, permutations

from .errors import InputError, SyzygyHypothesisError
from .exactlin import ExactMatrix, FieldSpec, SECOND_PRIME
from .gradedideal import GradedIdeal
from .polyring import (
    HPoly,
    basis_index,
    monomial_basis,
    random_linear_form,
    ring_dim,
    shift_monomial,
)

DEFAULT_TRIALS = 5
DEFAULT_SEED = 0xA11CE

# "fails" verdicts are re-run once over Q when the stacked matrix is at
# most this size in either dimension; cheap insurance against bad primes.
RATIONAL_DIM_CAP = 60


def derive_rng(seed: int, *parts) -> random.Random:
    """Deterministic child RNG; string seeding is stable across platforms."""
    return random.Random(f"{seed}|" + "|".join(str(p) for p in parts))


@dataclass(frozen=True)
class MultMapReport:
    """One multiplication-map verdict for x L^k : A_i -> A_{i+k}."""

    i: int
    k: int
    dim_source: int
    dim_target: int
    expected_rank: int
    observed_rank: int
    kernel_dim: int
    cokernel_dim: int
    trials_used: int
    seed: int | None
    field_tags: tuple[str, ...]
    verdict: str  # "maximal" | "fails"
    caveats: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "i": self.i,
            "k": self.k,
            "dim_source": self.dim_source,
            "dim_target": self.dim_target,
            "expected_rank": self.expected_rank,
            "observed_rank": self.observed_rank,
            "kernel_dim": self.kernel_dim,
            "cokernel_dim": self.cokernel_dim,
            "trials_used": self.trials_used,
            "seed": self.seed,
            "fields": list(self.field_tags),
            "verdict": self.verdict,
            "caveats": list(self.caveats),
        }


def _check_linear(L: HPoly, field: FieldSpec) -> None:
    if L.degree != 1:
        raise InputError("multiplier must be a linear form")
    if L.reduce(field).is_zero:
        raise InputError("multiplier vanishes over the field")


def observed_mult_rank(I: GradedIdeal, L: HPoly, i: int, k: int) -> int:
    """Exact rank of x L^k : A_i -> A_{i+k} for this particular L.

    Realized as dim(L^k R_i + I_{i+k}) - dim I_{i+k}: the rows L^k * m for
    m in the degree-i monomial basis are stacked over a reduced basis of
    I_{i+k} and the joint rank is taken.
    """
    piece = I.graded_piece(i + k)
    if ring_dim(I.nvars, i) == 0:
        return 0
    Lk = L.power(k)
    idx = basis_index(I.nvars, i + k)
    rows = [
        {idx[m]: c for m, c in shift_monomial(Lk, mono).items()}
        for mono in monomial_basis(I.nvars, i)
    ]
    stacked = ExactMatrix.from_dict_rows(
        I.field, ring_dim(I.nvars, i + k), rows
    ).stack(piece.matrix)
    return stacked.rank() - piece.dim


def _stack_shape(I: GradedIdeal, i: int, k: int) -> tuple[int, int]:
    rows = ring_dim(I.nvars, i) + I.graded_piece(i + k).dim
    return rows, ring_dim(I.nvars, i + k)


def _report(I, i, k, rank_, trials_used, seed, tags, caveats) -> MultMapReport:
    h_i = I.hilbert_value(i)
    h_ik = I.hilbert_value(i + k)
    expected = min(h_i, h_ik)
    return MultMapReport(
        i=i,
        k=k,
        dim_source=h_i,
        dim_target=h_ik,
        expected_rank=expected,
        observed_rank=rank_,
        kernel_dim=h_i - rank_,
        cokernel_dim=h_ik - rank_,
        trials_used=trials_used,
        seed=seed,
        field_tags=tuple(tags),
        verdict="maximal" if rank_ == expected else "fails",
        caveats=tuple(caveats),
    )


def mult_map_rank(I: GradedIdeal, L: HPoly, i: int, k: int) -> MultMapReport:
    """Single-trial report for an explicit linear form L."""
    if i < 0 or k < 0:
        raise ValueError("degrees must be non-negative")
    _check_linear(L, I.field)
    rank_ = observed_mult_rank(I, L, i, k)
    return _report(I, i, k, rank_, 1, None, [I.field.tag], I.caveats())


def generic_mult_rank(
    I: GradedIdeal,
    i: int,
    k: int,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    second_prime: int | None = SECOND_PRIME,
    rational_verify: bool = False,
) -> MultMapReport:
    """Generic-rank report: max observed rank over `trials` random forms.

    A single witness at the expected rank certifies maximality and stops
    the trials early.  A failing verdict is repeated over the second
    prime with fresh random forms, and once over the rationals when the
    matrices are small (or when rational_verify is set); the final
    verdict uses the best rank seen anywhere.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if i < 0 or k < 0:
        raise ValueError("degrees must be non-negative")
    caveats = list(I.caveats())
    h_i = I.hilbert_value(i)
    h_ik = I.hilbert_value(i + k)
    expected = min(h_i, h_ik)
    if expected == 0:
        return _report(I, i, k, 0, 0, seed, [I.field.tag], caveats)

    tags = [I.field.tag]
    best = -1
    used = 0
    for t in range(1, trials + 1):
        L = random_linear_form(
            I.nvars, derive_rng(seed, "L", i, k, I.field.tag, t), I.field
        )
        best = max(best, observed_mult_rank(I, L, i, k))
        used += 1
        if best == expected:
            break

    if best < expected and second_prime is not None and I.field != FieldSpec.prime(second_prime):
        f2 = FieldSpec.prime(second_prime)
        I2 = I.with_field(f2)
        tags.append(f2.tag)
        if (I2.hilbert_value(i), I2.hilbert_value(i + k)) != (h_i, h_ik):
            caveats.append("piece-dims-differ-across-fields")
        for t in range(1, trials + 1):
            L = random_linear_form(I.nvars, derive_rng(seed, "L", i, k, f2.tag, t), f2)
            best = max(best, observed_mult_rank(I2, L, i, k))
            used += 1
            if best == expected:
                break

    if best < expected and I.field.is_prime_field:
        rows, cols = _stack_shape(I, i, k)
        if rational_verify or max(rows, cols) <= RATIONAL_DIM_CAP:
            fq = FieldSpec.rational()
            Iq = I.with_field(fq)
            tags.append(fq.tag)
            L = random_linear_form(I.nvars, derive_rng(seed, "L", i, k, fq.tag, 1), fq)
            best = max(best, observed_mult_rank(Iq, L, i, k))
            used += 1

    return _report(I, i, k, best, used, seed, tags, caveats)


# ---------------------------------------------------------------------------
# Expected-defect bookkeeping
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NBook:
    """N(r,i,k,d) = r(r_i - r_{i-k}) - (r_{d+i} - r_{d+i-k}) and its parts.

    N+ is the kernel dimension of the restricted section map at maximal
    rank, N- the cokernel dimension; r_t = 0 for t < 0.
    """

    r: int
    i: int
    k: int
    d: int
    nvars: int
    n: int
    n_plus: int
    n_minus: int


def n_book(r: int, i: int, k: int, d: int, nvars: int) -> NBook:
    n = r * (ring_dim(nvars, i) - ring_dim(nvars, i - k)) - (
        ring_dim(nvars, d + i) - ring_dim(nvars, d + i - k)
    )
    return NBook(r, i, k, d, nvars, n, max(0, n), max(0, -n))


@dataclass(frozen=True)
class LaplaceReport:
    """Count of independent order-(d+i-k) osculating defects ("Laplace
    equations") of the projected degree-(d+i) Veronese attached to I."""

    i: int
    k: int
    d: int
    delta: int
    book: NBook
    report: MultMapReport


def laplace_count(
    I: GradedIdeal,
    i: int,
    k: int,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    **kwargs,
) -> LaplaceReport:
    """delta = (generic kernel of x L^k : A_{d+i-k} -> A_{d+i}) - N+.

    Valid only when the generators share a degree d and have no syzygy in
    degree i; delta >= 1 exactly when the verdict at that cell is a
    failure.
    """
    d = I.common_degree
    if d is None:
        raise SyzygyHypothesisError("laplace_count needs equal-degree generators")
    if i < 0 or k < 1:
        raise ValueError("need i >= 0 and k >= 1")
    if d + i - k < 0:
        raise ValueError("source degree d+i-k is negative")
    syz = I.syzygy_dim(i)
    if syz != 0:
        raise SyzygyHypothesisError(
            f"{syz} independent syzygies in degree {i}; delta is undefined"
        )
    book = n_book(I.ngens, i, k, d, I.nvars)
    rep = generic_mult_rank(I, d + i - k, k, trials, seed, **kwargs)
    return LaplaceReport(i, k, d, rep.kernel_dim - book.n_plus, book, rep)


# ---------------------------------------------------------------------------
# Scans
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FailureWitness:
    i: int
    k: int
    delta: int | None
    note: str = ""


@dataclass(frozen=True)
class SLPVerdict:
    k_max: int
    window: tuple[int, int]
    reports: tuple[MultMapReport, ...]
    has_wlp: bool
    has_slp: bool
    failures: tuple[FailureWitness, ...]
    caveats: tuple[str, ...] = ()

    def report_at(self, i: int, k: int) -> MultMapReport:
        for rep in self.reports:
            if (rep.i, rep.k) == (i, k):
                return rep
        raise KeyError((i, k))

    def to_json(self) -> dict:
        return {
            "k_max": self.k_max,
            "window": list(self.window),
            "has_wlp": self.has_wlp,
            "has_slp_up_to_k_max": self.has_slp,
            "failures": [
                {"i": w.i, "k": w.k, "delta": w.delta, "note": w.note}
                for w in self.failures
            ],
            "caveats": list(self.caveats),
            "reports": [rep.to_json() for rep in self.reports],
        }


def slp_scan(
    I: GradedIdeal,
    k_max: int,
    degree_window: tuple[int, int] | None = None,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    **kwargs,
) -> SLPVerdict:
    """Full grid of multiplication-map verdicts for k = 1..k_max.

    The degree window defaults to 0..socle degree.  Failing cells carry
    delta when the no-syzygy hypothesis holds there; otherwise they are
    annotated and delta is suppressed.
    """
    if k_max < 1:
        raise InputError("k_max must be >= 1")
    caveats = list(I.caveats())
    if degree_window is None:
        hi = I.socle_degree() if I.artinian_verdict() else I.artinian_bound()
        degree_window = (0, max(hi, 0))
    lo, hi = degree_window
    if lo < 0 or hi < lo:
        raise InputError(f"bad degree window {degree_window}")

    d = I.common_degree
    reports = []
    failures = []
    for k in range(1, k_max + 1):
        for i in range(lo, hi + 1):
            rep = generic_mult_rank(I, i, k, trials, seed, **kwargs)
            reports.append(rep)
            if rep.verdict == "fails":
                delta = None
                note = ""
                if d is None:
                    note = "theorem-hypothesis-unmet:mixed-degrees"
                else:
                    i_thm = i + k - d
                    if i_thm < 0:
                        note = "theorem-hypothesis-unmet:source-below-d-k"
                    elif I.syzygy_dim(i_thm) != 0:
                        note = "theorem-hypothesis-unmet:syzygy"
                    else:
                        delta = rep.kernel_dim - n_book(
                            I.ngens, i_thm, k, d, I.nvars
                        ).n_plus
                failures.append(FailureWitness(i, k, delta, note))

    has_wlp = all(r.verdict == "maximal" for r in reports if r.k == 1)
    has_slp = all(r.verdict == "maximal" for r in reports)
    return SLPVerdict(
        k_max,
        degree_window,
        tuple(reports),
        has_wlp,
        has_slp,
        tuple(failures),
        tuple(caveats),
    )


# ---------------------------------------------------------------------------
# Degree-(2n+1) plane systems: the open equivalence explorer
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConjectureReport:
    n: int
    fails_wlp: bool
    membership: bool
    agree: bool
    caveats: tuple[str, ...]


def conjecture_check(
    linear_forms,
    f: HPoly,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    field: FieldSpec | None = None,
    **kwargs,
) -> ConjectureReport:
    """Compare two independently computed predicates for the plane system
    (l_1^{2n+1}, ..., l_{2n+1}^{2n+1}, f):

    * does it fail maximal rank at A_{2n} -> A_{2n+1} for generic L, and
    * does f lie in (l_1^{2n+1}, ..., l_{2n+1}^{2n+1}, prod l_j)?

    Disagreements are reported, never raised: the equivalence is open.
    """
    forms = list(linear_forms)
    fld = field if field is not None else FieldSpec.prime()
    if len(forms) < 3 or len(forms) % 2 == 0:
        raise InputError("need an odd number (>= 3) of linear forms")
    for l in forms:
        if l.degree != 1 or l.nvars != 3:
            raise InputError("plane linear forms required")
    coeff_matrix = ExactMatrix.from_rows(
        fld, [l.linear_coefficients() for l in forms], 3
    )
    if coeff_matrix.rank() < 3:
        raise InputError("concurrent forms: all pass through one point")
    n = (len(forms) - 1) // 2
    deg = 2 * n + 1
    if f.degree != deg:
        raise InputError(f"f must have degree {deg}")

    powers = [l.power(deg) for l in forms]
    ideal = GradedIdeal(fld, 3, powers + [f])
    rep = generic_mult_rank(ideal, 2 * n, 1, trials, seed, **kwargs)

    product = forms[0]
    for l in forms[1:]:
        product = product * l
    membership_ideal = GradedIdeal(fld, 3, powers + [product])
    membership = membership_ideal.membership_in_degree(f)

    fails = rep.verdict == "fails"
    return ConjectureReport(
        n, fails, membership, fails == membership, tuple(ideal.caveats())
    )


# ---------------------------------------------------------------------------
# Exhaustive scan of quartic monomial pairs in three variables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuarticScan:
    failing_pairs: tuple[tuple[tuple, tuple], ...]
    orbit_classes: tuple[tuple[tuple[tuple, tuple], ...], ...]
    total_pairs: int


def _pair_orbit_key(pair):
    best = None
    for perm in permutations(range(3)):
        image = tuple(
            sorted(tuple(m[p] for p in perm) for m in pair)
        )
        if best is None or image < best:
            best = image
    return best


def quartic_pair_scan(
    field: FieldSpec | None = None,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    **kwargs,
) -> QuarticScan:
    """Test every pair {f, g} of degree-4 monomials (pure powers excluded)
    added to (x^4, y^4, z^4) for failure of maximal rank at A_3 -> A_4,
    and group the failing pairs into variable-permutation orbits.
    """
    fld = field if field is not None else FieldSpec.prime()
    cubes = {(4, 0, 0), (0, 4, 0), (0, 0, 4)}
    pool = [m for m in monomial_basis(3, 4) if m not in cubes]
    failing = []
    for f_mono, g_mono in combinations(pool, 2):
        gens = [
            HPoly.from_monomial(3, m)
            for m in [(4, 0, 0), (0, 4, 0), (0, 0, 4), f_mono, g_mono]
        ]
        ideal = GradedIdeal(fld, 3, gens)
        rep = generic_mult_rank(ideal, 3, 1, trials, seed, **kwargs)
        if rep.verdict == "fails":
            failing.append((f_mono, g_mono))

    classes: dict = {}
    for pair in failing:
        classes.setdefault(_pair_orbit_key(pair), []).append(pair)
    orbit_classes = tuple(
        tuple(classes[key]) for key in sorted(classes)
    )
    return QuarticScan(tuple(failing), orbit_classes, len(pool) * (len(pool) - 1) // 2)
