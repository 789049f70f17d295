"""lefkit: exact-arithmetic Lefschetz-property verdicts, apolarity
cross-checks and plane line-arrangement analysis."""

from .exactlin import (
    DEFAULT_PRIME,
    SECOND_PRIME,
    ExactMatrix,
    FieldSpec,
    in_column_space,
    is_prime,
    nullspace_basis,
    rank,
    rref,
)
from .polyring import (
    HPoly,
    format_poly,
    monomial_basis,
    parse_poly,
    random_linear_form,
    ring_dim,
)
from .gradedideal import (
    ArtinianVerdict,
    GradedIdeal,
    GradedPiece,
    HilbertData,
    ideal_from_obj,
    load_ideal,
    power_ideal,
)
from .lefschetz import (
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    LaplaceReport,
    MultMapReport,
    NBook,
    SLPVerdict,
    conjecture_check,
    generic_mult_rank,
    laplace_count,
    mult_map_rank,
    n_book,
    quartic_pair_scan,
    slp_scan,
)
from .fatpoints import (
    FatPointCondition,
    LinearSystem,
    dual_point,
    fat_point_subspace,
    generic_fat_dim,
    perp_fat_dim,
    power_perp_dim,
)
from .arrangements import (
    BridgeReport,
    FreenessCertificate,
    LineArrangement,
    SplittingType,
    arrangement_from_obj,
    free_search,
    generic_splitting,
    is_unstable,
    load_arrangement,
    random_simple_arrangement,
    saito_check,
    slp2_bridge,
    terao_experiment,
)

__version__ = "0.1.0"
