"""cantorvis: exact-arithmetic toolkit for gap-function Cantor sets.

Construction and recovery of gap functions, nested interval-tree
assignments with certified regularity and intersection conditions,
plateau-gauge synthesis with covering-sum brackets, rational
independence checks, truncated Davies clouds, and Hausdorff-metric
density witnesses.  A FastAPI service exposes every operation; the CLI
is a thin client of that service.
"""

from .davies import (
    BlockSpec,
    DaviesConfig,
    DyadicFiltration,
    ExplicitFiltration,
    GoodSequence,
    PointCloud,
    assemble_c,
    build_bk_points,
    check_good,
    decomposition_check,
    p_map,
    restricted_cloud,
)
from .errors import (
    BudgetExceeded,
    CantorvisError,
    CapacityError,
    Inconclusive,
    InfeasibleCover,
    InvalidInput,
    ResolutionExceeded,
)
from .gaps import (
    CantorApprox,
    DEFAULT_ENUM_BUDGET,
    Dyadic,
    GapFunction,
    GapSequence,
    build_cantor,
    cumulative_phi,
    extract_gaps,
    middle_thirds,
    phi_from_alpha,
    recover_phi,
)
from .gauges import (
    CoverProblem,
    CoverResult,
    EnclosureGauge,
    IdentityGauge,
    PlateauGauge,
    TabulatedGauge,
    certified_constant,
    eval_gauge,
    measure_bracket,
    min_cover_oracle,
    natural_cover_sum,
    synth_gauge,
)
from .hausdorff import (
    CompactRep,
    DensityWitness,
    FAMILIES,
    INVISIBLE_FAMILY,
    VISIBLE_FAMILY,
    cloud_seed,
    dense_approx,
    hausdorff_distance,
    normalize_family,
    ternary_seed,
)
from .intervals import RatInterval, as_fraction, certainly_le, certainly_lt, format_fraction
from .qlinear import QPoint, is_independent, qpoint, rank, translate_overlap
from .trees import (
    Ball,
    DiameterProfile,
    IntersectionReport,
    TAssignment,
    ValidationReport,
    assignment_from_alpha,
    assignment_from_phi,
    ball_violates,
    body_approx,
    check_l_intersection,
    check_regular,
    diameter_profile,
    validate_assignment,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
