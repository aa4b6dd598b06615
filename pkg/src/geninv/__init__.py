"""Generalized and randomized inverses of matrix products.

Dense reference kernels (:mod:`geninv.linalg`), full-rank factorization
(:mod:`geninv.factorization`), classical product formulas and Penrose
verification (:mod:`geninv.geninverse`), sketched inverses
(:mod:`geninv.randomized`), application recipes
(:mod:`geninv.applications`), effective resistance (:mod:`geninv.graph`)
and the ``geninv`` command line (:mod:`geninv.cli`).
"""

from .applications import (
    ReconstructionReport,
    SensorPlacement,
    cur_pinv,
    generalized_nystrom,
    randomized_svd_pinv,
    reconstruct_signal,
    sensor_place_lu,
    sensor_place_qr,
)
from .errors import (
    ConvergenceError,
    DisconnectedGraphError,
    GeninvError,
    InconsistentSystemError,
    PreconditionError,
    RankHypothesisError,
    ShapeError,
)
from .factorization import CRFactorization, cr_factorize, is_full_column_rank, is_full_row_rank
from .geninverse import (
    Classification,
    OneInverseSpec,
    PenroseReport,
    construct_one_inverse,
    general_solution_x,
    greville_conditions,
    one_inverse_blocks,
    pinv_corrected,
    pinv_macduffee,
    pinv_reverse_order,
    solve_matrix_equation,
    two_sided_projection_residual,
    verify_penrose,
)
from .graph import (
    OrderingInference,
    ResistanceEstimate,
    WeightedGraph,
    gamma_bound,
    infer_ordering,
    kron_reduce,
    laplacian,
    resistance_exact,
    resistance_matrix,
    resistance_randomized,
    resistance_submatrix_estimate,
)
from .linalg import (
    RankDecision,
    lu_complete_pivoted,
    numeric_rank,
    pinv_oracle,
    qr_column_pivoted,
    rref,
    svd,
    symmetric_eigen,
)
from .randomized import (
    RankPreservationReport,
    SketchPair,
    check_rank_preservation,
    geninv_compact,
    geninv_randomized,
    make_sketch,
    pinv_orthogonal_sketch,
    pinv_randomized,
)

__version__ = "0.1.0"
