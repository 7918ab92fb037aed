"""Finite-dimensional experiments on twisted Hilbert spaces.

Centralizers on sequence spaces, twisted-sum quasinorms, Schatten and
Lorentz-type norms, and liftability diagnostics for multiplication operators.
"""

from ._backend import BACKEND
from .centralizers import (
    CentralizerSpec,
    LinearMap,
    LipschitzFunction,
    QMap,
    eval_kalton_peck,
    eval_kalton_rank,
    eval_lipschitz_centralizer,
    minimal_extension_functional,
    parse_centralizer,
    shift_centralizer,
)
from .diagnostics import (
    DefectReport,
    UniformDefectEstimate,
    cantor_average,
    cantor_average_matrix,
    centralizer_constant_lower,
    divergence_closed_form,
    divergence_curve,
    estimate_uniform_defect,
    lift_defect,
    quasilinearity_constant_lower,
    quasilinearity_defect,
    rademacher_nonlinearity,
    shift_holder_sides,
    sn_test_family,
    witness_from_centralizer,
)
from .seq import (
    CSeq,
    decreasing_rearrangement,
    holder_split,
    lp_norm,
    polar_decomposition,
    rank_sequence,
)
from .spectral import (
    CriterionResult,
    SVDConvergenceError,
    liftability_criterion,
    lorentz_log_norm,
    macaev_norm,
    rank_one,
    schatten_norm,
    schmidt_expansion,
    singular_values,
    svd,
)
from .twisted import (
    ScalarTwistedPoint,
    TwistedPoint,
    embed,
    pullback_member,
    pullback_quasinorm,
    quotient,
    scalar_twisted_norm,
    twisted_quasinorm,
)

__version__ = "0.1.0"
