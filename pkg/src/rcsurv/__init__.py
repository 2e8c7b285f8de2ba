"""Nonparametric survival estimation for right-censored data with ties.

The product-limit, self-consistent, IPCW and redistribute-to-the-right
estimators are computed from a common counting-process jump table, and
:func:`verify_all` checks the exact finite-sample identities relating them.
"""

from .core import (
    CensoredSample,
    JumpTable,
    Observation,
    StepFunction,
    build_jump_table,
    safe_divide,
    step_eval,
    step_left_limit,
    validate_sample,
)
from .errors import (
    DomainExceeded,
    EmptySample,
    EstimationError,
    InvalidStatus,
    NoConvergence,
    NonFiniteTime,
    NonPositiveSurvival,
    NonPositiveTime,
    RcsurvError,
    ValidationError,
    ZeroWeight,
)
from .estimators import (
    RttrResult,
    SelfConsistentResult,
    censoring_from_relation,
    censoring_via_inverse_product,
    ipcw_cdf,
    ipcw_survival_tilde,
    naive_survival,
    product_limit_censoring_dagger,
    product_limit_censoring_naive,
    product_limit_failure,
    rttr,
    self_consistent,
)
from .identities import IdentityCheck, VerificationReport, km_tail_interval, verify_all
from .simulate import DiscreteUniform, Exponential, GeometricGrid, SimConfig, generate, true_survival

__version__ = "0.1.0"
