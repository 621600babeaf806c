"""Equilibrium solvers for coupon-redemption signaling games.

A privacy-conscious consumer (B, one of two types) decides how honestly
to answer a profiling signal; a vendor (A) reacts with reports, guesses,
or accusations depending on the variant.  The package solves each
variant in closed form, measures the information leakage of the
resulting signaling channel as a differential-privacy epsilon, and
cross-checks every claim with brute-force grid oracles.

Variants: coupon-vs-leakage tradeoff (``privacy``), proper-scoring-rule
payments (``scoring_game``), identity guessing with fixed or random
coupon valuations (``identity_game``), and accusations with an opt-out
(``optout_game``).  ``oracle`` verifies profiles and enumerates
epsilon-equilibria on a grid; ``_kernels`` holds the numba-accelerated
scans with a pure-numpy fallback selected by COUPON_BNE_BACKEND.
"""

from ._kernels import BackendError, active_backend, set_backend
from .core import (
    BStrategy,
    CouponValues,
    EquilibriumReport,
    GameUtilities,
    GuessPolicy,
    IdentityGame,
    IdentityGameContinuous,
    Interval,
    OptOutGame,
    OptOutPolicy,
    PaymentMatrix,
    Prior,
    PrivacyAwareParams,
    ProbabilityError,
    ScoringGame,
    ScoringReportPair,
    ZeroSignalMass,
    bayes_posteriors,
    signal_masses,
)
from .identity_game import (
    ExponentialDist,
    IdentityBne,
    PiecewiseLinearCdf,
    ThresholdStrategy,
    UniformDist,
    solve_continuous_threshold,
    solve_identity_bne,
)
from .optout_game import (
    OptOutBne,
    OptOutCase,
    check_strawman,
    classify_case,
    sample_cases,
    solve_optout_bne,
)
from .oracle import (
    BudgetExceeded,
    GapReport,
    best_response_gap,
    enumerate_equilibria,
    utility_surface,
)
from .privacy import (
    dp_epsilon,
    is_randomized_response,
    solve_privacy_aware,
    x_game,
)
from .scoring import ScoringRule, get_rule, make_custom
from .scoring_game import (
    ScoringBne,
    benchmark_profit,
    solve_scoring_bne,
    solve_scoring_bne_asymmetric,
)

__version__ = "0.1.0"

__all__ = [
    "BStrategy",
    "BackendError",
    "BudgetExceeded",
    "CouponValues",
    "EquilibriumReport",
    "ExponentialDist",
    "GameUtilities",
    "GapReport",
    "GuessPolicy",
    "IdentityBne",
    "IdentityGame",
    "IdentityGameContinuous",
    "Interval",
    "OptOutBne",
    "OptOutCase",
    "OptOutGame",
    "OptOutPolicy",
    "PaymentMatrix",
    "PiecewiseLinearCdf",
    "Prior",
    "PrivacyAwareParams",
    "ProbabilityError",
    "ScoringBne",
    "ScoringGame",
    "ScoringReportPair",
    "ScoringRule",
    "ThresholdStrategy",
    "UniformDist",
    "ZeroSignalMass",
    "active_backend",
    "bayes_posteriors",
    "benchmark_profit",
    "best_response_gap",
    "check_strawman",
    "classify_case",
    "dp_epsilon",
    "enumerate_equilibria",
    "get_rule",
    "is_randomized_response",
    "make_custom",
    "sample_cases",
    "set_backend",
    "signal_masses",
    "solve_continuous_threshold",
    "solve_identity_bne",
    "solve_optout_bne",
    "solve_privacy_aware",
    "solve_scoring_bne",
    "solve_scoring_bne_asymmetric",
    "utility_surface",
    "x_game",
]
