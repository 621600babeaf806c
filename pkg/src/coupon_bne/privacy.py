"""Privacy accounting for signaling strategies, and the privacy-aware games.

A strategy ``(p, q)`` induces a signaling channel; its worst-case likelihood
ratio over signals and type pairs is

    X = max{ p/(1-q), (1-q)/p, q/(1-p), (1-p)/q }

with the conventions 0/0 = 1 and k/0 = +inf for k > 0. The leakage is
``epsilon = ln X``, which is 0 exactly on the uninformative line p = 1 - q
and +inf when some signal pins down the type.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from ._bisect import NoRoot, bisect_root
from .core import BStrategy, PrivacyAwareParams

__all__ = [
    "x_game",
    "dp_epsilon",
    "is_randomized_response",
    "PrivacyAwareParams",
    "PrivacyAwareResult",
    "privacy_aware_utility",
    "solve_privacy_aware",
    "two_player_zstar",
    "two_player_utilities",
    "TwoPlayerNeCategory",
    "classify_two_player_ne",
    "NoRoot",
]


def _ratio(a: float, b: float) -> float:
    if b == 0.0:
        return 1.0 if a == 0.0 else math.inf
    return a / b


def x_game(b: BStrategy) -> float:
    """Worst-case likelihood ratio of the channel induced by ``b``."""
    p, q = b.p, b.q
    return max(
        _ratio(p, 1.0 - q),
        _ratio(1.0 - q, p),
        _ratio(q, 1.0 - p),
        _ratio(1.0 - p, q),
    )


def dp_epsilon(b: BStrategy) -> float:
    """Leakage ``ln X``; zero iff p = 1 - q, +inf for a revealing signal."""
    x = x_game(b)
    if math.isinf(x):
        return math.inf
    return math.log(x)


def is_randomized_response(b: BStrategy, tol: float = 1e-9) -> bool:
    """True for p = q in [1/2, 1): symmetric noise, strictly informative, not revealing."""
    return abs(b.p - b.q) <= tol and 0.5 <= b.p < 1.0


def privacy_aware_utility(params: PrivacyAwareParams, b: BStrategy) -> float:
    """Coupon payoff minus ``v`` times the leakage; ``-inf`` when leakage diverges."""
    eps = dp_epsilon(b)
    if math.isinf(eps):
        return -math.inf
    prior, coupons = params.prior, params.coupons
    return prior.d0 * coupons.rho0 * b.p + prior.d1 * coupons.rho1 * b.q - params.v * eps


class PrivacyAwareResult(NamedTuple):
    strategy: BStrategy
    utility: float
    note: str = ""


def solve_privacy_aware(params: PrivacyAwareParams) -> PrivacyAwareResult:
    """Maximize the privacy-aware utility over all strategies.

    The maximum is attained on one of three candidates: the two uninformative
    corners (1, 0) and (0, 1), or the symmetric interior point
    p = q = (1 + sqrt(1 - 4v/Y)) / 2 which exists when Y > 4v for
    Y = d0*rho0 + d1*rho1.
    """
    prior, coupons, v = params.prior, params.coupons, params.v
    y_total = params.y_total
    candidates: list[tuple[BStrategy, float]] = [
        (BStrategy(1.0, 0.0), prior.d0 * coupons.rho0),
        (BStrategy(0.0, 1.0), prior.d1 * coupons.rho1),
    ]
    if y_total > 4.0 * v:
        p_star = 0.5 * (1.0 + math.sqrt(1.0 - 4.0 * v / y_total))
        interior = BStrategy(p_star, p_star)
        candidates.append((interior, privacy_aware_utility(params, interior)))
    best = max(candidates, key=lambda c: c[1])
    note = ""
    ties = [
        c for c in candidates
        if c is not best and abs(c[1] - best[1]) <= 1e-12 * max(1.0, abs(best[1]))
    ]
    if ties:
        others = ", ".join(f"({c[0].p:.6g}, {c[0].q:.6g})" for c in ties)
        note = f"degenerate optimum: utility tied with {others}"
    return PrivacyAwareResult(best[0], best[1], note)


# ---------------------------------------------------------------------------
# Two-player variant: each type is its own player with the common coupon rho.


def two_player_zstar(rho: float, v: float) -> float:
    """Truth-probability bound for the two-player equilibria.

    The root of ``rho*z - v*ln(z/(1-z)) - v = 0`` on ``(1 - v/rho, 1)``.
    Requires ``1 - v/rho > 1/2``, i.e. ``rho > 2v``. Raises
    :class:`NoRoot` when the root is too close to 1 to represent, which
    happens for very large ``rho/v``.
    """
    if rho <= 0.0 or v <= 0.0:
        raise ValueError("rho and v must be positive")
    lo = 1.0 - v / rho
    if not lo > 0.5:
        raise ValueError(f"need rho > 2v for the two-player analysis, got rho/v = {rho / v}")

    def f(z: float) -> float:
        return rho * z - v * math.log(z / (1.0 - z)) - v

    hi = 1.0 - 1e-15
    if f(hi) > 0.0:
        raise NoRoot(
            f"the z bound for rho/v = {rho / v} is closer to 1 than float resolution"
        )
    return bisect_root(f, lo + 1e-15, hi)


def two_player_utilities(b: BStrategy, rho: float, v: float) -> tuple[float, float]:
    """Per-player utilities (truthful coupon payoff minus the shared leakage cost)."""
    eps = dp_epsilon(b)
    if math.isinf(eps):
        return (-math.inf, -math.inf)
    return (rho * b.p - v * eps, rho * b.q - v * eps)


@dataclass(frozen=True)
class TwoPlayerNeCategory:
    """Classification of a strategy profile in the two-player game.

    ``kind`` is one of ``pool_on_zero``, ``pool_on_one``,
    ``randomized_response``, ``not_equilibrium``; ``z`` carries the category
    parameter (the noise level for pooling, the truth probability for
    randomized response).
    """

    kind: str
    z: Optional[float] = None

    POOL_ON_ZERO = "pool_on_zero"
    POOL_ON_ONE = "pool_on_one"
    RANDOMIZED_RESPONSE = "randomized_response"
    NOT_EQUILIBRIUM = "not_equilibrium"


def classify_two_player_ne(
    b: BStrategy, rho: float, v: float, tol: float = 1e-9
) -> TwoPlayerNeCategory:
    """Classify a profile of the two-player game.

    Every equilibrium has one of three shapes: both players nearly pooled on
    signal 0 (p = 1-q with pooled mass >= z*), both nearly pooled on
    signal 1, or randomized response (p = q in [1 - v/rho, z*]). Shapes are
    matched within ``tol``; anything else, including mid-range pooling that a
    player would abandon for the randomized-response corner, is
    ``not_equilibrium``.
    """
    zstar = two_player_zstar(rho, v)
    p, q = b.p, b.q
    if abs(p - q) <= tol:
        z = 0.5 * (p + q)
        if 1.0 - v / rho - tol <= z <= zstar + tol:
            return TwoPlayerNeCategory(TwoPlayerNeCategory.RANDOMIZED_RESPONSE, z)
    if abs(p - (1.0 - q)) <= tol:
        sigma = 0.5 * (p + 1.0 - q)  # mass both types put on signal 0
        if sigma >= 0.5:
            if sigma >= zstar - tol:
                return TwoPlayerNeCategory(TwoPlayerNeCategory.POOL_ON_ZERO, 1.0 - sigma)
        else:
            if 1.0 - sigma >= zstar - tol:
                return TwoPlayerNeCategory(TwoPlayerNeCategory.POOL_ON_ONE, sigma)
    return TwoPlayerNeCategory(TwoPlayerNeCategory.NOT_EQUILIBRIUM)
