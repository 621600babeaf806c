"""Solvers for the coupon game with identity payments.

The agent guesses the type outright; a correct guess costs the sender one
unit, a wrong guess costs the agent one unit, and each signal carries a
coupon. Equilibria ride two indifference lines in the (p, q) square:

    l1: D0*p = D1*(1-q)        l2: D0*(1-p) = D1*q

The fixed-valuation solver dispatches on how the coupon values compare;
the continuous-valuation variant replaces them with a prior over the
coupon worth and yields a threshold sender.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, replace
from typing import NamedTuple, Optional, Sequence, Tuple

from ._bisect import bisect_leftmost
from .core import BStrategy, CouponValues, GuessPolicy, Interval, Prior

__all__ = [
    "InvalidDistribution",
    "UniformDist",
    "ExponentialDist",
    "PiecewiseLinearCdf",
    "ThresholdStrategy",
    "ContinuousThreshold",
    "IdentityBne",
    "identity_utilities",
    "lines_membership",
    "solve_identity_bne",
    "solve_continuous_threshold",
    "ON_L1",
    "ON_L2",
    "ON_BOTH",
    "ABOVE_L2",
    "BELOW_L2",
]


class InvalidDistribution(ValueError):
    """A valuation distribution violating the CDF invariants."""


@dataclass(frozen=True)
class UniformDist:
    """Uniform valuation on [lo, hi] with lo >= 0."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.lo < self.hi) or not math.isfinite(self.hi):
            raise InvalidDistribution(
                f"uniform support needs 0 <= lo < hi < inf, got [{self.lo}, {self.hi}]"
            )

    def cdf(self, x: float) -> float:
        if x <= self.lo:
            return 0.0
        if x >= self.hi:
            return 1.0
        return (x - self.lo) / (self.hi - self.lo)


@dataclass(frozen=True)
class ExponentialDist:
    """Exponential valuation with the given rate."""

    rate: float

    def __post_init__(self) -> None:
        if not (self.rate > 0.0 and math.isfinite(self.rate)):
            raise InvalidDistribution(f"rate must be positive, got {self.rate!r}")

    def cdf(self, x: float) -> float:
        if x <= 0.0:
            return 0.0
        return -math.expm1(-self.rate * x)


@dataclass(frozen=True)
class PiecewiseLinearCdf:
    """CDF given by linear interpolation through ``knots``.

    Knots are (value, cdf) pairs with strictly increasing values, a first
    knot of (0, 0), nondecreasing cdf entries, and a final cdf of 1.
    """

    knots: Tuple[Tuple[float, float], ...]

    def __init__(self, knots: Sequence[Sequence[float]]) -> None:
        cleaned = tuple((float(v), float(c)) for v, c in knots)
        if len(cleaned) < 2:
            raise InvalidDistribution("need at least two knots")
        if cleaned[0] != (0.0, 0.0):
            raise InvalidDistribution(f"first knot must be (0, 0), got {cleaned[0]}")
        if cleaned[-1][1] != 1.0:
            raise InvalidDistribution(f"last cdf value must be 1, got {cleaned[-1][1]}")
        for (v0, c0), (v1, c1) in zip(cleaned, cleaned[1:]):
            if not (v1 > v0):
                raise InvalidDistribution("knot values must be strictly increasing")
            if c1 < c0:
                raise InvalidDistribution("cdf values must be nondecreasing")
        for v, c in cleaned:
            if not (math.isfinite(v) and math.isfinite(c)):
                raise InvalidDistribution("knots must be finite")
        object.__setattr__(self, "knots", cleaned)
        object.__setattr__(self, "_values", tuple(v for v, _ in cleaned))

    def cdf(self, x: float) -> float:
        values = self._values
        if x <= values[0]:
            return 0.0
        if x >= values[-1]:
            return 1.0
        i = bisect_right(values, x)
        (v0, c0), (v1, c1) = self.knots[i - 1], self.knots[i]
        return c0 + (c1 - c0) * (x - v0) / (v1 - v0)


@dataclass(frozen=True)
class ThresholdStrategy:
    """Sender cutoff: lie below ``t``, signal truthfully above it.

    When the mixture CDF is flat at the target level the cutoff is only
    determined up to ``interval``; ``t`` is then its smallest member.
    """

    t: float
    interval: Optional[Interval] = None

    def __post_init__(self) -> None:
        if not (self.t >= 0.0):
            raise ValueError(f"threshold must be nonnegative, got {self.t!r}")


class ContinuousThreshold(NamedTuple):
    a: GuessPolicy
    t: ThresholdStrategy
    dp_epsilon: Optional[float]


# lines_membership labels
ON_L1 = "OnL1"
ON_L2 = "OnL2"
ON_BOTH = "OnBoth"
ABOVE_L2 = "AboveL2"
BELOW_L2 = "BelowL2"


@dataclass(frozen=True)
class IdentityBne:
    """Equilibrium report for the fixed-valuation identity game.

    ``b`` and ``a`` are deterministic representatives; the interval fields
    describe the directions in which the equilibrium is set-valued
    (``y_interval``/``x_interval`` for the guess, ``b_p_interval`` for the
    l2 family with q = D0(1-p)/D1, ``support`` for the sustained values of
    x + y - 1 in the equal-prior case). ``candidates`` carries the two
    pooling profiles of the equal-prior case, each flagged feasible or not.
    """

    RHO0_GREATER = "Rho0Greater"
    RHO_EQUAL = "RhoEqual"
    RHO1_GREATER = "Rho1Greater"
    DEGENERATE_EQUAL_PRIOR = "DegenerateEqualPrior"

    b: BStrategy
    a: GuessPolicy
    case: str
    dp_epsilon: float
    rr_point: Optional[BStrategy] = None
    y_interval: Optional[Interval] = None
    x_interval: Optional[Interval] = None
    b_p_interval: Optional[Interval] = None
    support: Optional[Interval] = None
    feasible: bool = True
    candidates: tuple = ()
    notes: tuple = ()


def identity_utilities(
    prior: Prior, coupons: CouponValues, b: BStrategy, a: GuessPolicy
) -> Tuple[float, float, float]:
    """Exact expected utilities (uA, uB0, uB1) at a strategy profile."""
    d0, d1 = prior.d0, prior.d1
    p, q = b.p, b.q
    x, y = a.x, a.y
    u_a = d0 * p * x + d0 * (1.0 - p) * (1.0 - y) + d1 * q * y + d1 * (1.0 - q) * (1.0 - x)
    u_b0 = p * (coupons.rho0 - x) + (1.0 - p) * (y - 1.0)
    u_b1 = q * (coupons.rho1 - y) + (1.0 - q) * (x - 1.0)
    return u_a, u_b0, u_b1


def lines_membership(prior: Prior, b: BStrategy, tol: float = 1e-10) -> str:
    """Locate (p, q) relative to the two indifference lines.

    On-line labels win over the side labels; AboveL2 means the point sits
    on the side of l2 where signal 1 over-represents type 1, i.e.
    D0(1-p) < D1*q.
    """
    r1 = prior.d0 * b.p - prior.d1 * (1.0 - b.q)
    r2 = prior.d0 * (1.0 - b.p) - prior.d1 * b.q
    on1, on2 = abs(r1) <= tol, abs(r2) <= tol
    if on1 and on2:
        return ON_BOTH
    if on1:
        return ON_L1
    if on2:
        return ON_L2
    return ABOVE_L2 if r2 < 0.0 else BELOW_L2


def _truthful(prior: Prior, case: str, note: str) -> IdentityBne:
    return IdentityBne(
        b=BStrategy(1.0, 1.0),
        a=GuessPolicy(1.0, 1.0),
        case=case,
        dp_epsilon=math.inf,
        notes=(note,),
    )


_DOMINANT_NOTE = "coupons exceed the unit penalty: each type's own signal is dominant"


def _degenerate(prior: Prior, coupons: CouponValues) -> IdentityBne:
    rho0, rho1 = coupons.rho0, coupons.rho1
    case = IdentityBne.DEGENERATE_EQUAL_PRIOR

    def candidate(b: BStrategy, lo: float, hi: float, pooled_on: int) -> IdentityBne:
        feasible = lo <= hi
        support = Interval(lo, hi) if feasible else None
        s = support.midpoint if feasible else min(lo, 1.0)
        # Any (x, y) with x + y - 1 = s works; pick the corner-anchored one.
        a = GuessPolicy(1.0, s) if pooled_on == 0 else GuessPolicy(s, 1.0)
        return IdentityBne(
            b=b,
            a=a,
            case=case,
            dp_epsilon=0.0,
            y_interval=support if pooled_on == 0 else None,
            x_interval=support if pooled_on == 1 else None,
            support=support,
            feasible=feasible,
            notes=() if feasible else ("support interval empty",),
        )

    pool0 = candidate(BStrategy(1.0, 0.0), rho1, min(rho0, 1.0), pooled_on=0)
    pool1 = candidate(BStrategy(0.0, 1.0), rho0, min(rho1, 1.0), pooled_on=1)
    rep = pool0 if pool0.feasible else pool1
    if not rep.feasible:
        return replace(_truthful(prior, case, _DOMINANT_NOTE), candidates=(pool0, pool1))
    return IdentityBne(
        b=rep.b,
        a=rep.a,
        case=case,
        dp_epsilon=0.0,
        y_interval=rep.y_interval,
        x_interval=rep.x_interval,
        support=rep.support,
        candidates=(pool0, pool1),
    )


def solve_identity_bne(prior: Prior, coupons: CouponValues) -> IdentityBne:
    """Case dispatch for the fixed-valuation game.

    With D0 > D1 the guess after signal 0 locks to the majority type and
    the sender ends up on line l2. Which l2 point depends on the coupon
    order: rho0 > rho1 pools on signal 0 with a free guess y in
    [min(rho1,1), min(rho0,1)]; rho0 < rho1 mixes at p = (D0-D1)/D0 with
    y pinned to rho0; equal coupons leave the whole l2 segment open, the
    randomized-response point (D0, D0) among them. Coupons above 1 beat
    any penalty, so when both exceed 1 the types signal truthfully and
    the case collapses to the separating profile.
    """
    d0, d1 = prior.d0, prior.d1
    rho0, rho1 = coupons.rho0, coupons.rho1
    if d0 == d1:
        return _degenerate(prior, coupons)

    if rho0 > rho1:
        if rho1 > 1.0:
            return _truthful(prior, IdentityBne.RHO0_GREATER, _DOMINANT_NOTE)
        span = Interval(min(rho1, 1.0), min(rho0, 1.0))
        return IdentityBne(
            b=BStrategy(1.0, 0.0),
            a=GuessPolicy(1.0, span.midpoint),
            case=IdentityBne.RHO0_GREATER,
            dp_epsilon=0.0,
            y_interval=span,
        )

    if rho1 > rho0:
        if rho0 > 1.0:
            return _truthful(prior, IdentityBne.RHO1_GREATER, _DOMINANT_NOTE)
        return IdentityBne(
            b=BStrategy((d0 - d1) / d0, 1.0),
            a=GuessPolicy(1.0, rho0),
            case=IdentityBne.RHO1_GREATER,
            dp_epsilon=math.inf,
        )

    if rho0 > 1.0:
        return _truthful(prior, IdentityBne.RHO_EQUAL, _DOMINANT_NOTE)
    rr = BStrategy(d0, d0)
    return IdentityBne(
        b=rr,
        a=GuessPolicy(1.0, rho0),
        case=IdentityBne.RHO_EQUAL,
        dp_epsilon=math.log(d0 / d1),
        rr_point=rr,
        b_p_interval=Interval((d0 - d1) / d0, 1.0),
        notes=("any point of l2 with q = D0(1-p)/D1 is a sender equilibrium",),
    )


def _mixture_cdf(prior: Prior, dist0, dist1):
    def cdf_b(x: float) -> float:
        return prior.d0 * dist0.cdf(x) + prior.d1 * dist1.cdf(x)

    return cdf_b


def solve_continuous_threshold(
    prior: Prior, dist0, dist1=None
) -> ContinuousThreshold:
    """Threshold equilibrium when the coupon worth is drawn from a prior.

    The guess after signal 0 is still deterministic; after signal 1 the
    agent accepts with probability y*, the smallest point where the
    mixture CDF reaches D1 (or 1 when it never gets there). Senders lie
    below y* and signal truthfully above it. The leakage figure is only
    defined when both types share one distribution; for distinct
    distributions it is omitted.
    """
    if prior.d0 == prior.d1:
        raise ValueError("threshold characterization needs D0 != D1")
    if dist1 is None:
        dist1 = dist0
    cdf_b = _mixture_cdf(prior, dist0, dist1)
    d1 = prior.d1

    # The level comparison gets an absolute slack: prior normalization can
    # shift D1 by an ulp relative to an exactly-flat CDF stretch.
    slack = 1e-12
    if cdf_b(1.0) >= d1 - slack:
        y_star = bisect_leftmost(lambda y: cdf_b(y) >= d1 - slack, 0.0, 1.0)
        if cdf_b(1.0) > d1 + slack:
            upper = bisect_leftmost(lambda y: cdf_b(y) > d1 + slack, y_star, 1.0)
        else:
            upper = 1.0
        flat = Interval(y_star, upper) if upper - y_star > 1e-9 else None
    else:
        y_star, flat = 1.0, None

    eps: Optional[float] = None
    if dist0 == dist1:
        mass_above = 1.0 - cdf_b(y_star)
        mass_below = cdf_b(y_star)
        eps = math.inf if mass_below == 0.0 else math.log(mass_above / mass_below)
    return ContinuousThreshold(
        a=GuessPolicy(1.0, y_star),
        t=ThresholdStrategy(y_star, interval=flat),
        dp_epsilon=eps,
    )
