"""Equilibrium solver for the coupon game with scoring-rule payments.

The agent reports a probability of the high type after seeing the signal
and is paid by a symmetric proper scoring rule; each signal carries a
coupon of value rho for the sender. Depending on rho the equilibrium
pools on the low signal, separates fully, or mixes at an interior point
``y1`` characterized by ``g'(y1) = rho``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from ._bisect import NoRoot, bisect_root
from .core import (
    BStrategy,
    CouponValues,
    Interval,
    Prior,
    ProbabilityError,
    ScoringReportPair,
    signal_masses,
)
from .scoring import ScoringRule, expected_payment, f0, f1

__all__ = [
    "InvalidRange",
    "NonSymmetricRule",
    "NoInteriorSolution",
    "ScoringBne",
    "BrConstraint",
    "benchmark_profit",
    "b_best_response",
    "solve_scoring_bne",
    "solve_scoring_bne_asymmetric",
    "posterior_symmetry_residual",
    "a_profit_advantage",
]


class InvalidRange(ValueError):
    """A coupon value outside the open interval (0, inf)."""


class NonSymmetricRule(ValueError):
    """Raised when a solver needs ``g(x) = g(1 - x)`` and the rule lacks it."""


class NoInteriorSolution(ArithmeticError):
    """The asymmetric-coupon system has no interior root with y0 < y1."""


@dataclass(frozen=True)
class ScoringBne:
    """Equilibrium of the scoring-payment coupon game.

    ``y1`` is the report attached to signal 1: the posterior in the
    Interior and Separating11 regimes, a representative off-path report in
    Pooling10 (where any value in ``x1_interval`` sustains the pooling).
    ``a_profit`` is the agent's expected payment per round and
    ``benchmark_profit`` the same quantity in the game without coupons.
    """

    POOLING_10 = "Pooling10"
    SEPARATING_11 = "Separating11"
    INTERIOR = "Interior"

    b: BStrategy
    a: ScoringReportPair
    y1: float
    posterior_epsilon: float
    a_profit: float
    benchmark_profit: float
    regime: str
    x1_interval: Optional[Interval] = None
    unique: bool = True
    notes: tuple = ()

    def with_note(self, note: str) -> "ScoringBne":
        from dataclasses import replace

        return replace(self, notes=self.notes + (note,))


class BrConstraint(NamedTuple):
    """Sender best response against a fixed report pair.

    Each component is 0.0, 1.0, or None; None means the type is exactly
    indifferent and any mixture is a best response.
    """

    p: Optional[float]
    q: Optional[float]


def benchmark_profit(prior: Prior, rule: ScoringRule) -> float:
    """Agent's expected payment when no coupon distorts the signal.

    Without coupons the sender reveals nothing useful, the agent reports
    the prior, and properness pins the payment at ``g(D1)``.
    """
    if not rule.symmetric:
        raise NonSymmetricRule(f"benchmark requires a symmetric rule, got {rule.name!r}")
    return rule.g(prior.d1)


def _payment_spread(rule: ScoringRule, f, hi_report: float, lo_report: float) -> float:
    if hi_report == lo_report:
        return 0.0
    return f(rule, hi_report) - f(rule, lo_report)


def b_best_response(
    rule: ScoringRule,
    reports: ScoringReportPair,
    coupons: CouponValues,
    tol: float = 1e-9,
) -> BrConstraint:
    """Best response of each sender type against fixed reports ``(x0, x1)``.

    Type 0 weighs the coupon rho0 against the payment spread
    ``f0(x0) - f0(x1)``; type 1 weighs rho1 against ``f1(x1) - f1(x0)``.
    A spread within ``tol`` of the coupon leaves that type indifferent.
    """
    spread0 = _payment_spread(rule, f0, reports.x0, reports.x1)
    spread1 = _payment_spread(rule, f1, reports.x1, reports.x0)

    if abs(coupons.rho0 - spread0) <= tol:
        p: Optional[float] = None
    else:
        p = 1.0 if coupons.rho0 > spread0 else 0.0
    if abs(coupons.rho1 - spread1) <= tol:
        q: Optional[float] = None
    else:
        q = 1.0 if coupons.rho1 > spread1 else 0.0
    return BrConstraint(p, q)


def posterior_symmetry_residual(prior: Prior, b: BStrategy) -> float:
    """Residual ``D0^2 p(1-p) - D1^2 q(1-q)``, zero at the interior BNE."""
    d0, d1 = prior.d0, prior.d1
    return d0 * d0 * b.p * (1.0 - b.p) - d1 * d1 * b.q * (1.0 - b.q)


def _check_rho(rho: float) -> None:
    if not (rho > 0.0 and math.isfinite(rho)):
        raise InvalidRange(f"coupon value must lie in (0, inf), got {rho!r}")


def _unit(value: float, name: str) -> float:
    # Near a regime edge the mixture lands on 0 or 1 up to bisection
    # roundoff, which can exceed the strict core tolerance; forgive 1e-9.
    if math.isnan(value) or value < -1e-9 or value > 1.0 + 1e-9:
        raise ProbabilityError(f"{name}={value!r} is not a probability")
    return min(1.0, max(0.0, value))


def _separating(prior: Prior, rule: ScoringRule) -> ScoringBne:
    # Signals reveal the type, so ln of the posterior odds ratio diverges.
    profit = prior.d0 * rule.g(0.0) + prior.d1 * rule.g(1.0)
    return ScoringBne(
        b=BStrategy(1.0, 1.0),
        a=ScoringReportPair(0.0, 1.0),
        y1=1.0,
        posterior_epsilon=math.inf,
        a_profit=profit,
        benchmark_profit=benchmark_profit(prior, rule),
        regime=ScoringBne.SEPARATING_11,
    )


def _pooling(prior: Prior, rho: float, rule: ScoringRule) -> ScoringBne:
    d0, d1 = prior.d0, prior.d1
    # Both types ride signal 0; the off-path report must make signal 1
    # unattractive to type 1 (lower end) yet not tempting to type 0
    # (upper end). Both bounds live in (D1, D0].
    lo = bisect_root(lambda x: f1(rule, x) - (f1(rule, d1) + rho), d1, d0)
    hi = bisect_root(lambda x: f0(rule, x) - (f0(rule, d1) - rho), d1, d0)
    sustain = Interval(lo, hi)
    x1 = sustain.midpoint
    bench = benchmark_profit(prior, rule)
    out = ScoringBne(
        b=BStrategy(1.0, 0.0),
        a=ScoringReportPair(d1, x1),
        y1=x1,
        posterior_epsilon=0.0,
        a_profit=bench,
        benchmark_profit=bench,
        regime=ScoringBne.POOLING_10,
        x1_interval=sustain,
    )
    return out.with_note("off-path report x1 may be any value in x1_interval")


def solve_scoring_bne(
    prior: Prior, rho: float, rule: ScoringRule, tol: float = 1e-9
) -> ScoringBne:
    """Solve the symmetric-coupon game (rho0 = rho1 = rho).

    Regimes by coupon size: rho at or above ``f1(1) - f1(0)`` separates,
    rho at or below ``f1(D0) - f1(D1)`` pools on signal 0, anything in
    between mixes at the interior point with ``g'(y1) = rho``. A result
    within ``tol`` of a regime edge carries a "regime boundary" note.
    """
    if not rule.symmetric:
        raise NonSymmetricRule(f"solver requires a symmetric rule, got {rule.name!r}")
    _check_rho(rho)
    d0, d1 = prior.d0, prior.d1
    sep = f1(rule, 1.0) - f1(rule, 0.0)
    pool = f1(rule, d0) - f1(rule, d1)

    def near(threshold: float) -> bool:
        return math.isfinite(threshold) and abs(rho - threshold) <= tol * max(
            1.0, abs(threshold)
        )

    if rho >= sep:
        out = _separating(prior, rule)
        return out.with_note("regime boundary: rho at the separating edge") if near(sep) else out
    if rho <= pool:
        out = _pooling(prior, rho, rule)
        return out.with_note("regime boundary: rho at the pooling edge") if near(pool) else out

    lo, hi = 0.5 + 1e-12, 1.0 - 1e-12
    if rule.g_prime(hi) - rho < 0.0:
        # g'(y) never reaches rho inside the resolvable bracket; the
        # interior point is indistinguishable from 1 at machine precision.
        out = _separating(prior, rule)
        return out.with_note("interior point indistinguishable from 1 at machine precision")

    y1 = bisect_root(lambda y: rule.g_prime(y) - rho, lo, hi)
    r = y1 / (1.0 - y1)
    rr = r * r
    p = _unit((rr - r * d1 / d0) / (rr - 1.0), "p")
    q = _unit((rr - r * d0 / d1) / (rr - 1.0), "q")
    out = ScoringBne(
        b=BStrategy(p, q),
        a=ScoringReportPair(1.0 - y1, y1),
        y1=y1,
        posterior_epsilon=math.log(y1) - math.log1p(-y1),
        a_profit=rule.g(y1),
        benchmark_profit=benchmark_profit(prior, rule),
        regime=ScoringBne.INTERIOR,
    )
    if near(sep) or near(pool):
        out = out.with_note("regime boundary: rho within tol of a regime edge")
    return out


def a_profit_advantage(prior: Prior, rho: float, rule: ScoringRule) -> float:
    """Gain of the interior construction over the benchmark, ``g(y1) - g(D1)``.

    Evaluates the interior point ``g'(y1) = rho`` directly, whether or not
    the pooling regime would override it for this prior (in that case the
    realized equilibrium profit equals the benchmark and the true gain is
    zero; this reports the interior formula). Positive exactly when y1
    lands beyond D0. Needs rho below the separating edge.
    """
    if not rule.symmetric:
        raise NonSymmetricRule(f"solver requires a symmetric rule, got {rule.name!r}")
    _check_rho(rho)
    lo, hi = 0.5 + 1e-12, 1.0 - 1e-12
    if rule.g_prime(hi) - rho < 0.0:
        raise InvalidRange(f"no interior point: g'(y) never reaches rho={rho!r}")
    y1 = bisect_root(lambda y: rule.g_prime(y) - rho, lo, hi)
    return rule.g(y1) - rule.g(prior.d1)


def _solve_partner_report(
    rule: ScoringRule, mu: float, y0: float
) -> Optional[float]:
    """Report y1 > mu with ``F_mu(y1) = F_mu(y0)``, or None if out of range.

    F_mu rises to its peak at mu and falls beyond it, so for y0 < mu the
    matching point on the far side exists iff F_mu has fallen back to the
    y0 level before the report hits 1.
    """
    level = expected_payment(rule, mu, y0)
    lo, hi = mu + 1e-12, 1.0 - 1e-12

    def h(y: float) -> float:
        return expected_payment(rule, mu, y) - level

    if h(hi) > 0.0:
        return None
    return bisect_root(h, lo, hi)


def solve_scoring_bne_asymmetric(
    prior: Prior, coupons: CouponValues, rule: ScoringRule
) -> ScoringBne:
    """Solve the game with distinct coupons rho0 != rho1.

    The posteriors are no longer mirror images. They solve the pair

        F_mu(y0) = F_mu(y1)            with mu = rho0 / (rho0 + rho1)
        F_half(y0) - F_half(y1) = (rho0 - rho1) / 2

    found by nested bisection (outer in y0, inner recovering the partner
    y1 from the first equation). The mixture (p, q) then comes from the
    two Bayes-posterior equations, which are linear in p and q.

    Raises NoInteriorSolution when no root with y0 < y1 exists in (0,1)^2
    or when the implied mixture leaves the unit square.
    """
    if not rule.symmetric:
        raise NonSymmetricRule(f"solver requires a symmetric rule, got {rule.name!r}")
    rho0, rho1 = coupons.rho0, coupons.rho1
    _check_rho(rho0)
    _check_rho(rho1)
    if rho0 == rho1:
        # Continuity limit; delegate to the closed dispatch.
        return solve_scoring_bne(prior, rho0, rule)

    mu = rho0 / (rho0 + rho1)
    target = 0.5 * (rho0 - rho1)

    def psi(y0: float) -> Optional[float]:
        y1 = _solve_partner_report(rule, mu, y0)
        if y1 is None:
            return None
        return (
            expected_payment(rule, 0.5, y0)
            - expected_payment(rule, 0.5, y1)
            - target
        )

    grid = [1e-9 + i * (mu - 1e-12 - 1e-9) / 255.0 for i in range(256)]
    bracket = None
    prev: Optional[tuple] = None
    for y0 in grid:
        val = psi(y0)
        if val is None:
            prev = None
            continue
        if prev is not None and prev[1] * val <= 0.0:
            bracket = (prev[0], y0)
            break
        prev = (y0, val)
    if bracket is None:
        raise NoInteriorSolution(
            f"no interior root for coupons ({rho0}, {rho1}) under {rule.name!r}"
        )

    def psi_strict(y0: float) -> float:
        val = psi(y0)
        if val is None:
            raise NoRoot("partner report left the unit interval during bisection")
        return val

    y0 = bisect_root(psi_strict, bracket[0], bracket[1])
    y1 = _solve_partner_report(rule, mu, y0)
    if y1 is None or not (y0 < y1):
        raise NoInteriorSolution("bisection did not produce an ordered pair y0 < y1")

    rho0_hat = f0(rule, y0) - f0(rule, y1)
    rho1_hat = f1(rule, y1) - f1(rule, y0)
    if abs(rho0_hat - rho0) > 1e-6 * max(1.0, rho0) or abs(
        rho1_hat - rho1
    ) > 1e-6 * max(1.0, rho1):
        raise NoInteriorSolution(
            "root does not reproduce the coupon values "
            f"(got {rho0_hat:.3g}, {rho1_hat:.3g})"
        )

    # Posterior equations, linear in (p, q):
    #   y0*D0*p + (1-y0)*D1*q = (1-y0)*D1
    #   y1*D0*p + (1-y1)*D1*q = y1*D0
    d0, d1 = prior.d0, prior.d1
    a11, a12, b1 = y0 * d0, (1.0 - y0) * d1, (1.0 - y0) * d1
    a21, a22, b2 = y1 * d0, (1.0 - y1) * d1, y1 * d0
    det = a11 * a22 - a12 * a21
    try:
        p = _unit((b1 * a22 - a12 * b2) / det, "p")
        q = _unit((a11 * b2 - b1 * a21) / det, "q")
    except ValueError as exc:
        raise NoInteriorSolution(f"implied mixture leaves the unit square: {exc}") from exc

    mass0, mass1 = signal_masses(prior, BStrategy(p, q))
    profit = mass0 * rule.g(y0) + mass1 * rule.g(y1)
    eps = (math.log(y1) - math.log1p(-y1)) - (math.log(y0) - math.log1p(-y0))
    return ScoringBne(
        b=BStrategy(p, q),
        a=ScoringReportPair(y0, y1),
        y1=y1,
        posterior_epsilon=eps,
        a_profit=profit,
        benchmark_profit=benchmark_profit(prior, rule),
        regime=ScoringBne.INTERIOR,
        notes=("asymmetric coupons: y0 is not the mirror of y1",),
    )
