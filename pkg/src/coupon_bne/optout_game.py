"""Equilibrium solver for the accusation game with an opt-out action.

The accuser pays or collects according to a 2x2 payment matrix and may
abstain for zero transfer.  Viability of the opt-out threat is gated by two
strict inequalities on the matrix; past that gate, the parameter space
splits into six mutually exclusive regions, each with a closed-form
equilibrium.  The mixed region (Case6) is where the signaling agent plays
randomized response.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace
from typing import ClassVar, Optional

from .core import (
    BStrategy,
    CouponValues,
    OptOutPolicy,
    PaymentMatrix,
    Prior,
    ProbabilityError,
)
from .privacy import dp_epsilon as _dp_epsilon_of


class DivisionByZero(ZeroDivisionError):
    """A wrong-accusation payment is zero, so the viability ratios blow up."""


class InternalInconsistency(ArithmeticError):
    """No case condition matched; the region covering argument is violated."""


def _unit(value: float, name: str) -> float:
    # Closed forms evaluated right at a region edge can stick out of [0, 1]
    # by roundoff; forgive 1e-9 and clamp.
    if math.isnan(value) or value < -1e-9 or value > 1.0 + 1e-9:
        raise ProbabilityError(f"{name}={value!r} is not a probability")
    return min(1.0, max(0.0, value))


@dataclass(frozen=True)
class OptOutCase:
    """Classification label plus the set of condition rows that hold."""

    CASE1: ClassVar[str] = "Case1"
    CASE2: ClassVar[str] = "Case2"
    CASE3: ClassVar[str] = "Case3"
    CASE4: ClassVar[str] = "Case4"
    CASE5: ClassVar[str] = "Case5"
    CASE6: ClassVar[str] = "Case6"
    BOUNDARY: ClassVar[str] = "Boundary"
    INFEASIBLE: ClassVar[str] = "Infeasible"

    label: str
    rows: tuple = ()


@dataclass(frozen=True)
class OptOutBne:
    """Equilibrium of the opt-out game.

    ``b_point`` is the conventional name (P1..P5) of the signaling
    strategy when it is one of the five special points.  On a ``Boundary``
    classification ``b`` and ``a`` are None and ``candidates`` holds one
    solved profile per matching condition row.
    """

    b: Optional[BStrategy]
    a: Optional[OptOutPolicy]
    case: OptOutCase
    dp_epsilon: Optional[float]
    rr: bool
    b_point: Optional[str] = None
    candidates: tuple = ()
    notes: tuple = ()

    def with_note(self, note: str) -> "OptOutBne":
        return replace(self, notes=self.notes + (note,))


def check_strawman(prior: Prior, m: PaymentMatrix) -> bool:
    """Whether the no-signal accusation game pays the accuser nothing.

    Both blind accusations must lose in expectation: ``m00/m01 < d1/d0``
    and ``m11/m10 < d0/d1``, strictly.  A corollary used throughout is
    ``m00 * m11 < m01 * m10``.
    """
    if m.m01 == 0.0 or m.m10 == 0.0:
        raise DivisionByZero(
            "wrong-accusation payments m01 and m10 must be nonzero"
        )
    return (
        m.m00 * prior.d0 < m.m01 * prior.d1
        and m.m11 * prior.d1 < m.m10 * prior.d0
    )


def _row_conditions(m: PaymentMatrix, coupons: CouponValues):
    """The six condition rows as lists of (lhs, rhs) pairs, lhs >= rhs."""
    rho0, rho1 = coupons.rho0, coupons.rho1
    det = m.m01 * m.m10 - m.m00 * m.m11
    cross10 = rho1 * m.m10 - rho0 * m.m11
    cross01 = rho0 * m.m01 - rho1 * m.m00
    return {
        OptOutCase.CASE1: [
            (rho0, m.m00 + m.m10),
            (rho1, m.m01 + m.m11),
        ],
        OptOutCase.CASE2: [
            (m.m00, rho0),
            (rho1 * m.m00, rho0 * m.m01),
        ],
        OptOutCase.CASE3: [
            (rho0, m.m00),
            (m.m00 + m.m10, rho0),
            (cross10, det),
        ],
        OptOutCase.CASE4: [
            (m.m11, rho1),
            (rho0 * m.m11, rho1 * m.m10),
        ],
        OptOutCase.CASE5: [
            (rho1, m.m11),
            (m.m01 + m.m11, rho1),
            (cross01, det),
        ],
        OptOutCase.CASE6: [
            (cross10, 0.0),
            (det, cross10),
            (cross01, 0.0),
            (det, cross01),
        ],
    }


_HOLDS, _TOUCHES, _FAILS = range(3)


def _row_status(pairs, tol: float) -> int:
    status = _HOLDS
    for lhs, rhs in pairs:
        slack = tol * max(1.0, abs(lhs), abs(rhs))
        if lhs - rhs < -slack:
            return _FAILS
        if lhs - rhs <= slack:
            status = _TOUCHES
    return status


def classify_case(
    prior: Prior,
    m: PaymentMatrix,
    coupons: CouponValues,
    tol: float = 1e-9,
) -> OptOutCase:
    """Match the parameters against the six condition rows.

    Exactly one strict match names the case.  Any row holding with an
    equality inside ``tol`` (relative) turns the result into ``Boundary``
    carrying every matching row.  Zero matches, or several strict ones,
    contradict the covering/exclusivity properties of the rows and raise
    ``InternalInconsistency``.
    """
    if not check_strawman(prior, m):
        return OptOutCase(OptOutCase.INFEASIBLE)
    statuses = {
        label: _row_status(pairs, tol)
        for label, pairs in _row_conditions(m, coupons).items()
    }
    matching = tuple(l for l, s in statuses.items() if s != _FAILS)
    if not matching:
        raise InternalInconsistency(
            f"no condition row matched for m={m}, coupons={coupons}"
        )
    if any(statuses[label] == _TOUCHES for label in matching):
        return OptOutCase(OptOutCase.BOUNDARY, matching)
    if len(matching) > 1:
        raise InternalInconsistency(
            f"strict rows {matching} overlap for m={m}, coupons={coupons}"
        )
    return OptOutCase(matching[0], matching)


def _case_profile(
    prior: Prior, m: PaymentMatrix, coupons: CouponValues, label: str
) -> tuple[BStrategy, OptOutPolicy, Optional[str]]:
    """Closed-form (b, a, point name) for one condition row."""
    d0, d1 = prior.d0, prior.d1
    rho0, rho1 = coupons.rho0, coupons.rho1
    if label == OptOutCase.CASE1:
        return BStrategy(1.0, 1.0), OptOutPolicy(1.0, 0.0, 0.0, 1.0), None
    if label == OptOutCase.CASE2:
        a = OptOutPolicy(_unit(rho0 / m.m00, "x0"), 0.0, 0.0, 0.0)
        return BStrategy(0.0, 1.0), a, "P1"
    if label == OptOutCase.CASE3:
        p = _unit(1.0 - d1 * m.m11 / (d0 * m.m10), "p")
        y1 = _unit((rho0 - m.m00) / m.m10, "y1")
        return BStrategy(p, 1.0), OptOutPolicy(1.0, 0.0, 0.0, y1), "P2"
    if label == OptOutCase.CASE4:
        a = OptOutPolicy(0.0, 0.0, 0.0, _unit(rho1 / m.m11, "y1"))
        return BStrategy(1.0, 0.0), a, "P3"
    if label == OptOutCase.CASE5:
        q = _unit(1.0 - d0 * m.m00 / (d1 * m.m01), "q")
        x0 = _unit((rho1 - m.m11) / m.m01, "x0")
        return BStrategy(1.0, q), OptOutPolicy(x0, 0.0, 0.0, 1.0), "P4"
    if label == OptOutCase.CASE6:
        det = m.m01 * m.m10 - m.m00 * m.m11
        p = _unit(m.m01 * (d0 * m.m10 - d1 * m.m11) / (d0 * det), "p")
        q = _unit(m.m10 * (d1 * m.m01 - d0 * m.m00) / (d1 * det), "q")
        x0 = _unit((rho1 * m.m10 - rho0 * m.m11) / det, "x0")
        y1 = _unit((rho0 * m.m01 - rho1 * m.m00) / det, "y1")
        return BStrategy(p, q), OptOutPolicy(x0, 0.0, 0.0, y1), "P5"
    raise ValueError(f"unknown case label {label!r}")


def rr_condition(prior: Prior, m: PaymentMatrix, tol: float = 1e-9) -> bool:
    """Whether the Case6 mixture collapses to randomized response.

    Holds when ``d0^2 * m00 * m10 == d1^2 * m01 * m11`` up to relative
    ``tol``; the equilibrium then has p = q > 1/2 and a privacy level
    independent of the coupon values.
    """
    lhs = prior.d0 ** 2 * m.m00 * m.m10
    rhs = prior.d1 ** 2 * m.m01 * m.m11
    return abs(lhs - rhs) <= tol * max(abs(lhs), abs(rhs))


def solve_optout_bne(
    prior: Prior,
    m: PaymentMatrix,
    coupons: CouponValues,
    tol: float = 1e-9,
) -> OptOutBne:
    """Classify the parameters and return the closed-form equilibrium.

    The accuser never crosses signals: x1 = y0 = 0 in every case.  The
    privacy level is computed from the returned signaling strategy, so it
    is +inf whenever some signal reveals a type (cases 1, 3, 5), zero when
    the signal carries nothing (cases 2, 4), and finite in the mixed case.
    """
    case = classify_case(prior, m, coupons, tol)
    if case.label == OptOutCase.INFEASIBLE:
        return OptOutBne(
            b=None,
            a=None,
            case=case,
            dp_epsilon=None,
            rr=False,
            notes=("payment matrix fails the opt-out viability inequalities",),
        )
    if case.label == OptOutCase.BOUNDARY:
        candidates = tuple(
            OptOutBne(
                b=b,
                a=a,
                case=OptOutCase(label, (label,)),
                dp_epsilon=_dp_epsilon_of(b),
                rr=label == OptOutCase.CASE6 and rr_condition(prior, m),
                b_point=point,
            )
            for label, (b, a, point) in (
                (l, _case_profile(prior, m, coupons, l)) for l in case.rows
            )
        )
        return OptOutBne(
            b=None,
            a=None,
            case=case,
            dp_epsilon=None,
            rr=False,
            candidates=candidates,
            notes=("parameters sit on a region boundary; candidates listed",),
        )
    b, a, point = _case_profile(prior, m, coupons, case.label)
    return OptOutBne(
        b=b,
        a=a,
        case=case,
        dp_epsilon=_dp_epsilon_of(b),
        rr=case.label == OptOutCase.CASE6 and rr_condition(prior, m),
        b_point=point,
    )


def optout_utilities(
    prior: Prior,
    m: PaymentMatrix,
    coupons: CouponValues,
    b: BStrategy,
    a: OptOutPolicy,
) -> tuple[float, float, float]:
    """Expected utilities (accuser, signaler type 0, signaler type 1).

    The opt-out branch contributes zero on both sides, so only the four
    accusation probabilities enter.
    """
    p, q = b.p, b.q
    d0, d1 = prior.d0, prior.d1
    u_b0 = p * (coupons.rho0 - a.x0 * m.m00 + a.x1 * m.m10) + (1.0 - p) * (
        -a.y0 * m.m00 + a.y1 * m.m10
    )
    u_b1 = q * (coupons.rho1 - a.y1 * m.m11 + a.y0 * m.m01) + (1.0 - q) * (
        -a.x1 * m.m11 + a.x0 * m.m01
    )
    u_a = (
        a.x0 * (d0 * p * m.m00 - d1 * (1.0 - q) * m.m01)
        + a.x1 * (-d0 * p * m.m10 + d1 * (1.0 - q) * m.m11)
        + a.y0 * (d0 * (1.0 - p) * m.m00 - d1 * q * m.m01)
        + a.y1 * (-d0 * (1.0 - p) * m.m10 + d1 * q * m.m11)
    )
    return u_a, u_b0, u_b1


_DEFAULT_RANGES = {
    "m00": (0.05, 4.0),
    "m01": (0.05, 4.0),
    "m10": (0.05, 4.0),
    "m11": (0.05, 4.0),
    "d0": (0.5, 0.95),
    "rho0": (0.02, 8.0),
    "rho1": (0.02, 8.0),
}


def sample_cases(
    count: int,
    seed: int,
    margin: float = 1e-6,
    ranges: Optional[dict] = None,
    require_case: Optional[str] = None,
    max_draws: int = 10_000_000,
) -> list:
    """Rejection-sample ``count`` parameter sets clear of all boundaries.

    Draws uniform parameters from ``ranges`` (falling back to broad
    defaults per key), keeps only those passing the strawman gate and
    whose every condition-row margin is at least ``margin`` (relative)
    away from equality, and optionally filters to a single case label.
    Returns (prior, matrix, coupons) triples; deterministic in ``seed``.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    bounds = dict(_DEFAULT_RANGES)
    if ranges:
        unknown = set(ranges) - set(bounds)
        if unknown:
            raise ValueError(f"unknown range keys: {sorted(unknown)}")
        bounds.update(ranges)
    rng = random.Random(seed)
    accepted: list = []
    for _ in range(max_draws):
        if len(accepted) >= count:
            break
        draw = {k: rng.uniform(*bounds[k]) for k in bounds}
        prior = Prior.from_d0(draw["d0"])
        m = PaymentMatrix(draw["m00"], draw["m01"], draw["m10"], draw["m11"])
        coupons = CouponValues(draw["rho0"], draw["rho1"])
        if not check_strawman(prior, m):
            continue
        # Reject only draws near some decision surface; whether the clear
        # ones land in exactly one region is the caller's property to test.
        if any(
            _row_status(pairs, margin) == _TOUCHES
            for pairs in _row_conditions(m, coupons).values()
        ):
            continue
        if (
            require_case is not None
            and classify_case(prior, m, coupons).label != require_case
        ):
            continue
        accepted.append((prior, m, coupons))
    if len(accepted) < count:
        raise RuntimeError(
            f"sampler accepted only {len(accepted)}/{count} draws"
        )
    return accepted
