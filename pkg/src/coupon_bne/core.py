"""Shared domain types for the coupon signaling games.

Conventions used across the whole package:

* There are two agent types, 0 and 1, with prior masses ``d0 >= d1``. Type 0
  is always the (weakly) more likely type; the :class:`Prior` constructor
  relabels on construction when handed ``d0 < d1`` and records the swap so
  callers can translate outputs back.
* ``BStrategy(p, q)``: the signaling agent sends its true type as the signal
  with probability ``p`` (type 0) resp. ``q`` (type 1). Equivalently ``p`` is
  the chance type 0 sends signal 0, and ``q`` the chance type 1 sends
  signal 1.
* Posteriors are always the probability of *type 1* given the signal:
  ``y0 = Pr[type 1 | signal 0]`` and ``y1 = Pr[type 1 | signal 1]``.
* All containers are frozen; validation happens at construction and fails
  loudly. Probabilities are accepted within ``1e-12`` of [0, 1] and clamped.
* Utilities that diverge are IEEE ``-inf`` (a totally ordered sentinel),
  never NaN.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Union

from .scoring import ScoringRule

PROB_TOL = 1e-12


class ProbabilityError(ValueError):
    """A value that must be a probability lies outside [0, 1] by more than 1e-12."""


class ZeroSignalMass(ValueError):
    """A posterior was requested for a signal that is sent with probability zero."""

    def __init__(self, signal: int):
        self.signal = signal
        super().__init__(f"signal {signal} has zero mass; posterior is unconstrained")


def as_probability(value: float, name: str = "value") -> float:
    """Validate ``value`` as a probability and clamp roundoff at the edges."""
    v = float(value)
    if math.isnan(v) or v < -PROB_TOL or v > 1.0 + PROB_TOL:
        raise ProbabilityError(f"{name}={value!r} is not a probability")
    return min(1.0, max(0.0, v))


def _positive(value: float, name: str) -> float:
    v = float(value)
    if math.isnan(v) or v <= 0.0:
        raise ValueError(f"{name}={value!r} must be positive")
    return v


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi], used for set-valued strategy components."""

    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float, tol: float = 1e-12) -> bool:
        return self.lo - tol <= x <= self.hi + tol


@dataclass(frozen=True)
class Prior:
    """Type distribution. Normalized so that ``d0 >= d1``.

    When constructed with ``d0 < d1`` the two labels are swapped and
    ``relabeled`` is set; game containers propagate the swap to their other
    parameters so every solver can assume the majority type is type 0.
    """

    d0: float
    d1: float
    relabeled: bool = False

    def __post_init__(self):
        d0 = as_probability(self.d0, "d0")
        d1 = as_probability(self.d1, "d1")
        if abs(d0 + d1 - 1.0) > 1e-9:
            raise ValueError(f"prior masses must sum to 1, got {d0} + {d1}")
        d1 = 1.0 - d0
        relabeled = False
        if d0 < d1:
            d0, d1 = d1, d0
            relabeled = True
        object.__setattr__(self, "d0", d0)
        object.__setattr__(self, "d1", d1)
        object.__setattr__(self, "relabeled", relabeled)

    @classmethod
    def from_d0(cls, d0: float) -> "Prior":
        return cls(d0, 1.0 - float(d0))


@dataclass(frozen=True)
class BStrategy:
    """Signaling strategy: truth probabilities ``p`` (type 0) and ``q`` (type 1)."""

    p: float
    q: float

    def __post_init__(self):
        object.__setattr__(self, "p", as_probability(self.p, "p"))
        object.__setattr__(self, "q", as_probability(self.q, "q"))

    def swapped(self) -> "BStrategy":
        """The same behavior under swapped type and signal labels."""
        return BStrategy(self.q, self.p)


@dataclass(frozen=True)
class CouponValues:
    """Coupon valuations per type; both strictly positive."""

    rho0: float
    rho1: float

    def __post_init__(self):
        object.__setattr__(self, "rho0", _positive(self.rho0, "rho0"))
        object.__setattr__(self, "rho1", _positive(self.rho1, "rho1"))

    def swapped(self) -> "CouponValues":
        return CouponValues(self.rho1, self.rho0)


@dataclass(frozen=True)
class PaymentMatrix:
    """Accusation payments ``m[accusation][true type]``, all nonnegative.

    Diagonal entries (correct accusation) flow from the signaling agent to
    the accuser; off-diagonal entries (wrong accusation) flow the other way.
    """

    m00: float
    m01: float
    m10: float
    m11: float

    def __post_init__(self):
        for name in ("m00", "m01", "m10", "m11"):
            v = float(getattr(self, name))
            if math.isnan(v) or v < 0.0:
                raise ValueError(f"{name}={v!r} must be nonnegative")
            object.__setattr__(self, name, v)

    def swapped(self) -> "PaymentMatrix":
        """The same payments under swapped type labels (both indices flip)."""
        return PaymentMatrix(self.m11, self.m10, self.m01, self.m00)


@dataclass(frozen=True)
class ScoringReportPair:
    """Forecast reports (probability of type 1) after signal 0 and signal 1."""

    x0: float
    x1: float

    def __post_init__(self):
        object.__setattr__(self, "x0", as_probability(self.x0, "x0"))
        object.__setattr__(self, "x1", as_probability(self.x1, "x1"))

    def swapped(self) -> "ScoringReportPair":
        return ScoringReportPair(1.0 - self.x1, 1.0 - self.x0)


@dataclass(frozen=True)
class GuessPolicy:
    """Guessing policy: ``x`` = Pr[guess 0 | signal 0], ``y`` = Pr[guess 1 | signal 1]."""

    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", as_probability(self.x, "x"))
        object.__setattr__(self, "y", as_probability(self.y, "y"))

    def swapped(self) -> "GuessPolicy":
        return GuessPolicy(self.y, self.x)


@dataclass(frozen=True)
class OptOutPolicy:
    """Accusation policy with an opt-out.

    After signal 0 the accuser says "type 0" with probability ``x0``,
    "type 1" with probability ``x1``, and abstains with the rest; ``y0``,
    ``y1`` likewise after signal 1. Requires ``x0 + x1 <= 1`` and
    ``y0 + y1 <= 1`` (within 1e-12).
    """

    x0: float
    x1: float
    y0: float
    y1: float

    def __post_init__(self):
        object.__setattr__(self, "x0", as_probability(self.x0, "x0"))
        object.__setattr__(self, "x1", as_probability(self.x1, "x1"))
        object.__setattr__(self, "y0", as_probability(self.y0, "y0"))
        object.__setattr__(self, "y1", as_probability(self.y1, "y1"))
        if self.x0 + self.x1 > 1.0 + PROB_TOL:
            raise ProbabilityError(f"x0 + x1 = {self.x0 + self.x1} exceeds 1")
        if self.y0 + self.y1 > 1.0 + PROB_TOL:
            raise ProbabilityError(f"y0 + y1 = {self.y0 + self.y1} exceeds 1")

    @property
    def optout0(self) -> float:
        return max(0.0, 1.0 - self.x0 - self.x1)

    @property
    def optout1(self) -> float:
        return max(0.0, 1.0 - self.y0 - self.y1)

    def swapped(self) -> "OptOutPolicy":
        return OptOutPolicy(self.y1, self.y0, self.x1, self.x0)


def bayes_posteriors(prior: Prior, b: BStrategy) -> tuple[float, float]:
    """Posterior probability of type 1 after each signal.

    Returns ``(y0, y1)`` where ``y0 = Pr[type 1 | signal 0]`` and
    ``y1 = Pr[type 1 | signal 1]``. Raises :class:`ZeroSignalMass` naming the
    dead signal when one of them is never sent; the caller decides whether an
    unconstrained posterior is acceptable there.
    """
    mass0 = prior.d0 * b.p + prior.d1 * (1.0 - b.q)
    mass1 = prior.d0 * (1.0 - b.p) + prior.d1 * b.q
    if mass0 <= 0.0:
        raise ZeroSignalMass(0)
    if mass1 <= 0.0:
        raise ZeroSignalMass(1)
    y0 = prior.d1 * (1.0 - b.q) / mass0
    y1 = prior.d1 * b.q / mass1
    return (y0, y1)


def signal_masses(prior: Prior, b: BStrategy) -> tuple[float, float]:
    """Marginal probability of each signal under ``prior`` and ``b``."""
    mass0 = prior.d0 * b.p + prior.d1 * (1.0 - b.q)
    return (mass0, 1.0 - mass0)


# ---------------------------------------------------------------------------
# Game containers


@dataclass(frozen=True)
class PrivacyAwareParams:
    """Single-agent privacy game: coupon payoff minus ``v`` times the leakage."""

    kind = "privacy_aware"

    prior: Prior
    coupons: CouponValues
    v: float

    def __post_init__(self):
        object.__setattr__(self, "v", _positive(self.v, "v"))
        if self.prior.relabeled:
            object.__setattr__(self, "coupons", self.coupons.swapped())

    @property
    def y_total(self) -> float:
        """The type-weighted coupon mass ``d0*rho0 + d1*rho1``."""
        return self.prior.d0 * self.coupons.rho0 + self.prior.d1 * self.coupons.rho1


@dataclass(frozen=True)
class ScoringGame:
    """Signaling against a forecaster paid by a proper scoring rule."""

    kind = "scoring"

    prior: Prior
    coupons: CouponValues
    rule: ScoringRule

    def __post_init__(self):
        if self.prior.relabeled:
            object.__setattr__(self, "coupons", self.coupons.swapped())

    @property
    def symmetric_rho(self) -> Optional[float]:
        """The common coupon value, or None when the two differ."""
        if self.coupons.rho0 == self.coupons.rho1:
            return self.coupons.rho0
        return None


@dataclass(frozen=True)
class IdentityGame:
    """Signaling against a guesser; a correct guess costs the signaler 1."""

    kind = "identity"

    prior: Prior
    coupons: CouponValues

    def __post_init__(self):
        if self.prior.relabeled:
            object.__setattr__(self, "coupons", self.coupons.swapped())


@dataclass(frozen=True)
class IdentityGameContinuous:
    """Identity game with coupon valuations drawn from a distribution.

    ``dist1`` defaults to ``dist0`` (a common valuation distribution for both
    types), which is the only case with a well-defined scalar leakage.
    """

    kind = "identity_continuous"

    prior: Prior
    dist0: object
    dist1: object = None

    def __post_init__(self):
        if self.dist1 is None:
            object.__setattr__(self, "dist1", self.dist0)
        if self.prior.relabeled:
            d0, d1 = self.dist1, self.dist0
            object.__setattr__(self, "dist0", d0)
            object.__setattr__(self, "dist1", d1)


@dataclass(frozen=True)
class OptOutGame:
    """Accusation game with payments ``matrix`` and an opt-out action."""

    kind = "optout"

    prior: Prior
    coupons: CouponValues
    matrix: PaymentMatrix

    def __post_init__(self):
        if self.prior.relabeled:
            object.__setattr__(self, "coupons", self.coupons.swapped())
            object.__setattr__(self, "matrix", self.matrix.swapped())


GameSpec = Union[
    PrivacyAwareParams,
    ScoringGame,
    IdentityGame,
    IdentityGameContinuous,
    OptOutGame,
]


@dataclass(frozen=True)
class GameUtilities:
    u_a: Optional[float] = None
    u_b0: Optional[float] = None
    u_b1: Optional[float] = None
    u_b: Optional[float] = None

    def swapped(self) -> "GameUtilities":
        return GameUtilities(u_a=self.u_a, u_b0=self.u_b1, u_b1=self.u_b0, u_b=self.u_b)


@dataclass(frozen=True)
class EquilibriumReport:
    """Uniform result container rendered by the command line tools."""

    game: str
    case_label: str
    b_strategy: object
    a_strategy: object
    posteriors: Optional[tuple] = None
    utilities: GameUtilities = field(default_factory=GameUtilities)
    dp_epsilon: Optional[float] = None
    unique: bool = True
    notes: tuple = ()

    def with_note(self, note: str) -> "EquilibriumReport":
        return replace(self, notes=self.notes + (note,))
