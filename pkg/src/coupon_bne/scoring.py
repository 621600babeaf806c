"""Proper scoring rules for binary forecasts.

A rule is described by a convex function ``g`` on [0, 1] together with its
first two derivatives. The induced payment functions are

    f0(x) = g(x) - x * g'(x)        (paid when the outcome is type 0)
    f1(x) = g(x) + (1 - x) * g'(x)  (paid when the outcome is type 1)

where ``x`` is the reported probability of type 1. A forecaster with belief
``mu`` then expects ``F_mu(x) = g(x) - (x - mu) * g'(x)``, which is maximized
at ``x = mu`` with value ``g(mu)``: reporting the true belief is optimal.

The three canonical rules (quadratic, spherical, logarithmic) are symmetric:
``g(x) = g(1 - x)``, hence ``f1(x) = f0(1 - x)``. The logarithmic rule is
unbounded: ``f0(1) = f1(0) = -inf`` (IEEE infinities, never NaN).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional


class DomainError(ValueError):
    """Report argument outside [0, 1]."""


def _check_unit(x: float, name: str = "x") -> float:
    x = float(x)
    if math.isnan(x) or x < 0.0 or x > 1.0:
        raise DomainError(f"{name}={x!r} outside [0, 1]")
    return x


@dataclass(frozen=True)
class ScoringRule:
    """A scoring rule given by ``g`` and its derivatives.

    ``g`` must be strictly convex; ``symmetric`` declares ``g(x) = g(1-x)``.
    """

    name: str
    g: Callable[[float], float]
    g_prime: Callable[[float], float]
    g_second: Callable[[float], float]
    symmetric: bool = False


def f0(rule: ScoringRule, x: float) -> float:
    """Payment when the true type is 0 and the report was ``x``."""
    x = _check_unit(x)
    if x == 0.0:
        # x * g'(x) -> 0 even when g' diverges at the endpoint
        return rule.g(0.0)
    return rule.g(x) - x * rule.g_prime(x)


def f1(rule: ScoringRule, x: float) -> float:
    """Payment when the true type is 1 and the report was ``x``."""
    x = _check_unit(x)
    if x == 1.0:
        return rule.g(1.0)
    return rule.g(x) + (1.0 - x) * rule.g_prime(x)


def expected_payment(rule: ScoringRule, mu: float, x: float) -> float:
    """Expected payment ``F_mu(x)`` for reporting ``x`` under belief ``mu``."""
    mu = _check_unit(mu, "mu")
    x = _check_unit(x)
    if x == mu:
        return rule.g(x)
    if mu == 0.0:
        return f0(rule, x)
    if mu == 1.0:
        return f1(rule, x)
    return (1.0 - mu) * f0(rule, x) + mu * f1(rule, x)


# ---------------------------------------------------------------------------
# Canonical rules


def make_quadratic() -> ScoringRule:
    """Brier-style rule: g(x) = 2 - 2x + 2x^2, so f0 = 2 - 2x^2, f1 = 4x - 2x^2."""

    def g(x: float) -> float:
        return 2.0 - 2.0 * x + 2.0 * x * x

    def g_prime(x: float) -> float:
        return -2.0 + 4.0 * x

    def g_second(x: float) -> float:
        return 4.0

    return ScoringRule("quadratic", g, g_prime, g_second, symmetric=True)


def make_spherical() -> ScoringRule:
    """Spherical rule: g(x) = sqrt(x^2 + (1-x)^2)."""

    def g(x: float) -> float:
        return math.hypot(x, 1.0 - x)

    def g_prime(x: float) -> float:
        return (2.0 * x - 1.0) / math.hypot(x, 1.0 - x)

    def g_second(x: float) -> float:
        return 1.0 / math.hypot(x, 1.0 - x) ** 3

    return ScoringRule("spherical", g, g_prime, g_second, symmetric=True)


def make_logarithmic() -> ScoringRule:
    """Log rule: g(x) = x ln x + (1-x) ln(1-x); f0 = ln(1-x), f1 = ln x."""

    def g(x: float) -> float:
        acc = 0.0
        if x > 0.0:
            acc += x * math.log(x)
        if x < 1.0:
            acc += (1.0 - x) * math.log(1.0 - x)
        return acc

    def g_prime(x: float) -> float:
        if x == 0.0:
            return -math.inf
        if x == 1.0:
            return math.inf
        return math.log(x / (1.0 - x))

    def g_second(x: float) -> float:
        if x == 0.0 or x == 1.0:
            return math.inf
        return 1.0 / (x * (1.0 - x))

    return ScoringRule("logarithmic", g, g_prime, g_second, symmetric=True)


_RULES: dict[str, Callable[[], ScoringRule]] = {
    "quadratic": make_quadratic,
    "spherical": make_spherical,
    "logarithmic": make_logarithmic,
}


def get_rule(name: str) -> ScoringRule:
    """Look up a canonical rule by name."""
    try:
        factory = _RULES[name]
    except KeyError:
        raise KeyError(
            f"unknown scoring rule {name!r}; choose from {sorted(_RULES)}"
        ) from None
    return factory()


def make_custom(
    name: str,
    g: Callable[[float], float],
    g_prime: Callable[[float], float],
    g_second: Callable[[float], float],
    symmetric: Optional[bool] = None,
    *,
    grid_step: float = 1e-3,
) -> ScoringRule:
    """Wrap a user-supplied (g, g', g'') triple, validating it on a grid.

    Checks strict convexity (g'' > 0) at every interior grid point, and
    checks the symmetry claim when ``symmetric`` is passed; when it is None
    the symmetry flag is detected from the grid.
    """
    n = int(round(1.0 / grid_step))
    xs = [i / n for i in range(n + 1)]
    sym_ok = True
    for x in xs:
        gx = g(x)
        gm = g(1.0 - x)
        if math.isnan(gx):
            raise DomainError(f"custom rule {name!r}: g({x}) is NaN")
        if abs(gx - gm) > 1e-9 * max(1.0, abs(gx), abs(gm)):
            sym_ok = False
    for x in xs[1:-1]:
        if not g_second(x) > 0.0:
            raise ValueError(
                f"custom rule {name!r}: g''({x}) = {g_second(x)!r} is not positive"
            )
    if symmetric is None:
        symmetric = sym_ok
    elif symmetric and not sym_ok:
        raise ValueError(f"custom rule {name!r} declared symmetric but g(x) != g(1-x)")
    return ScoringRule(name, g, g_prime, g_second, symmetric=symmetric)
