"""Bracketed root finding.

Every numeric solve in this package goes through plain bisection: it is
derivative free, unconditionally convergent on a sign-changing bracket, and
deterministic. Default argument tolerance is 1e-12 so that results comfortably
satisfy the 1e-10 accuracy bounds asserted by the acceptance tests.
"""

from __future__ import annotations

from typing import Callable

XTOL_DEFAULT = 1e-12
MAX_ITER_DEFAULT = 200


class NoRoot(ArithmeticError):
    """The bracket does not contain a sign change."""


def bisect_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    xtol: float = XTOL_DEFAULT,
    max_iter: int = MAX_ITER_DEFAULT,
) -> float:
    """Find a root of ``f`` on ``[lo, hi]`` by bisection.

    Requires ``f(lo)`` and ``f(hi)`` to have opposite signs (a zero endpoint
    is returned directly). Raises :class:`NoRoot` otherwise.
    """
    if not lo < hi:
        raise ValueError(f"invalid bracket [{lo}, {hi}]")
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise NoRoot(f"no sign change on [{lo}, {hi}]: f(lo)={flo}, f(hi)={fhi}")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= xtol or mid <= lo or mid >= hi:
            return mid
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if (fmid > 0.0) == (flo > 0.0):
            lo, flo = mid, fmid
        else:
            hi, fhi = mid, fmid
    return 0.5 * (lo + hi)


def bisect_leftmost(
    pred: Callable[[float], bool],
    lo: float,
    hi: float,
    *,
    xtol: float = XTOL_DEFAULT,
    max_iter: int = MAX_ITER_DEFAULT,
) -> float:
    """Leftmost switch point of a monotone predicate.

    ``pred`` must be False at ``lo`` (or become True exactly at ``lo``) and
    True at ``hi``; the return value approximates the infimum of the True
    region. Used to pick the smallest root when a nondecreasing function has
    a flat segment at the target level.
    """
    if pred(lo):
        return lo
    if not pred(hi):
        raise NoRoot(f"predicate is false on all of [{lo}, {hi}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= xtol or mid <= lo or mid >= hi:
            break
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi
