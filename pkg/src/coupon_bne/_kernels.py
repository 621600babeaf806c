"""Grid-scan kernels with selectable numba and numpy backends.

Every kernel exists twice: a scalar loop compiled with ``numba.njit`` and a
vectorized numpy twin that performs the same per-cell arithmetic in the
same order.  The public wrappers pick one according to ``set_backend`` or
the ``COUPON_BNE_BACKEND`` environment variable ("auto"/"" chooses numba
when importable, plain numpy otherwise).  ``COUPON_BNE_THREADS`` caps
numba's thread pool; the kernels themselves are serial, so the cap only
matters if a future kernel goes parallel.

Cell semantics shared by the equilibrium scans: for each signaling
strategy ``(p, q)`` on the grid, the accuser/receiver is placed on its
exact best-response set (ties within ``tie_tol`` keep the mixture
degrees of freedom), and the cell value is the smallest worst-type
deviation gain the signaling side can be held to.  A cell value <= tol
therefore certifies an approximate equilibrium at the cell.
"""

from __future__ import annotations

import math
import os
from typing import Optional

import numpy as np

ENV_BACKEND = "COUPON_BNE_BACKEND"
ENV_THREADS = "COUPON_BNE_THREADS"

try:  # pragma: no cover - exercised implicitly at import
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


class BackendError(RuntimeError):
    """Backend selection failed (unknown name or numba unavailable)."""


_forced: Optional[str] = None


def set_backend(name: Optional[str]) -> None:
    """Force a backend ("numba" or "numpy"); ``None`` returns to the env."""
    global _forced
    if name is None:
        _forced = None
        return
    if name not in ("numba", "numpy"):
        raise BackendError(f"unknown backend {name!r}")
    if name == "numba" and not NUMBA_AVAILABLE:
        raise BackendError("numba backend requested but numba is not importable")
    _forced = name


def active_backend() -> str:
    if _forced is not None:
        return _forced
    env = os.environ.get(ENV_BACKEND, "").strip().lower()
    if env in ("", "auto"):
        return "numba" if NUMBA_AVAILABLE else "numpy"
    if env == "numpy":
        return "numpy"
    if env == "numba":
        if not NUMBA_AVAILABLE:
            raise BackendError(
                f"{ENV_BACKEND}=numba but numba is not importable"
            )
        return "numba"
    raise BackendError(f"unrecognized {ENV_BACKEND} value {env!r}")


def _apply_thread_cap() -> None:
    raw = os.environ.get(ENV_THREADS, "").strip()
    if not raw:
        return
    try:
        cap = int(raw)
    except ValueError:
        raise BackendError(f"{ENV_THREADS}={raw!r} is not an integer")
    if cap < 1:
        raise BackendError(f"{ENV_THREADS} must be positive, got {cap}")
    if NUMBA_AVAILABLE:
        import numba

        numba.set_num_threads(min(cap, numba.config.NUMBA_NUM_THREADS))


def _vec(a) -> np.ndarray:
    out = np.ascontiguousarray(a, dtype=np.float64)
    if out.ndim != 1:
        raise ValueError("expected a one-dimensional grid vector")
    return out


# ---------------------------------------------------------------------------
# Privacy-aware utility surface: u(p, q) = w0 p + w1 q - v * eps(p, q).


@njit(cache=True)
def _privacy_surface_scalar(pg, qg, w0, w1, v):
    n_p, n_q = pg.shape[0], qg.shape[0]
    out = np.empty((n_p, n_q))
    for i in range(n_p):
        p = pg[i]
        for j in range(n_q):
            q = qg[j]
            # The four likelihood ratios, convention 0/0 = 1, k/0 = inf.
            a, b = p, 1.0 - q
            c, d = q, 1.0 - p
            r1 = a / b if b > 0.0 else (1.0 if a == 0.0 else math.inf)
            r2 = b / a if a > 0.0 else (1.0 if b == 0.0 else math.inf)
            r3 = c / d if d > 0.0 else (1.0 if c == 0.0 else math.inf)
            r4 = d / c if c > 0.0 else (1.0 if d == 0.0 else math.inf)
            x = max(max(max(r1, r2), r3), r4)
            if x == math.inf:
                out[i, j] = -math.inf
            else:
                out[i, j] = w0 * p + w1 * q - v * math.log(x)
    return out


def _privacy_surface_numpy(pg, qg, w0, w1, v):
    p = pg[:, None]
    q = qg[None, :]

    def ratio(num, den):
        safe = np.where(den > 0.0, den, 1.0)
        return np.where(
            den > 0.0, num / safe, np.where(num == 0.0, 1.0, np.inf)
        )

    a, b = p, 1.0 - q
    c, d = q, 1.0 - p
    x = np.maximum(
        np.maximum(np.maximum(ratio(a, b), ratio(b, a)), ratio(c, d)),
        ratio(d, c),
    )
    with np.errstate(invalid="ignore"):
        u = w0 * p + w1 * q - v * np.log(x)
    return np.where(np.isinf(x), -np.inf, u)


# ---------------------------------------------------------------------------
# Identity game scan.  The receiver's per-signal guess weights are
# cx = d0 p - d1 (1-q) and cy = d1 q - d0 (1-p); both types' utility
# slopes depend on the guesses only through t = x + y, so the best
# sustainable deviation gap minimizes over four candidate t values.


@njit(cache=True)
def _identity_gap_at(p, q, rho0, rho1, t):
    s0 = 1.0 + rho0 - t
    s1 = 1.0 + rho1 - t
    g0 = (1.0 - p) * max(s0, 0.0) + p * max(-s0, 0.0)
    g1 = (1.0 - q) * max(s1, 0.0) + q * max(-s1, 0.0)
    return max(g0, g1)


@njit(cache=True)
def _identity_scan_scalar(pg, qg, d0, rho0, rho1, tie_tol):
    d1 = 1.0 - d0
    n_p, n_q = pg.shape[0], qg.shape[0]
    out = np.empty((n_p, n_q))
    for i in range(n_p):
        p = pg[i]
        for j in range(n_q):
            q = qg[j]
            cx = d0 * p - d1 * (1.0 - q)
            cy = d1 * q - d0 * (1.0 - p)
            xlo = 1.0 if cx > tie_tol else 0.0
            xhi = 0.0 if cx < -tie_tol else 1.0
            ylo = 1.0 if cy > tie_tol else 0.0
            yhi = 0.0 if cy < -tie_tol else 1.0
            tlo = xlo + ylo
            thi = xhi + yhi
            t2 = min(max(1.0 + rho0, tlo), thi)
            t3 = min(max(1.0 + rho1, tlo), thi)
            best = _identity_gap_at(p, q, rho0, rho1, tlo)
            best = min(best, _identity_gap_at(p, q, rho0, rho1, thi))
            best = min(best, _identity_gap_at(p, q, rho0, rho1, t2))
            best = min(best, _identity_gap_at(p, q, rho0, rho1, t3))
            out[i, j] = best
    return out


def _identity_scan_numpy(pg, qg, d0, rho0, rho1, tie_tol):
    d1 = 1.0 - d0
    p = pg[:, None]
    q = qg[None, :]
    cx = d0 * p - d1 * (1.0 - q)
    cy = d1 * q - d0 * (1.0 - p)
    xlo = np.where(cx > tie_tol, 1.0, 0.0)
    xhi = np.where(cx < -tie_tol, 0.0, 1.0)
    ylo = np.where(cy > tie_tol, 1.0, 0.0)
    yhi = np.where(cy < -tie_tol, 0.0, 1.0)
    tlo = xlo + ylo
    thi = xhi + yhi

    def gap_at(t):
        s0 = 1.0 + rho0 - t
        s1 = 1.0 + rho1 - t
        g0 = (1.0 - p) * np.maximum(s0, 0.0) + p * np.maximum(-s0, 0.0)
        g1 = (1.0 - q) * np.maximum(s1, 0.0) + q * np.maximum(-s1, 0.0)
        return np.maximum(g0, g1)

    t2 = np.minimum(np.maximum(1.0 + rho0, tlo), thi)
    t3 = np.minimum(np.maximum(1.0 + rho1, tlo), thi)
    best = gap_at(tlo)
    best = np.minimum(best, gap_at(thi))
    best = np.minimum(best, gap_at(t2))
    best = np.minimum(best, gap_at(t3))
    return best


# ---------------------------------------------------------------------------
# Scoring game scan.  Tables f0v/f1v hold the rule payments on a uniform
# report grid xg over [0, 1]; the receiver's table best response for
# posterior mu sits within two cells of mu * (n - 1) because the expected
# payment is unimodal with its peak at mu.  Tables must be finite.


@njit(cache=True)
def _table_report(mu, f0v, f1v):
    n = f0v.shape[0]
    k = int(round(mu * (n - 1)))
    best_k = -1
    best_v = -math.inf
    for o in range(-2, 3):
        kk = min(max(k + o, 0), n - 1)
        val = (1.0 - mu) * f0v[kk] + mu * f1v[kk]
        if val > best_v:
            best_v = val
            best_k = kk
    return best_k


@njit(cache=True)
def _scoring_cell_gap(p, q, rho0, rho1, s0, s1):
    g0 = (1.0 - p) * max(s0, 0.0) + p * max(-s0, 0.0)
    g1 = (1.0 - q) * max(s1, 0.0) + q * max(-s1, 0.0)
    return max(g0, g1)


@njit(cache=True)
def _scoring_offpath_gap(p, q, rho0, rho1, f0v, f1v, k_fixed, fixed_is_k1):
    # One signal is never sent; any report there is a best response, so
    # search the whole table for the report that best protects the cell.
    n = f0v.shape[0]
    best = math.inf
    for k in range(n):
        if fixed_is_k1:
            k0, k1 = k, k_fixed
        else:
            k0, k1 = k_fixed, k
        s0 = rho0 - f0v[k0] + f0v[k1]
        s1 = rho1 - f1v[k1] + f1v[k0]
        best = min(best, _scoring_cell_gap(p, q, rho0, rho1, s0, s1))
    return best


@njit(cache=True)
def _scoring_scan_scalar(pg, qg, d0, rho0, rho1, xg, f0v, f1v):
    d1 = 1.0 - d0
    n_p, n_q = pg.shape[0], qg.shape[0]
    out = np.empty((n_p, n_q))
    for i in range(n_p):
        p = pg[i]
        for j in range(n_q):
            q = qg[j]
            m0 = d0 * p + d1 * (1.0 - q)
            m1 = d0 * (1.0 - p) + d1 * q
            if m0 > 0.0 and m1 > 0.0:
                k0 = _table_report(d1 * (1.0 - q) / m0, f0v, f1v)
                k1 = _table_report(d1 * q / m1, f0v, f1v)
                s0 = rho0 - f0v[k0] + f0v[k1]
                s1 = rho1 - f1v[k1] + f1v[k0]
                out[i, j] = _scoring_cell_gap(p, q, rho0, rho1, s0, s1)
            elif m0 > 0.0:
                k0 = _table_report(d1 * (1.0 - q) / m0, f0v, f1v)
                out[i, j] = _scoring_offpath_gap(
                    p, q, rho0, rho1, f0v, f1v, k0, False
                )
            else:
                k1 = _table_report(d1 * q / m1, f0v, f1v)
                out[i, j] = _scoring_offpath_gap(
                    p, q, rho0, rho1, f0v, f1v, k1, True
                )
    return out


def _scoring_scan_numpy(pg, qg, d0, rho0, rho1, xg, f0v, f1v):
    d1 = 1.0 - d0
    n = f0v.shape[0]
    p = pg[:, None]
    q = qg[None, :]
    m0 = d0 * p + d1 * (1.0 - q)
    m1 = d0 * (1.0 - p) + d1 * q

    def table_report(mu):
        k = np.rint(mu * (n - 1)).astype(np.int64)
        best_k = None
        best_v = None
        for o in range(-2, 3):
            kk = np.minimum(np.maximum(k + o, 0), n - 1)
            val = (1.0 - mu) * f0v[kk] + mu * f1v[kk]
            if best_v is None:
                best_k, best_v = kk.copy(), val.copy()
            else:
                take = val > best_v
                best_k = np.where(take, kk, best_k)
                best_v = np.where(take, val, best_v)
        return best_k

    mu0 = np.where(m0 > 0.0, d1 * (1.0 - q) / np.where(m0 > 0.0, m0, 1.0), 0.5)
    mu1 = np.where(m1 > 0.0, d1 * q / np.where(m1 > 0.0, m1, 1.0), 0.5)
    k0 = table_report(mu0)
    k1 = table_report(mu1)
    s0 = rho0 - f0v[k0] + f0v[k1]
    s1 = rho1 - f1v[k1] + f1v[k0]
    g0 = (1.0 - p) * np.maximum(s0, 0.0) + p * np.maximum(-s0, 0.0)
    g1 = (1.0 - q) * np.maximum(s1, 0.0) + q * np.maximum(-s1, 0.0)
    out = np.maximum(g0, g1)
    # Off-path corners (a signal with zero mass) get the full-table search;
    # there are at most two such cells, so a Python loop is fine.
    for i, j in zip(*np.nonzero(m0 <= 0.0)):
        out[i, j] = _scoring_offpath_gap(
            float(pg[i]), float(qg[j]), rho0, rho1, f0v, f1v, int(k1[i, j]), True
        )
    for i, j in zip(*np.nonzero(m1 <= 0.0)):
        out[i, j] = _scoring_offpath_gap(
            float(pg[i]), float(qg[j]), rho0, rho1, f0v, f1v, int(k0[i, j]), False
        )
    return out


# ---------------------------------------------------------------------------
# Opt-out game scan.  Per signal the accuser picks among accuse-0,
# accuse-1 and opting out; actions within tie_tol of the best stay
# available for mixing.  The sustainable set per signal is covered by two
# slots (accusation probability free, the crossed accusation at zero),
# and the cell gap minimizes over the four slot combinations with up to
# thirteen closed-form candidates each.


@njit(cache=True)
def _optout_slot(c, best, tie_tol):
    # Interval of accusation probability z with best - c * z <= tie_tol.
    if c > 0.0:
        lo = (best - tie_tol) / c
        if lo > 1.0:
            return math.inf, -math.inf
        return max(lo, 0.0), 1.0
    if c < 0.0:
        hi = (best - tie_tol) / c
        if hi < 0.0:
            return math.inf, -math.inf
        return 0.0, min(hi, 1.0)
    if best <= tie_tol:
        return 0.0, 1.0
    return math.inf, -math.inf


@njit(cache=True)
def _optout_combo_gap(
    p, q, rho0, rho1, a0u, a1u, b0w, b1w, ulo, uhi, wlo, whi
):
    best = math.inf
    # Corners.
    for u in (ulo, uhi):
        for w in (wlo, whi):
            s0 = rho0 + a0u * u + b0w * w
            s1 = rho1 + a1u * u + b1w * w
            best = min(best, _scoring_cell_gap(p, q, rho0, rho1, s0, s1))
    # Zero crossings of each slope along each free axis.
    for w in (wlo, whi):
        for num_c, den in (
            (rho0 + b0w * w, a0u),
            (rho1 + b1w * w, a1u),
        ):
            safe = den if den != 0.0 else 1.0
            u = -num_c / safe
            u = min(max(u, ulo), uhi) if den != 0.0 else ulo
            s0 = rho0 + a0u * u + b0w * w
            s1 = rho1 + a1u * u + b1w * w
            best = min(best, _scoring_cell_gap(p, q, rho0, rho1, s0, s1))
    for u in (ulo, uhi):
        for num_c, den in (
            (rho0 + a0u * u, b0w),
            (rho1 + a1u * u, b1w),
        ):
            safe = den if den != 0.0 else 1.0
            w = -num_c / safe
            w = min(max(w, wlo), whi) if den != 0.0 else wlo
            s0 = rho0 + a0u * u + b0w * w
            s1 = rho1 + a1u * u + b1w * w
            best = min(best, _scoring_cell_gap(p, q, rho0, rho1, s0, s1))
    # Joint zero of both slopes.
    det = a0u * b1w - a1u * b0w
    safe_det = det if det != 0.0 else 1.0
    u = (-rho0 * b1w + rho1 * b0w) / safe_det
    w = (rho0 * a1u - rho1 * a0u) / safe_det
    if det != 0.0:
        u = min(max(u, ulo), uhi)
        w = min(max(w, wlo), whi)
    else:
        u, w = ulo, wlo
    s0 = rho0 + a0u * u + b0w * w
    s1 = rho1 + a1u * u + b1w * w
    best = min(best, _scoring_cell_gap(p, q, rho0, rho1, s0, s1))
    return best


@njit(cache=True)
def _optout_scan_scalar(
    pg, qg, d0, m00, m01, m10, m11, rho0, rho1, tie_tol
):
    d1 = 1.0 - d0
    n_p, n_q = pg.shape[0], qg.shape[0]
    out = np.empty((n_p, n_q))
    for i in range(n_p):
        p = pg[i]
        for j in range(n_q):
            q = qg[j]
            c00 = d0 * p * m00 - d1 * (1.0 - q) * m01
            c01 = -d0 * p * m10 + d1 * (1.0 - q) * m11
            c10 = d0 * (1.0 - p) * m00 - d1 * q * m01
            c11 = -d0 * (1.0 - p) * m10 + d1 * q * m11
            bx = max(max(0.0, c00), c01)
            by = max(max(0.0, c10), c11)
            x0lo, x0hi = _optout_slot(c00, bx, tie_tol)
            x1lo, x1hi = _optout_slot(c01, bx, tie_tol)
            y0lo, y0hi = _optout_slot(c10, by, tie_tol)
            y1lo, y1hi = _optout_slot(c11, by, tie_tol)
            best = math.inf
            # u is the x-side free accusation, w the y-side one; the
            # slope coefficients follow from the utility displays.
            if x0lo <= x0hi and y0lo <= y0hi:
                best = min(
                    best,
                    _optout_combo_gap(
                        p, q, rho0, rho1, -m00, -m01, m00, m01,
                        x0lo, x0hi, y0lo, y0hi,
                    ),
                )
            if x0lo <= x0hi and y1lo <= y1hi:
                best = min(
                    best,
                    _optout_combo_gap(
                        p, q, rho0, rho1, -m00, -m01, -m10, -m11,
                        x0lo, x0hi, y1lo, y1hi,
                    ),
                )
            if x1lo <= x1hi and y0lo <= y0hi:
                best = min(
                    best,
                    _optout_combo_gap(
                        p, q, rho0, rho1, m10, m11, m00, m01,
                        x1lo, x1hi, y0lo, y0hi,
                    ),
                )
            if x1lo <= x1hi and y1lo <= y1hi:
                best = min(
                    best,
                    _optout_combo_gap(
                        p, q, rho0, rho1, m10, m11, -m10, -m11,
                        x1lo, x1hi, y1lo, y1hi,
                    ),
                )
            out[i, j] = best
    return out


def _optout_scan_numpy(pg, qg, d0, m00, m01, m10, m11, rho0, rho1, tie_tol):
    d1 = 1.0 - d0
    p = pg[:, None]
    q = qg[None, :]
    c00 = d0 * p * m00 - d1 * (1.0 - q) * m01
    c01 = -d0 * p * m10 + d1 * (1.0 - q) * m11
    c10 = d0 * (1.0 - p) * m00 - d1 * q * m01
    c11 = -d0 * (1.0 - p) * m10 + d1 * q * m11
    bx = np.maximum(np.maximum(0.0, c00), c01)
    by = np.maximum(np.maximum(0.0, c10), c11)

    def slot(c, best):
        safe = np.where(c != 0.0, c, 1.0)
        ratio = (best - tie_tol) / safe
        lo = np.where(c > 0.0, np.maximum(ratio, 0.0), 0.0)
        hi = np.where(c < 0.0, np.minimum(ratio, 1.0), 1.0)
        empty = (
            ((c > 0.0) & (ratio > 1.0))
            | ((c < 0.0) & (ratio < 0.0))
            | ((c == 0.0) & (best > tie_tol))
        )
        return (
            np.where(empty, np.inf, lo),
            np.where(empty, -np.inf, hi),
        )

    x0lo, x0hi = slot(c00, bx)
    x1lo, x1hi = slot(c01, bx)
    y0lo, y0hi = slot(c10, by)
    y1lo, y1hi = slot(c11, by)

    def cell_gap(s0, s1):
        g0 = (1.0 - p) * np.maximum(s0, 0.0) + p * np.maximum(-s0, 0.0)
        g1 = (1.0 - q) * np.maximum(s1, 0.0) + q * np.maximum(-s1, 0.0)
        return np.maximum(g0, g1)

    def combo_gap(a0u, a1u, b0w, b1w, ulo, uhi, wlo, whi):
        best = None

        def consider(u, w):
            nonlocal best
            s0 = rho0 + a0u * u + b0w * w
            s1 = rho1 + a1u * u + b1w * w
            val = cell_gap(s0, s1)
            best = val if best is None else np.minimum(best, val)

        for u in (ulo, uhi):
            for w in (wlo, whi):
                consider(u, w)
        for w in (wlo, whi):
            for num_c, den in (
                (rho0 + b0w * w, a0u),
                (rho1 + b1w * w, a1u),
            ):
                safe = den if den != 0.0 else 1.0
                u = -num_c / safe
                if den != 0.0:
                    u = np.minimum(np.maximum(u, ulo), uhi)
                else:
                    u = ulo
                consider(u, w)
        for u in (ulo, uhi):
            for num_c, den in (
                (rho0 + a0u * u, b0w),
                (rho1 + a1u * u, b1w),
            ):
                safe = den if den != 0.0 else 1.0
                w = -num_c / safe
                if den != 0.0:
                    w = np.minimum(np.maximum(w, wlo), whi)
                else:
                    w = wlo
                consider(u, w)
        det = a0u * b1w - a1u * b0w
        safe_det = det if det != 0.0 else 1.0
        u = (-rho0 * b1w + rho1 * b0w) / safe_det
        w = (rho0 * a1u - rho1 * a0u) / safe_det
        if det != 0.0:
            u = np.minimum(np.maximum(u, ulo), uhi)
            w = np.minimum(np.maximum(w, wlo), whi)
        else:
            u, w = ulo, wlo
        consider(u, w)
        return best

    def masked(gap, ulo, uhi, wlo, whi):
        ok = (ulo <= uhi) & (wlo <= whi)
        return np.where(ok, gap, np.inf)

    # Coefficient arguments are scalars, so each combo broadcasts over
    # the whole grid; empty slots are masked to +inf afterwards.
    combos = (
        ((-m00, -m01, m00, m01), (x0lo, x0hi, y0lo, y0hi)),
        ((-m00, -m01, -m10, -m11), (x0lo, x0hi, y1lo, y1hi)),
        ((m10, m11, m00, m01), (x1lo, x1hi, y0lo, y0hi)),
        ((m10, m11, -m10, -m11), (x1lo, x1hi, y1lo, y1hi)),
    )
    best = None
    for (a0u, a1u, b0w, b1w), (ulo, uhi, wlo, whi) in combos:
        # Inf bounds would poison the slope arithmetic inside the combo,
        # so compute with bounds clipped to [0, 1] and mask afterwards.
        culo = np.minimum(np.maximum(ulo, 0.0), 1.0)
        cuhi = np.minimum(np.maximum(uhi, 0.0), 1.0)
        cwlo = np.minimum(np.maximum(wlo, 0.0), 1.0)
        cwhi = np.minimum(np.maximum(whi, 0.0), 1.0)
        gap = combo_gap(a0u, a1u, b0w, b1w, culo, cuhi, cwlo, cwhi)
        gap = masked(gap, ulo, uhi, wlo, whi)
        best = gap if best is None else np.minimum(best, gap)
    return best


# ---------------------------------------------------------------------------
# Backend dispatch.  The scalar kernels above already carry @njit (the
# decorator is a no-op shim when numba is missing, and set_backend /
# active_backend refuse "numba" in that case, so the plain-Python
# versions are never hot).


def privacy_utility_surface(pg, qg, w0: float, w1: float, v: float):
    """Utility of every (p, q) grid cell in the privacy-aware game."""
    pg, qg = _vec(pg), _vec(qg)
    if active_backend() == "numba":
        _apply_thread_cap()
        return _privacy_surface_scalar(pg, qg, float(w0), float(w1), float(v))
    return _privacy_surface_numpy(pg, qg, float(w0), float(w1), float(v))


def identity_equilibrium_scan(
    pg, qg, d0: float, rho0: float, rho1: float, tie_tol: float = 1e-9
):
    """Best sustainable deviation gap per (p, q) cell, identity game."""
    pg, qg = _vec(pg), _vec(qg)
    args = (pg, qg, float(d0), float(rho0), float(rho1), float(tie_tol))
    if active_backend() == "numba":
        _apply_thread_cap()
        return _identity_scan_scalar(*args)
    return _identity_scan_numpy(*args)


def scoring_equilibrium_scan(
    pg, qg, d0: float, rho0: float, rho1: float, xg, f0v, f1v
):
    """Best deviation gap per (p, q) cell against table best responses.

    ``xg`` must be a uniform grid over [0, 1] and the payment tables must
    be finite (clamp diverging rules slightly inside the interval).
    """
    pg, qg = _vec(pg), _vec(qg)
    xg, f0v, f1v = _vec(xg), _vec(f0v), _vec(f1v)
    if not (xg.shape == f0v.shape == f1v.shape):
        raise ValueError("report grid and payment tables must align")
    if not (np.isfinite(f0v).all() and np.isfinite(f1v).all()):
        raise ValueError("payment tables must be finite")
    args = (pg, qg, float(d0), float(rho0), float(rho1), xg, f0v, f1v)
    if active_backend() == "numba":
        _apply_thread_cap()
        return _scoring_scan_scalar(*args)
    return _scoring_scan_numpy(*args)


def optout_equilibrium_scan(
    pg,
    qg,
    d0: float,
    m00: float,
    m01: float,
    m10: float,
    m11: float,
    rho0: float,
    rho1: float,
    tie_tol: float = 1e-9,
):
    """Best sustainable deviation gap per (p, q) cell, opt-out game."""
    pg, qg = _vec(pg), _vec(qg)
    args = (
        pg,
        qg,
        float(d0),
        float(m00),
        float(m01),
        float(m10),
        float(m11),
        float(rho0),
        float(rho1),
        float(tie_tol),
    )
    if active_backend() == "numba":
        _apply_thread_cap()
        return _optout_scan_scalar(*args)
    return _optout_scan_numpy(*args)
