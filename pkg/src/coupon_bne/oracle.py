"""Brute-force verification of equilibrium claims.

Nothing in this module consults the closed-form solvers: gaps are
computed straight from the utility definitions, so a solver bug and an
oracle bug would have to agree to slip through.  ``best_response_gap``
measures how much each player could gain by deviating from a profile;
``enumerate_equilibria`` scans the whole signaling grid and clusters the
cells that survive a gap threshold; ``utility_surface`` samples utilities
for CSV export.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from . import _kernels
from .core import (
    BStrategy,
    GameSpec,
    GuessPolicy,
    IdentityGame,
    IdentityGameContinuous,
    OptOutGame,
    OptOutPolicy,
    PrivacyAwareParams,
    ScoringGame,
    ScoringReportPair,
    signal_masses,
)
from .identity_game import identity_utilities
from .optout_game import optout_utilities
from .privacy import privacy_aware_utility
from .scoring import expected_payment, f0 as rule_f0, f1 as rule_f1

MAX_GRID_EVALS = 10_000_000
MIN_ENUM_STEP = 1e-3

# Amortized per-cell candidate evaluations of each scan kernel; the
# product with the cell count is what MAX_GRID_EVALS bounds.
_CELL_COST = {"privacy_aware": 1, "scoring": 8, "identity": 4, "optout": 52}

# Report table resolution for the scoring scan (uniform over [0, 1]).
_SCORING_TABLE_POINTS = 20_001
_REPORT_CLAMP = 1e-12


class BudgetExceeded(RuntimeError):
    """The requested enumeration would exceed MAX_GRID_EVALS."""


@dataclass(frozen=True)
class GapReport:
    """Best deviation gains found for a profile; all within -1e-12 of 0+.

    ``argmax_deviations`` lists human-readable descriptions of the
    strictly improving deviations (empty when the profile checks out).
    """

    gap_a: float
    gap_b0: float
    gap_b1: float
    grid_step: float
    argmax_deviations: Tuple[str, ...] = ()

    def __post_init__(self):
        for name in ("gap_a", "gap_b0", "gap_b1"):
            val = getattr(self, name)
            if not val >= -1e-12:
                raise ValueError(f"{name} = {val!r} below -1e-12")

    @property
    def worst(self) -> float:
        return max(self.gap_a, self.gap_b0, self.gap_b1)

    def within(self, tol: float) -> bool:
        return self.worst <= tol


@dataclass(frozen=True)
class GridComponent:
    """A connected cluster of grid cells that pass the gap threshold."""

    cells: Tuple[Tuple[float, float], ...]
    best: Tuple[float, float]
    best_gap: float

    @property
    def size(self) -> int:
        return len(self.cells)

    def contains_near(self, p: float, q: float, radius: float) -> bool:
        return any(
            abs(cp - p) <= radius and abs(cq - q) <= radius
            for cp, cq in self.cells
        )


def _check_step(grid_step: float) -> float:
    step = float(grid_step)
    if not (0.0 < step <= 1.0):
        raise ValueError(f"grid_step must lie in (0, 1], got {grid_step!r}")
    return step


def _axis_grid(step: float) -> np.ndarray:
    return np.linspace(0.0, 1.0, int(round(1.0 / step)) + 1)


def _describe(kind: str, old: float, new: float, gain: float) -> str:
    return f"{kind}: {old:.6g} -> {new:.6g} gains {gain:.3g}"


def _linear_gap(own: float, slope: float, cand: np.ndarray) -> Tuple[float, float]:
    """Max gain and argmax of a utility linear in one probability.

    The null candidate gains exactly 0 even when the slope is infinite
    (log-rule payments at extreme reports), so 0 * inf never appears.
    """
    diff = cand - own
    with np.errstate(invalid="ignore"):
        gains = np.where(diff == 0.0, 0.0, diff * slope)
    k = int(np.argmax(gains))
    return float(gains[k]), float(cand[k])


# ---------------------------------------------------------------------------
# Per-game deviation slopes for the signaling side.  Each sender type's
# utility is linear in its own truth probability, so the grid search
# reduces to one slope; the grid is still walked (via _linear_gap) to
# keep the contract literal.


def _scoring_slopes(game: ScoringGame, a: ScoringReportPair) -> Tuple[float, float]:
    r = game.rule
    s0 = game.coupons.rho0 - (rule_f0(r, a.x0) - rule_f0(r, a.x1))
    s1 = game.coupons.rho1 - (rule_f1(r, a.x1) - rule_f1(r, a.x0))
    return s0, s1


def _identity_slopes(game: IdentityGame, a: GuessPolicy) -> Tuple[float, float]:
    s0 = (game.coupons.rho0 - a.x) - (a.y - 1.0)
    s1 = (game.coupons.rho1 - a.y) - (a.x - 1.0)
    return s0, s1


def _optout_slopes(game: OptOutGame, a: OptOutPolicy) -> Tuple[float, float]:
    m = game.matrix
    s0 = (game.coupons.rho0 - a.x0 * m.m00 + a.x1 * m.m10) - (
        -a.y0 * m.m00 + a.y1 * m.m10
    )
    s1 = (game.coupons.rho1 - a.y1 * m.m11 + a.y0 * m.m01) - (
        -a.x1 * m.m11 + a.x0 * m.m01
    )
    return s0, s1


def _identity_a_gap(game: IdentityGame, b: BStrategy, a: GuessPolicy):
    d0, d1 = game.prior.d0, game.prior.d1
    cx = d0 * b.p - d1 * (1.0 - b.q)
    cy = d1 * b.q - d0 * (1.0 - b.p)
    gap = (max(cx, 0.0) - a.x * cx) + (max(cy, 0.0) - a.y * cy)
    descs = []
    if max(cx, 0.0) - a.x * cx > 0.0:
        descs.append(_describe("a: x", a.x, 1.0 if cx > 0 else 0.0, max(cx, 0.0) - a.x * cx))
    if max(cy, 0.0) - a.y * cy > 0.0:
        descs.append(_describe("a: y", a.y, 1.0 if cy > 0 else 0.0, max(cy, 0.0) - a.y * cy))
    return gap, descs


def _optout_a_gap(game: OptOutGame, b: BStrategy, a: OptOutPolicy):
    d0, d1 = game.prior.d0, game.prior.d1
    m = game.matrix
    c00 = d0 * b.p * m.m00 - d1 * (1.0 - b.q) * m.m01
    c01 = -d0 * b.p * m.m10 + d1 * (1.0 - b.q) * m.m11
    c10 = d0 * (1.0 - b.p) * m.m00 - d1 * b.q * m.m01
    c11 = -d0 * (1.0 - b.p) * m.m10 + d1 * b.q * m.m11
    gap0 = max(0.0, c00, c01) - (a.x0 * c00 + a.x1 * c01)
    gap1 = max(0.0, c10, c11) - (a.y0 * c10 + a.y1 * c11)
    descs = []
    if gap0 > 0.0:
        descs.append(_describe("a: signal-0 policy", a.x0 * c00 + a.x1 * c01, max(0.0, c00, c01), gap0))
    if gap1 > 0.0:
        descs.append(_describe("a: signal-1 policy", a.y0 * c10 + a.y1 * c11, max(0.0, c10, c11), gap1))
    return gap0 + gap1, descs


def _scoring_a_gap(game: ScoringGame, b: BStrategy, a: ScoringReportPair, grid):
    d0, d1 = game.prior.d0, game.prior.d1
    mass0, mass1 = signal_masses(game.prior, b)
    numer = (d1 * (1.0 - b.q), d1 * b.q)
    gap = 0.0
    descs = []
    for mass, num, x_cur, label in (
        (mass0, numer[0], a.x0, "a: x0"),
        (mass1, numer[1], a.x1, "a: x1"),
    ):
        if mass <= 0.0:
            continue  # the signal is never sent; no payment at stake
        mu = num / mass
        cur = expected_payment(game.rule, mu, x_cur)
        best_val, best_x = cur, x_cur
        for x in grid:
            xx = min(max(float(x), _REPORT_CLAMP), 1.0 - _REPORT_CLAMP)
            val = expected_payment(game.rule, mu, xx)
            if val > best_val:
                best_val, best_x = val, xx
        gain = mass * (best_val - cur)
        gap += gain
        if gain > 0.0:
            descs.append(_describe(label, x_cur, best_x, gain))
    return gap, descs


def best_response_gap(
    game: GameSpec,
    b: BStrategy,
    a=None,
    grid_step: float = 1e-3,
) -> GapReport:
    """Deviation-gain audit of a strategy profile.

    Sender deviations are searched on a truth-probability grid of the
    given step (the profile itself is always a candidate, so the null
    deviation scores an exact 0).  The other side is handled exactly
    where its per-signal action set is finite (identity, opt-out) and by
    a report-grid search for the scoring game.  The privacy game has a
    single decision maker; its two axes fill the b0/b1 slots and
    ``gap_a`` is 0 by convention.
    """
    step = _check_step(grid_step)
    grid = _axis_grid(step)
    descs: List[str] = []

    if isinstance(game, IdentityGameContinuous):
        raise TypeError(
            "best_response_gap covers the discrete games; check the "
            "continuous threshold with solve_continuous_threshold"
        )

    if isinstance(game, PrivacyAwareParams):
        w0 = game.prior.d0 * game.coupons.rho0
        w1 = game.prior.d1 * game.coupons.rho1
        own = privacy_aware_utility(game, b)

        def axis_gap(vals, cand):
            # own = -inf happens at fully disclosing profiles; any finite
            # candidate is then an infinite improvement.
            if own == -math.inf:
                k = int(np.argmax(np.where(np.isfinite(vals), vals, -np.inf)))
                gain = math.inf if math.isfinite(vals[k]) else 0.0
                return gain, float(cand[k])
            gains = vals - own
            k = int(np.argmax(gains))
            return max(float(gains[k]), 0.0), float(cand[k])

        cand_p = np.append(grid, b.p)
        vals_p = _kernels.privacy_utility_surface(
            cand_p, np.array([b.q]), w0, w1, game.v
        )[:, 0]
        gap_b0, best_p = axis_gap(vals_p, cand_p)
        if gap_b0 > 0.0:
            descs.append(_describe("p", b.p, best_p, gap_b0))
        cand_q = np.append(grid, b.q)
        vals_q = _kernels.privacy_utility_surface(
            np.array([b.p]), cand_q, w0, w1, game.v
        )[0, :]
        gap_b1, best_q = axis_gap(vals_q, cand_q)
        if gap_b1 > 0.0:
            descs.append(_describe("q", b.q, best_q, gap_b1))
        return GapReport(0.0, gap_b0, gap_b1, step, tuple(descs))

    if isinstance(game, ScoringGame):
        if not isinstance(a, ScoringReportPair):
            raise TypeError("scoring game needs a ScoringReportPair")
        s0, s1 = _scoring_slopes(game, a)
        gap_a, a_descs = _scoring_a_gap(game, b, a, grid)
    elif isinstance(game, IdentityGame):
        if not isinstance(a, GuessPolicy):
            raise TypeError("identity game needs a GuessPolicy")
        s0, s1 = _identity_slopes(game, a)
        gap_a, a_descs = _identity_a_gap(game, b, a)
    elif isinstance(game, OptOutGame):
        if not isinstance(a, OptOutPolicy):
            raise TypeError("opt-out game needs an OptOutPolicy")
        s0, s1 = _optout_slopes(game, a)
        gap_a, a_descs = _optout_a_gap(game, b, a)
    else:
        raise TypeError(f"unsupported game {type(game).__name__}")

    gap_b0, best_p = _linear_gap(b.p, s0, np.append(grid, b.p))
    gap_b1, best_q = _linear_gap(b.q, s1, np.append(grid, b.q))
    if gap_b0 > 0.0:
        descs.append(_describe("b0: p", b.p, best_p, gap_b0))
    if gap_b1 > 0.0:
        descs.append(_describe("b1: q", b.q, best_q, gap_b1))
    descs.extend(a_descs)
    return GapReport(gap_a, gap_b0, gap_b1, step, tuple(descs))


# ---------------------------------------------------------------------------
# Exhaustive enumeration.


def _payment_tables(rule, n: int):
    xg = np.linspace(0.0, 1.0, n)
    lo, hi = _REPORT_CLAMP, 1.0 - _REPORT_CLAMP
    f0v = np.empty(n)
    f1v = np.empty(n)
    for i, x in enumerate(xg):
        xx = min(max(float(x), lo), hi)
        f0v[i] = rule_f0(rule, xx)
        f1v[i] = rule_f1(rule, xx)
    return xg, f0v, f1v


def _gap_grid(game: GameSpec, grid: np.ndarray, tol: float) -> np.ndarray:
    # The accuser/receiver side keeps every action within ``tol`` of its
    # per-signal optimum (not merely exact ties): an isolated mixed
    # equilibrium never lands exactly on a grid cell, and holding the
    # other side to exact best responses there would report huge sender
    # gaps one cell away.  With the slack the cell value is the sender
    # gap of the best profile in which the other side gives up at most
    # ``tol`` per signal.
    if isinstance(game, PrivacyAwareParams):
        w0 = game.prior.d0 * game.coupons.rho0
        w1 = game.prior.d1 * game.coupons.rho1
        surface = _kernels.privacy_utility_surface(grid, grid, w0, w1, game.v)
        return surface.max() - surface
    if isinstance(game, ScoringGame):
        xg, f0v, f1v = _payment_tables(game.rule, _SCORING_TABLE_POINTS)
        return _kernels.scoring_equilibrium_scan(
            grid, grid, game.prior.d0,
            game.coupons.rho0, game.coupons.rho1, xg, f0v, f1v,
        )
    if isinstance(game, IdentityGame):
        return _kernels.identity_equilibrium_scan(
            grid, grid, game.prior.d0,
            game.coupons.rho0, game.coupons.rho1, tie_tol=tol,
        )
    if isinstance(game, OptOutGame):
        m = game.matrix
        return _kernels.optout_equilibrium_scan(
            grid, grid, game.prior.d0,
            m.m00, m.m01, m.m10, m.m11,
            game.coupons.rho0, game.coupons.rho1, tie_tol=tol,
        )
    raise TypeError(f"enumeration unsupported for {type(game).__name__}")


def _connected_components(mask: np.ndarray) -> List[List[Tuple[int, int]]]:
    seen = np.zeros(mask.shape, dtype=bool)
    comps: List[List[Tuple[int, int]]] = []
    n_i, n_j = mask.shape
    for i0, j0 in zip(*np.nonzero(mask)):
        if seen[i0, j0]:
            continue
        stack = [(int(i0), int(j0))]
        seen[i0, j0] = True
        cells = []
        while stack:
            i, j = stack.pop()
            cells.append((i, j))
            for ni, nj in ((i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1)):
                if 0 <= ni < n_i and 0 <= nj < n_j and mask[ni, nj] and not seen[ni, nj]:
                    seen[ni, nj] = True
                    stack.append((ni, nj))
        comps.append(sorted(cells))
    comps.sort()
    return comps


def enumerate_equilibria(
    game: GameSpec, grid_step: float = 1e-2, tol: float = 1e-6
) -> List[GridComponent]:
    """All grid cells within ``tol`` of equilibrium, as components.

    The sender grid is square with the given step (at least 1e-3); the
    other side ranges over every action within ``tol`` of its per-signal
    optimum at the cell, so a returned cell means some profile at that
    (p, q) survives every deviation check up to ``tol`` on both sides.
    For the single-agent privacy game the gap is against the grid's best
    utility instead.
    """
    if isinstance(game, IdentityGameContinuous):
        raise TypeError("enumeration needs a discrete-type game")
    step = _check_step(grid_step)
    if step < MIN_ENUM_STEP:
        raise ValueError(
            f"grid_step {grid_step!r} below the {MIN_ENUM_STEP} cost guard"
        )
    grid = _axis_grid(step)
    n = grid.shape[0]
    cost = n * n * _CELL_COST[game.kind]
    if cost > MAX_GRID_EVALS:
        raise BudgetExceeded(
            f"{n}x{n} grid needs ~{cost:.2g} evaluations "
            f"(limit {MAX_GRID_EVALS:.2g}); coarsen grid_step"
        )
    gaps = _gap_grid(game, grid, float(tol))
    mask = gaps <= tol
    comps = []
    for cells in _connected_components(mask):
        pts = tuple((float(grid[i]), float(grid[j])) for i, j in cells)
        k = min(range(len(cells)), key=lambda t: gaps[cells[t]])
        comps.append(
            GridComponent(
                cells=pts,
                best=pts[k],
                best_gap=float(gaps[cells[k]]),
            )
        )
    return comps


# ---------------------------------------------------------------------------
# Utility sampling for sweeps and CSV export.


def _surface_row(game: GameSpec, p: float, q: float) -> Tuple[float, ...]:
    b = BStrategy(p, q)
    if isinstance(game, PrivacyAwareParams):
        u = privacy_aware_utility(game, b)
        return (p, q, u, u, 0.0)
    if isinstance(game, ScoringGame):
        d1 = game.prior.d1
        mass0, mass1 = signal_masses(game.prior, b)
        mu0 = d1 * (1.0 - q) / mass0 if mass0 > 0.0 else d1
        mu1 = d1 * q / mass1 if mass1 > 0.0 else d1

        def pay(f, x):
            return f(game.rule, min(max(x, _REPORT_CLAMP), 1.0 - _REPORT_CLAMP))

        u_b0 = p * (game.coupons.rho0 - pay(rule_f0, mu0)) - (1.0 - p) * pay(rule_f0, mu1)
        u_b1 = q * (game.coupons.rho1 - pay(rule_f1, mu1)) - (1.0 - q) * pay(rule_f1, mu0)
        u_a = mass0 * game.rule.g(mu0) + mass1 * game.rule.g(mu1)
        return (p, q, u_b0, u_b1, u_a)
    if isinstance(game, IdentityGame):
        d0, d1 = game.prior.d0, game.prior.d1
        cx = d0 * p - d1 * (1.0 - q)
        cy = d1 * q - d0 * (1.0 - p)
        x = 1.0 if cx > 0.0 else (0.0 if cx < 0.0 else 0.5)
        y = 1.0 if cy > 0.0 else (0.0 if cy < 0.0 else 0.5)
        u_a, u_b0, u_b1 = identity_utilities(
            game.prior, game.coupons, b, GuessPolicy(x, y)
        )
        return (p, q, u_b0, u_b1, u_a)
    if isinstance(game, OptOutGame):
        d0, d1 = game.prior.d0, game.prior.d1
        m = game.matrix
        c00 = d0 * p * m.m00 - d1 * (1.0 - q) * m.m01
        c01 = -d0 * p * m.m10 + d1 * (1.0 - q) * m.m11
        c10 = d0 * (1.0 - p) * m.m00 - d1 * q * m.m01
        c11 = -d0 * (1.0 - p) * m.m10 + d1 * q * m.m11

        def vertex(ca, cb):
            # Ties resolve toward opting out, then the lower accusation.
            best = max(0.0, ca, cb)
            if best == 0.0:
                return 0.0, 0.0
            if ca == best:
                return 1.0, 0.0
            return 0.0, 1.0

        x0, x1 = vertex(c00, c01)
        y0, y1 = vertex(c10, c11)
        u_a, u_b0, u_b1 = optout_utilities(
            game.prior, game.matrix, game.coupons, b,
            OptOutPolicy(x0, x1, y0, y1),
        )
        return (p, q, u_b0, u_b1, u_a)
    raise TypeError(f"utility_surface unsupported for {type(game).__name__}")


def utility_surface(game: GameSpec, resolution: int = 21) -> List[Tuple[float, ...]]:
    """Sample ``(p, q, u_b0, u_b1, u_a)`` rows with the other side at a
    best response; ``resolution`` counts points per axis."""
    if not (isinstance(resolution, int) and resolution >= 2):
        raise ValueError(f"resolution must be an int >= 2, got {resolution!r}")
    grid = np.linspace(0.0, 1.0, resolution)
    return [
        _surface_row(game, float(p), float(q)) for p in grid for q in grid
    ]
