"""Deviation-gap audits and grid enumeration against the closed forms."""

import math

import pytest

from coupon_bne import identity_game, optout_game, oracle, privacy, scoring, scoring_game
from coupon_bne.core import (
    BStrategy,
    CouponValues,
    GuessPolicy,
    IdentityGame,
    IdentityGameContinuous,
    OptOutGame,
    OptOutPolicy,
    PaymentMatrix,
    Prior,
    PrivacyAwareParams,
    ScoringGame,
    ScoringReportPair,
)

PRIOR_06 = Prior.from_d0(0.6)
RT = math.sqrt(1.5)
OPTOUT_GAME = OptOutGame(
    Prior.from_d0(RT / (1.0 + RT)),
    CouponValues(1.0, 1.2),
    PaymentMatrix(1.0, 3.0, 2.0, 1.0),
)


# ---------------------------------------------------------------------------
# GapReport basics.


def test_gap_report_validation_and_worst():
    rep = oracle.GapReport(0.0, 1e-13, 2e-13, 1e-3)
    assert rep.worst == 2e-13
    assert rep.within(1e-9)
    assert not rep.within(1e-14)
    with pytest.raises(ValueError):
        oracle.GapReport(-1e-6, 0.0, 0.0, 1e-3)


def test_best_response_gap_rejects_bad_inputs():
    game = IdentityGame(PRIOR_06, CouponValues(0.5, 0.5))
    b = BStrategy(0.6, 0.6)
    with pytest.raises(TypeError):
        oracle.best_response_gap(game, b, ScoringReportPair(0.2, 0.8))
    with pytest.raises(ValueError):
        oracle.best_response_gap(game, b, GuessPolicy(1.0, 0.5), grid_step=0.0)
    cont = IdentityGameContinuous(PRIOR_06, identity_game.UniformDist(0.0, 1.0))
    with pytest.raises(TypeError):
        oracle.best_response_gap(cont, b, GuessPolicy(1.0, 0.5))


# ---------------------------------------------------------------------------
# best_response_gap per game.


def test_identity_equilibrium_profile_has_exact_zero_gaps():
    game = IdentityGame(PRIOR_06, CouponValues(0.5, 0.5))
    rep = oracle.best_response_gap(
        game, BStrategy(0.6, 0.6), GuessPolicy(1.0, 0.5)
    )
    assert rep.gap_a == 0.0
    assert rep.gap_b0 == 0.0
    assert rep.gap_b1 == 0.0
    assert rep.argmax_deviations == ()


def test_identity_truthful_profile_fails_small_coupons():
    game = IdentityGame(PRIOR_06, CouponValues(0.5, 0.5))
    rep = oracle.best_response_gap(
        game, BStrategy(1.0, 1.0), GuessPolicy(1.0, 1.0)
    )
    # Deviating to p = 0 trades the -0.5 of a caught truthful signal for 0.
    assert rep.gap_b0 == pytest.approx(0.5, abs=1e-12)
    assert rep.gap_b1 == pytest.approx(0.5, abs=1e-12)
    assert not rep.within(1e-9)
    assert any("b0" in d for d in rep.argmax_deviations)


def test_scoring_solver_profile_verifies():
    res = scoring_game.solve_scoring_bne(PRIOR_06, 1.0, scoring.make_quadratic())
    game = ScoringGame(PRIOR_06, CouponValues(1.0, 1.0), scoring.make_quadratic())
    rep = oracle.best_response_gap(game, res.b, res.a, grid_step=1e-3)
    assert rep.worst <= 1e-4


def test_optout_solver_profile_verifies_tightly():
    res = optout_game.solve_optout_bne(
        OPTOUT_GAME.prior, OPTOUT_GAME.matrix, OPTOUT_GAME.coupons
    )
    rep = oracle.best_response_gap(OPTOUT_GAME, res.b, res.a, grid_step=1e-3)
    assert rep.worst <= 1e-6


def test_privacy_gap_interior_optimum():
    params = PrivacyAwareParams(Prior.from_d0(0.5), CouponValues(100.0, 100.0), 1.0)
    res = privacy.solve_privacy_aware(params)
    rep = oracle.best_response_gap(params, res.strategy, grid_step=1e-3)
    assert rep.gap_a == 0.0
    assert rep.worst <= 1e-6


def test_privacy_gap_full_disclosure_is_infinite():
    params = PrivacyAwareParams(Prior.from_d0(0.5), CouponValues(100.0, 100.0), 1.0)
    rep = oracle.best_response_gap(params, BStrategy(1.0, 1.0), grid_step=1e-2)
    assert rep.gap_b0 == math.inf


def test_gap_monotone_in_grid_refinement():
    params = PrivacyAwareParams(Prior.from_d0(0.5), CouponValues(100.0, 100.0), 1.0)
    b = BStrategy(0.9, 0.9)
    gaps = [
        oracle.best_response_gap(params, b, grid_step=step).worst
        for step in (0.2, 0.05, 0.01)
    ]
    assert gaps[0] <= gaps[1] + 1e-12
    assert gaps[1] <= gaps[2] + 1e-12
    assert gaps[2] > 1.0  # the fine grid finds a real improvement here


# ---------------------------------------------------------------------------
# enumerate_equilibria.


def test_enumerate_guards():
    game = IdentityGame(PRIOR_06, CouponValues(0.5, 0.5))
    with pytest.raises(ValueError):
        oracle.enumerate_equilibria(game, grid_step=5e-4)
    with pytest.raises(oracle.BudgetExceeded):
        oracle.enumerate_equilibria(OPTOUT_GAME, grid_step=1e-3)
    cont = IdentityGameContinuous(PRIOR_06, identity_game.UniformDist(0.0, 1.0))
    with pytest.raises(TypeError):
        oracle.enumerate_equilibria(cont)


def test_enumerate_privacy_single_cell():
    params = PrivacyAwareParams(Prior.from_d0(0.5), CouponValues(100.0, 100.0), 1.0)
    comps = oracle.enumerate_equilibria(params, grid_step=1e-2, tol=1e-3)
    assert len(comps) == 1
    assert comps[0].size == 1
    assert comps[0].best == (0.99, 0.99)
    assert comps[0].best_gap == 0.0


def test_enumerate_scoring_interior_component():
    game = ScoringGame(PRIOR_06, CouponValues(1.0, 1.0), scoring.make_quadratic())
    comps = oracle.enumerate_equilibria(game, grid_step=1e-3, tol=3e-3)
    assert len(comps) == 1
    comp = comps[0]
    assert comp.contains_near(0.875, 0.5625, 2e-3)
    for p, q in comp.cells:
        assert abs(p - 0.875) <= 0.02 and abs(q - 0.5625) <= 0.02


def test_enumerate_identity_traces_l2_segment():
    game = IdentityGame(PRIOR_06, CouponValues(0.5, 0.5))
    comps = oracle.enumerate_equilibria(game, grid_step=1e-3, tol=1e-3)
    assert len(comps) == 1
    comp = comps[0]
    ps = sorted(p for p, _ in comp.cells)
    # The family q = D0 (1 - p) / D1 lives on p in [1/3, 1].
    assert ps[0] <= 1.0 / 3.0 + 2e-3
    assert ps[-1] == 1.0
    assert comp.contains_near(0.6, 0.6, 1e-9)  # the RR point
    for p, q in comp.cells:
        assert abs(0.4 * q - 0.6 * (1.0 - p)) <= 1.1e-3


def test_enumerate_optout_case6_point():
    comps = oracle.enumerate_equilibria(OPTOUT_GAME, grid_step=5e-3, tol=1e-3)
    assert len(comps) == 1
    res = optout_game.solve_optout_bne(
        OPTOUT_GAME.prior, OPTOUT_GAME.matrix, OPTOUT_GAME.coupons
    )
    assert comps[0].contains_near(res.b.p, res.b.q, 5e-3)


def test_enumerate_finds_every_closed_form():
    quad = scoring.make_quadratic()
    cases = [
        (
            PrivacyAwareParams(Prior.from_d0(0.5), CouponValues(100.0, 100.0), 1.0),
            privacy.solve_privacy_aware(
                PrivacyAwareParams(Prior.from_d0(0.5), CouponValues(100.0, 100.0), 1.0)
            ).strategy,
            1e-2,
            1e-3,
        ),
        (
            ScoringGame(PRIOR_06, CouponValues(1.0, 1.0), quad),
            scoring_game.solve_scoring_bne(PRIOR_06, 1.0, quad).b,
            1e-3,
            3e-3,
        ),
        (
            IdentityGame(PRIOR_06, CouponValues(0.5, 0.5)),
            identity_game.solve_identity_bne(PRIOR_06, CouponValues(0.5, 0.5)).b,
            1e-3,
            1e-3,
        ),
        (
            OPTOUT_GAME,
            optout_game.solve_optout_bne(
                OPTOUT_GAME.prior, OPTOUT_GAME.matrix, OPTOUT_GAME.coupons
            ).b,
            5e-3,
            1e-3,
        ),
    ]
    for game, b_star, step, tol in cases:
        comps = oracle.enumerate_equilibria(game, grid_step=step, tol=tol)
        assert any(
            c.contains_near(b_star.p, b_star.q, 1.01 * step) for c in comps
        ), f"no component near ({b_star.p}, {b_star.q}) for {game.kind}"


# ---------------------------------------------------------------------------
# utility_surface.


def test_utility_surface_shape_and_corners():
    game = IdentityGame(PRIOR_06, CouponValues(0.5, 0.5))
    rows = oracle.utility_surface(game, resolution=3)
    assert len(rows) == 9
    assert all(len(r) == 5 for r in rows)
    by_pq = {(r[0], r[1]): r for r in rows}
    # At (1, 1) the guesser pins x = y = 1; both types eat the penalty.
    p, q, ub0, ub1, ua = by_pq[(1.0, 1.0)]
    assert ub0 == pytest.approx(0.5 - 1.0)
    assert ub1 == pytest.approx(0.5 - 1.0)
    assert ua == pytest.approx(1.0)


def test_utility_surface_privacy_rows():
    params = PrivacyAwareParams(Prior.from_d0(0.5), CouponValues(2.0, 2.0), 1.0)
    rows = oracle.utility_surface(params, resolution=3)
    by_pq = {(r[0], r[1]): r for r in rows}
    assert by_pq[(0.0, 0.0)][2] == -math.inf
    assert by_pq[(0.5, 0.5)][2] == pytest.approx(1.0)
    assert by_pq[(1.0, 0.0)][2] == pytest.approx(1.0)


def test_utility_surface_rejects_bad_resolution():
    game = IdentityGame(PRIOR_06, CouponValues(0.5, 0.5))
    with pytest.raises(ValueError):
        oracle.utility_surface(game, resolution=1)
