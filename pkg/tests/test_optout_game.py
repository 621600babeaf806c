import math

import pytest

from coupon_bne.core import CouponValues, OptOutPolicy, PaymentMatrix, Prior
from coupon_bne.optout_game import (
    DivisionByZero,
    OptOutCase,
    check_strawman,
    classify_case,
    optout_utilities,
    rr_condition,
    sample_cases,
    solve_optout_bne,
)

# Worked instance: off-diagonal payments dominate, prior ratio sqrt(1.5).
M_MAIN = PaymentMatrix(1.0, 3.0, 2.0, 1.0)
_RT = math.sqrt(1.5)
PRIOR_RT = Prior.from_d0(_RT / (1.0 + _RT))


def accusation_values(prior, m, b):
    """Expected payoff of each accusation, per signal, against ``b``.

    Returns ((signal0 accuse0, signal0 accuse1), (signal1 accuse0,
    signal1 accuse1)); opting out is always worth 0.
    """
    d0, d1 = prior.d0, prior.d1
    c00 = d0 * b.p * m.m00 - d1 * (1.0 - b.q) * m.m01
    c01 = -d0 * b.p * m.m10 + d1 * (1.0 - b.q) * m.m11
    c10 = d0 * (1.0 - b.p) * m.m00 - d1 * b.q * m.m01
    c11 = -d0 * (1.0 - b.p) * m.m10 + d1 * b.q * m.m11
    return (c00, c01), (c10, c11)


def b_slopes(m, coupons, a):
    """d(uB0)/dp and d(uB1)/dq under an accusation policy with x1 = y0 = 0."""
    slope0 = coupons.rho0 - a.x0 * m.m00 - a.y1 * m.m10
    slope1 = coupons.rho1 - a.y1 * m.m11 - a.x0 * m.m01
    return slope0, slope1


def test_strawman_examples():
    # Unit payments on every accusation: a blind type-0 accusation wins.
    assert not check_strawman(Prior.from_d0(0.6), PaymentMatrix(1, 1, 1, 1))
    assert check_strawman(PRIOR_RT, M_MAIN)
    assert check_strawman(Prior.from_d0(0.5), PaymentMatrix(1, 2, 2, 1))


def test_strawman_zero_wrong_accusation_payment():
    with pytest.raises(DivisionByZero):
        check_strawman(Prior.from_d0(0.6), PaymentMatrix(1, 0, 2, 1))
    with pytest.raises(DivisionByZero):
        check_strawman(Prior.from_d0(0.6), PaymentMatrix(1, 3, 0, 1))


def test_strawman_implies_offdiagonal_dominance():
    import random

    rng = random.Random(11)
    seen = 0
    for _ in range(500):
        m = PaymentMatrix(*(rng.uniform(0.05, 4.0) for _ in range(4)))
        prior = Prior.from_d0(rng.uniform(0.5, 0.95))
        if check_strawman(prior, m):
            seen += 1
            assert m.m00 * m.m11 < m.m01 * m.m10
    assert seen > 10


def test_classify_named_rows():
    assert (
        classify_case(PRIOR_RT, M_MAIN, CouponValues(4.0, 5.0)).label
        == OptOutCase.CASE1
    )
    assert (
        classify_case(PRIOR_RT, M_MAIN, CouponValues(0.5, 2.0)).label
        == OptOutCase.CASE2
    )
    assert (
        classify_case(PRIOR_RT, M_MAIN, CouponValues(2.0, 0.8)).label
        == OptOutCase.CASE4
    )
    assert (
        classify_case(PRIOR_RT, M_MAIN, CouponValues(1.0, 1.2)).label
        == OptOutCase.CASE6
    )


def test_classify_infeasible_matrix():
    case = classify_case(
        Prior.from_d0(0.6), PaymentMatrix(1, 1, 1, 1), CouponValues(1.0, 1.0)
    )
    assert case.label == OptOutCase.INFEASIBLE


def test_classify_boundary_two_rows():
    # rho0 equals m00 exactly, with the second Case2 inequality strict and
    # the Case3 conditions strict: both rows hold, one of them touching.
    case = classify_case(PRIOR_RT, M_MAIN, CouponValues(1.0, 4.0))
    assert case.label == OptOutCase.BOUNDARY
    assert set(case.rows) == {OptOutCase.CASE2, OptOutCase.CASE3}


def test_classify_boundary_grand_corner():
    # rho0 = m00 + m10 and rho1 = m01 + m11: four regions meet here.
    case = classify_case(PRIOR_RT, M_MAIN, CouponValues(3.0, 4.0))
    assert case.label == OptOutCase.BOUNDARY
    assert set(case.rows) == {
        OptOutCase.CASE1,
        OptOutCase.CASE3,
        OptOutCase.CASE5,
        OptOutCase.CASE6,
    }


def test_solve_case1_truthful():
    res = solve_optout_bne(PRIOR_RT, M_MAIN, CouponValues(4.0, 5.0))
    assert res.case.label == OptOutCase.CASE1
    assert res.b_point is None
    assert (res.b.p, res.b.q) == (1.0, 1.0)
    assert (res.a.x0, res.a.x1, res.a.y0, res.a.y1) == (1.0, 0.0, 0.0, 1.0)
    assert res.dp_epsilon == math.inf
    assert not res.rr
    u_a, u_b0, u_b1 = optout_utilities(
        PRIOR_RT, M_MAIN, CouponValues(4.0, 5.0), res.b, res.a
    )
    # Always caught: the coupon minus the correct-accusation payment.
    assert u_b0 == pytest.approx(4.0 - M_MAIN.m00, abs=1e-12)
    assert u_b1 == pytest.approx(5.0 - M_MAIN.m11, abs=1e-12)
    assert u_a == pytest.approx(
        PRIOR_RT.d0 * M_MAIN.m00 + PRIOR_RT.d1 * M_MAIN.m11, abs=1e-12
    )


def test_solve_case2_point():
    coupons = CouponValues(0.5, 2.0)
    res = solve_optout_bne(PRIOR_RT, M_MAIN, coupons)
    assert res.case.label == OptOutCase.CASE2
    assert res.b_point == "P1"
    assert (res.b.p, res.b.q) == (0.0, 1.0)
    assert res.a.x0 == pytest.approx(0.5, abs=1e-12)
    assert res.a.y1 == 0.0
    # Signal 0 never reaches the accuser, so nothing leaks.
    assert res.dp_epsilon == 0.0
    slope0, _ = b_slopes(M_MAIN, coupons, res.a)
    assert slope0 == pytest.approx(0.0, abs=1e-12)
    # Type 1 strictly prefers the truthful signal.
    _, u_b0, u_b1 = optout_utilities(PRIOR_RT, M_MAIN, coupons, res.b, res.a)
    assert u_b0 == 0.0
    assert u_b1 == pytest.approx(2.0, abs=1e-12)


def test_solve_case3_point():
    coupons = CouponValues(2.0, 3.8)
    res = solve_optout_bne(PRIOR_RT, M_MAIN, coupons)
    assert res.case.label == OptOutCase.CASE3
    assert res.b_point == "P2"
    expected_p = 1.0 - PRIOR_RT.d1 * 1.0 / (PRIOR_RT.d0 * 2.0)
    assert res.b.p == pytest.approx(expected_p, abs=1e-12)
    assert res.b.q == 1.0
    assert res.a.x0 == 1.0
    assert res.a.y1 == pytest.approx(0.5, abs=1e-12)
    assert res.dp_epsilon == math.inf
    # Type 0 exactly indifferent; type 1 strictly truthful.
    slope0, slope1 = b_slopes(M_MAIN, coupons, res.a)
    assert slope0 == pytest.approx(0.0, abs=1e-12)
    assert slope1 > 0
    # P2 sits where accusing type 1 after signal 1 is worth exactly zero.
    (_, _), (c10, c11) = accusation_values(PRIOR_RT, M_MAIN, res.b)
    assert c11 == pytest.approx(0.0, abs=1e-12)
    assert c10 < 0


def test_solve_case4_point():
    coupons = CouponValues(2.0, 0.8)
    res = solve_optout_bne(PRIOR_RT, M_MAIN, coupons)
    assert res.case.label == OptOutCase.CASE4
    assert res.b_point == "P3"
    assert (res.b.p, res.b.q) == (1.0, 0.0)
    assert res.a.x0 == 0.0
    assert res.a.y1 == pytest.approx(0.8, abs=1e-12)
    assert res.dp_epsilon == 0.0
    _, slope1 = b_slopes(M_MAIN, coupons, res.a)
    assert slope1 == pytest.approx(0.0, abs=1e-12)


def test_solve_case5_point():
    coupons = CouponValues(2.8, 2.0)
    res = solve_optout_bne(PRIOR_RT, M_MAIN, coupons)
    assert res.case.label == OptOutCase.CASE5
    assert res.b_point == "P4"
    assert res.b.p == 1.0
    expected_q = 1.0 - PRIOR_RT.d0 * 1.0 / (PRIOR_RT.d1 * 3.0)
    assert res.b.q == pytest.approx(expected_q, abs=1e-12)
    assert res.a.x0 == pytest.approx(1.0 / 3.0, abs=1e-12)
    assert res.a.y1 == 1.0
    assert res.dp_epsilon == math.inf
    _, slope1 = b_slopes(M_MAIN, coupons, res.a)
    assert slope1 == pytest.approx(0.0, abs=1e-12)
    # P4 sits on the signal-0 indifference line.
    (c00, _), _ = accusation_values(PRIOR_RT, M_MAIN, res.b)
    assert c00 == pytest.approx(0.0, abs=1e-12)


def test_solve_case6_worked_instance():
    coupons = CouponValues(1.0, 1.2)
    res = solve_optout_bne(PRIOR_RT, M_MAIN, coupons)
    assert res.case.label == OptOutCase.CASE6
    assert res.b_point == "P5"
    assert res.a.x0 == pytest.approx(0.28, abs=1e-12)
    assert res.a.y1 == pytest.approx(0.36, abs=1e-12)
    assert res.a.x1 == 0.0 and res.a.y0 == 0.0
    assert abs(res.b.p - res.b.q) <= 1e-10
    assert res.b.p > 0.5
    assert res.rr
    assert res.dp_epsilon == pytest.approx(0.5 * math.log(6.0), abs=1e-10)
    # Both signaler types exactly indifferent.
    slope0, slope1 = b_slopes(M_MAIN, coupons, res.a)
    assert abs(slope0) <= 1e-10
    assert abs(slope1) <= 1e-10
    # The accuser's played accusations are worth exactly zero, the
    # crossed ones strictly less.
    (c00, c01), (c10, c11) = accusation_values(PRIOR_RT, M_MAIN, res.b)
    assert abs(c00) <= 1e-10
    assert abs(c11) <= 1e-10
    assert c01 < 0 and c10 < 0
    u_a, u_b0, u_b1 = optout_utilities(PRIOR_RT, M_MAIN, coupons, res.b, res.a)
    assert u_b0 == pytest.approx(0.72, abs=1e-12)
    assert u_b1 == pytest.approx(
        coupons.rho1 - res.a.y1 * M_MAIN.m11, abs=1e-12
    )
    assert u_a == pytest.approx(0.0, abs=1e-12)


def test_case6_epsilon_ratio_identity():
    # In the mixed case the odds of signal 0 across types match the
    # viability ratio exactly, whatever the coupons.
    for coupons in (CouponValues(1.0, 1.2), CouponValues(0.9, 1.1)):
        res = solve_optout_bne(PRIOR_RT, M_MAIN, coupons)
        assert res.case.label == OptOutCase.CASE6
        ratio = res.b.p / (1.0 - res.b.q)
        expected = PRIOR_RT.d1 * M_MAIN.m01 / (PRIOR_RT.d0 * M_MAIN.m00)
        assert ratio == pytest.approx(expected, rel=1e-12)


def test_case6_b_independent_of_coupons():
    first = solve_optout_bne(PRIOR_RT, M_MAIN, CouponValues(1.0, 1.2))
    second = solve_optout_bne(PRIOR_RT, M_MAIN, CouponValues(0.9, 1.1))
    assert first.case.label == second.case.label == OptOutCase.CASE6
    assert (first.b.p, first.b.q) == (second.b.p, second.b.q)
    assert (first.a.x0, first.a.y1) != (second.a.x0, second.a.y1)


def test_rr_condition_examples():
    assert rr_condition(PRIOR_RT, M_MAIN)
    assert rr_condition(Prior.from_d0(0.5), PaymentMatrix(1, 2, 2, 1))
    assert not rr_condition(Prior.from_d0(0.7), M_MAIN)


def test_solve_infeasible():
    res = solve_optout_bne(
        Prior.from_d0(0.6), PaymentMatrix(1, 1, 1, 1), CouponValues(1.0, 1.0)
    )
    assert res.case.label == OptOutCase.INFEASIBLE
    assert res.b is None and res.a is None
    assert res.dp_epsilon is None
    assert res.notes


def test_solve_boundary_lists_candidates():
    res = solve_optout_bne(PRIOR_RT, M_MAIN, CouponValues(3.0, 4.0))
    assert res.case.label == OptOutCase.BOUNDARY
    assert res.b is None and res.a is None
    labels = {c.case.label for c in res.candidates}
    assert labels == set(res.case.rows)
    for candidate in res.candidates:
        assert 0.0 <= candidate.a.x0 <= 1.0
        assert 0.0 <= candidate.a.y1 <= 1.0
        assert candidate.a.x1 == 0.0 and candidate.a.y0 == 0.0
    by_label = {c.case.label: c for c in res.candidates}
    assert (by_label[OptOutCase.CASE1].b.p, by_label[OptOutCase.CASE1].b.q) == (
        1.0,
        1.0,
    )


def test_utilities_all_opt_out():
    b = solve_optout_bne(PRIOR_RT, M_MAIN, CouponValues(1.0, 1.2)).b
    a = OptOutPolicy(0.0, 0.0, 0.0, 0.0)
    coupons = CouponValues(1.0, 1.2)
    u_a, u_b0, u_b1 = optout_utilities(PRIOR_RT, M_MAIN, coupons, b, a)
    assert u_a == 0.0
    assert u_b0 == pytest.approx(b.p * 1.0, abs=1e-12)
    assert u_b1 == pytest.approx(b.q * 1.2, abs=1e-12)


def test_sampled_exclusivity_and_covering():
    draws = sample_cases(2000, seed=17)
    labels = set()
    for prior, m, coupons in draws:
        case = classify_case(prior, m, coupons)
        assert case.label in {
            OptOutCase.CASE1,
            OptOutCase.CASE2,
            OptOutCase.CASE3,
            OptOutCase.CASE4,
            OptOutCase.CASE5,
            OptOutCase.CASE6,
        }
        assert case.rows == (case.label,)
        labels.add(case.label)
    assert len(labels) >= 3


def test_sampler_targets_case6():
    draws = sample_cases(
        50,
        seed=7,
        ranges={"rho0": (0.02, 2.0), "rho1": (0.02, 2.0)},
        require_case=OptOutCase.CASE6,
    )
    assert len(draws) == 50
    for prior, m, coupons in draws:
        res = solve_optout_bne(prior, m, coupons)
        assert res.case.label == OptOutCase.CASE6
        assert 0.0 < res.b.p < 1.0
        assert 0.0 < res.b.q < 1.0
        slope0, slope1 = b_slopes(m, coupons, res.a)
        assert abs(slope0) <= 1e-9
        assert abs(slope1) <= 1e-9


def test_sample_cases_rejects_bad_args():
    with pytest.raises(ValueError):
        sample_cases(0, seed=1)
    with pytest.raises(ValueError):
        sample_cases(1, seed=1, ranges={"bogus": (0, 1)})
