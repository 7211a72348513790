"""The identities themselves: both sides, hand cases, derivatives, probes."""

import cmath
import math
import random

import pytest

from mplparity.numcore import DEFAULT_CONFIG, EvalConfig, log_minus, zeta
from mplparity.words import ArgVector, Index
from mplparity.evaluate import li, li_star
from mplparity.parity import (
    all_ones_delta,
    all_ones_delta_mzv,
    check_derivative,
    check_derivative_r,
    limit_probe,
    main_sides,
    mzv_sides,
    p_value,
    q_value,
    r_factor,
    reg_sides,
    rhs_summands,
)

K = Index
V = ArgVector.of
MINUS = EvalConfig(branch_at_one=-1)


def sample_main_point(rng, d):
    """Tail products in the annulus, all consecutive products off the ray."""
    while True:
        tails = [cmath.rect(rng.uniform(1.3, 3.0), rng.uniform(0.25, 2 * math.pi - 0.25))
                 for _ in range(d)]
        args = tuple(tails[i] / tails[i + 1] for i in range(d - 1)) + (tails[-1],)
        ok = True
        for i in range(d):
            prod = 1 + 0j
            for j in range(i, d):
                prod *= args[j]
                if abs(prod.imag) < 0.1 * abs(prod) and prod.real > 0:
                    ok = False
        if ok:
            return args


# --- delta factors -----------------------------------------------------------


def test_all_ones_delta():
    got = all_ones_delta(K((1, 1)), V((1, 1)))
    assert got == pytest.approx(-math.pi ** 2 / 2)
    assert all_ones_delta(K((1, 1)), V((1, 1)), MINUS) == pytest.approx(got)
    assert all_ones_delta(K((2,)), V((1,))) == 0
    assert all_ones_delta(K((1,)), V((-1,))) == 0
    assert all_ones_delta(K(()), V(())) == 1
    assert all_ones_delta(K((1,)), V((1,))) == pytest.approx(1j * math.pi)
    assert all_ones_delta(K((1,)), V((1,)), MINUS) == pytest.approx(-1j * math.pi)


def test_all_ones_delta_mzv():
    assert all_ones_delta_mzv(K((1, 1))) == pytest.approx(-math.pi ** 2 / 2)
    assert all_ones_delta_mzv(K((1,))) == 0
    assert all_ones_delta_mzv(K((2,))) == 0
    assert all_ones_delta_mzv(K(())) == 1
    # even depth all ones agrees with the generic delta at exact-one arguments
    d4 = all_ones_delta(K((1,) * 4), V((1,) * 4))
    assert all_ones_delta_mzv(K((1,) * 4)) == pytest.approx(d4)


# --- the inner factor ---------------------------------------------------------


def test_r_factor_weight_one():
    for z in (-2, 2.5j, -1.5 + 0.5j):
        got = r_factor(1, K((1,)), V((z,)))
        assert got == pytest.approx(log_minus(complex(z)), abs=1e-13)


def test_r_factor_depth_two_closed_form():
    z1, z2 = 2j, 3j
    got = r_factor(1, K((1, 1)), V((z1, z2)))
    want = (log_minus(z1 * z2) * li(K((1,)), V((1 / z2,))).value
            + li(K((2,)), V((1 / z2,))).value)
    assert got == pytest.approx(want, abs=1e-12)


def test_r_factor_split_range():
    with pytest.raises(ValueError):
        r_factor(0, K((1,)), V((-2,)))
    with pytest.raises(ValueError):
        r_factor(2, K((1,)), V((-2,)))


def test_check_derivative_r_cases():
    for n, parts, args in ((1, (1, 2), (2j, 3j)),
                           (2, (1, 1), (-1.5, 2.5j)),
                           (1, (2, 1), (-2, 1.5j))):
        chk = check_derivative_r(n, K(parts), V(args))
        assert chk.resid < 1e-5, (n, parts, args, chk)


# --- main identity -------------------------------------------------------------


def test_main_weight_one_closed():
    rng = random.Random("w1")
    for _ in range(10):
        z = cmath.rect(rng.uniform(0.3, 4.0), rng.uniform(0.2, 2 * math.pi - 0.2))
        rep = main_sides(K((1,)), V((z,)))
        assert rep.residual < 1e-12
        assert rep.rhs == pytest.approx(log_minus(z), abs=1e-12)


def test_main_dilog_inversion():
    rng = random.Random("dilog")
    for _ in range(8):
        z = cmath.rect(rng.uniform(1.5, 3.0), rng.uniform(0.3, 2 * math.pi - 0.3))
        lm = log_minus(z)
        closed = -math.pi ** 2 / 6 - lm * lm / 2
        direct = li(K((2,)), V((z,))).value + li(K((2,)), V((1 / z,))).value
        assert direct == pytest.approx(closed, abs=1e-10)
        rep = main_sides(K((2,)), V((z,)))
        assert rep.residual < 1e-9
        assert rep.lhs == pytest.approx(-closed, abs=1e-10)


def test_main_depth_two_cases():
    cases = [
        ((1, 1), (2j, 3j)),
        ((2, 1), (-2, 1.5j)),
        ((1, 2), (2.5j, -2)),
        ((2, 2), (-3, 2j)),
        ((1, 3), (1.5j, -2.5)),
    ]
    for parts, args in cases:
        rep = main_sides(K(parts), V(args))
        assert rep.residual < 1e-8, (parts, args, rep.residual)


def test_main_seeded_sweep_depth_two():
    rng = random.Random("main-sweep")
    indices = [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 1)]
    for parts in indices:
        args = sample_main_point(rng, 2)
        rep = main_sides(K(parts), V(args))
        assert rep.residual < 1e-8, (parts, args, rep.residual)


def test_main_routes_are_dual():
    # annulus points evaluate the star side by panels and the reciprocal side
    # by the series, so agreement is a genuine two-route check
    args = sample_main_point(random.Random("routes"), 2)
    rep = main_sides(K((2, 1)), V(args))
    assert rep.inv_method == "series"
    assert "panels" in rep.star_methods
    assert rep.inv_method not in rep.star_methods


def test_rhs_summands_structure():
    args = sample_main_point(random.Random("summands"), 2)
    items = list(rhs_summands(K((2, 1)), V(args)))
    assert [mn for mn, _ in items] == [(0, 1), (0, 2), (1, 2)]
    total = sum(term for _, term in items)
    rep = main_sides(K((2, 1)), V(args))
    assert total == pytest.approx(rep.rhs, rel=1e-12, abs=1e-14)


def test_report_record_shape():
    rep = main_sides(K((1,)), V((-2,)))
    rec = rep.to_record()
    assert rec["theorem"] == "main" and rec["k"] == [1]
    assert "seconds" not in rec
    assert rec["z"] == [[-2.0, 0.0]]


# --- regularized identity --------------------------------------------------------


def test_reg_weight_one_at_minus_one():
    rep = reg_sides(K((1,)), V((-1,)), "stuffle")
    assert rep.lhs == pytest.approx(0, abs=1e-13)
    assert rep.rhs == pytest.approx(0, abs=1e-13)


def test_reg_weight_two_at_minus_one():
    want = math.pi ** 2 / 6
    for mode in ("stuffle", "shuffle"):
        rep = reg_sides(K((2,)), V((-1,)), mode)
        assert rep.lhs == pytest.approx(want, abs=1e-12), mode
        assert rep.residual < 1e-12


def test_reg_all_ones_depth_two():
    want = math.pi ** 2 / 6
    for mode in ("stuffle", "shuffle"):
        for cfg in (DEFAULT_CONFIG, MINUS):
            rep = reg_sides(K((1, 1)), V((1, 1)), mode, cfg)
            assert rep.lhs == pytest.approx(want, abs=1e-12), (mode, cfg.branch_at_one)
            assert rep.rhs == pytest.approx(want, abs=1e-12)
            assert rep.residual < 1e-12


def test_reg_fourth_roots():
    # products of fourth roots land on exact ones, exercising the branch flag
    for parts, args in (((1, 1), (1j, -1j)), ((2, 1), (-1, -1)), ((1, 1), (-1, 1))):
        gaps = []
        for cfg in (DEFAULT_CONFIG, MINUS):
            rep = reg_sides(K(parts), V(args), "stuffle", cfg)
            assert rep.residual < 1e-9, (parts, args, cfg.branch_at_one)
            gaps.append(rep.residual)
        assert abs(gaps[0] - gaps[1]) < 1e-9


def test_reg_mode_validation():
    with pytest.raises(ValueError):
        reg_sides(K((1,)), V((1,)), "plain")


# --- all-ones specialization ------------------------------------------------------


def test_mzv_weight_two():
    rep = mzv_sides(K((2,)))
    assert rep.lhs == pytest.approx(-math.pi ** 2 / 3, abs=1e-10)
    assert rep.residual < 1e-10


def test_mzv_weight_one():
    rep = mzv_sides(K((1,)))
    assert rep.lhs == pytest.approx(0, abs=1e-13)
    assert rep.residual < 1e-12


def test_mzv_depth_two_cases():
    for parts in ((1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 1)):
        rep = mzv_sides(K(parts))
        assert rep.residual < 1e-7, (parts, rep.residual, rep.lhs, rep.rhs)


def test_mzv_star_side_value():
    # depth-2 all-ones: the star side is zeta(2)/2 under the series product
    got = li_star(K((1, 1)), V((1, 1)), DEFAULT_CONFIG, "stuffle")
    assert got == pytest.approx(zeta(2) / 2, abs=1e-12)


# --- derivatives and limits -------------------------------------------------------


def test_derivative_both_sides():
    cases = [((2,), (-2,)), ((3,), (1.7j,)), ((1, 2), (2j, 3j)), ((1, 1), (-1.5, 2.5j))]
    for parts, args in cases:
        chk_p, chk_q = check_derivative(K(parts), V(args))
        assert chk_p.resid < 1e-5, (parts, args, chk_p)
        assert chk_q.resid < 1e-5, (parts, args, chk_q)


def test_derivative_head_recursion_branches():
    # k_1 > 1 reduces by lowering the head; k_1 == 1 reduces by merging it
    for parts, args in (((2, 1), (-2, 1.5j)), ((1, 2), (-2, 1.5j))):
        chk_p, chk_q = check_derivative(K(parts), V(args))
        assert max(chk_p.resid, chk_q.resid) < 1e-5, (parts, args)


def test_limit_probe_decreases():
    for parts, rest, theta in (((2,), (), 2.0), ((1,), (), 2.5), ((1, 1), (-2,), 2.0)):
        mags = limit_probe(K(parts), V(rest), theta, (1e-2, 1e-3, 1e-4))
        assert mags[0] > mags[1] > mags[2], (parts, rest, mags)
        assert mags[-1] < 1e-2


def test_p_q_empty_conventions():
    assert p_value(K(()), V(())) == 0
    assert q_value(K(()), V(())) == 0
