"""Builder constructions: bounds, exact size metrics, and size formulas."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relu3d import builders
from relu3d.builders import (WidthBudgetError, build_analytic_cube,
                             build_analytic_ellipse, build_clipped_hermite,
                             build_hermite_gauss, build_lp, build_poly1d,
                             build_polyNd, build_smooth1d, build_trig,
                             choose_hermite_params, expected_bound,
                             expected_size)
from relu3d.hermite import hermite_eval, hermite_tail_bound
from relu3d.net import evaluate_array, metrics
from relu3d.polynd import PolyND
from relu3d.targets import TargetSpec
from relu3d.verify import gauss_l2_error, lp_error, sup_error

UNIT = np.linspace(0.0, 1.0, 4097)[:, None]


def poly_vals(coeffs, xs):
    return np.polynomial.polynomial.polyval(xs[:, 0],
                                            np.asarray(coeffs, dtype=float))


# -- univariate polynomial --------------------------------------------------


@pytest.mark.parametrize("H", [4, 8])
def test_poly1d_cubic_bound_and_metrics(H):
    coeffs = [0.5, -1.0, 0.25, 2.0]
    rep = build_poly1d(coeffs, H)
    n = 3
    err = np.max(np.abs(evaluate_array(rep.net, UNIT)
                        - poly_vals(coeffs, UNIT)))
    bound = max(abs(c) for c in coeffs) * 3 * n * n * 2.0 ** (-2 * (H + 1))
    assert err <= bound
    assert rep.theoretical_bound == pytest.approx(bound)
    m = metrics(rep.net)
    assert (m.width, m.depth, m.height) == (8, n - 1, H)


def test_poly1d_degree5_spec_size():
    rep = build_poly1d([0, 1, 0, 0, 0, 1], 3)
    m = metrics(rep.net)
    assert (m.width, m.depth, m.height) == (8, 4, 3)


def test_poly1d_affine_degenerates():
    rep = build_poly1d([2.0, -3.0], 6)
    xs = UNIT
    assert np.max(np.abs(evaluate_array(rep.net, xs)
                         - (2.0 - 3.0 * xs[:, 0]))) <= 1e-14
    assert metrics(rep.net).depth == 0


@settings(deadline=None, max_examples=20)
@given(st.integers(2, 8),
       st.integers(0, 2 ** 32 - 1))
def test_poly1d_random_coeffs_bound(n, seed):
    rng = np.random.default_rng(seed)
    coeffs = rng.uniform(-1, 1, n + 1)
    H = 5
    rep = build_poly1d(coeffs, H)
    err = np.max(np.abs(evaluate_array(rep.net, UNIT)
                        - poly_vals(coeffs, UNIT)))
    assert err <= max(abs(c) for c in coeffs) * 3 * n * n \
        * 2.0 ** (-2 * (H + 1))


# -- multivariate polynomial ------------------------------------------------


def test_polyNd_bivariate_product():
    poly = PolyND(2, {(1, 1): 1.0}, 2)
    H = 8
    rep = build_polyNd(poly, H)
    u = np.linspace(0, 1, 257)
    X, Y = np.meshgrid(u, u)
    pts = np.column_stack([X.ravel(), Y.ravel()])
    err = np.max(np.abs(evaluate_array(rep.net, pts) - pts[:, 0] * pts[:, 1]))
    assert err <= rep.theoretical_bound
    m = metrics(rep.net)
    assert m.depth == 1
    assert m.height == H
    assert m.width <= rep.expected_metrics.width


def test_polyNd_degree4_d2_bound():
    rng = np.random.default_rng(7)
    from relu3d.polynd import total_degree_indices
    coeffs = {j: float(rng.uniform(-1, 1))
              for j in total_degree_indices(2, 4)}
    poly = PolyND(2, coeffs, 4)
    rep = build_polyNd(poly, 7)
    u = np.linspace(0, 1, 129)
    X, Y = np.meshgrid(u, u)
    pts = np.column_stack([X.ravel(), Y.ravel()])
    err = np.max(np.abs(evaluate_array(rep.net, pts) - poly(pts)))
    assert err <= rep.theoretical_bound
    # the tight per-term bound never exceeds the stated one
    assert rep.theoretical_bound <= rep.meta["stated_bound"] * (1 + 1e-12)


def test_polyNd_width_cap():
    poly = PolyND(3, {(1, 1, 1): 1.0}, 3)
    with pytest.raises(WidthBudgetError):
        build_polyNd(poly, 4, width_cap=3)


# -- smooth -----------------------------------------------------------------


@pytest.mark.parametrize("N", [2, 5, 9])
def test_smooth1d_reciprocal_bound(N):
    target = TargetSpec.catalog("reciprocal-shift")
    rep = build_smooth1d(target, N)
    err = np.max(np.abs(evaluate_array(rep.net, UNIT) - target(UNIT)))
    assert err <= 2.0 ** (-N)
    m = metrics(rep.net)
    assert m.depth == N
    assert m.width <= 8


# -- analytic (cube and ellipse) --------------------------------------------


def test_analytic_cube_d1_bound():
    target = TargetSpec.catalog("geometric-product", d=1)
    for N in (2, 5, 8):
        rep = build_analytic_cube(target, N, 0.5, d=1)
        hw = rep.meta["domain_halfwidth"]
        xs = np.linspace(0, hw, 2049)[:, None]
        err = np.max(np.abs(evaluate_array(rep.net, xs) - target(xs)))
        assert err <= 2.0 * 0.5 ** N
        assert metrics(rep.net).depth == max(N - 1, 0)


def test_analytic_cube_d2_bound():
    target = TargetSpec.catalog("geometric-product", d=2)
    rep = build_analytic_cube(target, 5, 0.5, d=2)
    hw = rep.meta["domain_halfwidth"]
    u = np.linspace(0, hw, 129)
    X, Y = np.meshgrid(u, u)
    pts = np.column_stack([X.ravel(), Y.ravel()])
    err = np.max(np.abs(evaluate_array(rep.net, pts) - target(pts)))
    assert err <= 2.0 * 0.5 ** 5


def test_analytic_cube_requires_series():
    target = TargetSpec.catalog("abs")
    with pytest.raises(ValueError):
        build_analytic_cube(target, 4, 0.5)


def test_analytic_ellipse_error_decay():
    target = TargetSpec.catalog("reciprocal-shift")
    # pole of 1/(x+2) sits at t = -5 after mapping [0,1] to [-1,1]
    rho = 5.0 + math.sqrt(24.0)
    errs = []
    for N in (4, 8, 12):
        rep = build_analytic_ellipse(target, N, rho, d=1)
        xs = np.linspace(0, 1, 4097)[:, None]
        err = np.max(np.abs(evaluate_array(rep.net, xs) - target(xs)))
        assert err <= rep.theoretical_bound
        errs.append(err)
    assert errs[2] < errs[1] < errs[0]


def test_analytic_ellipse_rejects_small_rho():
    target = TargetSpec.catalog("reciprocal-shift")
    with pytest.raises(ValueError):
        build_analytic_ellipse(target, 6, 1.5, d=1)


# -- clipped Hermite --------------------------------------------------------


@pytest.mark.parametrize("n", [0, 1, 2, 4, 6])
def test_clipped_hermite_vanishes_outside(n):
    M, delta, H = 4.0, 0.25, 8
    rep = build_clipped_hermite(n, M, delta, H)
    xs = np.concatenate([np.linspace(-M - 5, -M, 64),
                         np.linspace(M, M + 5, 64)])[:, None]
    assert np.max(np.abs(evaluate_array(rep.net, xs))) <= 1e-12


@pytest.mark.parametrize("n", [2, 3, 5])
def test_clipped_hermite_interior_bound(n):
    M, delta, H = 4.0, 0.25, 10
    rep = build_clipped_hermite(n, M, delta, H)
    xs = np.linspace(-(M - delta), M - delta, 8193)[:, None]
    err = np.max(np.abs(evaluate_array(rep.net, xs)
                        - hermite_eval(n, xs[:, 0])))
    assert err <= rep.theoretical_bound
    m = metrics(rep.net)
    assert (m.width, m.depth, m.height) == (8, n, H + 1)


def test_clipped_hermite_low_orders_exact_inside():
    M, delta = 3.0, 0.5
    core = np.linspace(-(M - delta), M - delta, 257)[:, None]
    rep0 = build_clipped_hermite(0, M, delta, 1)
    assert np.max(np.abs(evaluate_array(rep0.net, core) - 1.0)) <= 1e-12
    rep1 = build_clipped_hermite(1, M, delta, 1)
    assert np.max(np.abs(evaluate_array(rep1.net, core)
                         - core[:, 0])) <= 1e-12


def test_choose_hermite_params_proof_chain():
    for n in (2, 4, 8):
        B = 1.0
        params = choose_hermite_params(n, B)
        M, H, delta = params
        target = math.exp(-B * math.sqrt(n))
        sq6M = math.sqrt(6.0) * M
        # interior term at the chosen (integer) height is within budget
        interior = sq6M ** n * 3 * n * n * 2.0 ** (-2 * (H + 1))
        assert interior <= 0.6 * target * (1 + 1e-9)
        # window tail bound is dominated by the target rate
        tail = math.sqrt(hermite_tail_bound(n, M))
        assert tail <= target
        assert 0 < delta < M / 2 + 1e-12


# -- Gaussian-weighted expansion --------------------------------------------


def test_hermite_gauss_bound_and_metrics():
    target = TargetSpec.catalog("cosine", domain="gaussian-line")
    for N in (2, 4, 6):
        rep = build_hermite_gauss(target, N)
        er = gauss_l2_error(rep.net, target, rep.meta["support"],
                            bound=rep.theoretical_bound)
        assert er.passed
        m = metrics(rep.net)
        assert m.depth == N
        assert m.width <= rep.expected_metrics.width


def test_hermite_gauss_rejects_uncertified_target():
    target = TargetSpec.catalog("abs")
    with pytest.raises(ValueError):
        build_hermite_gauss(target, 4)


# -- trigonometric ----------------------------------------------------------


@pytest.mark.parametrize("k", [1, 2, 5, 8])
def test_trig_cos_bound(k):
    N2 = 12
    rep = build_trig(k, N2, kind="cos")
    xs = np.linspace(-1, 1, 8193)[:, None]
    err = np.max(np.abs(evaluate_array(rep.net, xs)
                        - np.cos(k * math.pi * xs[:, 0])))
    assert err <= 2.0 ** (-N2)
    m = metrics(rep.net)
    assert m.width <= 8
    assert m.depth == N2 + 1


@pytest.mark.parametrize("k", [1, 3, 6])
def test_trig_sin_bound_and_origin(k):
    N2 = 12
    rep = build_trig(k, N2, kind="sin")
    xs = np.linspace(-1, 1, 8193)[:, None]
    err = np.max(np.abs(evaluate_array(rep.net, xs)
                        - np.sin(k * math.pi * xs[:, 0])))
    assert err <= 2.0 ** (-N2)
    assert abs(evaluate_array(rep.net, np.array([[0.0]]))[0]) <= 1e-14
    m = metrics(rep.net)
    assert m.width <= 16
    assert m.depth == N2 + 1


def test_trig_rejects_bad_kind():
    with pytest.raises(ValueError):
        build_trig(2, 8, kind="tan")


# -- L^p --------------------------------------------------------------------


def test_lp_d1_sqrt_target():
    target = TargetSpec.catalog("abs-power", domain="sym-cube")
    rep = build_lp(target, 16, 16)
    er = lp_error(rep.net, target, 2, (-1.0, 1.0),
                  bound=rep.theoretical_bound)
    assert er.passed
    assert rep.meta["dropped_mass"] <= 1e-8


def test_lp_d1_step_target_p1():
    target = TargetSpec.catalog("step", domain="sym-cube")
    rep = build_lp(target, 16, 16)
    er = lp_error(rep.net, target, 1, (-1.0, 1.0),
                  bound=rep.theoretical_bound)
    assert er.passed


def test_lp_even_target_uses_only_cosines():
    target = TargetSpec.catalog("abs", domain="sym-cube")
    rep = build_lp(target, 8, 10)
    assert all(eta == (0,) for eta, _, _ in rep.meta["terms"])


def test_lp_rejects_small_degree():
    target = TargetSpec.catalog("abs", domain="sym-cube")
    with pytest.raises(ValueError):
        build_lp(target, 1, 8, r=2)


# -- size and bound formulas ------------------------------------------------


def test_expected_size_known_rows():
    m = expected_size("poly", {"n": 5, "H": 3})
    assert (m.width, m.depth, m.height) == (8, 4, 3)
    b = expected_size("baseline-poly", {"N": 7})
    assert (b.width, b.depth, b.height) == (1, 7, 1)
    a = expected_size("baseline-analytic", {"N": 5, "d": 2})
    assert a.depth == 5 ** 4


def test_expected_bound_known_rows():
    assert expected_bound("poly", {"amax": 1.0, "n": 2, "H": 6}) \
        == pytest.approx(12 * 2.0 ** (-14))
    assert expected_bound("analytic-cube", {"N": 4, "delta": 0.5}) \
        == pytest.approx(2 * 0.5 ** 4)
    assert expected_bound("trig", {"N2": 10}) == pytest.approx(2.0 ** -10)


def test_expected_size_rejects_unknown_id():
    with pytest.raises(KeyError):
        expected_size("mystery", {})
    with pytest.raises(KeyError):
        expected_bound("mystery", {})


def test_expected_size_reports_missing_params():
    with pytest.raises(KeyError, match="missing parameter"):
        expected_size("poly", {"n": 3})


def test_builder_reports_carry_formula_ids():
    rep = build_poly1d([0, 0, 1.0], 4)
    assert rep.bound_formula_id
    assert rep.inputs["H"] == 4
    assert rep.expected_metrics.depth == metrics(rep.net).depth
