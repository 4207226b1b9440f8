import math

import numpy as np
import pytest
from _families import SelfSimilar, four_scale_map, random_bracket_map

from lorentzmap import monotone as mm
from lorentzmap.errors import DegeneratePoint, NonPositiveDensity, NondifferentiableCrossing, NotInvertible
from lorentzmap.lcmap import (
    LCMap,
    admissible_contour,
    contour,
    contour_function,
    contours_through,
    crossing_tangent_check,
    jacobian,
    klein_gordon_flatten,
    tangency_locus,
    verify_lorentz_cr,
)


def test_folded_quadratic_eval():
    m = LCMap.from_specs("pow:2", "pow:2")
    assert m(1.0, 2.0) == (4.0, 5.0)


def test_unfolded_quadratic_eval_and_inverse():
    m = LCMap.from_specs("odd(pow:2)", "odd(pow:2)")
    assert m.char_eval(-1.0, -3.0) == (-1.0, -9.0)
    assert m(1.0, -2.0) == (4.0, -5.0)
    x, y = m.invert_point(4.0, -5.0)
    assert (x, y) == pytest.approx((1.0, -2.0), abs=1e-12)


def test_identity_map():
    m = LCMap.from_specs("id", "id")
    rng = np.random.default_rng(0)
    x, y = rng.normal(size=(2, 100))
    u, v = m(x, y)
    assert np.max(np.abs(u - x)) < 1e-15 and np.max(np.abs(v - y)) < 1e-15
    assert m.invert_point(3.0, 4.0) == (3.0, 4.0)


def test_exp_fixed_point():
    m = LCMap.from_specs("exp1", "exp1")
    assert m.invert_point(0.0, 0.0) == (0.0, 0.0)


def test_folded_map_not_invertible():
    with pytest.raises(NotInvertible):
        LCMap.from_specs("pow:2", "id").invert_point(1.0, 1.0)


def test_swapped_form():
    m = LCMap.from_specs("exp1", "affine:2,0", swapped=True)
    U, V = m.char_eval(1.0, 0.5)
    assert U == pytest.approx(1.0) and V == pytest.approx(math.e - 1)


def test_linear_jacobian():
    m = LCMap.from_specs("affine:1.5,0", "affine:0.6666666666666666,0")
    J = jacobian(m, 0.0, 0.0)
    hp, kp = 1.5, 2 / 3
    # u = (h(X) - k(Y))/2, v = (h(X) + k(Y))/2 with X = x + y, Y = -x + y
    assert J.ux == pytest.approx((hp + kp) / 2, abs=1e-8)
    assert J.uy == pytest.approx((hp - kp) / 2, abs=1e-8)
    assert J.form == "A"
    assert J.det > 0


def test_identity_jacobian():
    J = jacobian(LCMap.from_specs("id", "id"), 0.3, -0.2)
    assert np.allclose(J.matrix, np.eye(2), atol=1e-8)
    assert J.H2 == pytest.approx(1.0, abs=1e-8)


def test_jacobian_against_analytic():
    m = LCMap.from_specs("odd(pow:2)", "odd(pow:2)")
    x, y = 1.0, 0.3
    X, Y = x + y, -x + y
    hp, kp = 2 * abs(X), 2 * abs(Y)
    J = jacobian(m, x, y)
    a, b = (hp + kp) / 2, (hp - kp) / 2
    assert np.allclose(J.matrix, [[a, b], [b, a]], atol=1e-6)


def test_jacobian_rejects_non_conformal():
    with pytest.raises(DegeneratePoint):
        jacobian(lambda x, y: (1.3 * x, y), 0.5, 0.1)


def test_cr_passes_on_smooth_pair():
    rep = verify_lorentz_cr(LCMap.from_specs("exp1", "poly:0,1,0,0.5"))
    assert rep.passed
    assert rep.n_first == rep.n_points


def test_cr_fails_when_not_decoupled():
    m = LCMap.from_specs("exp1", "poly:0,1,0,0.5")

    def perturbed(x, y):
        X, Y = x + y, -x + y
        U, V = m.h(X), m.k(Y) + 0.1 * X
        return (U - V) / 2, (U + V) / 2

    assert not verify_lorentz_cr(perturbed)


def test_cr_swapped_uses_second_system():
    rep = verify_lorentz_cr(LCMap.from_specs("exp1", "poly:0,1,0,0.5", swapped=True))
    assert rep.passed
    assert rep.n_second == rep.n_points


def test_identity_u_contour_is_y_axis():
    m = LCMap.from_specs("id", "id")
    c = contour(m, "u", 0.0, np.linspace(-2, 2, 41))
    pts = c.points
    assert np.array_equal(pts[:, 0], pts[:, 1])


def test_ridge_v_contour_point():
    m = LCMap(mm.Ridge(0.5), mm.Ridge(0.5))
    c = contour(m, "v", 0.0, np.array([0.75]), window=(-5, 5))
    X, Y = c.points[0]
    assert Y == pytest.approx(-1.25, abs=1e-12)
    x, y = (X - Y) / 2, (X + Y) / 2
    assert (x, y) == pytest.approx((1.0, -0.25), abs=1e-12)
    assert abs(m.h(X) + m.k(Y)) < 1e-12


def test_folded_circle_contour():
    m = LCMap.from_specs("pow:2", "pow:2")
    X = np.linspace(-0.99, 0.99, 57)
    c = contour(m, "v", 0.5, X, window=(-3, 3))
    assert len(c.segments) == 2  # one branch per monotone piece of k
    for seg in c.xy_segments():
        assert np.max(np.abs(seg[:, 0] ** 2 + seg[:, 1] ** 2 - 0.5)) < 1e-9
    assert c.residual(m) < 1e-9


def test_contour_by_y_and_skipped():
    m = LCMap.from_specs("exp1", "exp1")
    c = contour(m, "u", 0.0, np.linspace(-3, 3, 61), by="Y")
    assert c.residual(m) < 1e-9
    # V = e^Y - 1 > -1, so v = -2 is unreachable for Y far below zero
    c = contour(m, "v", -2.0, np.linspace(-3, 3, 61))
    assert c.skipped


def test_contours_through_point():
    m = LCMap.from_specs("exp1", "ridge:0.3")
    fu, fv = contours_through(m, 0.4, -0.2)
    assert fu(0.4) == pytest.approx(-0.2, abs=1e-12)
    assert fv(0.4) == pytest.approx(-0.2, abs=1e-12)


def test_admissible_contour_examples():
    x = np.linspace(-3, 3, 121)
    assert admissible_contour(lambda t: 0.5 * t, x)["passed"]
    rep = admissible_contour(lambda t: t, x)
    assert not rep["passed"] and "interval" in rep["reason"]
    assert not admissible_contour(lambda t: 1.5 / (1 + np.abs(t)), x)["passed"]
    assert admissible_contour(lambda t: 1.0 / (1 + np.abs(t)), x)["passed"]


def test_four_scale_slopes():
    rng = np.random.default_rng(2)
    a = (6.0, 3.0, 1.0, 1.0)
    h, k = four_scale_map(SelfSimilar(random_bracket_map(rng)), a)
    m = LCMap(h, k)
    rep = crossing_tangent_check(contour_function(m, "u", 0.0), contour_function(m, "v", 0.0), 0.0)
    assert rep.passed
    # slopes here are dY/dX: reciprocals of the ratios a2/a1, a4/a3, a2/a3, a4/a1
    assert rep.m_plus == pytest.approx(2.0, rel=1e-8)
    assert rep.m_minus == pytest.approx(1.0, rel=1e-8)
    assert rep.n_minus == pytest.approx(1 / 3, rel=1e-8)
    assert rep.n_plus == pytest.approx(6.0, rel=1e-8)
    p, q = rep.products
    assert p == pytest.approx(2.0, rel=1e-8) and q == pytest.approx(2.0, rel=1e-8)


def test_identity_crossing():
    rep = crossing_tangent_check(lambda X: X, lambda X: -X, 0.0)
    assert rep.passed
    assert rep.products == pytest.approx((1.0, 1.0))


def test_smooth_crossing_reciprocal_slopes():
    m = LCMap.from_specs("exp1", "poly:0,1,0,0.5")
    X0, Y0 = 0.3, -0.4
    fu, fv = contours_through(m, X0, Y0)
    rep = crossing_tangent_check(fu, fv, X0)
    hp, kp = math.exp(X0), 1 + 1.5 * Y0**2
    assert rep.m_plus == pytest.approx(hp / kp, rel=1e-7)
    assert rep.n_plus == pytest.approx(hp / kp, rel=1e-7)
    assert rep.passed


def test_crossing_rejects_wild_curve():
    with pytest.raises(NondifferentiableCrossing):
        crossing_tangent_check(lambda X: np.sign(X) * np.sqrt(abs(X)), lambda X: -X, 0.0)


def test_tangency_cubic_shift():
    m = LCMap(mm.compose(mm.Affine(1, 1), mm.PowerOdd(3), mm.Affine(1, -1)),
              mm.compose(mm.Affine(1, 1), mm.PowerOdd(3), mm.Affine(1, -1)))
    rep = tangency_locus(m, resolution=61)
    X = rep.locus[:, 0] + rep.locus[:, 1]
    Y = rep.locus[:, 1] - rep.locus[:, 0]
    assert not rep.empty
    assert np.all((np.abs(X - 1) < 1e-9) | (np.abs(Y - 1) < 1e-9))
    # nothing near X = -1 or Y = -1 off the lines X = 1, Y = 1
    assert not np.any((np.abs(X + 1) < 1e-9) & (np.abs(Y - 1) > 1e-9) & (np.abs(X - 1) > 1e-9))


def test_tangency_quadratic_on_axes():
    rep = tangency_locus(LCMap.from_specs("pow:2", "pow:2"), resolution=61)
    X = rep.locus[:, 0] + rep.locus[:, 1]
    Y = rep.locus[:, 1] - rep.locus[:, 0]
    assert not rep.empty
    assert np.all((np.abs(X) < 1e-9) | (np.abs(Y) < 1e-9))


def test_tangency_exp_empty():
    assert tangency_locus(LCMap.from_specs("exp1", "exp1")).empty


def test_kg_constant_density():
    m = klein_gordon_flatten("poly:1", "poly:1")
    t = np.linspace(-2, 2, 41)
    assert np.max(np.abs(m.h(t) - t)) < 1e-12


def test_kg_closed_forms():
    m = klein_gordon_flatten("exp", "poly:1,0,1")
    t = np.linspace(-2, 2, 401)
    assert np.max(np.abs(m.h(t) - np.expm1(t))) < 1e-8
    assert np.max(np.abs(m.k(t) - (t + t**3 / 3))) < 1e-8
    assert mm.derivative(m.h, 0.7) == pytest.approx(math.exp(0.7), abs=1e-6)


def test_kg_rejects_sign_change():
    with pytest.raises(NonPositiveDensity):
        klein_gordon_flatten("id", "poly:1")
