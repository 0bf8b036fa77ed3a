import math

import numpy as np
import pytest

from deltaprime.errors import DomainError, InfeasibleTarget, NotFound, PoleError, PreconditionError
from deltaprime.transparency import (
    TransparencySet,
    chi,
    coupled_constants,
    critical_lambda,
    g_on_s_delta,
    g_value,
    residual,
    solve_lambda_roots,
    solve_roots,
    varsigma_for,
)

from oracles import t0_root_exists, tan_fixed_points

X1 = tan_fixed_points(1)[0]


def test_t4_residual_vanishes_on_its_curve():
    assert residual("T4", 0.5, 2.0) == 0.0


def test_t5_residual_at_fixed_point():
    assert abs(residual("T5", X1**2 / 2, 1.0)) < 1e-12


def test_t6_has_no_positive_root_at_unit_varsigma():
    # tanh z < z for z > 0
    lam = np.linspace(0.1, 50, 200)
    assert all(residual("T6", float(v), 1.0) < 0 for v in lam)


@pytest.mark.parametrize("set_,lam,expected", [("T0", 28.0, 0.637736327197744), ("T1", 19.0, 0.427366461640179), ("T3", 20.0, 1.7955161633143402)])
def test_design_roots(set_, lam, expected):
    root = solve_roots(set_, lam, 1.0)[0]
    assert root.root_value == pytest.approx(expected, rel=1e-12)
    assert abs(root.residual) < 1e-12
    assert root.root_index == 1


def test_roots_ascending_and_residual_checked():
    roots = solve_roots("T1", 30.5, 1.0, max_roots=5)
    vals = [r.root_value for r in roots]
    assert vals == sorted(vals) and len(vals) >= 2
    for r in roots:
        assert abs(residual("T1", 30.5, 1.0, r.root_value)) < 1e-10


def test_no_root_below_threshold():
    assert solve_roots("T0", 5.0, 1.0) == []


def test_residual_pole_raises():
    # T5 at the first tan pole: sqrt(2 lam) = pi/2
    with pytest.raises(PoleError):
        residual("T5", (math.pi / 2) ** 2 / 2, 1.0)


def test_roots_avoid_poles():
    for r in solve_roots("T0", 60.0, 1.0, max_roots=10):
        z = math.sqrt(60.0 * r.root_value / (1 + r.root_value))
        assert abs(math.cos(z)) > 1e-9


def test_critical_lambdas_below_design_targets():
    assert critical_lambda("T0") < 28
    assert critical_lambda("T1") < 19
    assert critical_lambda("T3") < 20


def test_t0_critical_lambda_matches_dense_scan():
    lc = critical_lambda("T0")
    assert not t0_root_exists(lc - 0.05)
    assert t0_root_exists(lc + 0.05)


@pytest.mark.parametrize("set_", ["T1", "T3"])
def test_critical_lambda_tends_to_tan_fixed_point(set_):
    # both equations reduce to tan z = z with z^2 = 2 lambda as the unknown runs off
    assert critical_lambda(set_) == pytest.approx(X1**2 / 2, rel=1e-5)


def test_t5_lambda_roots_match_tan_fixed_points():
    roots = solve_lambda_roots("T5", 1.0, max_roots=3)
    expected = [x * x / 2 for x in tan_fixed_points(3)]
    np.testing.assert_allclose([r.lam for r in roots], expected, rtol=1e-12)


def test_t4_at_unit_varsigma_not_found():
    with pytest.raises(NotFound):
        solve_lambda_roots("T4", 1.0)


def test_t4_lambda_root():
    (root,) = solve_lambda_roots("T4", 2.0, lambda_range=(-5, 5))
    assert root.lam == pytest.approx(0.5)


def test_varsigma_for():
    assert varsigma_for("T4", 0.5) == pytest.approx(2.0)
    assert varsigma_for("T4", -1.0) == pytest.approx(0.5)
    assert varsigma_for("T5", X1**2 / 2) == pytest.approx(1.0)
    with pytest.raises(InfeasibleTarget):
        varsigma_for("T4", 2.0)
    with pytest.raises(InfeasibleTarget):
        varsigma_for("T6", -3.0)


def test_t1_t2_correspondence():
    for lam in (19.0, 30.5, 45.0):
        a = [r.root_value for r in solve_roots("T1", lam, 1.0, max_roots=5)]
        b = [r.root_value for r in solve_roots("T2", -lam, 1.0, max_roots=5)]
        np.testing.assert_allclose(a, b, rtol=1e-10)


def test_t5_t6_correspondence_swaps_varsigma():
    a = [r.lam for r in solve_lambda_roots("T5", 2.0, max_roots=4)]
    b = sorted(-r.lam for r in solve_lambda_roots("T6", 0.5, lambda_range=(-200, -1e-6), max_roots=20))
    np.testing.assert_allclose(a, b[:4], rtol=1e-10)


def test_t3_inversion_symmetry():
    b = solve_roots("T3", 20.0, 1.0)[0].root_value
    assert abs(residual("T3", -20.0, 1.0, 1 / b)) < 1e-12
    assert chi("T3", -20.0, 1.0, 1 / b) == pytest.approx(1 / chi("T3", 20.0, 1.0, b), rel=1e-10)


def test_t0_roots_even_in_lambda():
    # tan and tanh trade places under lambda -> -lambda; the root set is unchanged
    for lam in (17.0, 28.0, 40.0):
        a = [r.root_value for r in solve_roots("T0", lam, 1.0, max_roots=5)]
        b = [r.root_value for r in solve_roots("T0", -lam, 1.0, max_roots=5)]
        np.testing.assert_allclose(a, b, rtol=1e-10)


def test_chi_values():
    c0 = 0.637736327197744
    z = math.sqrt(28 * c0 / (1 + c0))
    assert chi("T0", 28.0, 1.0, c0) == pytest.approx(math.sinh(z) / math.sin(z), rel=1e-12)
    assert chi("T0", 28.0, 1.0, c0) == pytest.approx(-84.928, rel=1e-4)
    assert chi("T4", 0.5) == pytest.approx(2.0)
    assert chi("T6", -2.0) == pytest.approx(math.cos(2.0), rel=1e-12)
    with pytest.raises(DomainError):
        chi("T1", 19.0)


def test_coupled_constants():
    c0 = 0.6
    assert coupled_constants("T0", 28, 1.0, c0) == pytest.approx((c0, 1 / 1.6, 1 / 1.6, 1 / (c0 * 1.6)))
    assert coupled_constants("T1", 19, 2.0, c0, {"c1": 3.0}) == pytest.approx((c0, 3.0, 8 / 1.6, 2 / (c0 * 1.6)))
    c = coupled_constants("T3", 20, 1.0, 2.0)
    assert c == pytest.approx((2 / 1.5, 1.0, 0.5, 1.0))
    assert coupled_constants("T4", 0.5, free={"c0": 2.0})[3] == pytest.approx(1.0)
    assert coupled_constants("T6", -1.0, free={"c0": 4.0})[1] == pytest.approx(0.5)
    with pytest.raises(DomainError):
        coupled_constants("T0", 28)
    with pytest.raises(DomainError):
        coupled_constants("T1", 19, 1.0, 0.5, {"c9": 1.0})


def test_coupled_constants_null_the_zeroth_moment():
    from deltaprime.moments import moment
    from deltaprime.potential import RegularizationParams

    for s, lam, vs, x in [("T0", 28, 1.3, 0.64), ("T1", 19, 0.7, 0.4), ("T3", 20, 1.0, 1.8)]:
        p = RegularizationParams(*TransparencySet(s).canonical_exponents, c=coupled_constants(s, lam, vs, x), varsigma=vs, epsilon=1e-3)
        assert abs(moment(p, "delta_prime", 0).value) < 1e-12


def test_g_vanishes_without_boundary_terms():
    c0 = 0.637736327197744
    c = coupled_constants("T0", 28, 1.0, c0)
    assert g_value("T0", 28, 0.0, 1.0, c0, c, (2, 2, 1)) == 0.0
    # interior of the T1 window: no exponent coincidence
    c = coupled_constants("T1", 19, 1.0, 0.4)
    assert g_value("T1", 19, 0.0, 1.0, 0.4, c, (1.3, 0.6, 0.3)) == 0.0


def test_g_t1_boundary_term():
    x0, lam, c1 = 0.427366461640179, 19.0, 1.0
    c = coupled_constants("T1", lam, 1.0, x0)
    z = math.sqrt(2 * lam * x0 / (1 + x0))
    expected = -lam**2 * x0**2 * c1 / 3 * math.cos(z) / (1 + lam / (1 + x0))
    assert g_value("T1", lam, 0.0, 1.0, x0, c, (1.5, 1, 0.5)) == pytest.approx(expected, rel=1e-12)


def test_g_t5():
    lam = X1**2 / 2
    expected = (1.0 - lam**2 * (1 / 3 + 1)) * math.cos(math.sqrt(2 * lam))
    assert g_value("T5", lam, 1.0, 1.0, None, (1, 1, 1, 1), (1.5, 1, 1)) == pytest.approx(expected, rel=1e-12)


def test_g_t4():
    lam, eta = 0.5, 0.3
    expected = eta * (1 + lam**2 / 1.5) - lam**2 / 3 * 0.5 * (1 + 0.5)
    assert g_value("T4", lam, eta, 2.0, None, (1, 1, 1, 1), (1.5, 1.5, 0.5)) == pytest.approx(expected, rel=1e-12)


def test_g_rejects_exponents_outside_window():
    with pytest.raises(DomainError):
        g_value("T0", 28, 0.0, 1.0, 0.6, (1, 1, 1, 1), (2, 3, 1))


def test_g_on_s_delta():
    assert g_on_s_delta("P6", 0.0, 1.0, (1, 1, 1, 1), a=(1, 0, 0)) == pytest.approx(2 / 3)
    assert g_on_s_delta("S_delta_interior", 0.7, 5.0, (1, 1, 1, 1)) == 0.7
    with pytest.raises(PreconditionError):
        g_on_s_delta("P6", 0.0, 1.0, (1, 1, 1, 1), a=(0.5, 0, 0))
    with pytest.raises(DomainError):
        g_on_s_delta("P6", 0.0, 1.0, (1, 1, 1, 1), varsigma=2.0)


@pytest.mark.parametrize("s", list(TransparencySet))
def test_canonical_exponents_lie_in_window(s):
    assert s.in_window(*s.canonical_exponents)


def test_boundary_sets():
    assert TransparencySet.T1.on_boundary(1.5, 1, 0.5)
    assert not TransparencySet.T1.on_boundary(1.3, 0.6, 0.3)
    assert not TransparencySet.T0.on_boundary(2, 2, 1)


def test_parse():
    assert TransparencySet.parse("t3") is TransparencySet.T3
    with pytest.raises(DomainError):
        TransparencySet.parse("T9")
