"""Geometry of the built-in charts against independent oracles.

The positive-orthant oracles all come from the log-coordinate isometry
w = ln(u): distance and transport are computed in w with plain Euclidean
formulas and mapped back, and the transport closed form is additionally
cross-checked by integrating the parallel-transport ODE.
"""
import math

import numpy as np
import pytest

from geoinvex import (
    BasePointMismatch,
    DomainViolation,
    Euclidean,
    PositiveOrthant2,
    ScalarField,
    Tangent,
)

ORTHANT = PositiveOrthant2()
E2 = Euclidean(2)


def rand_points(n, lo=0.5, hi=5.0, seed=0):
    rng = np.random.default_rng(seed)
    return rng.uniform(lo, hi, size=(n, 2))


# -- metric ----------------------------------------------------------------

def test_metric_inner_orthant_pinned():
    p = np.array([0.5, 0.5])
    x = ORTHANT.tangent(p, (1.0, 0.0))
    assert ORTHANT.metric_inner(p, x, x) == pytest.approx(4.0, abs=1e-12)


def test_metric_inner_zero_vector():
    p = np.array([1.3, 2.7])
    z = ORTHANT.tangent(p, (0.0, 0.0))
    y = ORTHANT.tangent(p, (2.0, -1.0))
    assert ORTHANT.metric_inner(p, z, y) == 0.0


def test_metric_inner_euclidean_dot():
    p = np.array([9.0, -3.0])
    x = E2.tangent(p, (1.0, 2.0))
    y = E2.tangent(p, (3.0, -1.0))
    assert E2.metric_inner(p, x, y) == pytest.approx(1.0, abs=1e-15)


def test_metric_symmetric_bilinear_positive():
    rng = np.random.default_rng(11)
    for _ in range(100):
        p = rng.uniform(0.5, 5.0, 2)
        a, b = rng.normal(size=2), rng.normal(size=(2, 2))
        x = ORTHANT.tangent(p, b[0])
        y = ORTHANT.tangent(p, b[1])
        assert ORTHANT.metric_inner(p, x, y) == pytest.approx(
            ORTHANT.metric_inner(p, y, x), rel=1e-12
        )
        lin = ORTHANT.metric_inner(p, Tangent(p, a[0] * b[0] + a[1] * b[1]), y)
        assert lin == pytest.approx(
            a[0] * ORTHANT.metric_inner(p, x, y)
            + a[1] * ORTHANT.metric_inner(p, Tangent(p, b[1]), y),
            rel=1e-9, abs=1e-12,
        )
        if np.linalg.norm(b[0]) > 0:
            assert ORTHANT.metric_inner(p, x, x) > 0


def test_metric_domain_and_base_errors():
    with pytest.raises(DomainViolation):
        ORTHANT.require_point((-1.0, 2.0))
    p = np.array([1.0, 1.0])
    q = np.array([2.0, 2.0])
    with pytest.raises(BasePointMismatch):
        ORTHANT.metric_inner(p, ORTHANT.tangent(q, (1, 0)), ORTHANT.tangent(p, (1, 0)))


# -- exponential map and geodesics ------------------------------------------

def test_exp_map_orthant_pinned():
    out = ORTHANT.exp_map(ORTHANT.tangent((1.0, 2.0), (2.0, 0.0)))
    assert out == pytest.approx([math.e ** 2, 2.0], rel=1e-12)
    out = ORTHANT.exp_map(ORTHANT.tangent((1.0, 1.0), (1.0, 1.0)))
    assert out == pytest.approx([math.e, math.e], rel=1e-12)


def test_exp_map_zero_is_identity():
    for p in rand_points(20, seed=1):
        assert ORTHANT.exp_map(ORTHANT.tangent(p, (0.0, 0.0))) == pytest.approx(p)
        assert E2.exp_map(E2.tangent(p, (0.0, 0.0))) == pytest.approx(p)


def test_exp_map_stays_interior():
    rng = np.random.default_rng(2)
    for _ in range(200):
        p = rng.uniform(0.5, 5.0, 2)
        x = rng.uniform(-2.0, 2.0, 2) * p
        q = ORTHANT.exp_map(ORTHANT.tangent(p, x))
        assert np.all(q > 0)


def test_geodesic_eval_pinned():
    g = ORTHANT.geodesic(ORTHANT.tangent((1.0, 1.0), (1.0, 0.0)))
    pos, vel = g.eval(1.0)
    assert pos == pytest.approx([math.e, 1.0], rel=1e-12)
    pos0, vel0 = g.eval(0.0)
    assert pos0 == pytest.approx([1.0, 1.0])
    assert vel0.vec == pytest.approx([1.0, 0.0])


def test_geodesic_euclidean_midpoint():
    u, v = np.array([3.0, -1.0]), np.array([-1.0, 5.0])
    g = E2.geodesic(E2.tangent(v, u - v))
    pos, _ = g.eval(0.5)
    assert pos == pytest.approx((u + v) / 2)


def test_exp_geodesic_consistency():
    # position at t must be exp of the scaled velocity, to 1e-12
    rng = np.random.default_rng(3)
    for _ in range(200):
        p = rng.uniform(0.5, 5.0, 2)
        x = rng.uniform(-1.0, 1.0, 2) * p
        g = ORTHANT.geodesic(ORTHANT.tangent(p, x))
        t = rng.uniform(0.0, 1.0)
        direct = ORTHANT.exp_map(ORTHANT.tangent(p, t * x))
        assert np.max(np.abs(g.position(t) - direct)) <= 1e-12


def test_connecting_geodesic_orthant_pinned():
    # oracle: direct exponentiation a_i * (b_i/a_i)**s
    a = np.array([0.25, 0.25])
    b = np.array([1.0 / 9.0, 1.0 / 9.0])
    g = ORTHANT.connecting_geodesic(a, b)
    s = 0.1
    oracle = np.array([a[i] * (b[i] / a[i]) ** s for i in range(2)])
    assert g.position(s) == pytest.approx(oracle, rel=1e-13)
    assert oracle == pytest.approx([0.2305270, 0.2305270], abs=1e-7)
    assert g.position(0.0) == pytest.approx(a)
    assert g.position(1.0) == pytest.approx(b, rel=1e-14)


def test_connecting_geodesic_same_endpoints_is_constant():
    a = np.array([0.7, 3.2])
    g = ORTHANT.connecting_geodesic(a, a)
    for s in (0.0, 0.3, 1.0):
        assert g.position(s) == pytest.approx(a)


def test_connecting_geodesic_euclidean_midpoint():
    g = E2.connecting_geodesic((0.0, 0.0), (2.0, 2.0))
    assert g.position(0.5) == pytest.approx([1.0, 1.0])


def test_geodesic_equation_residual():
    # covariant acceleration a_i = r''_i - (r'_i)^2 / r_i from central
    # differences must vanish to 1e-6 in the metric norm
    rng = np.random.default_rng(4)
    step = 1e-4
    for _ in range(1000):
        p = rng.uniform(0.5, 5.0, 2)
        x = rng.uniform(-1.0, 1.0, 2) * p
        t = rng.uniform(0.05, 0.95)
        g = ORTHANT.geodesic(ORTHANT.tangent(p, x))
        r0, rp, rm = g.position(t), g.position(t + step), g.position(t - step)
        vel = (rp - rm) / (2 * step)
        acc = (rp - 2 * r0 + rm) / step ** 2
        covariant = acc - vel * vel / r0
        assert ORTHANT.norm(Tangent(r0, covariant)) <= 1e-6


# -- parallel transport -----------------------------------------------------

def test_transport_orthant_pinned():
    x = ORTHANT.tangent((1.0, 1.0), (1.0, 0.0))
    moved = ORTHANT.transport(x, (2.0, 3.0))
    assert moved.vec == pytest.approx([2.0, 0.0])
    assert ORTHANT.norm(x) == pytest.approx(1.0)
    assert ORTHANT.norm(moved) == pytest.approx(1.0)


def test_transport_along_geodesic_identity_at_same_parameter():
    g = ORTHANT.connecting_geodesic((1.0, 1.0), (2.0, 3.0))
    pos, _ = g.eval(0.4)
    x = Tangent(pos, np.array([0.3, -0.2]))
    back = ORTHANT.parallel_transport(g, 0.4, 0.4, x)
    assert back.vec == pytest.approx(x.vec)


def test_transport_euclidean_identity():
    x = E2.tangent((0.0, 0.0), (1.0, 2.0))
    assert E2.transport(x, (5.0, -3.0)).vec == pytest.approx([1.0, 2.0])


def test_transport_base_mismatch_raises():
    g = ORTHANT.connecting_geodesic((1.0, 1.0), (2.0, 3.0))
    x = ORTHANT.tangent((1.5, 1.5), (1.0, 0.0))
    with pytest.raises(BasePointMismatch):
        ORTHANT.parallel_transport(g, 0.0, 1.0, x)


def test_transport_isometry_random():
    rng = np.random.default_rng(5)
    for _ in range(1000):
        a = rng.uniform(0.5, 5.0, 2)
        b = rng.uniform(0.5, 5.0, 2)
        g = ORTHANT.connecting_geodesic(a, b)
        t0, t1 = rng.uniform(0.0, 1.0, 2)
        p0, _ = g.eval(t0)
        x = Tangent(p0, rng.normal(size=2))
        y = Tangent(p0, rng.normal(size=2))
        px = ORTHANT.parallel_transport(g, t0, t1, x)
        py = ORTHANT.parallel_transport(g, t0, t1, y)
        p1, _ = g.eval(t1)
        before = ORTHANT.metric_inner(p0, x, y)
        after = ORTHANT.metric_inner(p1, px, py)
        assert abs(after - before) <= 1e-9


def test_transport_log_isometry_oracle():
    # under w = ln(u) the metric is Euclidean and transport leaves the
    # w-components x_i/u_i untouched
    rng = np.random.default_rng(6)
    for _ in range(200):
        a = rng.uniform(0.5, 5.0, 2)
        b = rng.uniform(0.5, 5.0, 2)
        x = rng.normal(size=2)
        moved = ORTHANT.transport(Tangent(a, x), b)
        w_before = x / a
        w_after = moved.vec / b
        assert w_after == pytest.approx(w_before, rel=1e-12, abs=1e-14)


def test_transport_ode_oracle():
    # independent check: integrate V' = (r'/r) V along the connecting
    # geodesic (the transport equation for this metric) with solve_ivp
    from scipy.integrate import solve_ivp

    rng = np.random.default_rng(7)
    for _ in range(10):
        a = rng.uniform(0.5, 5.0, 2)
        b = rng.uniform(0.5, 5.0, 2)
        x0 = rng.normal(size=2)
        g = ORTHANT.connecting_geodesic(a, b)
        xi = np.log(b / a)  # log-velocity of the geodesic

        def rhs(t, v):
            r = a * np.exp(xi * t)
            dr = r * xi
            return dr / r * v

        sol = solve_ivp(rhs, (0.0, 1.0), x0, rtol=1e-10, atol=1e-12)
        closed = ORTHANT.transport(Tangent(a, x0), b).vec
        assert sol.y[:, -1] == pytest.approx(closed, rel=1e-6, abs=1e-9)


# -- distance ----------------------------------------------------------------

def test_distance_pinned():
    assert ORTHANT.distance((1.0, 1.0), (math.e, 1.0)) == pytest.approx(1.0, abs=1e-12)
    assert ORTHANT.distance((2.0, 3.0), (2.0, 3.0)) == 0.0
    assert E2.distance((0.0, 0.0), (3.0, 4.0)) == pytest.approx(5.0)


def test_distance_symmetric_and_log_oracle():
    for a, b in zip(rand_points(100, seed=8), rand_points(100, seed=9)):
        d = ORTHANT.distance(a, b)
        assert d == pytest.approx(ORTHANT.distance(b, a), rel=1e-12)
        assert d == pytest.approx(np.linalg.norm(np.log(b) - np.log(a)), rel=1e-12)
        assert (d == 0.0) == bool(np.all(a == b))


def test_distance_equals_connecting_speed():
    # the connecting geodesic has unit parameter, so |r'(0)| is the distance
    for a, b in zip(rand_points(100, seed=10), rand_points(100, seed=11)):
        g = ORTHANT.connecting_geodesic(a, b)
        assert ORTHANT.norm(g.velocity) == pytest.approx(ORTHANT.distance(a, b), abs=1e-9)


# -- gradients ----------------------------------------------------------------

H_DEMO = ScalarField(lambda u: u[0] + u[1] ** 2, lambda u: np.array([1.0, 2 * u[1]]))


def test_gradient_orthant_pinned():
    g = ORTHANT.gradient(H_DEMO, (1.0, 2.0))
    assert g.vec == pytest.approx([1.0, 16.0])


def test_gradient_constant_field_zero():
    const = ScalarField(lambda u: 3.5)
    assert ORTHANT.gradient(const, (1.2, 0.9)).vec == pytest.approx([0.0, 0.0], abs=1e-9)


def test_gradient_euclidean_sq_norm():
    h = ScalarField(lambda u: float(np.dot(u, u)), lambda u: 2 * np.asarray(u))
    p = np.array([0.3, -1.7])
    assert E2.gradient(h, p).vec == pytest.approx(2 * p)


def test_gradient_duality_fd():
    # <grad h, w>_p must match central differences of h along exp_p(t w)
    rng = np.random.default_rng(12)
    for _ in range(1000):
        p = rng.uniform(0.5, 5.0, 2)
        w = Tangent(p, rng.uniform(-1.0, 1.0, 2))
        lhs = ORTHANT.metric_inner(p, ORTHANT.gradient(H_DEMO, p), w)
        step = 1e-6 * max(1.0, float(np.linalg.norm(p)))
        fd = (
            H_DEMO(ORTHANT.exp_map(w.scaled(step)))
            - H_DEMO(ORTHANT.exp_map(w.scaled(-step)))
        ) / (2 * step)
        assert abs(lhs - fd) <= 1e-6 * max(1.0, abs(lhs))


def test_gradient_fd_fallback_matches_analytic():
    no_grad = ScalarField(lambda u: u[0] + u[1] ** 2)
    for p in rand_points(50, seed=13):
        got = ORTHANT.gradient(no_grad, p).vec
        want = ORTHANT.gradient(H_DEMO, p).vec
        assert got == pytest.approx(want, rel=1e-6, abs=1e-8)
