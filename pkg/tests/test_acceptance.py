"""Acceptance suite: one test per criterion, each printing a pass line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
Tolerances are pinned here and nowhere else.
"""
import math
from dataclasses import replace

import numpy as np
import pytest

from geoinvex import (
    ETAS,
    FIELDS,
    Euclidean,
    GeodesicMode,
    MonotoneKind,
    MopProblem,
    PositiveOrthant2,
    SampleScheme,
    Status,
    StrengthParams,
    Tangent,
    builtin_names,
    check_closure_theorems,
    check_invariant_eta_monotone,
    check_strongly_eta_invex,
    check_strongly_preinvex,
    check_generalized_invex,
    GeneralizedKind,
    cross_check_invex_monotone,
    cross_check_preinvex_invex,
    directional_derivative,
    eval_eta,
    gradient_eta,
    gradient_field,
    load_problem,
    normalized,
    run_suite,
    scan_equivalence,
    to_json,
)

ORTHANT = PositiveOrthant2()
E2 = Euclidean(2)

PAIR_32 = ((0.25, 0.25), (1 / 9, 1 / 9))
PAIR_33 = ((0.5, 0.5), (1.0, math.e ** 2))
PAIR_34 = ((1.0, math.exp(-5.0)), (1.0, 1.0))


def ok(n, text):
    print(f"[PASS] criterion {n}: {text}")


def test_criterion_1_derivative_formula():
    h = FIELDS["u1_plus_u2_sq"]
    eta = ETAS["ex32"]
    worst_analytic = 0.0
    worst_fd_rel = 0.0
    for v1 in np.linspace(0.5, 5.0, 9):
        for v2 in np.linspace(0.5, 5.0, 9):
            v = np.array([v1, v2])
            w = eval_eta(ORTHANT, eta, v, v)
            dd = directional_derivative(ORTHANT, h, v, w)
            closed = -(1.0 + v1 + 2.0 * v2 ** 2)
            worst_analytic = max(worst_analytic, abs(dd - closed))
            fd = directional_derivative(ORTHANT, h, v, w, method="fd")
            worst_fd_rel = max(worst_fd_rel, abs(fd - dd) / abs(dd))
    assert worst_analytic <= 1e-8
    assert worst_fd_rel <= 1e-6
    ok(1, f"derivative formula matched to {worst_analytic:.2e}, fd path to {worst_fd_rel:.2e} rel")


def test_criterion_2_preinvexity_counterexample():
    h = FIELDS["u1_plus_u2_sq"]
    pinned = SampleScheme(grid_points_per_axis=0, random_pairs=0,
                          extra_pairs=(PAIR_32,), s_grid=(0.1,))
    margin = None
    for m in (1, 2, 3, 5):
        vd = check_strongly_preinvex(ORTHANT, h, ETAS["ex32"], m, pinned,
                                     GeodesicMode.CONNECTING_FROM_U)
        assert vd.status is Status.VIOLATED
        for delta in (0.0, 0.1, 1.0, 10.0):
            assert vd.witness.margin - delta * vd.witness.denom < 0.0
        if m == 2:
            margin = vd.worst_margin
    assert margin == pytest.approx(-0.1413086, abs=1e-6)
    ok(2, f"chord margin {margin:.7f} at the pinned pair; violated for all sampled m, delta")


def test_criterion_3_example_3_3():
    h = FIELDS["log_u1_plus_log_u2_cubed"]
    eta = ETAS["ex33"]
    worst = 0.0
    for v1 in np.linspace(0.5, 5.0, 9):
        for v2 in np.linspace(0.5, 5.0, 9):
            v = np.array([v1, v2])
            dd = directional_derivative(ORTHANT, h, v, eval_eta(ORTHANT, eta, v, v))
            worst = max(worst, abs(dd - (-v1)))
    assert worst <= 1e-8

    scheme = SampleScheme(extra_pairs=(PAIR_33,))
    vd = check_strongly_eta_invex(ORTHANT, h, eta, 2, scheme)
    assert vd.status is Status.VIOLATED
    assert vd.worst_margin == pytest.approx(-8.0261723, abs=1e-6)
    assert vd.witness.u == pytest.approx([0.5, 0.5])
    assert vd.witness.v == pytest.approx([1.0, math.e ** 2])

    pseudo = check_generalized_invex(ORTHANT, h, eta, 2, GeneralizedKind.PSEUDO1,
                                     SampleScheme())
    assert pseudo.status is Status.HOLDS_VACUOUSLY
    ok(3, f"dh formula to {worst:.2e}; invexity margin {vd.worst_margin:.7f}; pseudo1 vacuous")


def test_criterion_4_example_3_4():
    h = FIELDS["u1_cubed_plus_log_u2"]
    eta = ETAS["ex34"]
    worst = 0.0
    for v1 in np.linspace(0.5, 5.0, 9):
        for v2 in np.linspace(0.5, 5.0, 9):
            v = np.array([v1, v2])
            dd = directional_derivative(ORTHANT, h, v, eval_eta(ORTHANT, eta, v, v))
            worst = max(worst, abs(dd - (-3 * v1 ** 4 - v2)))
    assert worst <= 1e-8

    box = ((0.5, 2.0), (0.5, 2.0))
    vd = check_strongly_eta_invex(ORTHANT, h, eta, 2,
                                  SampleScheme(box=box, extra_pairs=(PAIR_34,)))
    assert vd.status is Status.VIOLATED
    assert vd.worst_margin == pytest.approx(-1.0, abs=1e-9)

    quasi = check_generalized_invex(ORTHANT, h, eta, 2, GeneralizedKind.QUASI1,
                                    SampleScheme(box=box))
    assert quasi.status is Status.HOLDS
    assert quasi.delta_hat >= 0.08
    ok(4, f"dh formula to {worst:.2e}; invexity margin {vd.worst_margin:.10f}; "
          f"quasi1 delta_hat {quasi.delta_hat:.4f}")


def test_criterion_5_negative_gradient_monotonicity():
    h = FIELDS["u1_plus_u2_sq"]
    eta = gradient_eta(ORTHANT, h, 2)
    X = gradient_field(ORTHANT, h)
    vd = check_invariant_eta_monotone(ORTHANT, X, eta, 2, MonotoneKind.STRONG,
                                      SampleScheme())
    assert vd.status is Status.HOLDS
    assert vd.delta_hat == pytest.approx(1.0, abs=1e-9)
    ok(5, f"strong invariant monotonicity delta_hat = {vd.delta_hat:.12f}")


def test_criterion_6_geometry_invariants():
    rng = np.random.default_rng(2024)
    h = FIELDS["u1_plus_u2_sq"]
    worst_iso = worst_cons = worst_geo = worst_dual = 0.0
    step = 1e-4
    for _ in range(1000):
        a = rng.uniform(0.5, 5.0, 2)
        b = rng.uniform(0.5, 5.0, 2)
        t0, t1 = rng.uniform(0.0, 1.0, 2)
        g = ORTHANT.connecting_geodesic(a, b)
        p0, _ = g.eval(t0)
        p1, _ = g.eval(t1)
        x = Tangent(p0, rng.normal(size=2))
        y = Tangent(p0, rng.normal(size=2))
        px = ORTHANT.parallel_transport(g, t0, t1, x)
        py = ORTHANT.parallel_transport(g, t0, t1, y)
        worst_iso = max(worst_iso, abs(
            ORTHANT.metric_inner(p1, px, py) - ORTHANT.metric_inner(p0, x, y)))

        vel = Tangent(a, rng.uniform(-1.0, 1.0, 2) * a)
        gv = ORTHANT.geodesic(vel)
        t = rng.uniform(0.05, 0.95)
        worst_cons = max(worst_cons, float(np.max(np.abs(
            gv.position(t) - ORTHANT.exp_map(vel.scaled(t))))))

        r0, rp, rm = gv.position(t), gv.position(t + step), gv.position(t - step)
        fd_vel = (rp - rm) / (2 * step)
        fd_acc = (rp - 2 * r0 + rm) / step ** 2
        covariant = fd_acc - fd_vel * fd_vel / r0
        worst_geo = max(worst_geo, ORTHANT.norm(Tangent(r0, covariant)))

        p = rng.uniform(0.5, 5.0, 2)
        w = Tangent(p, rng.uniform(-1.0, 1.0, 2))
        lhs = ORTHANT.metric_inner(p, ORTHANT.gradient(h, p), w)
        fd_step = 1e-6 * max(1.0, float(np.linalg.norm(p)))
        fd = (h(ORTHANT.exp_map(w.scaled(fd_step)))
              - h(ORTHANT.exp_map(w.scaled(-fd_step)))) / (2 * fd_step)
        worst_dual = max(worst_dual, abs(lhs - fd) / max(1.0, abs(lhs)))

    assert worst_iso <= 1e-9
    assert worst_cons <= 1e-12
    assert worst_geo <= 1e-6
    assert worst_dual <= 1e-6
    ok(6, f"isometry {worst_iso:.1e}, exp/geodesic {worst_cons:.1e}, "
          f"geodesic eq {worst_geo:.1e}, duality {worst_dual:.1e}")


def test_criterion_7_closure():
    scheme = SampleScheme(box=((-1.0, 1.0), (-1.0, 1.0)), seed=7)
    weights = [1.0, 2.0]
    rep = check_closure_theorems(
        E2, [FIELDS["sq_norm"], FIELDS["sq_dist_to_e1"]], weights,
        ETAS["euclidean_diff"], 2, scheme,
    )
    assert rep.applicable
    member_deltas = [vd.delta_hat for vd in rep.member_verdicts]
    assert rep.sum_delta == pytest.approx(
        sum(a * d for a, d in zip(weights, member_deltas)), rel=1e-12)
    assert rep.max_delta == pytest.approx(min(member_deltas), rel=1e-12)
    assert rep.sum_violations == 0
    assert rep.max_violations == 0
    ok(7, f"sum holds at delta'={rep.sum_delta:.6f}, max at {rep.max_delta:.6f}, "
          f"0 violations")


def test_criterion_8_no_theorem_inconsistencies():
    inspected = 0
    for name in builtin_names():
        problem = load_problem(name)
        scheme = problem.scheme.decimated(grid=5, random_pairs=100)
        if problem.scalar is not None:
            rep1 = cross_check_preinvex_invex(
                problem.chart, problem.scalar, problem.eta, problem.strength.m, scheme)
            assert rep1.flags == (), f"{name}: {rep1.flags}"
            rep2 = cross_check_invex_monotone(
                problem.chart, problem.scalar, problem.eta, problem.strength.m, scheme)
            assert rep2.flags == (), f"{name}: {rep2.flags}"
            inspected += 1
        report = run_suite(problem)
        assert all(c["status"] != "inconsistent" for c in report["checks"]), name
    assert inspected >= 5
    ok(8, f"no THEOREM-INCONSISTENT flags across {inspected} built-in instances")


def test_criterion_9_equivalence_scans():
    scan = SampleScheme(box=((-1.0, 1.0), (-1.0, 1.0)), grid_points_per_axis=21,
                        random_pairs=0)
    baseline = MopProblem(E2, (FIELDS["sq_norm"],), ETAS["euclidean_diff"],
                          StrengthParams(m=2))
    res = scan_equivalence(baseline, scan)
    assert res.applicable
    grid = np.array(res.grid)
    nearest = int(np.argmin(np.linalg.norm(grid, axis=1)))
    assert list(res.minimizer_set) == [nearest]
    assert list(res.vvlip_set) == [nearest]
    assert res.disagreements == ()

    orthant_mop = MopProblem(ORTHANT, (FIELDS["u1_plus_u2_sq"],), ETAS["ex32"],
                             StrengthParams(m=2))
    scan_o = SampleScheme(box=((0.5, 5.0), (0.5, 5.0)), grid_points_per_axis=21,
                          random_pairs=0)
    res_o = scan_equivalence(orthant_mop, scan_o)
    assert res_o.applicable
    assert res_o.minimizer_set == ()
    assert res_o.vvlip_set == ()
    assert res_o.disagreements == ()
    ok(9, "baseline scan: equal singletons at the origin grid point; "
          "orthant counterexample scan: both sets empty")


def test_criterion_10_report_determinism():
    a = run_suite(load_problem("example_3_2"))
    b = run_suite(load_problem("example_3_2"))
    assert to_json(normalized(a)) == to_json(normalized(b))

    # everything except the timestamp and the per-check wall times must agree
    def strip(d):
        d = dict(d)
        d.pop("timestamp")
        d["checks"] = [
            {k: v for k, v in c.items() if k != "wall_time_ms"} for c in d["checks"]
        ]
        return d

    assert strip(a) == strip(b)
    ok(10, "reports byte-identical modulo timestamp and wall-time fields")
