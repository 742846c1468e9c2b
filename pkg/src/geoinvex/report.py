"""Suite execution and machine-readable reports.

``run_suite`` executes a problem's checks in declared order and assembles
a single JSON-serializable report document.  Reports are deterministic
under a fixed seed up to the volatile fields (the timestamp and the
per-check wall times); ``normalized`` strips exactly those fields so two
runs can be compared byte for byte.
"""
from __future__ import annotations

import copy
import csv
import io
import json
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Dict, List, Optional

import numpy as np

from . import __version__
from .errors import GeoinvexError, NoRoot, ZeroGradient
from .eta import check_condition_C, check_property_P, construct_invex_eta
from .invexity import (
    GeneralizedKind,
    GeodesicMode,
    check_closure_theorems,
    check_generalized_invex,
    check_infimal_preinvex,
    check_strongly_eta_invex,
    check_strongly_geodesic_convex,
    check_strongly_preinvex,
    cross_check_preinvex_invex,
)
from .monotonicity import (
    MonotoneKind,
    check_invariant_eta_monotone,
    check_monotone_vector_field,
    cross_check_invex_monotone,
    gradient_field,
)
from .problems import CheckSpec, ProblemInstance
from .sampling import SampleScheme, Verdict, VIOLATION_TOL
from .vvlip import MopProblem, check_strict_minimizer, check_vvlip_solution, scan_equivalence

SCHEMA_ID = "geoinvex.report/1"

BENIGN_STATUSES = {
    "holds",
    "holds_vacuously",
    "not_strong",
    "satisfied",
    "consistent",
    "not_applicable",
}

_SEVERITY = {
    "holds": 0,
    "satisfied": 0,
    "consistent": 0,
    "holds_vacuously": 1,
    "not_strong": 2,
    "not_applicable": 3,
    "violated": 4,
    "inconsistent": 4,
    "error": 5,
}

# Human-readable statement of what each check verifies, carried verbatim
# into every per-check record.
CHECK_DEFINITIONS: Dict[str, str] = {
    "invex": "first-order bound: h(u) >= h(v) + dh_v(eta(u,v)) + delta*|eta(u,v)|_v^m",
    "preinvex": "chord bound: h(r(s)) <= s*h(u) + (1-s)*h(v) - delta*s*(1-s)*|eta(u,v)|_v^m along the selected geodesic",
    "geodesic_convex": "chord bound along connecting geodesics with penalty delta*s*(1-s)*|r'(s)|^m",
    "generalized.pseudo1": "dh_v(eta(u,v)) >= 0 implies h(u) >= h(v) + delta*|eta(u,v)|_v^m",
    "generalized.pseudo2": "dh_v(eta(u,v)) + delta*|eta(u,v)|_v^m >= 0 implies h(u) >= h(v)",
    "generalized.quasi1": "h(u) <= h(v) implies dh_v(eta(u,v)) + delta*|eta(u,v)|_v^m <= 0",
    "generalized.quasi2": "h(u) <= h(v) + delta*|eta(u,v)|_v^m implies dh_v(eta(u,v)) <= 0",
    "condition_c": "transport identities eta(v,r(s)) = -s*P[eta(u,v)] and eta(r(1),r(s)) = (1-s)*P[eta(u,v)] along r(s) = exp_v(s*eta(u,v))",
    "property_p": "interpolation identity r'(t)*(s-t) = eta(r(s), r(t)) along the connecting geodesic",
    "nemeth": "monotone pairing <r'(0), X(u)|_to_v - X(v)>_v >= 0 along connecting geodesics",
    "monotone.strong": "<X(v),eta(u,v)>_v + <X(u),eta(v,u)>_u <= -delta*(|eta(u,v)|_v^m + |eta(v,u)|_u^m)",
    "monotone.pseudo": "<X(u),eta(v,u)>_u >= 0 implies <X(v),eta(u,v)>_v <= -delta*|eta(u,v)|_v^m",
    "cross_invex_monotone": "invexity of h versus invariant monotonicity of grad h on identical samples",
    "cross_preinvex_invex": "chord bound versus first-order bound on identical samples, converse gated on C1/C2",
    "closure": "weighted sums keep the chord bound at sum(a_j*delta_j); pointwise max keeps it at min(delta_j)",
    "infimal": "inf-projection Psi(u) = min_v F(u,v) keeps the chord bound when F does in each variable",
    "minimizer": "no candidate u satisfies H(u) < H(u*) + delta*|eta(u,u*)|^m componentwise",
    "vvlip": "no candidate u makes every pairing <grad h_i(u*), eta(u,u*)> negative",
    "scan": "grid minimizer set equals grid inequality-solution set under the invexity hypothesis",
    "invex_eta_identity": "constructed eta satisfies h(u) = h(v) + <dh_v, eta>_v + delta*|eta|_v^m",
}


def _definition_for(spec: CheckSpec) -> str:
    if spec.kind == "generalized":
        return CHECK_DEFINITIONS[f"generalized.{spec.options['kind']}"]
    if spec.kind == "monotone":
        return CHECK_DEFINITIONS[f"monotone.{spec.options['kind']}"]
    return CHECK_DEFINITIONS[spec.kind]


def _verdict_record(verdict: Verdict) -> dict:
    d = verdict.to_dict()
    return {
        "status": d["status"],
        "delta_hat": d["delta_hat"],
        "worst_margin": d["worst_margin"],
        "witness": d["witness"],
        "samples_evaluated": d["samples_evaluated"],
        "degenerate_skipped": d["degenerate_skipped"],
    }


def _blank_record(status: str, **detail) -> dict:
    return {
        "status": status,
        "delta_hat": None,
        "worst_margin": None,
        "witness": None,
        "samples_evaluated": 0,
        "degenerate_skipped": 0,
        "detail": detail,
    }


def _identity_pairs(scheme: SampleScheme):
    small = scheme.decimated(grid=5, random_pairs=50)
    return list(small.pairs())


def run_check(problem: ProblemInstance, spec: CheckSpec, tol: float = VIOLATION_TOL) -> dict:
    """Execute one check and return its report record (without timing)."""
    chart = problem.chart
    h = problem.scalar
    eta = problem.eta
    m = problem.strength.m
    scheme = problem.check_scheme(spec)
    kind = spec.kind

    if kind == "invex":
        return _verdict_record(check_strongly_eta_invex(chart, h, eta, m, scheme, tol))
    if kind == "preinvex":
        mode = GeodesicMode(spec.options.get("mode", "eta"))
        return _verdict_record(check_strongly_preinvex(chart, h, eta, m, scheme, mode, tol))
    if kind == "geodesic_convex":
        return _verdict_record(check_strongly_geodesic_convex(chart, h, m, scheme, tol))
    if kind == "generalized":
        gk = GeneralizedKind(spec.options["kind"])
        return _verdict_record(check_generalized_invex(chart, h, eta, m, gk, scheme, tol))

    if kind in ("condition_c", "property_p"):
        small = scheme.decimated(grid=5, random_pairs=0)
        pts = small.grid()
        pairs = list(small.extra_pairs) + [(u, v) for u in pts for v in pts]
        s_grid = tuple(scheme.s_grid)
        if kind == "property_p":
            s_grid = tuple(sorted(set(s_grid) | {0.0, 1.0}))
        worst = -1.0
        worst_sample = None
        evaluated = 0
        for u, v in pairs:
            u = np.asarray(u, float)
            v = np.asarray(v, float)
            if kind == "condition_c":
                rep = check_condition_C(chart, eta, u, v, s_grid, tol)
            else:
                rep = check_property_P(chart, eta, u, v, s_grid, tol)
            evaluated += len(rep.samples)
            if rep.max_residual > worst:
                worst = rep.max_residual
                worst_sample = rep.worst_sample
        status = "satisfied" if worst <= tol else "violated"
        sample_echo = None
        if worst_sample:
            sample_echo = {"u": list(worst_sample[0]), "v": list(worst_sample[1]), "s": worst_sample[2]}
        rec = _blank_record(status, max_residual=worst, worst_sample=sample_echo)
        rec["samples_evaluated"] = evaluated
        return rec

    if kind == "nemeth":
        X = gradient_field(chart, h)
        return _verdict_record(check_monotone_vector_field(chart, X, scheme, tol))
    if kind == "monotone":
        mk = MonotoneKind(spec.options["kind"])
        X = gradient_field(chart, h)
        return _verdict_record(check_invariant_eta_monotone(chart, X, eta, m, mk, scheme, tol))

    if kind == "cross_invex_monotone":
        rep = cross_check_invex_monotone(chart, h, eta, m, scheme, tol)
        rec = _blank_record(
            "consistent" if rep.consistent else "inconsistent",
            flags=list(rep.flags),
            invex=_verdict_record(rep.invex),
            monotone_strong=_verdict_record(rep.monotone_strong),
            pseudo_applicable=rep.pseudo_applicable,
        )
        if rep.pseudo_monotone is not None:
            rec["detail"]["pseudo_monotone"] = _verdict_record(rep.pseudo_monotone)
            rec["detail"]["pseudo_invex"] = _verdict_record(rep.pseudo_invex)
        rec["samples_evaluated"] = rep.invex.samples_evaluated + rep.monotone_strong.samples_evaluated
        return rec

    if kind == "cross_preinvex_invex":
        rep = cross_check_preinvex_invex(chart, h, eta, m, scheme, tol)
        rec = _blank_record(
            "consistent" if rep.consistent else "inconsistent",
            flags=list(rep.flags),
            preinvex=_verdict_record(rep.preinvex),
            invex=_verdict_record(rep.invex),
            condition_c_satisfied=rep.condition_c_satisfied,
            condition_c_max_residual=rep.condition_c_max_residual,
        )
        rec["samples_evaluated"] = rep.preinvex.samples_evaluated + rep.invex.samples_evaluated
        return rec

    if kind == "closure":
        if not problem.objectives or not problem.weights:
            return _blank_record("not_applicable", reason="problem declares no family/weights")
        rep = check_closure_theorems(
            chart, problem.objectives, problem.weights, eta, m, scheme,
            GeodesicMode.ETA_GEODESIC, tol,
        )
        if not rep.applicable:
            status = "not_applicable"
        else:
            status = "consistent" if rep.consistent else "inconsistent"
        return _blank_record(
            status,
            members=[_verdict_record(vd) for vd in rep.member_verdicts],
            sum_delta=rep.sum_delta,
            sum_violations=rep.sum_violations,
            max_delta=rep.max_delta,
            max_violations=rep.max_violations,
        )

    if kind == "infimal":
        if problem.bivariate is None:
            return _blank_record("not_applicable", reason="problem declares no bivariate field")
        rep = check_infimal_preinvex(chart, problem.bivariate, eta, m, scheme, GeodesicMode.ETA_GEODESIC, tol)
        status = rep.psi.status.value if rep.applicable else "not_applicable"
        rec = _blank_record(
            status,
            component_u=_verdict_record(rep.component_u),
            component_v=_verdict_record(rep.component_v),
            joint=_verdict_record(rep.joint),
            psi=_verdict_record(rep.psi),
        )
        rec["delta_hat"] = rep.psi.to_dict()["delta_hat"] if rep.applicable else None
        rec["samples_evaluated"] = rep.psi.samples_evaluated
        return rec

    if kind in ("minimizer", "vvlip", "scan"):
        if not problem.objectives:
            return _blank_record("not_applicable", reason="problem declares no objectives")
        mop = MopProblem(chart, problem.objectives, eta, problem.strength)
        if kind == "scan":
            scan_scheme = problem.scan_scheme or scheme
            rep = scan_equivalence(mop, scan_scheme, problem.dominance_mode, tol)
            if not rep.applicable:
                status = "not_applicable"
            else:
                status = "consistent" if rep.consistent else "inconsistent"
            rec = _blank_record(status, **rep.to_dict())
            rec["samples_evaluated"] = len(rep.grid) ** 2
            return rec
        if problem.u_star is None:
            return _blank_record("not_applicable", reason="problem declares no u_star")
        if kind == "minimizer":
            locality = spec.options.get("locality")
            vd = check_strict_minimizer(mop, np.asarray(problem.u_star, float), scheme,
                                        locality, problem.dominance_mode, tol)
        else:
            vd = check_vvlip_solution(mop, np.asarray(problem.u_star, float), scheme,
                                      problem.dominance_mode, tol)
        rec = _verdict_record(vd)
        rec["detail"] = {"u_star": list(problem.u_star)}
        return rec

    if kind == "invex_eta_identity":
        delta = problem.strength.delta if problem.strength.delta > 0 else 1.0
        worst = 0.0
        worst_pair = None
        evaluated = skipped = 0
        for u, v in _identity_pairs(scheme):
            try:
                eta_t = construct_invex_eta(chart, h, delta, m, u, v)
            except (NoRoot, ZeroGradient):
                skipped += 1
                continue
            g = chart.gradient(h, v)
            resid = abs(
                h(u) - h(v) - chart.metric_inner(v, g, eta_t) - delta * chart.norm(eta_t) ** m
            )
            evaluated += 1
            if resid > worst:
                worst = resid
                worst_pair = (u.tolist(), v.tolist())
        status = "satisfied" if worst <= 1e-9 else "violated"
        rec = _blank_record(status, max_residual=worst, worst_pair=worst_pair, delta=delta)
        rec["samples_evaluated"] = evaluated
        rec["degenerate_skipped"] = skipped
        return rec

    raise GeoinvexError(f"unknown check kind {kind!r}")


def _scheme_echo(scheme: SampleScheme) -> dict:
    return {
        "box": [list(ax) for ax in scheme.box],
        "grid_points_per_axis": scheme.grid_points_per_axis,
        "random_pairs": scheme.random_pairs,
        "seed": scheme.seed,
        "s_grid": list(scheme.s_grid),
        "extra_pairs": [[list(a), list(b)] for a, b in scheme.extra_pairs],
    }


def run_suite(problem: ProblemInstance, tol: float = VIOLATION_TOL) -> dict:
    """Execute the problem's suite and assemble the report document.

    Check errors become per-check records with status "error"; the runner
    itself never raises for them.
    """
    checks: List[dict] = []
    for spec in problem.suite:
        t0 = time.perf_counter()
        try:
            rec = run_check(problem, spec, tol)
        except Exception as exc:  # error becomes a record, not a crash
            rec = _blank_record("error", error=f"{type(exc).__name__}: {exc}")
        elapsed_ms = (time.perf_counter() - t0) * 1000.0
        rec["id"] = spec.id
        rec["kind"] = spec.kind
        rec["definition"] = _definition_for(spec)
        rec["expected"] = spec.expected
        rec["as_expected"] = (rec["status"] == spec.expected) if spec.expected else None
        rec["wall_time_ms"] = elapsed_ms
        # stable key order for byte-identical serialization
        ordered = {
            k: rec[k]
            for k in (
                "id", "kind", "definition", "status", "expected", "as_expected",
                "delta_hat", "worst_margin", "witness", "samples_evaluated",
                "degenerate_skipped", "wall_time_ms",
            )
        }
        if "detail" in rec:
            ordered["detail"] = rec["detail"]
        checks.append(ordered)

    overall = "holds"
    for rec in checks:
        if _SEVERITY.get(rec["status"], 5) > _SEVERITY.get(overall, 0):
            overall = rec["status"]
    exit_code = 0
    for rec in checks:
        if rec["status"] not in BENIGN_STATUSES or rec["as_expected"] is False:
            exit_code = 1
            break

    return {
        "schema": SCHEMA_ID,
        "tool_version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "problem": {
            "name": problem.name,
            "chart": problem.chart.name,
            "dim": problem.chart.dim,
            "fields": list(problem.field_names),
            "eta": problem.eta_name or problem.eta.name,
            "m": problem.strength.m,
            "delta": problem.strength.delta,
            "dominance_mode": problem.dominance_mode.value,
            "u_star": list(problem.u_star) if problem.u_star else None,
            "scheme": _scheme_echo(problem.scheme),
            "suite": [spec.id for spec in problem.suite],
            "tolerance": tol,
        },
        "checks": checks,
        "overall_status": overall,
        "exit_code": exit_code,
    }


def normalized(report: dict) -> dict:
    """Copy of a report with the volatile fields (timestamp, wall times) removed."""
    out = copy.deepcopy(report)
    out.pop("timestamp", None)
    for rec in out.get("checks", []):
        rec.pop("wall_time_ms", None)
    return out


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, allow_nan=False)


def witnesses_csv(report: dict) -> str:
    """Per-check witness rows as CSV text."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["check_id", "status", "u", "v", "s", "margin", "denom"])
    for rec in report.get("checks", []):
        w = rec.get("witness")
        if not w:
            continue
        writer.writerow(
            [
                rec["id"],
                rec["status"],
                ";".join(repr(x) for x in (w["u"] or [])),
                ";".join(repr(x) for x in (w["v"] or [])),
                "" if w["s"] is None else repr(w["s"]),
                repr(w["margin"]),
                "" if w["denom"] is None else repr(w["denom"]),
            ]
        )
    return buf.getvalue()
