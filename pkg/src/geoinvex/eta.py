"""Eta maps and the identities built on them.

An eta map is a bifunction eta(u, v) producing a tangent vector at v; it
generalizes the displacement u - v.  This module provides the built-in
formula maps, directional derivatives d/dt h(exp_v(t w))|_0, residual
checks for the interpolation property (P) and for conditions C1/C2, and
the construction of the self-referential eta whose defining equation
contains its own norm.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import NoRoot, ZeroGradient
from .fields import ScalarField
from .manifolds import Chart, Tangent

_DD_FD_SCALE = 1e-6


@dataclass(frozen=True)
class EtaMap:
    """Bifunction (u, v) -> components of a tangent vector at v.

    ``integrable`` marks maps for which a curve with property (P) is known
    to exist; it gates the cross-checks that assume integrability.  Only
    the Euclidean displacement map ships with the flag set.

    ``fn_batch``, when present, evaluates many first arguments at once
    (rows of U against one v) and lets grid scans vectorize.
    """

    name: str
    fn: Callable[[np.ndarray, np.ndarray], np.ndarray]
    integrable: bool = False
    fn_batch: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None

    def components(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return np.asarray(self.fn(np.asarray(u, float), np.asarray(v, float)), dtype=float)

    def components_many(self, U: np.ndarray, v: np.ndarray) -> np.ndarray:
        """eta(u, v) for every row u of U, as an (n, dim) array."""
        U = np.asarray(U, dtype=float)
        v = np.asarray(v, dtype=float)
        if self.fn_batch is not None:
            return np.asarray(self.fn_batch(U, v), dtype=float)
        return np.stack([self.components(u, v) for u in U])


def _broadcast_rows(row_fn):
    """Batch form for maps whose value does not depend on the first argument."""

    def batch(U, v):
        return np.broadcast_to(row_fn(None, v), U.shape).copy()

    return batch


# Built-in formula maps.  eta(v, v) is whatever the formula yields; it is
# deliberately not forced to zero, so residual checks see actual behavior.
ETA_SHIFTED_NEG = EtaMap(
    "ex32",
    lambda u, v: np.array([-1.0 - v[0], -v[1]]),
    fn_batch=_broadcast_rows(lambda _, v: np.array([-1.0 - v[0], -v[1]])),
)
ETA_NEG_SQ_FIRST = EtaMap(
    "ex33",
    lambda u, v: np.array([-v[0] ** 2, 0.0]),
    fn_batch=_broadcast_rows(lambda _, v: np.array([-v[0] ** 2, 0.0])),
)
ETA_NEG_SQ_BOTH = EtaMap(
    "ex34",
    lambda u, v: np.array([-v[0] ** 2, -v[1] ** 2]),
    fn_batch=_broadcast_rows(lambda _, v: np.array([-v[0] ** 2, -v[1] ** 2])),
)
ETA_EUCLIDEAN_DIFF = EtaMap(
    "euclidean_diff",
    lambda u, v: u - v,
    integrable=True,
    fn_batch=lambda U, v: U - v,
)


def eval_eta(chart: Chart, e: EtaMap, u, v) -> Tangent:
    """Evaluate eta(u, v) as a tangent vector based at v."""
    u = chart.require_point(u)
    v = chart.require_point(v)
    return Tangent(v, e.components(u, v))


def gradient_eta(chart: Chart, h: ScalarField, m: int = 2) -> EtaMap:
    """Eta map pointing along the negative gradient of h.

    This resolves the self-referential map eta(u,v) = -(|eta|^m/|dh_v|^2) dh_v:
    with t = |eta| the fixed point is t^(m-1) = |grad h(v)|, so

        eta(u, v) = -|G|^(1/(m-1)) * G/|G|,   G = grad h(v),  m >= 2,

    which is exactly -G when m = 2.  For m = 1 the only fixed point is the
    zero vector unless |G| = 1, so the map returns zero.
    """
    if m < 1:
        raise ValueError("m must be a positive integer")

    def fn(u, v, _h=h, _m=m):
        g = chart.gradient(_h, v)
        gn = chart.norm(g)
        if gn <= 1e-12:
            raise ZeroGradient(f"gradient of {_h.label or 'h'} vanishes at {np.asarray(v).tolist()}")
        if _m == 1:
            return np.zeros_like(g.vec)
        t = gn ** (1.0 / (_m - 1))
        return -(t / gn) * g.vec

    return EtaMap(f"neg_gradient_m{m}", fn, fn_batch=_broadcast_rows(fn))


def directional_derivative(
    chart: Chart,
    h: ScalarField,
    v,
    w: Tangent,
    method: str = "auto",
) -> float:
    """d/dt h(exp_v(t w)) at t = 0.

    With an analytic gradient this equals <grad h(v), w>_v; otherwise it
    is a central finite difference along the geodesic t -> exp_v(t w).
    ``method`` may force either path ("analytic" / "fd").
    """
    v = chart.require_point(v)
    if not np.array_equal(w.base, v) and not np.allclose(w.base, v, rtol=0, atol=1e-12):
        raise ValueError("direction w must be based at v")
    if method not in ("auto", "analytic", "fd"):
        raise ValueError(f"unknown method {method!r}")
    analytic = method == "analytic" or (method == "auto" and h.has_analytic_gradient)
    if analytic:
        return chart.metric_inner(v, chart.gradient(h, v), w)
    t = _DD_FD_SCALE * max(1.0, float(np.linalg.norm(v)))
    hp = h(chart.exp_map(w.scaled(t)))
    hm = h(chart.exp_map(w.scaled(-t)))
    return (hp - hm) / (2.0 * t)


class IdentityVerdict(str, Enum):
    SATISFIED = "satisfied"
    VIOLATED = "violated"


@dataclass(frozen=True)
class ResidualReport:
    """Residuals of a pointwise identity over a parameter grid."""

    samples: Tuple[tuple, ...]
    residuals: Tuple[Tuple[float, ...], ...]
    verdict: IdentityVerdict
    worst_sample: tuple
    worst_residual: float
    tolerance: float

    @property
    def max_residual(self) -> float:
        return self.worst_residual


def _residual_report(samples, residual_rows, tol) -> ResidualReport:
    worst = -1.0
    worst_sample = samples[0] if samples else ()
    for sample, row in zip(samples, residual_rows):
        m = max(row)
        if m > worst:
            worst = m
            worst_sample = sample
    verdict = IdentityVerdict.SATISFIED if worst <= tol else IdentityVerdict.VIOLATED
    return ResidualReport(
        samples=tuple(samples),
        residuals=tuple(tuple(r) for r in residual_rows),
        verdict=verdict,
        worst_sample=worst_sample,
        worst_residual=worst,
        tolerance=tol,
    )


def check_property_P(
    chart: Chart,
    e: EtaMap,
    u,
    v,
    s_grid: Sequence[float],
    tol: float = 1e-9,
) -> ResidualReport:
    """Residuals of r'(t)(s - t) = eta(r(s), r(t)) along the connecting geodesic.

    r is the geodesic with r(0) = v and r(1) = u; the residual at (s, t)
    is the metric norm of the mismatch, measured at r(t).
    """
    u = chart.require_point(u)
    v = chart.require_point(v)
    g = chart.connecting_geodesic(v, u)
    samples: List[tuple] = []
    rows: List[List[float]] = []
    for t in s_grid:
        pos_t, vel_t = g.eval(t)
        row = []
        for s in s_grid:
            pos_s = g.position(s)
            lhs = (s - t) * vel_t.vec
            rhs = e.components(pos_s, pos_t)
            row.append(chart.norm(Tangent(pos_t, lhs - rhs)))
        samples.append((tuple(u.tolist()), tuple(v.tolist()), float(t)))
        rows.append(row)
    return _residual_report(samples, rows, tol)


def check_condition_C(
    chart: Chart,
    e: EtaMap,
    u,
    v,
    s_grid: Sequence[float],
    tol: float = 1e-9,
) -> "ConditionCReport":
    """Residuals of the two transport identities C1 and C2.

    Along the geodesic r(s) = exp_v(s eta(u,v)):

        C1:  eta(v, r(s))    = -s     P[eta(u,v)]
        C2:  eta(r(1), r(s)) = (1-s)  P[eta(u,v)]

    where P transports eta(u,v) from v to r(s).  Residuals are metric
    norms at r(s).
    """
    u = chart.require_point(u)
    v = chart.require_point(v)
    eta_uv = eval_eta(chart, e, u, v)
    g = chart.geodesic(eta_uv)
    end = g.position(1.0)
    samples: List[tuple] = []
    c1: List[float] = []
    c2: List[float] = []
    for s in s_grid:
        pos = g.position(s)
        transported = chart.transport(eta_uv, pos).vec
        r1 = e.components(v, pos) + s * transported
        r2 = e.components(end, pos) - (1.0 - s) * transported
        c1.append(chart.norm(Tangent(pos, r1)))
        c2.append(chart.norm(Tangent(pos, r2)))
        samples.append((tuple(u.tolist()), tuple(v.tolist()), float(s)))
    worst = -1.0
    worst_sample = samples[0] if samples else ()
    for sample, a, b in zip(samples, c1, c2):
        m = max(a, b)
        if m > worst:
            worst = m
            worst_sample = sample
    verdict = IdentityVerdict.SATISFIED if worst <= tol else IdentityVerdict.VIOLATED
    return ConditionCReport(
        samples=tuple(samples),
        c1_residuals=tuple(c1),
        c2_residuals=tuple(c2),
        verdict=verdict,
        worst_sample=worst_sample,
        worst_residual=worst,
        tolerance=tol,
    )


@dataclass(frozen=True)
class ConditionCReport:
    samples: Tuple[tuple, ...]
    c1_residuals: Tuple[float, ...]
    c2_residuals: Tuple[float, ...]
    verdict: IdentityVerdict
    worst_sample: tuple
    worst_residual: float
    tolerance: float

    @property
    def max_residual(self) -> float:
        return self.worst_residual


# -- self-referential eta ------------------------------------------------

_BISECT_TOL = 1e-12
_BISECT_MAXIT = 200


def _bisect(f, lo: float, hi: float) -> float:
    flo = f(lo)
    if flo == 0.0:
        return lo
    for _ in range(_BISECT_MAXIT):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0 or (hi - lo) <= _BISECT_TOL:
            return mid
        if (fm > 0.0) == (flo > 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def construct_invex_eta(
    chart: Chart,
    h: ScalarField,
    delta: float,
    m: int,
    u,
    v,
) -> Tangent:
    """Solve the self-referential eta whose norm appears in its own formula.

    The map is eta = ((c - delta t^m) / |G|^2) G with G = grad h(v),
    c = h(u) - h(v), and t = |eta| determined by the scalar fixed point

        t |G| = |c - delta t^m|.

    For c > 0 a unique root lies in [0, (c/delta)^(1/m)] and is found by
    bisection (1e-12 absolute, at most 200 iterations).  c = 0 gives the
    zero tangent.  For c < 0 a root need not exist; the bracket search
    uses the maximizer of t|G| - delta t^m - |c| and raises NoRoot when
    no sign change is found.  The result satisfies
    h(u) = h(v) + <G, eta>_v + delta |eta|^m to within the root tolerance.
    """
    if m < 1:
        raise ValueError("m must be a positive integer")
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    u = chart.require_point(u)
    v = chart.require_point(v)
    g = chart.gradient(h, v)
    gn = chart.norm(g)
    if gn <= 1e-12:
        raise ZeroGradient(f"gradient of {h.label or 'h'} vanishes at {v.tolist()}")
    c = h(u) - h(v)

    if c == 0.0:
        return Tangent(v, np.zeros_like(v))

    if delta == 0.0:
        t = abs(c) / gn
    elif c > 0.0:
        upper = (c / delta) ** (1.0 / m)
        t = _bisect(lambda t: t * gn - (c - delta * t ** m), 0.0, upper)
    else:
        # t|G| = delta t^m + |c|; phi below is increasing then decreasing
        # for m >= 2, so a root exists iff phi is nonnegative at its peak.
        def phi(t):
            return t * gn - delta * t ** m - abs(c)

        if m == 1:
            if gn <= delta:
                raise NoRoot("c < 0 and |grad| <= delta: no fixed point for m = 1")
            t = abs(c) / (gn - delta)
        else:
            t_peak = (gn / (m * delta)) ** (1.0 / (m - 1))
            if phi(t_peak) < 0.0:
                raise NoRoot(
                    f"no fixed point: peak slack {phi(t_peak):.3e} < 0 for c = {c:.3e}"
                )
            t = _bisect(phi, 0.0, t_peak)

    scale = (c - delta * t ** m) / (gn * gn)
    return Tangent(v, scale * g.vec)
