"""Sampling-based verdicts for the generalized convexity classes.

Each checker evaluates its defining inequality on every sample of a
:class:`~geoinvex.sampling.SampleScheme` and estimates delta_hat, the
largest order-m strength constant consistent with all samples.  Estimates
are relative to the sampled box: some (h, eta) pairs admit no single
global constant because the eta norm blows up near the domain boundary
while the left-hand side stays bounded, so verdicts are always statements
about the scanned region.

The ``*_margins`` generators expose the raw per-sample sweeps for custom
analyses (and for re-verifying a verdict at a specific delta).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .errors import DomainViolation
from .eta import EtaMap, check_condition_C
from .fields import ScalarField
from .manifolds import Chart
from .sampling import SampleScheme, Status, Verdict, VerdictBuilder, VIOLATION_TOL


class GeodesicMode(str, Enum):
    """Which curve the chord inequality is evaluated along.

    ETA_GEODESIC uses r(s) = exp_v(s eta(u,v)), the curve emanating from v
    with initial velocity eta(u,v).  CONNECTING_FROM_V / CONNECTING_FROM_U
    use the geodesic joining the pair, parameterized from v or from u.
    The two families agree only when eta is the true displacement map, so
    all three are selectable.
    """

    ETA_GEODESIC = "eta"
    CONNECTING_FROM_V = "from_v"
    CONNECTING_FROM_U = "from_u"


@dataclass(frozen=True)
class PairSample:
    """One evaluated sample of a chord or first-order inequality."""

    u: np.ndarray
    v: np.ndarray
    s: Optional[float]
    margin: float
    denom: float


class _FieldCache:
    """Per-sweep memo for field values and gradient components.

    Grid pairs revisit the same points many times; keying on the raw
    coordinate bytes keeps sweeps linear in the number of distinct points.
    """

    def __init__(self, chart: Chart, h: ScalarField):
        self.chart = chart
        self.h = h
        self._vals: dict = {}
        self._grads: dict = {}

    def value(self, p: np.ndarray) -> float:
        key = p.tobytes()
        val = self._vals.get(key)
        if val is None:
            val = self.h(p)
            self._vals[key] = val
        return val

    def grad(self, p: np.ndarray) -> np.ndarray:
        key = p.tobytes()
        g = self._grads.get(key)
        if g is None:
            g = self.chart.gradient(self.h, p).vec
            self._grads[key] = g
        return g

    def dd(self, v: np.ndarray, w_components: np.ndarray) -> float:
        """Directional derivative <grad h(v), w>_v with the gradient memoized."""
        return self.chart.inner_at(v, self.grad(v), w_components)


def _curve_point(chart: Chart, mode: GeodesicMode, u, v, eta_c: np.ndarray, s: float):
    if mode is GeodesicMode.ETA_GEODESIC:
        return chart.exp_at(v, s * eta_c)
    if mode is GeodesicMode.CONNECTING_FROM_V:
        return chart.exp_at(v, s * chart.log_at(v, u))
    return chart.exp_at(u, s * chart.log_at(u, v))


def preinvexity_margins(
    chart: Chart,
    h: ScalarField,
    e: EtaMap,
    m: int,
    scheme: SampleScheme,
    mode: GeodesicMode = GeodesicMode.ETA_GEODESIC,
) -> Iterator[PairSample]:
    """Per-sample margins of the order-m chord inequality.

    margin = s h(u) + (1-s) h(v) - h(r(s));  denom = s(1-s) |eta(u,v)|_v^m.
    The inequality at strength delta demands margin >= delta * denom.
    Samples with |eta| = 0 or s(1-s) = 0 are degenerate and not yielded.
    """
    scheme.validate_for(chart)
    cache = _FieldCache(chart, h)
    for u, v in scheme.pairs():
        eta_c = e.components(u, v)
        eta_norm = chart.norm_at(v, eta_c)
        if eta_norm == 0.0:
            continue
        hu, hv = cache.value(u), cache.value(v)
        # the connecting-geodesic modes reuse one log per pair
        log_c = None
        if mode is not GeodesicMode.ETA_GEODESIC:
            log_c = (
                chart.log_at(v, u)
                if mode is GeodesicMode.CONNECTING_FROM_V
                else chart.log_at(u, v)
            )
            base = v if mode is GeodesicMode.CONNECTING_FROM_V else u
        for s in scheme.s_grid:
            w = s * (1.0 - s)
            if w <= 0.0:
                continue
            try:
                if log_c is None:
                    r_s = chart.exp_at(v, s * eta_c)
                else:
                    r_s = chart.exp_at(base, s * log_c)
            except DomainViolation:
                continue
            margin = s * hu + (1.0 - s) * hv - h(r_s)
            yield PairSample(u, v, float(s), margin, w * eta_norm ** m)


def check_strongly_preinvex(
    chart: Chart,
    h: ScalarField,
    e: EtaMap,
    m: int,
    scheme: SampleScheme,
    mode: GeodesicMode = GeodesicMode.ETA_GEODESIC,
    tol: float = VIOLATION_TOL,
) -> Verdict:
    """Order-m chord inequality h(r(s)) <= s h(u) + (1-s) h(v) - delta s(1-s)|eta|^m."""
    scheme.validate_for(chart)
    mode = GeodesicMode(mode)
    cache = _FieldCache(chart, h)
    b = VerdictBuilder(tol=tol)
    for u, v in scheme.pairs():
        eta_c = e.components(u, v)
        eta_norm = chart.norm_at(v, eta_c)
        if eta_norm == 0.0:
            b.skip(len(scheme.s_grid))
            continue
        hu, hv = cache.value(u), cache.value(v)
        for s in scheme.s_grid:
            w = s * (1.0 - s)
            if w <= 0.0:
                b.skip()
                continue
            try:
                r_s = _curve_point(chart, mode, u, v, eta_c, s)
            except DomainViolation:
                # the eta-geodesic can underflow past the chart floor for
                # steep maps; such samples carry no evaluable inequality
                b.skip()
                continue
            margin = s * hu + (1.0 - s) * hv - h(r_s)
            b.observe(margin, w * eta_norm ** m, u=u, v=v, s=s)
    return b.verdict()


def check_strongly_geodesic_convex(
    chart: Chart,
    h: ScalarField,
    m: int,
    scheme: SampleScheme,
    tol: float = VIOLATION_TOL,
) -> Verdict:
    """Chord inequality along connecting geodesics with penalty |r'(s)|^m.

    With the displacement map u - v on flat space this coincides with
    :func:`check_strongly_preinvex` in CONNECTING_FROM_V mode, since
    |r'(s)| is constant and equals |u - v|.
    """
    scheme.validate_for(chart)
    cache = _FieldCache(chart, h)
    b = VerdictBuilder(tol=tol)
    for u, v in scheme.pairs():
        log_c = chart.log_at(v, u)
        speed = chart.norm_at(v, log_c)
        hu, hv = cache.value(u), cache.value(v)
        for s in scheme.s_grid:
            w = s * (1.0 - s)
            if speed == 0.0 or w <= 0.0:
                b.skip()
                continue
            margin = s * hu + (1.0 - s) * hv - h(chart.exp_at(v, s * log_c))
            b.observe(margin, w * speed ** m, u=u, v=v, s=s)
    return b.verdict()


def invexity_margins(
    chart: Chart,
    h: ScalarField,
    e: EtaMap,
    m: int,
    scheme: SampleScheme,
) -> Iterator[PairSample]:
    """Per-sample margins of the first-order lower bound.

    margin = h(u) - h(v) - dh_v(eta(u,v));  denom = |eta(u,v)|_v^m.
    Pairs with |eta| = 0 are degenerate and not yielded.
    """
    scheme.validate_for(chart)
    cache = _FieldCache(chart, h)
    for u, v in scheme.pairs():
        eta_c = e.components(u, v)
        eta_norm = chart.norm_at(v, eta_c)
        if eta_norm == 0.0:
            continue
        dd = cache.dd(v, eta_c)
        yield PairSample(u, v, None, cache.value(u) - cache.value(v) - dd, eta_norm ** m)


def check_strongly_eta_invex(
    chart: Chart,
    h: ScalarField,
    e: EtaMap,
    m: int,
    scheme: SampleScheme,
    tol: float = VIOLATION_TOL,
) -> Verdict:
    """First-order bound h(u) >= h(v) + dh_v(eta(u,v)) + delta |eta(u,v)|_v^m."""
    scheme.validate_for(chart)
    cache = _FieldCache(chart, h)
    b = VerdictBuilder(tol=tol)
    for u, v in scheme.pairs():
        eta_c = e.components(u, v)
        eta_norm = chart.norm_at(v, eta_c)
        if eta_norm == 0.0:
            b.skip()
            continue
        dd = cache.dd(v, eta_c)
        b.observe(cache.value(u) - cache.value(v) - dd, eta_norm ** m, u=u, v=v)
    return b.verdict()


class GeneralizedKind(str, Enum):
    PSEUDO1 = "pseudo1"
    PSEUDO2 = "pseudo2"
    QUASI1 = "quasi1"
    QUASI2 = "quasi2"


def check_generalized_invex(
    chart: Chart,
    h: ScalarField,
    e: EtaMap,
    m: int,
    kind: GeneralizedKind,
    scheme: SampleScheme,
    tol: float = VIOLATION_TOL,
) -> Verdict:
    """Implication-style classes built from dh := dh_v(eta(u,v)) and |eta|_v^m.

    pseudo1:  dh >= 0                  =>  h(u) >= h(v) + delta |eta|^m
    pseudo2:  dh + delta |eta|^m >= 0  =>  h(u) >= h(v)
    quasi1:   h(u) <= h(v)             =>  dh + delta |eta|^m <= 0
    quasi2:   h(u) <= h(v) + delta |eta|^m  =>  dh <= 0

    Margins and violations are taken at delta = 0; delta_hat is the
    largest delta for which no antecedent-satisfying sample violates its
    consequent.  When the delta = 0 antecedent never fires the verdict is
    HOLDS_VACUOUSLY.  Pairs with |eta| = 0 are skipped as degenerate.
    """
    kind = GeneralizedKind(kind)
    scheme.validate_for(chart)
    cache = _FieldCache(chart, h)
    b = VerdictBuilder(tol=tol)
    for u, v in scheme.pairs():
        eta_c = e.components(u, v)
        eta_norm = chart.norm_at(v, eta_c)
        if eta_norm == 0.0:
            b.skip()
            continue
        denom = eta_norm ** m
        dd = cache.dd(v, eta_c)
        gap = cache.value(u) - cache.value(v)

        if kind is GeneralizedKind.PSEUDO1:
            if dd >= 0.0:
                b.observe(gap, denom, u=u, v=v)
            else:
                b.count()
        elif kind is GeneralizedKind.PSEUDO2:
            fired0 = dd >= 0.0
            consequent_false = gap < -tol
            if fired0:
                b.observe(gap, None, u=u, v=v, violated=consequent_false)
            elif consequent_false:
                # keep the antecedent off: delta |eta|^m must stay below -dh
                b.add_bound(-dd / denom)
            else:
                b.count()
        elif kind is GeneralizedKind.QUASI1:
            if gap <= tol:
                b.observe(-dd, denom, u=u, v=v)
            else:
                b.count()
        else:  # QUASI2
            fired0 = gap <= tol
            consequent_false = dd > tol
            if fired0:
                b.observe(-dd, None, u=u, v=v, violated=consequent_false)
            elif consequent_false:
                b.add_bound(gap / denom)
            else:
                b.count()
    return b.verdict(vacuous_when_unfired=True)


# -- combination and equivalence checks -----------------------------------


@dataclass(frozen=True)
class ClosureReport:
    """Closure of the class under positive combinations and pointwise max."""

    member_verdicts: Tuple[Verdict, ...]
    applicable: bool
    sum_delta: float
    sum_violations: int
    max_delta: float
    max_violations: int

    @property
    def consistent(self) -> bool:
        return self.applicable and self.sum_violations == 0 and self.max_violations == 0


def check_closure_theorems(
    chart: Chart,
    family: Sequence[ScalarField],
    weights: Sequence[float],
    e: EtaMap,
    m: int,
    scheme: SampleScheme,
    mode: GeodesicMode = GeodesicMode.ETA_GEODESIC,
    tol: float = VIOLATION_TOL,
) -> ClosureReport:
    """Closure of strong preinvexity under weighted sums and pointwise max.

    Each member is checked first; with member constants d_j, the weighted
    sum must satisfy its chord inequality at delta = sum(a_j d_j) and the
    pointwise max at delta = min(d_j), with zero violations on the same
    samples.  Not applicable when a member fails to hold with d_j > 0.
    """
    if len(family) != len(weights) or not family:
        raise ValueError("family and weights must be nonempty and equally long")
    if any(a <= 0 for a in weights):
        raise ValueError("weights must be positive")
    members = tuple(
        check_strongly_preinvex(chart, h, e, m, scheme, mode, tol) for h in family
    )
    if any(vd.status is not Status.HOLDS for vd in members):
        return ClosureReport(members, False, 0.0, 0, 0.0, 0)

    deltas = [vd.delta_hat for vd in members]
    sum_delta = float(sum(a * d for a, d in zip(weights, deltas)))
    max_delta = float(min(deltas))

    def weighted(u):
        return sum(a * h(u) for a, h in zip(weights, family))

    def pointwise_max(u):
        return max(h(u) for h in family)

    sum_field = ScalarField(weighted, label="weighted_sum")
    max_field = ScalarField(pointwise_max, label="pointwise_max")

    sum_viol = sum(
        1
        for smp in preinvexity_margins(chart, sum_field, e, m, scheme, mode)
        if smp.margin - sum_delta * smp.denom < -tol
    )
    max_viol = sum(
        1
        for smp in preinvexity_margins(chart, max_field, e, m, scheme, mode)
        if smp.margin - max_delta * smp.denom < -tol
    )
    return ClosureReport(members, True, sum_delta, sum_viol, max_delta, max_viol)


@dataclass(frozen=True)
class InfimalReport:
    """Inf-projection of a bivariate field, with its component and joint checks."""

    component_u: Verdict
    component_v: Verdict
    joint: Verdict
    psi: Verdict
    applicable: bool


def check_infimal_preinvex(
    chart: Chart,
    F: Callable[[np.ndarray, np.ndarray], float],
    e: EtaMap,
    m: int,
    scheme: SampleScheme,
    mode: GeodesicMode = GeodesicMode.ETA_GEODESIC,
    tol: float = VIOLATION_TOL,
) -> InfimalReport:
    """Strong preinvexity of Psi(u) = min_v F(u, v) over the sampled v-grid.

    Component checks run on slices F(., v0) and F(u0, .) for a decimated
    set of frozen points.  The joint check samples product-space pairs and
    uses the product-norm convention |(a, b)|^m = |a|^m + |b|^m for the
    penalty.  Psi is then checked like any scalar field; it is applicable
    only when the component checks hold.
    """
    scheme.validate_for(chart)
    small = scheme.decimated(grid=5, random_pairs=200)
    anchors = scheme.decimated(grid=3, random_pairs=0).grid() or scheme.grid()[:1]

    def slice_verdict(fix_second: bool) -> Verdict:
        worst: Optional[Verdict] = None
        for p0 in anchors:
            h = ScalarField(
                (lambda u, _p=p0: F(u, _p)) if fix_second else (lambda v, _p=p0: F(_p, v)),
                label="slice",
            )
            vd = check_strongly_preinvex(chart, h, e, m, small, mode, tol)
            if worst is None or _severity(vd.status) > _severity(worst.status):
                worst = vd
            elif (
                _severity(vd.status) == _severity(worst.status)
                and vd.delta_hat is not None
                and worst.delta_hat is not None
                and vd.delta_hat < worst.delta_hat
            ):
                worst = vd
        return worst

    component_u = slice_verdict(fix_second=True)
    component_v = slice_verdict(fix_second=False)

    joint = _joint_product_verdict(chart, F, e, m, small, mode, tol)

    # Psi costs |v_grid| field evaluations per point, so its sweep runs on
    # the decimated scheme with the decimated grid as the inf domain.
    v_grid = small.grid() or scheme.random_points(32)
    psi_field = ScalarField(
        lambda u: min(F(u, v0) for v0 in v_grid), label="inf_projection"
    )
    psi = check_strongly_preinvex(chart, psi_field, e, m, small, mode, tol)
    applicable = (
        component_u.status is Status.HOLDS and component_v.status is Status.HOLDS
    )
    return InfimalReport(component_u, component_v, joint, psi, applicable)


def _severity(status: Status) -> int:
    order = {
        Status.HOLDS: 0,
        Status.HOLDS_VACUOUSLY: 1,
        Status.NOT_STRONG: 2,
        Status.VIOLATED: 3,
    }
    return order[status]


def _joint_product_verdict(chart, F, e, m, scheme, mode, tol) -> Verdict:
    pts = scheme.decimated(grid=3, random_pairs=0).grid()
    product_points = [(a, b) for a in pts for b in pts]
    rng_pts = scheme.random_points(min(scheme.random_pairs, 50))
    for i in range(0, len(rng_pts) - 1, 2):
        product_points.append((rng_pts[i], rng_pts[i + 1]))
    b = VerdictBuilder(tol=tol)
    for (u0, v0) in product_points:
        for (u1, v1) in product_points:
            eta_u = e.components(u0, u1)
            eta_v = e.components(v0, v1)
            denom0 = chart.norm_at(u1, eta_u) ** m + chart.norm_at(v1, eta_v) ** m
            if denom0 == 0.0:
                b.skip(len(scheme.s_grid))
                continue
            f1 = F(u0, v0)
            f0 = F(u1, v1)
            for s in scheme.s_grid:
                w = s * (1.0 - s)
                if w <= 0.0:
                    b.skip()
                    continue
                try:
                    ru = _curve_point(chart, mode, u0, u1, eta_u, s)
                    rv = _curve_point(chart, mode, v0, v1, eta_v, s)
                except DomainViolation:
                    b.skip()
                    continue
                margin = s * f1 + (1.0 - s) * f0 - F(ru, rv)
                b.observe(margin, w * denom0, u=np.concatenate([u0, v0]), v=np.concatenate([u1, v1]), s=s)
    return b.verdict()


@dataclass(frozen=True)
class PreinvexInvexReport:
    """Both first-order and chord checks on identical samples, with flags."""

    preinvex: Verdict
    invex: Verdict
    condition_c_satisfied: bool
    condition_c_max_residual: float
    flags: Tuple[str, ...]

    @property
    def consistent(self) -> bool:
        return not self.flags


THEOREM_INCONSISTENT = "THEOREM-INCONSISTENT"


def cross_check_preinvex_invex(
    chart: Chart,
    h: ScalarField,
    e: EtaMap,
    m: int,
    scheme: SampleScheme,
    tol: float = VIOLATION_TOL,
) -> PreinvexInvexReport:
    """Chord inequality (eta-geodesic mode) versus the first-order bound.

    A chord verdict that holds with positive delta forces the first-order
    bound, so preinvex HOLDS with invex VIOLATED is flagged.  The converse
    implication needs conditions C1/C2, so invex HOLDS with preinvex
    VIOLATED is flagged only when those residuals vanish on the sampled
    pairs.
    """
    pre = check_strongly_preinvex(chart, h, e, m, scheme, GeodesicMode.ETA_GEODESIC, tol)
    inv = check_strongly_eta_invex(chart, h, e, m, scheme, tol)

    # C1/C2 residuals decide the converse direction; a decimated grid is
    # enough to separate "identically zero" from "order-one mismatch".
    # A pair whose eta-geodesic exits the chart leaves the identities
    # unverified, which conservatively disables the converse flag.
    worst_resid = 0.0
    unverifiable = False
    small = scheme.decimated(grid=5, random_pairs=0)
    pts = small.grid()
    pairs = list(small.extra_pairs) + [(u, v) for u in pts for v in pts]
    for u, v in pairs:
        try:
            rep = check_condition_C(
                chart, e, np.asarray(u, float), np.asarray(v, float), scheme.s_grid, tol
            )
        except DomainViolation:
            unverifiable = True
            break
        worst_resid = max(worst_resid, rep.max_residual)
    c_ok = (not unverifiable) and worst_resid <= tol

    flags: List[str] = []
    if pre.status is Status.HOLDS and inv.status is Status.VIOLATED:
        flags.append(f"{THEOREM_INCONSISTENT}: chord holds but first-order bound violated")
    if c_ok and inv.status is Status.HOLDS and pre.status is Status.VIOLATED:
        flags.append(
            f"{THEOREM_INCONSISTENT}: first-order bound holds under C1/C2 but chord violated"
        )
    return PreinvexInvexReport(pre, inv, c_ok, worst_resid, tuple(flags))
