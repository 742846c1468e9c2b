"""Strict eta-minimizers, variational-like inequality solutions, and the
grid scan comparing the two solution sets.

All solution sets here are grid relative: a point is a "minimizer" when no
sampled candidate dominates it.  The scan classifies every grid point by
both predicates and lists disagreements with full witnesses; under the
first-order invexity hypothesis the two sets must coincide.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from .eta import EtaMap, eval_eta
from .fields import ScalarField
from .invexity import check_strongly_eta_invex
from .manifolds import Chart
from .sampling import (
    SampleScheme,
    Status,
    StrengthParams,
    Verdict,
    VerdictBuilder,
    VIOLATION_TOL,
)


class DominanceMode(str, Enum):
    """Reading of the componentwise strict order between objective vectors.

    STRICT: a dominates b when every component of a is strictly smaller.
    PARETO: every component <= with at least one strictly smaller.  STRICT
    is the default; PARETO is provided for sensitivity checks.
    """

    STRICT = "strict"
    PARETO = "pareto"


@dataclass(frozen=True)
class MopProblem:
    """Vector objective H = (h_1, ..., h_k) with an eta map and strength."""

    chart: Chart
    objectives: Tuple[ScalarField, ...]
    eta: EtaMap
    strength: StrengthParams = StrengthParams()

    def __post_init__(self):
        if not self.objectives:
            raise ValueError("at least one objective is required")

    @property
    def k(self) -> int:
        return len(self.objectives)

    def values(self, u) -> np.ndarray:
        return np.array([h(u) for h in self.objectives])


def _dominates_at_zero(c: np.ndarray, mode: DominanceMode, tol: float) -> bool:
    if mode is DominanceMode.STRICT:
        return bool(np.max(c) < -tol)
    return bool(np.max(c) <= tol and np.min(c) < -tol)


def check_strict_minimizer(
    p: MopProblem,
    u_star,
    scheme: SampleScheme,
    locality: Optional[float] = None,
    mode: DominanceMode = DominanceMode.STRICT,
    tol: float = VIOLATION_TOL,
) -> Verdict:
    """Is u_star a (local) strict eta-minimizer of order m on the sampled box?

    A candidate u dominates at strength delta when
    H(u) < H(u_star) + delta |eta(u, u_star)|^m componentwise.  The margin
    per candidate is max_i (h_i(u) - h_i(u_star)); a negative margin means
    domination already at delta = 0 and the verdict is VIOLATED with that
    witness.  Otherwise delta_hat is the largest cushion no candidate can
    exploit.  With ``locality`` the candidates are restricted to the
    metric ball of that radius around u_star.
    """
    mode = DominanceMode(mode)
    scheme.validate_for(p.chart)
    u_star = p.chart.require_point(u_star)
    h_star = p.values(u_star)
    m = p.strength.m
    b = VerdictBuilder(tol=tol)
    for u in scheme.candidate_points():
        if locality is not None and p.chart.distance(u, u_star) > locality:
            continue
        eta_n = p.chart.norm(eval_eta(p.chart, p.eta, u, u_star))
        c = p.values(u) - h_star
        worst = float(np.max(c))
        if eta_n == 0.0:
            if _dominates_at_zero(c, mode, tol):
                b.observe(worst, None, u=u, v=u_star, violated=True)
            else:
                b.skip()
            continue
        b.observe(
            worst,
            eta_n ** m,
            u=u,
            v=u_star,
            violated=_dominates_at_zero(c, mode, tol),
        )
    return b.verdict()


def check_vvlip_solution(
    p: MopProblem,
    u_star,
    scheme: SampleScheme,
    mode: DominanceMode = DominanceMode.STRICT,
    tol: float = VIOLATION_TOL,
) -> Verdict:
    """Does <grad h_i(u_star), eta(u, u_star)> avoid componentwise negativity?

    u_star solves the inequality problem when no sampled u makes every
    pairing strictly negative (STRICT mode; PARETO reads the order as
    <= with one <).  Delta-free: delta_hat is None.
    """
    mode = DominanceMode(mode)
    scheme.validate_for(p.chart)
    u_star = p.chart.require_point(u_star)
    grads = [p.chart.gradient(h, u_star) for h in p.objectives]
    b = VerdictBuilder(tol=tol, delta_free=True)
    for u in scheme.candidate_points():
        eta_u = eval_eta(p.chart, p.eta, u, u_star)
        pairings = np.array(
            [p.chart.metric_inner(u_star, g, eta_u) for g in grads]
        )
        b.observe(
            float(np.max(pairings)),
            None,
            u=u,
            v=u_star,
            violated=_dominates_at_zero(pairings, mode, tol),
        )
    return b.verdict()


@dataclass(frozen=True)
class ScanResult:
    """Classification of every grid point by both predicates."""

    grid: Tuple[Tuple[float, ...], ...]
    minimizer_set: Tuple[int, ...]
    vvlip_set: Tuple[int, ...]
    disagreements: Tuple[dict, ...]
    applicable: bool
    invexity_verdicts: Tuple[Verdict, ...]

    @property
    def consistent(self) -> bool:
        return self.applicable and not self.disagreements

    def to_dict(self) -> dict:
        return {
            "applicable": self.applicable,
            "grid_size": len(self.grid),
            "minimizer_set": [list(self.grid[i]) for i in self.minimizer_set],
            "vvlip_set": [list(self.grid[i]) for i in self.vvlip_set],
            "disagreements": list(self.disagreements),
        }


def scan_equivalence(
    p: MopProblem,
    grid_scheme: SampleScheme,
    mode: DominanceMode = DominanceMode.STRICT,
    tol: float = VIOLATION_TOL,
) -> ScanResult:
    """Compare the grid minimizer set with the grid inequality-solution set.

    Every grid point is classified twice, each time against the full grid
    as candidates; the two predicates share one eta evaluation per ordered
    pair.  The scan presupposes all objectives are strongly eta-invex of
    order m on the box (checked first on a decimated scheme); when that
    fails the result is marked not applicable rather than interpreted.
    """
    mode = DominanceMode(mode)
    grid_scheme.validate_for(p.chart)
    pre_scheme = grid_scheme.decimated(grid=9, random_pairs=200)
    invex_verdicts = tuple(
        check_strongly_eta_invex(p.chart, h, p.eta, p.strength.m, pre_scheme, tol)
        for h in p.objectives
    )
    applicable = all(vd.status is Status.HOLDS for vd in invex_verdicts)

    grid = grid_scheme.grid()
    point_scheme = SampleScheme(
        box=grid_scheme.box,
        grid_points_per_axis=grid_scheme.grid_points_per_axis,
        random_pairs=0,
        seed=grid_scheme.seed,
        s_grid=grid_scheme.s_grid,
    )
    minimizer: List[int] = []
    vvlip: List[int] = []
    if applicable:
        grid_arr = np.array(grid)
        values = np.array([p.values(u) for u in grid])  # (n, k)
        m = p.strength.m
        for j, u_star in enumerate(grid):
            u_star = p.chart.require_point(u_star)
            grads = [p.chart.gradient(h, u_star) for h in p.objectives]
            etas = p.eta.components_many(grid_arr, u_star)  # (n, dim)
            eta_norms = p.chart.norm_many(u_star, etas)
            c = values - values[j]  # (n, k)
            c_max = c.max(axis=1)
            c_min = c.min(axis=1)
            if mode is DominanceMode.STRICT:
                dominated = c_max < -tol
            else:
                dominated = (c_max <= tol) & (c_min < -tol)
            positive = eta_norms > 0.0
            bounds = c_max[positive] / eta_norms[positive] ** m
            in_min = (
                not bool(dominated.any())
                and bounds.size > 0
                and float(bounds.min()) > tol
            )
            pairings = np.stack(
                [p.chart.inner_many(u_star, etas, np.broadcast_to(g.vec, etas.shape)) for g in grads],
                axis=1,
            )  # (n, k)
            p_max = pairings.max(axis=1)
            p_min = pairings.min(axis=1)
            if mode is DominanceMode.STRICT:
                neg = p_max < -tol
            else:
                neg = (p_max <= tol) & (p_min < -tol)
            if in_min:
                minimizer.append(j)
            if not bool(neg.any()):
                vvlip.append(j)

    disagreements = []
    for i in sorted(set(minimizer) ^ set(vvlip)):
        side = "minimizer" if i in minimizer else "vvlip"
        other = "vvlip" if side == "minimizer" else "minimizer"
        if side == "minimizer":
            vd = check_vvlip_solution(p, grid[i], point_scheme, mode, tol)
        else:
            vd = check_strict_minimizer(p, grid[i], point_scheme, None, mode, tol)
        disagreements.append(
            {
                "point": list(np.asarray(grid[i]).tolist()),
                "claimed_by": side,
                "rejected_by": other,
                "witness": vd.witness.to_dict() if vd.witness else None,
            }
        )
    return ScanResult(
        grid=tuple(tuple(np.asarray(g).tolist()) for g in grid),
        minimizer_set=tuple(minimizer),
        vvlip_set=tuple(vvlip),
        disagreements=tuple(disagreements),
        applicable=applicable,
        invexity_verdicts=invex_verdicts,
    )
