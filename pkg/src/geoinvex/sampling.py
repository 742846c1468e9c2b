"""Sampling schemes and verdict assembly for the checkers.

Every checker sweeps a deterministic sample set (priority pairs, a grid,
then seeded uniform draws), records a margin per sample, and reduces the
sweep to a :class:`Verdict`: a status, the largest strength constant
delta_hat consistent with all samples, the worst margin, and the concrete
witness attaining it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .errors import DomainViolation
from .manifolds import Chart

VIOLATION_TOL = 1e-9


@dataclass(frozen=True)
class StrengthParams:
    """Strength constant delta >= 0 and order m >= 1 of the penalty term.

    delta = 0 recovers the plain (non-strong) versions of every class.
    """

    delta: float = 0.0
    m: int = 2

    def __post_init__(self):
        if self.delta < 0:
            raise ValueError("delta must be >= 0")
        if self.m < 1 or int(self.m) != self.m:
            raise ValueError("m must be a positive integer")


@dataclass(frozen=True)
class SampleScheme:
    """Deterministic sample plan for a box inside the chart domain.

    Pairs are enumerated in a fixed order: ``extra_pairs`` first, then all
    ordered grid x grid pairs, then ``random_pairs`` seeded uniform draws.
    The seed fully determines the random part, so identical schemes give
    identical verdicts including the witness.
    """

    box: Tuple[Tuple[float, float], ...] = ((0.5, 5.0), (0.5, 5.0))
    grid_points_per_axis: int = 9
    random_pairs: int = 1000
    seed: int = 7
    s_grid: Tuple[float, ...] = (0.1, 0.25, 0.5, 0.75, 0.9)
    extra_pairs: Tuple[Tuple[Tuple[float, ...], Tuple[float, ...]], ...] = ()

    def __post_init__(self):
        if self.grid_points_per_axis < 0:
            raise ValueError("grid_points_per_axis must be >= 0")
        if self.random_pairs < 0:
            raise ValueError("random_pairs must be >= 0")
        for lo, hi in self.box:
            if not (lo < hi):
                raise ValueError(f"degenerate box axis ({lo}, {hi})")

    @property
    def dim(self) -> int:
        return len(self.box)

    def validate_for(self, chart: Chart) -> None:
        if self.dim != chart.dim:
            raise DomainViolation(
                f"scheme box has {self.dim} axes, chart {chart.name} has dim {chart.dim}"
            )
        corners = [np.array(c) for c in self._corners()]
        for c in corners:
            if not chart.contains(c):
                raise DomainViolation(f"box corner {c.tolist()} outside {chart.name} domain")
        for u, v in self.extra_pairs:
            chart.require_point(np.asarray(u, float))
            chart.require_point(np.asarray(v, float))

    def _corners(self):
        lows = [lo for lo, _ in self.box]
        highs = [hi for _, hi in self.box]
        n = self.dim
        for mask in range(2 ** n):
            yield [highs[i] if (mask >> i) & 1 else lows[i] for i in range(n)]

    def grid(self) -> List[np.ndarray]:
        """Grid points of the box in C order (first axis slowest)."""
        g = self.grid_points_per_axis
        if g == 0:
            return []
        axes = [np.linspace(lo, hi, g) for lo, hi in self.box]
        mesh = np.meshgrid(*axes, indexing="ij")
        flat = np.stack([m.ravel() for m in mesh], axis=-1)
        return [flat[i].copy() for i in range(flat.shape[0])]

    def random_points(self, count: int) -> List[np.ndarray]:
        rng = np.random.default_rng(self.seed)
        lo = np.array([a for a, _ in self.box])
        hi = np.array([b for _, b in self.box])
        draws = rng.uniform(lo, hi, size=(count, self.dim))
        return [draws[i] for i in range(count)]

    def pairs(self) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
        """Ordered (u, v) pairs: extras, grid x grid, seeded random."""
        for u, v in self.extra_pairs:
            yield np.asarray(u, float), np.asarray(v, float)
        pts = self.grid()
        for u in pts:
            for v in pts:
                yield u, v
        rng = np.random.default_rng(self.seed)
        lo = np.array([a for a, _ in self.box])
        hi = np.array([b for _, b in self.box])
        for _ in range(self.random_pairs):
            draw = rng.uniform(lo, hi, size=(2, self.dim))
            yield draw[0], draw[1]

    def candidate_points(self) -> List[np.ndarray]:
        """Single points for minimizer / inequality scans: grid plus draws."""
        pts = [np.asarray(u, float) for u, _ in self.extra_pairs]
        pts += self.grid()
        pts += self.random_points(self.random_pairs)
        return pts

    def decimated(self, grid: int = 5, random_pairs: int = 200) -> "SampleScheme":
        """Cheaper copy used by auxiliary sweeps (slice checks, preconditions)."""
        return replace(
            self,
            grid_points_per_axis=min(self.grid_points_per_axis, grid) if self.grid_points_per_axis else 0,
            random_pairs=min(self.random_pairs, random_pairs),
        )


class Status(str, Enum):
    HOLDS = "holds"
    HOLDS_VACUOUSLY = "holds_vacuously"
    NOT_STRONG = "not_strong"
    VIOLATED = "violated"


@dataclass(frozen=True)
class Witness:
    """The concrete sample attaining the worst margin.

    ``denom`` is the coefficient of delta in the defining inequality at
    this sample (so the margin at strength delta is margin - delta*denom);
    it is None for delta-free checks.
    """

    u: Optional[Tuple[float, ...]]
    v: Optional[Tuple[float, ...]]
    s: Optional[float]
    margin: float
    denom: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "u": list(self.u) if self.u is not None else None,
            "v": list(self.v) if self.v is not None else None,
            "s": self.s,
            "margin": self.margin,
            "denom": self.denom,
        }


@dataclass(frozen=True)
class Verdict:
    status: Status
    delta_hat: Optional[float]
    worst_margin: Optional[float]
    witness: Optional[Witness]
    samples_evaluated: int
    degenerate_skipped: int

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "delta_hat": _json_float(self.delta_hat),
            "worst_margin": _json_float(self.worst_margin),
            "witness": self.witness.to_dict() if self.witness else None,
            "samples_evaluated": self.samples_evaluated,
            "degenerate_skipped": self.degenerate_skipped,
        }


def _json_float(x):
    if x is None:
        return None
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(x)


class VerdictBuilder:
    """Single-owner accumulator turning per-sample observations into a Verdict.

    Margin reduction is a plain min, so sweeps may be evaluated in any
    associative-safe order; ties keep the first sample seen.
    """

    def __init__(self, tol: float = VIOLATION_TOL, delta_free: bool = False):
        self.tol = tol
        self.delta_free = delta_free
        self.evaluated = 0
        self.skipped = 0
        self.fired = 0
        self._violated = False
        self._worst: Optional[float] = None
        self._witness: Optional[Witness] = None
        self._bound: Optional[float] = None

    def skip(self, n: int = 1) -> None:
        self.skipped += n

    def count(self, n: int = 1) -> None:
        """Count a sample that was evaluated but contributed no margin."""
        self.evaluated += n

    def add_bound(self, bound: float) -> None:
        """Register a delta upper bound from a sample that sets no margin.

        Used by implication checks whose antecedent depends on delta: a
        sample outside today's antecedent still caps how far delta can
        grow before the implication breaks.
        """
        self.evaluated += 1
        if self._bound is None or bound < self._bound:
            self._bound = bound

    def observe(
        self,
        margin: float,
        denom: Optional[float],
        u=None,
        v=None,
        s: Optional[float] = None,
        violated: Optional[bool] = None,
        bound: Optional[float] = None,
    ) -> None:
        self.evaluated += 1
        self.fired += 1
        if violated is None:
            violated = margin < -self.tol
        if violated:
            self._violated = True
        if self._worst is None or margin < self._worst:
            self._worst = margin
            self._witness = Witness(
                u=tuple(np.asarray(u, float).tolist()) if u is not None else None,
                v=tuple(np.asarray(v, float).tolist()) if v is not None else None,
                s=float(s) if s is not None else None,
                margin=float(margin),
                denom=float(denom) if denom is not None else None,
            )
        if bound is None and denom is not None and denom > 0.0:
            bound = margin / denom
        if bound is not None and (self._bound is None or bound < self._bound):
            self._bound = bound

    def verdict(self, vacuous_when_unfired: bool = False) -> Verdict:
        delta_hat: Optional[float]
        if self.delta_free:
            delta_hat = None
        elif self._bound is None:
            delta_hat = math.inf if self.fired or self.evaluated else 0.0
        else:
            delta_hat = max(0.0, self._bound)

        if self._violated:
            status = Status.VIOLATED
        elif self.fired == 0 and (vacuous_when_unfired or self.evaluated == 0):
            status = Status.HOLDS_VACUOUSLY
        elif self.delta_free:
            status = Status.HOLDS
        elif delta_hat is not None and delta_hat > self.tol:
            status = Status.HOLDS
        else:
            status = Status.NOT_STRONG

        return Verdict(
            status=status,
            delta_hat=delta_hat,
            worst_margin=self._worst,
            witness=self._witness,
            samples_evaluated=self.evaluated,
            degenerate_skipped=self.skipped,
        )
