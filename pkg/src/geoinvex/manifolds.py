"""Closed-form Riemannian geometry for the two built-in charts.

Both charts are global coordinate charts with explicit geodesics,
exponential map, parallel transport, and distance:

* :class:`PositiveOrthant2` -- the open positive quadrant of R^2 with the
  diagonal metric g_ij(u) = delta_ij / (u_i u_j).  The coordinate-wise
  logarithm w_i = ln(u_i) is an isometry onto flat R^2, which is where
  every closed form below comes from: geodesics are exponentials of
  straight lines in w, and parallel transport along any curve from u to w
  rescales components by w_i / u_i.
* :class:`Euclidean` -- flat R^n with the identity metric.

All operations are pure functions of their arguments; the value types are
immutable, so everything here is safe to evaluate concurrently.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import BasePointMismatch, DomainViolation
from .fields import ScalarField

# Base points within this absolute distance are treated as identical when
# validating tangent-vector combinations.
_BASE_ATOL = 1e-12

# Central-difference step for gradient fallbacks: 1e-6 * max(1, |p|).
_FD_SCALE = 1e-6


def _as_point(p) -> np.ndarray:
    return np.asarray(p, dtype=float)


def same_point(a, b, atol: float = _BASE_ATOL) -> bool:
    a = _as_point(a)
    b = _as_point(b)
    return a.shape == b.shape and bool(np.all(np.abs(a - b) <= atol))


@dataclass(frozen=True)
class Tangent:
    """Tangent vector: components attached to a base point."""

    base: np.ndarray
    vec: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "base", _as_point(self.base))
        object.__setattr__(self, "vec", _as_point(self.vec))
        if self.base.shape != self.vec.shape:
            raise BasePointMismatch(
                f"component shape {self.vec.shape} != base shape {self.base.shape}"
            )

    def scaled(self, t: float) -> "Tangent":
        return Tangent(self.base, t * self.vec)


class Chart:
    """Common interface of the built-in charts."""

    name: str
    dim: int

    # -- domain ---------------------------------------------------------

    def contains(self, p) -> bool:
        raise NotImplementedError

    def require_point(self, p) -> np.ndarray:
        p = _as_point(p)
        if p.shape != (self.dim,):
            raise DomainViolation(f"{self.name}: expected {self.dim} coordinates, got {p.shape}")
        if not self.contains(p):
            raise DomainViolation(f"{self.name}: point {p.tolist()} outside chart domain")
        return p

    def tangent(self, p, vec) -> Tangent:
        return Tangent(self.require_point(p), vec)

    # -- metric ---------------------------------------------------------

    def metric_inner(self, p, x: Tangent, y: Tangent) -> float:
        """Inner product <x, y>_p of two tangent vectors based at p."""
        p = self.require_point(p)
        for t in (x, y):
            if not same_point(t.base, p):
                raise BasePointMismatch(
                    f"tangent based at {t.base.tolist()} used at point {p.tolist()}"
                )
        return self._inner(p, x.vec, y.vec)

    def norm(self, x: Tangent) -> float:
        """Metric length of a tangent vector at its own base point."""
        p = self.require_point(x.base)
        return math.sqrt(max(self._inner(p, x.vec, x.vec), 0.0))

    def _inner(self, p: np.ndarray, xv: np.ndarray, yv: np.ndarray) -> float:
        raise NotImplementedError

    def inner_many(self, p, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Row-wise inner products <A_i, B_i>_p.

        Fast path for grid scans: p is assumed to be a valid point and the
        rows to be component arrays of tangents based at p.
        """
        p = _as_point(p)
        return self._inner_many(p, np.asarray(A, float), np.asarray(B, float))

    def norm_many(self, p, A: np.ndarray) -> np.ndarray:
        """Row-wise metric norms at p (unchecked fast path)."""
        return np.sqrt(np.maximum(self.inner_many(p, A, A), 0.0))

    def _inner_many(self, p: np.ndarray, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    # Unchecked component-level fast paths for inner sweep loops.  Inputs
    # are assumed to be valid points / component arrays of the right shape;
    # exp_at still guards its output because the orthant exponential can
    # overflow out of the domain.

    def inner_at(self, p, xc, yc) -> float:
        return self._inner(p, xc, yc)

    def norm_at(self, p, xc) -> float:
        return math.sqrt(max(self._inner(p, xc, xc), 0.0))

    def exp_at(self, p, xc) -> np.ndarray:
        q = self._exp(p, xc)
        if not self.contains(q):
            raise DomainViolation(
                f"{self.name}: exp at {np.asarray(p).tolist()} left the chart domain"
            )
        return q

    def log_at(self, a, b) -> np.ndarray:
        return self._log(a, b)

    def transport_at(self, p, q, xc) -> np.ndarray:
        return self._transport(p, q, xc)

    # -- geodesics ------------------------------------------------------

    def exp_map(self, x: Tangent) -> np.ndarray:
        """Point reached at parameter 1 along the geodesic with initial velocity x."""
        p = self.require_point(x.base)
        q = self._exp(p, x.vec)
        return self.require_point(q)

    def log_map(self, a, b) -> Tangent:
        """Initial velocity of the connecting geodesic: exp_a(log_map(a,b)) = b."""
        a = self.require_point(a)
        b = self.require_point(b)
        return Tangent(a, self._log(a, b))

    def geodesic(self, x: Tangent) -> "Geodesic":
        """Geodesic r with r(0) = x.base and r'(0) = x."""
        return Geodesic(self, self.require_point(x.base), x)

    def connecting_geodesic(self, a, b) -> "Geodesic":
        """The unique geodesic with r(0) = a and r(1) = b."""
        return self.geodesic(self.log_map(a, b))

    def parallel_transport(self, g: "Geodesic", t0: float, t1: float, x: Tangent) -> Tangent:
        """Transport x from g(t0) to g(t1) along g.

        For both built-in charts transport is path independent, so this
        delegates to the point-to-point form after validating the base.
        """
        p0, _ = g.eval(t0)
        if not same_point(x.base, p0):
            raise BasePointMismatch(
                f"tangent based at {x.base.tolist()} is not attached to g({t0}) = {p0.tolist()}"
            )
        p1, _ = g.eval(t1)
        return self.transport(x, p1)

    def transport(self, x: Tangent, to_point) -> Tangent:
        """Point-to-point parallel transport (path independent on these charts)."""
        p = self.require_point(x.base)
        q = self.require_point(to_point)
        return Tangent(q, self._transport(p, q, x.vec))

    def distance(self, a, b) -> float:
        a = self.require_point(a)
        b = self.require_point(b)
        return self._distance(a, b)

    def _exp(self, p: np.ndarray, xv: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _log(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _transport(self, p: np.ndarray, q: np.ndarray, xv: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _distance(self, a: np.ndarray, b: np.ndarray) -> float:
        raise NotImplementedError

    # -- gradients ------------------------------------------------------

    def gradient(self, h: ScalarField, p) -> Tangent:
        """Metric gradient of h at p.

        The gradient G is the unique tangent with <G, w>_p equal to the
        directional derivative of h along w for every w.  Euclidean
        partials are taken from ``h.partials`` when available, otherwise
        from central finite differences with step 1e-6 * max(1, |p|).
        """
        p = self.require_point(p)
        if h.partials is not None:
            d = np.asarray(h.partials(p), dtype=float)
        else:
            d = self._fd_partials(h, p)
        return Tangent(p, self._raise_index(p, d))

    def _fd_partials(self, h: ScalarField, p: np.ndarray) -> np.ndarray:
        step = _FD_SCALE * max(1.0, float(np.linalg.norm(p)))
        d = np.zeros(self.dim)
        for i in range(self.dim):
            e = np.zeros(self.dim)
            e[i] = step
            d[i] = (h(p + e) - h(p - e)) / (2.0 * step)
        return d

    def _raise_index(self, p: np.ndarray, partials: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __repr__(self):
        return f"{self.name}(dim={self.dim})"


@dataclass(frozen=True)
class Geodesic:
    """Geodesic determined by a start point and an initial velocity.

    ``interval`` is descriptive; evaluation is defined for every real t on
    both built-in charts (they are geodesically complete).
    """

    chart: Chart
    start: np.ndarray
    velocity: Tangent
    interval: Tuple[float, float] = (0.0, 1.0)

    def position(self, t: float) -> np.ndarray:
        return self.chart.exp_map(self.velocity.scaled(t))

    def eval(self, t: float) -> Tuple[np.ndarray, Tangent]:
        """Position r(t) and velocity r'(t).

        The velocity of a geodesic is the parallel transport of its
        initial velocity, which is what makes |r'(t)| constant.
        """
        pos = self.position(t)
        vel = self.chart.transport(self.velocity, pos)
        return pos, vel

    def __call__(self, t: float) -> Tuple[np.ndarray, Tangent]:
        return self.eval(t)


class PositiveOrthant2(Chart):
    """Open positive quadrant of R^2 with metric g_ij(u) = delta_ij/(u_i u_j).

    Closed forms (from the log-coordinate isometry w = ln u):

    * exp_u(x)   = (u_1 e^{x_1/u_1}, u_2 e^{x_2/u_2})
    * r(s) from a to b = (a_1 (b_1/a_1)^s, a_2 (b_2/a_2)^s)
    * transport u -> w: x_i -> (w_i/u_i) x_i   (any curve)
    * d(a, b)    = |(ln(b_1/a_1), ln(b_2/a_2))|
    * grad h(u)  = (u_1^2 dh/du_1, u_2^2 dh/du_2)
    """

    name = "positive_orthant2"
    dim = 2

    # The metric blows up at the boundary; keep a strictly positive floor
    # so exp(x/u) stays finite.
    _FLOOR = 1e-12

    def contains(self, p) -> bool:
        p = _as_point(p)
        return bool(np.all(np.isfinite(p)) and np.all(p >= self._FLOOR))

    def _inner(self, p, xv, yv) -> float:
        return float(np.sum(xv * yv / (p * p)))

    def _inner_many(self, p, A, B) -> np.ndarray:
        return np.sum(A * B / (p * p), axis=1)

    def _exp(self, p, xv) -> np.ndarray:
        return p * np.exp(xv / p)

    def _log(self, a, b) -> np.ndarray:
        return a * np.log(b / a)

    def _transport(self, p, q, xv) -> np.ndarray:
        return (q / p) * xv

    def _distance(self, a, b) -> float:
        return float(np.linalg.norm(np.log(b / a)))

    def _raise_index(self, p, partials) -> np.ndarray:
        return p * p * partials


class Euclidean(Chart):
    """Flat R^n with the identity metric."""

    name = "euclidean"

    def __init__(self, dim: int = 2):
        if dim < 1:
            raise ValueError("dim must be >= 1")
        self.dim = int(dim)

    def contains(self, p) -> bool:
        return bool(np.all(np.isfinite(_as_point(p))))

    def _inner(self, p, xv, yv) -> float:
        return float(np.dot(xv, yv))

    def _inner_many(self, p, A, B) -> np.ndarray:
        return np.sum(A * B, axis=1)

    def _exp(self, p, xv) -> np.ndarray:
        return p + xv

    def _log(self, a, b) -> np.ndarray:
        return b - a

    def _transport(self, p, q, xv) -> np.ndarray:
        return xv.copy()

    def _distance(self, a, b) -> float:
        return float(np.linalg.norm(b - a))

    def _raise_index(self, p, partials) -> np.ndarray:
        return partials


def chart_from_name(name: str, dim: int = 2) -> Chart:
    """Resolve a chart by its registry name."""
    if name in ("positive_orthant2", "orthant"):
        return PositiveOrthant2()
    if name in ("euclidean", "euclidean_n"):
        return Euclidean(dim)
    raise DomainViolation(f"unknown chart name: {name!r}")
