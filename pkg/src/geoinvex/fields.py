"""Scalar and vector fields on a chart.

A :class:`ScalarField` wraps a plain callable ``u -> float`` together with
optional analytic partial derivatives.  Charts turn the Euclidean partials
into the metric gradient; when no partials are supplied, consumers fall
back to central finite differences.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np


@dataclass(frozen=True)
class ScalarField:
    """Differentiable function h: M -> R given in chart coordinates.

    ``fn`` maps a coordinate array to a float.  ``partials``, when given,
    returns the Euclidean partial derivatives (dh/du_1, ..., dh/du_n);
    these are coordinate partials, not the metric gradient.
    """

    fn: Callable[[np.ndarray], float]
    partials: Optional[Callable[[np.ndarray], np.ndarray]] = None
    label: str = ""

    def __call__(self, u: np.ndarray) -> float:
        return float(self.fn(np.asarray(u, dtype=float)))

    @property
    def has_analytic_gradient(self) -> bool:
        return self.partials is not None


@dataclass(frozen=True)
class VectorField:
    """Field assigning to each point the components of a tangent vector there."""

    fn: Callable[[np.ndarray], np.ndarray]
    label: str = ""

    def components(self, p: np.ndarray) -> np.ndarray:
        return np.asarray(self.fn(np.asarray(p, dtype=float)), dtype=float)


def constant_field(c: float, label: str = "") -> ScalarField:
    """Constant scalar field with zero partials."""
    return ScalarField(
        fn=lambda u, c=c: c,
        partials=lambda u: np.zeros_like(np.asarray(u, dtype=float)),
        label=label or f"const({c})",
    )
