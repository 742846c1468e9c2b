"""Monotonicity of vector fields, and how it mirrors invexity.

Gradient fields of invex functions are invariant eta-monotone; the
negative-gradient eta map makes the strength constant exactly 1 because
each pairing collapses to minus a squared gradient norm.
"""
import numpy as np

from geoinvex import (
    ETAS,
    FIELDS,
    Euclidean,
    MonotoneKind,
    PositiveOrthant2,
    SampleScheme,
    VectorField,
    check_invariant_eta_monotone,
    check_monotone_vector_field,
    cross_check_invex_monotone,
    gradient_eta,
    gradient_field,
)

orthant = PositiveOrthant2()
flat = Euclidean(2)
scheme = SampleScheme()
flat_scheme = SampleScheme(box=((-1.0, 1.0), (-1.0, 1.0)))

# -- transport-based monotonicity ----------------------------------------------
X = gradient_field(orthant, FIELDS["sq_log_sum"])
vd = check_monotone_vector_field(orthant, X, scheme)
print("grad(ln^2-sum) monotone pairing:", vd.status.value,
      " (pairing equals 2|ln u - ln v|^2, never negative)")

bad = VectorField(lambda u: -np.asarray(u, float), label="-id")
vd = check_monotone_vector_field(flat, bad, flat_scheme)
print("-identity field:", vd.status.value, "witness:", vd.witness.u, vd.witness.v)

# -- invariant eta-monotonicity --------------------------------------------------
h = FIELDS["u1_plus_u2_sq"]
eta = gradient_eta(orthant, h, 2)  # eta(u, v) = -grad h(v)
vd = check_invariant_eta_monotone(orthant, gradient_field(orthant, h), eta, 2,
                                  MonotoneKind.STRONG, scheme)
print("\nnegative-gradient map, strong:", vd.status.value, "delta_hat =", vd.delta_hat)

vd = check_invariant_eta_monotone(orthant, gradient_field(orthant, h), ETAS["ex32"], 2,
                                  MonotoneKind.PSEUDO, scheme)
print("shifted map, pseudo:", vd.status.value,
      " (antecedent <X(u), eta(v,u)>_u is always negative)")

# -- cross-check against invexity ---------------------------------------------------
rep = cross_check_invex_monotone(orthant, h, ETAS["ex32"], 2,
                                 SampleScheme(grid_points_per_axis=5, random_pairs=200))
print("\ncross-check on the shifted map:")
print("  invex:", rep.invex.status.value, " strong monotone:", rep.monotone_strong.status.value)
print("  flags:", list(rep.flags) or "none",
      "| pseudo direction applicable:", rep.pseudo_applicable)
