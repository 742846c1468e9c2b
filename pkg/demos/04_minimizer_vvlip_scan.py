"""Strict minimizers versus inequality solutions on a grid.

For strongly invex objectives the two grid solution sets must coincide.
The scan classifies every grid point by both predicates and lists any
disagreements; switching the dominance reading from strict to pareto
shows where the equivalence is sensitive to the order convention.
"""
import numpy as np

from geoinvex import (
    ETAS,
    FIELDS,
    DominanceMode,
    Euclidean,
    MopProblem,
    PositiveOrthant2,
    SampleScheme,
    StrengthParams,
    check_strict_minimizer,
    check_vvlip_solution,
    scan_equivalence,
)

flat = Euclidean(2)
scan = SampleScheme(box=((-1.0, 1.0), (-1.0, 1.0)), grid_points_per_axis=21,
                    random_pairs=0)

# -- single quadratic: both sets are the grid point nearest the origin ----------
baseline = MopProblem(flat, (FIELDS["sq_norm"],), ETAS["euclidean_diff"],
                      StrengthParams(m=2))
res = scan_equivalence(baseline, scan)
print("single quadratic:")
print("  minimizers:", [res.grid[i] for i in res.minimizer_set])
print("  inequality solutions:", [res.grid[i] for i in res.vvlip_set])
print("  disagreements:", len(res.disagreements))

# -- two quadratics: the whole efficient segment ----------------------------------
two = MopProblem(flat, (FIELDS["sq_norm"], FIELDS["sq_dist_to_e1"]),
                 ETAS["euclidean_diff"], StrengthParams(m=2))
res = scan_equivalence(two, scan)
seg = [res.grid[i] for i in res.minimizer_set]
print("\ntwo quadratics (centers 0 and e1):")
print(f"  {len(seg)} efficient grid points from {seg[0]} to {seg[-1]}")
print("  sets equal:", res.minimizer_set == res.vvlip_set)

# pareto reading: the endpoints stay minimizers but stop solving the
# inequality (one pairing is 0 there, the other negative)
res_p = scan_equivalence(two, scan, DominanceMode.PARETO)
extra = set(res_p.minimizer_set) - set(res_p.vvlip_set)
print("  pareto mode disagreement points:", [res_p.grid[i] for i in sorted(extra)])

# -- point queries ------------------------------------------------------------------
probe = SampleScheme(box=((-1.0, 1.0), (-1.0, 1.0)), grid_points_per_axis=9,
                     random_pairs=500, seed=42)
vd = check_strict_minimizer(two, (0.5, 0.0), probe)
print("\nu* = (0.5, 0):  minimizer:", vd.status.value, "delta_hat =", vd.delta_hat)
vd = check_vvlip_solution(two, (0.5, 0.1), probe)
print("u* = (0.5, 0.1): inequality:", vd.status.value,
      "witness u =", vd.witness.u if vd.witness else None)

# -- a counterexample eta: neither set is ever populated --------------------------
orthant = PositiveOrthant2()
mop = MopProblem(orthant, (FIELDS["u1_plus_u2_sq"],), ETAS["ex32"], StrengthParams(m=2))
res = scan_equivalence(mop, SampleScheme(box=((0.5, 5.0), (0.5, 5.0)),
                                         grid_points_per_axis=21, random_pairs=0))
print("\nshifted eta on the orthant: minimizers =", len(res.minimizer_set),
      " inequality solutions =", len(res.vvlip_set),
      " (the pairing -(1 + v1 + 2 v2^2) is negative everywhere)")
