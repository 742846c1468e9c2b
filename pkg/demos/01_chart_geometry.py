"""Tour of the built-in chart geometry.

The positive orthant with metric g_ij(u) = delta_ij/(u_i u_j) is isometric
to flat R^2 through w = ln(u), and every closed form below is that fact in
disguise: geodesics are exponentials of straight lines, parallel transport
rescales components by the coordinate ratio, and distance is the Euclidean
norm of the log ratio.
"""
import numpy as np

from geoinvex import Euclidean, PositiveOrthant2, ScalarField, Tangent

orthant = PositiveOrthant2()
flat = Euclidean(2)

# -- metric ------------------------------------------------------------------
p = np.array([0.5, 0.5])
x = orthant.tangent(p, (1.0, 0.0))
print("inner product at (0.5, 0.5):", orthant.metric_inner(p, x, x))
print("same components in flat R^2:", flat.metric_inner(p, Tangent(p, x.vec), Tangent(p, x.vec)))

# -- exponential map and geodesics ---------------------------------------------
start = orthant.tangent((1.0, 2.0), (2.0, 0.0))
print("\nexp_(1,2)(2,0) =", orthant.exp_map(start), " (e^2 in the first slot)")

g = orthant.connecting_geodesic((0.25, 0.25), (1.0 / 9.0, 1.0 / 9.0))
print("connecting geodesic at s=0.1:", g.position(0.1))
print("endpoints:", g.position(0.0), g.position(1.0))

# the velocity norm is constant along a geodesic (transport is an isometry)
for t in (0.0, 0.5, 1.0):
    _, vel = g.eval(t)
    print(f"  |r'({t})| =", orthant.norm(vel))

# -- parallel transport -----------------------------------------------------------
x = orthant.tangent((1.0, 1.0), (1.0, 0.0))
moved = orthant.transport(x, (2.0, 3.0))
print("\ntransport (1,0) from (1,1) to (2,3):", moved.vec)
print("norm before/after:", orthant.norm(x), orthant.norm(moved))

# -- distance ------------------------------------------------------------------------
a, b = np.array([1.0, 1.0]), np.array([np.e, 1.0])
print("\ndistance (1,1) -> (e,1):", orthant.distance(a, b))
print("log-isometry oracle:     ", np.linalg.norm(np.log(b / a)))

# -- gradients ------------------------------------------------------------------------
h = ScalarField(lambda u: u[0] + u[1] ** 2, lambda u: np.array([1.0, 2 * u[1]]),
                label="u1 + u2^2")
grad = orthant.gradient(h, (1.0, 2.0))
print("\nmetric gradient of", h.label, "at (1,2):", grad.vec)
print("(the metric raises the index: components are u_i^2 * dh/du_i)")
