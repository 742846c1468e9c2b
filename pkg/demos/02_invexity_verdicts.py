"""Verdict engines on the three demonstration fields.

Each field comes with an eta map that makes it first-order invex (or
pseudo/quasi invex) while some stronger property fails; the checkers
estimate the strength constant delta_hat and dig up concrete witnesses
for the failures.
"""
import math

from geoinvex import (
    ETAS,
    FIELDS,
    GeneralizedKind,
    GeodesicMode,
    PositiveOrthant2,
    SampleScheme,
    check_generalized_invex,
    check_strongly_eta_invex,
    check_strongly_preinvex,
)

orthant = PositiveOrthant2()


def show(tag, vd):
    print(f"{tag:<34} {vd.status.value:<16} delta_hat={vd.delta_hat!r:<22} "
          f"worst_margin={vd.worst_margin}")
    if vd.witness and vd.worst_margin is not None and vd.worst_margin < 0:
        w = vd.witness
        print(f"{'':<34} witness u={w.u} v={w.v} s={w.s}")


# -- h = u1 + u2^2 with eta = (-1-v1, -v2) -------------------------------------
h = FIELDS["u1_plus_u2_sq"]
eta = ETAS["ex32"]
scheme = SampleScheme()  # box [0.5, 5]^2, 9x9 grid + 1000 seeded pairs

show("invex (first-order bound)",
     check_strongly_eta_invex(orthant, h, eta, 2, scheme))

# the chord inequality fails along the geodesic run from u; the classic
# witness is u=(1/4,1/4), v=(1/9,1/9), s=0.1 with margin -0.1413086
pinned = SampleScheme(grid_points_per_axis=0, random_pairs=0,
                      extra_pairs=(((0.25, 0.25), (1 / 9, 1 / 9)),), s_grid=(0.1,))
show("chord bound (geodesic from u)",
     check_strongly_preinvex(orthant, h, eta, 2, pinned, GeodesicMode.CONNECTING_FROM_U))

# -- h = ln(u1) + ln(u2)^3 with eta = (-v1^2, 0) -----------------------------------
h = FIELDS["log_u1_plus_log_u2_cubed"]
eta = ETAS["ex33"]
with_pair = SampleScheme(extra_pairs=(((0.5, 0.5), (1.0, math.e ** 2)),))
print()
show("invex", check_strongly_eta_invex(orthant, h, eta, 2, with_pair))
show("pseudo type 1",
     check_generalized_invex(orthant, h, eta, 2, GeneralizedKind.PSEUDO1, scheme))
print("  (the antecedent dh = -v1 >= 0 never fires on the orthant)")

# -- h = u1^3 + ln(u2) with eta = (-v1^2, -v2^2) --------------------------------------
h = FIELDS["u1_cubed_plus_log_u2"]
eta = ETAS["ex34"]
box2 = SampleScheme(box=((0.5, 2.0), (0.5, 2.0)),
                    extra_pairs=(((1.0, math.exp(-5.0)), (1.0, 1.0)),))
print()
show("invex", check_strongly_eta_invex(orthant, h, eta, 2, box2))
show("quasi type 1",
     check_generalized_invex(orthant, h, eta, 2, GeneralizedKind.QUASI1,
                             SampleScheme(box=((0.5, 2.0), (0.5, 2.0)))))
print("  (delta_hat is the box minimum of (3 v1^4 + v2) / (v1^2 + v2^2))")
