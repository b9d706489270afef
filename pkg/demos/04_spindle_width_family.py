"""The spindle family: the bodies that maximize the enclosing annulus.

For fixed boundary curvature k0, the lune of inradius r sits between
concentric circles of radii r and rho(r); the width d(r) = rho(r) - r
vanishes at both ends of [0, R] and peaks at a closed-form r0.  The
golden-section oracle confirms the closed forms independently.
"""

from sphericity import (SpaceForm, numeric_spindle_optimum,
                        spindle_max_width_alt, spindle_optimum, spindle_rho,
                        spindle_width)

for space, k0 in ((SpaceForm.flat(), 1.0), (SpaceForm.sphere(1.0), 1.0),
                  (SpaceForm.hyperbolic(1.0), 2.0)):
    opt = spindle_optimum(space, k0)
    print(f"\n=== {space.kind.value}: k0 = {k0:g}, R = {opt.R:.6f} ===")
    print(f"{'r':>10} {'rho(r)':>12} {'d(r)':>12}")
    for frac in (0.1, 0.25, 0.5, 0.75, 0.9):
        r = frac * opt.R
        print(f"{r:>10.6f} {float(spindle_rho(space, k0, r)):>12.6f} "
              f"{float(spindle_width(space, k0, r)):>12.6f}")
    print(f"closed-form maximum: r0 = {opt.r0:.9f}, d0 = {opt.d0:.9f}")
    r_num, d_num = numeric_spindle_optimum(space, k0)
    print(f"golden-section oracle: r = {r_num:.9f}, d = {d_num:.9f} "
          f"(gaps {abs(r_num - opt.r0):.1e}, {abs(d_num - opt.d0):.1e})")
    if space.kind.value != "flat":
        alt = spindle_max_width_alt(space, k0)
        print(f"rewritten closed form: {alt:.12f} "
              f"(identity gap {abs(alt - opt.d0):.1e})")

print("\n=== flat limit of the curved maxima (k0 = 1) ===")
flat_d0 = spindle_optimum(SpaceForm.flat(), 1.0).d0
print(f"{'k1':>8} {'sphere d0':>14} {'hyperbolic d0':>14}")
for k1 in (0.5, 0.1, 0.01, 0.001):
    d_s = spindle_optimum(SpaceForm.sphere(k1), 1.0).d0
    d_h = spindle_optimum(SpaceForm.hyperbolic(k1), 1.0).d0
    print(f"{k1:>8g} {d_s:>14.9f} {d_h:>14.9f}")
print(f"{'flat':>8} {flat_d0:>14.9f} = sqrt(2) - 1")
