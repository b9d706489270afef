"""Tour of the geometry kernel: the three model planes side by side.

Distances, geodesics, angles, and circle curvatures behave identically
through one API whether the plane is flat, spherical, or hyperbolic.
"""

import numpy as np

from sphericity import SpaceForm

for space in (SpaceForm.flat(), SpaceForm.sphere(1.0),
              SpaceForm.hyperbolic(1.0)):
    print(f"\n=== {space.kind.value} plane (k1 = {space.k1:g}) ===")
    origin = space.origin()
    e1, e2 = space.frame(origin)

    # walk 0.8 east, then 0.6 north from there; triangle closure differs
    # between the geometries
    east = space.exp_map(origin, 0.8 * e1)
    f1, f2 = space.frame(east)
    corner = space.exp_map(east, 0.6 * f2)
    hyp = float(space.distance(origin, corner))
    print(f"legs 0.8 and 0.6, hypotenuse = {hyp:.6f} "
          f"(flat Pythagoras gives {np.hypot(0.8, 0.6):.6f})")

    # circles of prescribed geodesic curvature
    for k0 in (2.0, 1.5):
        try:
            radius = space.circle_radius_of_curvature(k0)
        except Exception as exc:
            print(f"curvature {k0:g}: {exc}")
            continue
        ring = float(space.circumference(radius))
        print(f"curvature {k0:g}: radius {radius:.6f}, "
              f"circumference {ring:.6f}, mu0(radius) = "
              f"{float(space.mu0(radius)):.6f}")

    # exp/log round trip
    v = 0.5 * e1 + 0.3 * e2
    q = space.exp_map(origin, v)
    back = space.log_map(origin, q)
    print(f"exp/log round trip error: {float(np.max(np.abs(back - v))):.2e}")
