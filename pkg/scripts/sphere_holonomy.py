"""Holonomy of latitude loops against the enclosed cap area, and a sweep of S^2."""

import numpy as np

from kanforge.sphere import angle_between_paths, constant, latitude_loop, sweep_family, sweep_winding, wrap

print(f"{'theta':>8} {'holonomy':>14} {'cap area':>14} {'difference':>12}")
for theta in np.linspace(0.2, np.pi - 0.2, 9):
    loop = latitude_loop(theta)
    hol = angle_between_paths(constant(loop.start), loop)
    cap = 2 * np.pi * (1 - np.cos(theta))
    print(f"{theta:8.4f} {hol:14.10f} {wrap(cap):14.10f} {abs(wrap(hol - cap)):12.2e}")

for reverse in (False, True):
    r = sweep_winding(sweep_family([0.0, 0.6, 0.8], reverse=reverse))
    print(f"sweep reverse={reverse}: lift change {r.change:+.10f} = {r.change / np.pi:+.6f} pi, winding {r.winding:+d}")
