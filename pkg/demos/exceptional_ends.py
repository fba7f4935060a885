"""Curvettes at end components: the configurations where peeling off one
branch at a time breaks down, with their series and what reconstruction
makes of them."""

from wps import AdeType, recover, registry_for, render_series

for name in ("D5", "D6", "E6", "E7", "E8", "A4"):
    t = AdeType.parse(name)
    for entry in registry_for(t):
        if entry.collision:
            continue
        g = entry.configurations[0]
        s = entry.series
        res = recover(s, t)
        print(f"{entry.exception_id:12s} {render_series(s):45s} -> {res.outcome}")
