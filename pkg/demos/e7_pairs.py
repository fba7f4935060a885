"""Two curves and two divisors on E7 that the series cannot tell apart.

C' is a curvette of the second component of the minimal resolution.  C'' goes
through a smooth point of E7 tangentially, so two blow-ups are needed before
its strict transform is a curvette.  D' and D'' are divisorial valuations one
blow-up further down.  Each pair shares its series, and the assumption modes
that forbid smooth points of E7 (or of E2) separate them again.
"""

import json

from wps import graph_to_doc, isomorphic_up_to_symmetry, recover, weil_poincare
from wps.registry import e7_pair_graphs


def show(name, g):
    e2 = ", ".join(f"E{v}={w}" for v, w in g.weights if w != -2)
    print(f"{name}: {len(g.weights)} components, {e2 or 'all -2'}")
    print(f"    P = {weil_poincare(g)}")


c1, c2, d1, d2 = e7_pair_graphs()
for name, g in [("C'", c1), ("C''", c2), ("D'", d1), ("D''", d2)]:
    show(name, g)

print()
print("C' ~ C'' :", isomorphic_up_to_symmetry(c1, c2))
print("D' ~ D'' :", isomorphic_up_to_symmetry(d1, d2))

print()
for kind, g in [("curve", c1), ("divisorial", d1)]:
    s = weil_poincare(g)
    for mode in ("none", "avoid-e7", "avoid-e2"):
        res = recover(s, "E7", kind, mode)
        where = res.exception_id or ", ".join(f"{len(h.weights)} components" for h in res.graphs)
        print(f"{kind:10s} mode={mode:9s} -> {res.outcome} ({where})")

print()
print("C'' as a graph document:")
print(json.dumps(graph_to_doc(c2)))
