"""Search for pairs of configurations with equal series.

Without an assumption mode E7 collides already at two blow-ups; lifting the
mode on E8 shows collisions as well once the budget allows long enough
chains.  Under the legal modes the same searches come back empty.
"""

import sys

from wps import EnumerationBudget, certify_uniqueness, find_collisions, legal_modes
from wps.graphs import AdeType

blowups = int(sys.argv[1]) if len(sys.argv) > 1 else 4

for name in ("E7", "E8"):
    for kind in ("curve", "divisorial"):
        rep = find_collisions(name, EnumerationBudget(blowups), kind, branches=1)
        print(f"{name} {kind}, no mode: {len(rep)} colliding series")
        for text, members in rep.groups[:3]:
            scripts = [" ".join(f"{s.kind}:{'-'.join(s.at) if s.kind == 'edge' else s.at}" for s in g.script) or "-"
                       for g in members]
            print(f"    {text}")
            for sc in scripts:
                print(f"        {sc}")
        for mode in legal_modes(AdeType.parse(name)):
            cert = certify_uniqueness(name, EnumerationBudget(blowups), kind, mode, branches=1)
            print(f"    mode {mode.value}: {cert.n_configurations} configurations, certified={cert.passed}")
