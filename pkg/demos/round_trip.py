"""Enumerate small configurations, compute their series and try to get the
graph back.  A budget of four blow-ups keeps this to a minute or so; the
acceptance suite goes up to six."""

import sys
import time

from wps import (
    AdeType, EnumerationBudget, ReconstructionError, canonical_key, enumerate_configurations,
    legal_modes, recover, weil_poincare,
)

blowups = int(sys.argv[1]) if len(sys.argv) > 1 else 4
names = sys.argv[2].split(",") if len(sys.argv) > 2 else ["A3", "D4", "D5", "E6", "E7"]

for name in names:
    t = AdeType.parse(name)
    for mode in legal_modes(t):
        for kind in ("curve", "divisorial"):
            t0 = time.perf_counter()
            budget = EnumerationBudget(blowups, 2, {mode})
            tally = {"unique": 0, "ambiguous-known": 0, "unsupported": 0, "wrong": 0, "error": 0}
            for g, _ in enumerate_configurations(t, budget, kind):
                try:
                    res = recover(weil_poincare(g), t, kind, mode)
                except ReconstructionError:
                    tally["error"] += 1
                    continue
                keys = {canonical_key(h) for h in res.graphs}
                tally[res.outcome if canonical_key(g) in keys else "wrong"] += 1
            dt = time.perf_counter() - t0
            counts = " ".join(f"{k}={v}" for k, v in tally.items() if v)
            print(f"{name} {mode.value:8s} {kind:10s} {counts}  ({dt:.1f}s)")
