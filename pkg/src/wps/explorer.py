"""Exhaustive enumeration of configurations and search for series collisions."""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import render_series
from .engine import ValuationSpec, weil_poincare
from .graphs import (
    AdeType, ArrowPoint, EdgePoint, FreePoint, ResolutionGraph, blow_up, build_minimal,
    canonical_key, is_minimal,
)
from .modes import AssumptionMode, violates


@dataclass(frozen=True)
class EnumerationBudget:
    max_blowups: int
    max_branches: int = 1
    modes: frozenset = field(default_factory=lambda: frozenset({AssumptionMode.NONE}))

    def __post_init__(self):
        if self.max_blowups < 0 or self.max_branches < 1:
            raise ValueError("budget must be nonnegative with at least one branch")
        object.__setattr__(self, "modes", frozenset(AssumptionMode.parse(m) for m in self.modes))


def _steps_from(g: ResolutionGraph, last, kind):
    """Blow-ups available to the valuation under construction."""
    if last is None:
        steps = [FreePoint(v) for v in g.vertex_ids] + [EdgePoint(*e) for e in g.edges]
        if kind == "curve":
            steps += [ArrowPoint(a) for a, _ in g.arrows]
    else:
        steps = [FreePoint(last)] + [EdgePoint(last, w) for w in g.neighbours[last]]
        if kind == "curve":
            steps += [ArrowPoint(a) for a in g.arrows_at[last]]
    return steps


def _finish(g: ResolutionGraph, last, kind):
    targets = g.vertex_ids if last is None else [last]
    for v in targets:
        if kind == "curve":
            yield g.with_arrow(v)
        elif v not in g.divisorial:
            yield g.with_mark(v)


def enumerate_configurations(t, budget: EnumerationBudget, kind="curve", branches=None):
    """Minimal configurations of ``branches`` valuations (default: every count
    from 1 to ``budget.max_branches``) reachable with at most
    ``budget.max_blowups`` blow-ups, one per isomorphism class of decorated
    graphs.  Each valuation is built by a chain of blow-ups at points of the
    previous exceptional component it passes through; the chains of later
    valuations may start anywhere on the current total transform."""
    if isinstance(t, str):
        t = AdeType.parse(t)
    if kind not in ("curve", "divisorial"):
        raise ValueError(f"unknown valuation kind {kind!r}")
    counts = [branches] if branches else range(1, budget.max_branches + 1)
    for r in counts:
        yield from _enumerate_r(t, budget, kind, r)


def _enumerate_r(t, budget, kind, r):
    found = {}
    seen = set()
    stack = [(build_minimal(t), 0, None)]
    while stack:
        g, done, last = stack.pop()
        used = len(g.script)
        key = (canonical_key(g, marker=last), done, last is None)
        if key in seen:
            continue
        seen.add(key)
        if done == r:
            if is_minimal(g) and any(not violates(g, m) for m in budget.modes):
                found.setdefault(canonical_key(g), g)
            continue
        nxt = [(h, done + 1, None) for h in _finish(g, last, kind)]
        if used < budget.max_blowups:
            for s in _steps_from(g, last, kind):
                h = blow_up(g, s)
                nxt.append((h, done, h.vertex_ids[-1]))
        stack.extend(reversed(nxt))
    for key in sorted(found):
        g = found[key]
        yield g, ValuationSpec.default(g)


@dataclass(frozen=True)
class CollisionReport:
    groups: tuple  # ((series_text, (graph, ...)), ...)

    def __len__(self):
        return len(self.groups)

    def to_json(self):
        from .graphs import graph_to_doc

        return {
            "groups": [
                {"series": s, "configurations": [graph_to_doc(g) for g in gs]}
                for s, gs in self.groups
            ]
        }


def group_by_series(configs) -> dict:
    groups: dict = {}
    for g, spec in configs:
        text = render_series(weil_poincare(g, spec))
        groups.setdefault(text, []).append(g)
    return groups


def find_collisions(t, budget: EnumerationBudget, kind="curve", branches=None) -> CollisionReport:
    groups = group_by_series(enumerate_configurations(t, budget, kind, branches))
    out = []
    for text in sorted(groups):
        members = groups[text]
        if len(members) >= 2:
            # enumeration already keeps one graph per isomorphism class
            out.append((text, tuple(members)))
    return CollisionReport(tuple(out))


@dataclass(frozen=True)
class Certificate:
    passed: bool
    witnesses: tuple  # collision groups not explained by the registry
    explained: tuple  # (exception_id, series_text) for registry-matched groups
    n_configurations: int


def certify_uniqueness(t, budget: EnumerationBudget, kind="curve", mode=AssumptionMode.NONE, branches=None) -> Certificate:
    """Check that distinct configurations have distinct series.

    Groups matching a table row of the registry are listed as explained.  The
    registered E_7 pairs are genuine collisions and still count as witnesses:
    the uniqueness statement only holds once a mode excludes them."""
    from .registry import lookup

    if isinstance(t, str):
        t = AdeType.parse(t)
    mode = AssumptionMode.parse(mode)
    b = EnumerationBudget(budget.max_blowups, budget.max_branches, frozenset({mode}))
    configs = list(enumerate_configurations(t, b, kind, branches))
    groups = group_by_series(configs)
    witnesses, explained = [], []
    for text in sorted(groups):
        members = groups[text]
        entry = lookup(weil_poincare(members[0]), t, kind)
        if entry is not None and not entry.collision:
            explained.append((entry.exception_id, text))
            continue
        if len(members) >= 2:
            witnesses.append((text, tuple(members)))
    return Certificate(not witnesses, tuple(witnesses), tuple(explained), len(configs))
