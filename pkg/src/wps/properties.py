"""Randomised invariant checks shared by ``wps check`` and the test suite.

Each ``check_*`` function draws ``cases`` random configurations from a seeded
generator, verifies one identity exactly and returns a :class:`PropertyReport`
listing the failing cases (empty when the identity held everywhere).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import degree, expand
from .engine import (
    ValuationSpec, drop_variable, multiplicity_vectors, oracle_coefficient, single_from_multi,
    weil_poincare,
)
from .graphs import (
    AdeType, ArrowPoint, EdgePoint, FreePoint, ResolutionGraph, blow_up, build_minimal, euler_chi,
)

TYPES = tuple(AdeType.parse(x) for x in ("A1", "A2", "A3", "A5", "D4", "D5", "D6", "E6", "E7", "E8"))


@dataclass
class PropertyReport:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, what):
        self.failures.append(what)

    def line(self) -> str:
        status = "ok" if self.ok else f"{len(self.failures)} FAILED"
        return f"{self.name}: {self.cases} cases, {status}"


def random_chain(rng: random.Random, g: ResolutionGraph, length: int, start=None) -> ResolutionGraph:
    """Blow up ``length`` times, each time at a point of the newest component
    (the first point anywhere, or on ``start``)."""
    last = start
    for _ in range(length):
        if last is None:
            steps = [FreePoint(v) for v in g.vertex_ids] + [EdgePoint(*e) for e in g.edges]
        else:
            steps = [FreePoint(last)] + [EdgePoint(last, w) for w in g.neighbours[last]]
        g = blow_up(g, rng.choice(steps))
        last = g.vertex_ids[-1]
    return g


def random_configuration(rng: random.Random, t=None, kind="curve", branches=None, max_chain=4) -> ResolutionGraph:
    """A decorated graph with ``branches`` valuations, each at the end of a
    random chain of blow-ups.  Not necessarily minimal."""
    t = rng.choice(TYPES) if t is None else (AdeType.parse(t) if isinstance(t, str) else t)
    branches = rng.randint(1, 3) if branches is None else branches
    g = build_minimal(t)
    for _ in range(branches):
        g = random_chain(rng, g, rng.randint(0, max_chain))
        # the valuation sits on the newest component or, without blow-ups, anywhere
        choices = [g.vertex_ids[-1]] if len(g.vertex_ids) > t.rank else g.vertex_ids
        if kind == "curve":
            g = g.with_arrow(rng.choice(choices))
        else:
            free = [v for v in choices if v not in g.divisorial]
            if not free:
                g = random_chain(rng, g, 1)
                free = [g.vertex_ids[-1]]
            g = g.with_mark(rng.choice(free))
    return g


def _random_step(rng, g):
    steps = [FreePoint(v) for v in g.vertex_ids] + [EdgePoint(*e) for e in g.edges]
    steps += [ArrowPoint(a) for a, _ in g.arrows]
    return rng.choice(steps)


def check_blowup_invariance(cases=200, seed=0) -> PropertyReport:
    rng = random.Random(seed)
    rep = PropertyReport("blow-up invariance")
    for _ in range(cases):
        g = random_configuration(rng, kind=rng.choice(["curve", "divisorial"]))
        s = weil_poincare(g)
        h = g
        for _ in range(rng.randint(1, 3)):
            h = blow_up(h, _random_step(rng, h))
        rep.cases += 1
        if weil_poincare(h) != s:
            rep.fail((g.script, h.script))
    return rep


def dead_arcs(g: ResolutionGraph):
    """Chains ``[rho = alpha_0, ..., alpha_s = sigma]`` from an undecorated end
    to the nearest vertex of valency at least 3."""
    decorated = {v for _, v in g.arrows} | set(g.divisorial)
    out = []
    for rho in g.vertex_ids:
        if g.valency(rho) != 1 or rho in decorated:
            continue
        arc, prev = [rho], None
        cur = rho
        while True:
            nxt = [w for w in g.neighbours[cur] if w != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            arc.append(cur)
            if g.valency(cur) >= 3 or cur in decorated:
                break
        if g.valency(arc[-1]) >= 3:
            out.append(arc)
    return out


def check_dead_arcs(cases=200, seed=1) -> PropertyReport:
    """``m_sigma = N m_rho`` with ``N > 1`` an integer, on every dead arc whose
    components before ``sigma`` have self-intersection at most ``-2``."""
    rng = random.Random(seed)
    rep = PropertyReport("dead-arc multiples")
    while rep.cases < cases:
        g = random_configuration(rng, kind=rng.choice(["curve", "divisorial"]))
        mv = multiplicity_vectors(g)
        for arc in dead_arcs(g):
            if any(g.weight[a] > -2 for a in arc[:-1]):
                continue
            rho, sigma = arc[0], arc[-1]
            ratios = {x / y for x, y in zip(mv[sigma], mv[rho])}
            rep.cases += 1
            if len(ratios) != 1:
                rep.fail((g.script, arc, "not proportional"))
                continue
            n = ratios.pop()
            if n.denominator != 1 or n <= 1:
                rep.fail((g.script, arc, n))
    return rep


def geodesic(g: ResolutionGraph, a, b) -> list:
    parent = {a: None}
    stack = [a]
    while stack:
        v = stack.pop()
        for w in g.neighbours[v]:
            if w not in parent:
                parent[w] = v
                stack.append(w)
    path = [b]
    while path[-1] != a:
        path.append(parent[path[-1]])
    return path[::-1]


def _hanging(g, path):
    """``{vertex: foot}`` for vertices off ``path``, ``foot`` being where their
    component is attached."""
    on = set(path)
    foot = {}
    for p in path:
        stack = [w for w in g.neighbours[p] if w not in on]
        for w in stack:
            foot[w] = p
        while stack:
            v = stack.pop()
            for w in g.neighbours[v]:
                if w not in on and w not in foot:
                    foot[w] = p
                    stack.append(w)
    return foot


def check_ratio_monotonicity(cases=200, seed=2) -> PropertyReport:
    """``q = m^j / m^i`` decreases strictly from ``tau(j)`` to ``tau(i)`` and is
    constant on each component hanging off that geodesic."""
    rng = random.Random(seed)
    rep = PropertyReport("geodesic ratio monotonicity")
    while rep.cases < cases:
        kind = rng.choice(["curve", "divisorial"])
        g = random_configuration(rng, kind=kind, branches=rng.randint(2, 3))
        spec = ValuationSpec.default(g)
        taus = spec.tau(g)
        mv = multiplicity_vectors(g, spec)
        for i, j in itertools.permutations(range(len(taus)), 2):
            if taus[i] == taus[j]:
                continue
            rep.cases += 1
            path = geodesic(g, taus[j], taus[i])
            q = [mv[v][j] / mv[v][i] for v in path]
            if any(a <= b for a, b in zip(q, q[1:])):
                rep.fail((g.script, i, j, "not strictly decreasing"))
            for v, p in _hanging(g, path).items():
                if mv[v][j] / mv[v][i] != mv[p][j] / mv[p][i]:
                    rep.fail((g.script, i, j, v, "not constant off the geodesic"))
                    break
    return rep


def check_projections(cases=200, seed=3) -> PropertyReport:
    """Dropping a curve and isolating one, as factored-series identities."""
    rng = random.Random(seed)
    rep = PropertyReport("projection identities")
    while rep.cases < cases:
        g = random_configuration(rng, kind="curve", branches=rng.randint(2, 3))
        s = weil_poincare(g)
        mv = multiplicity_vectors(g)
        i0 = rng.randrange(len(g.arrows))
        tau = g.arrows[i0][1]
        without = g.replace(arrows=tuple((f"C{k + 1}", v) for k, (_, v) in enumerate(
            x for n, x in enumerate(g.arrows) if n != i0)))
        alone = g.replace(arrows=(("C1", tau),))
        rep.cases += 1
        if drop_variable(s, i0, mv[tau]) != weil_poincare(without):
            rep.fail((g.script, g.arrows, i0, "drop"))
        if single_from_multi(s, i0, mv[tau]) != weil_poincare(alone):
            rep.fail((g.script, g.arrows, i0, "single"))
    return rep


def lattice_points(gens, bound):
    """Nonnegative integer combinations of ``gens`` of degree at most ``bound``."""
    gens = [g for g in gens if degree(g) > 0]
    zero = (Fraction(0),) * (len(gens[0]) if gens else 0)
    pts = {zero}
    for gv in gens:
        d = degree(gv)
        new = set()
        for p in pts:
            k, q = 0, p
            while degree(q) <= bound:
                new.add(q)
                k += 1
                q = tuple(a + b for a, b in zip(q, gv))
        pts = new
    return pts


def check_oracle(cases=200, seed=4, bound=12) -> PropertyReport:
    """Configuration-space coefficients agree with the expanded product at
    every lattice point of degree at most ``bound``."""
    rng = random.Random(seed)
    rep = PropertyReport("oracle coefficients")
    while rep.cases < cases:
        g = random_configuration(rng, kind=rng.choice(["curve", "divisorial"]),
                                 branches=rng.randint(1, 2), max_chain=2)
        s = weil_poincare(g)
        mv = multiplicity_vectors(g)
        gens = [mv[v] for v in g.vertex_ids if euler_chi(g, v)]
        if not gens:
            continue
        if sum(bound // degree(x) + 1 for x in gens) > 200:
            continue
        e = expand(s, bound)
        rep.cases += 1
        for u in sorted(lattice_points(gens, bound)):
            if any(u) and oracle_coefficient(g, None, u) != e[u]:
                rep.fail((g.script, g.arrows, g.divisorial, u))
                break
    return rep


ALL_CHECKS = (
    check_blowup_invariance, check_dead_arcs, check_ratio_monotonicity, check_projections, check_oracle,
)


def run_all(cases=200, seed=0) -> list:
    return [f(cases=cases, seed=seed + k) for k, f in enumerate(ALL_CHECKS)]
