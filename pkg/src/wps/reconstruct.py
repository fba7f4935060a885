"""Recovering the minimal resolution graph from a Weil--Poincare series.

Single valuations go in two stages.  The ratio test locates the component
``E_sigma0`` of the pre-resolution (the modification after which the strict
transform meets the exceptional divisor at a smooth point) together with the
intersection multiplicity ``ell``; a pruned search over blow-up chains starting
at a smooth point of ``E_sigma0`` then finds the graphs reproducing the series.

Several valuations are peeled one at a time: the branch to remove is chosen by
the maximality conditions on the numerator exponents, its own series and the
series of the remaining ones follow from the projection formulas, and the
branch is re-attached by a search validated against the full series.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .algebra import CanonicalForm, FactoredSeries, SeriesError, canonicalize
from .engine import drop_variable, single_from_multi, weil_poincare
from .graphs import (
    AdeType, EdgePoint, FreePoint, GraphError, ResolutionGraph, euler_chi, _vkey, automorphism_group,
    blow_up, build_minimal, canonical_key, determinant, is_minimal,
)
from .modes import AssumptionMode, check_mode, violates
from .registry import lookup

DEFAULT_BUDGET = 24


class ReconstructionError(ValueError):
    """The series is not realised by any configuration of the given type."""


class BudgetExhausted(ReconstructionError):
    """The depth cap cut off a search branch that pruning had not excluded."""


def default_budget() -> int:
    return int(os.environ.get("WPS_BUDGET", DEFAULT_BUDGET))


def _type(t) -> AdeType:
    return AdeType.parse(t) if isinstance(t, str) else t


# -- positions on the subdivided minimal graph ------------------------------------------

@dataclass(frozen=True, order=True)
class Position:
    """A base vertex ``a`` (``b is None``), or the component obtained by
    repeatedly blowing up the intersection points on the edge ``(a, b)`` whose
    curvette is ``p * curvette(a) + q * curvette(b)`` (``p, q`` coprime)."""

    a: str
    b: str | None = None
    p: int = 1
    q: int = 0

    def __post_init__(self):
        if self.b is not None:
            if self.p < 1 or self.q < 1 or math.gcd(self.p, self.q) != 1:
                raise ValueError(f"bad edge coordinates {(self.p, self.q)}")
            if _vkey(self.b) < _vkey(self.a):
                a, b, p, q = self.b, self.a, self.q, self.p
                object.__setattr__(self, "a", a)
                object.__setattr__(self, "b", b)
                object.__setattr__(self, "p", p)
                object.__setattr__(self, "q", q)

    @property
    def is_vertex(self):
        return self.b is None

    def path(self):
        """Stern--Brocot descent: which side each successive mediant falls."""
        out = []
        lo, hi = (1, 0), (0, 1)
        while True:
            mid = (lo[0] + hi[0], lo[1] + hi[1])
            if mid == (self.p, self.q):
                return out
            if self.q * mid[0] < mid[1] * self.p:
                hi = mid
                out.append(0)
            else:
                lo = mid
                out.append(1)

    @property
    def offset(self) -> Fraction:
        """Dyadic distance from ``a`` along the edge (the half-integer labels)."""
        lo, hi = Fraction(0), Fraction(1)
        for side in self.path():
            mid = (lo + hi) / 2
            lo, hi = (lo, mid) if side == 0 else (mid, hi)
        return (lo + hi) / 2

    @property
    def label(self) -> str:
        if self.is_vertex:
            return self.a
        a, b = int(self.a), int(self.b)
        if b == a + 1:
            return str(a + self.offset)
        return f"{a}-{b}@{self.offset}"

    def image(self, phi) -> "Position":
        if self.is_vertex:
            return Position(phi(self.a))
        return Position(phi(self.a), phi(self.b), self.p, self.q)

    def to_json(self):
        if self.is_vertex:
            return {"vertex": self.a}
        return {"edge": [self.a, self.b], "offset": str(self.offset), "weights": [self.p, self.q]}


def canonical_position(t, pos: Position) -> Position:
    return min(pos.image(phi) for phi in automorphism_group(_type(t)))


@lru_cache(maxsize=4096)
def pre_resolution(t, pos: Position):
    """``(graph, sigma0)``: the minimal graph with the edge blow-ups creating
    ``pos`` performed."""
    g = build_minimal(_type(t))
    if pos.is_vertex:
        return g, pos.a
    lo, hi = pos.a, pos.b
    for side in pos.path() + [None]:
        g = blow_up(g, EdgePoint(lo, hi))
        new = g.vertex_ids[-1]
        if side is None:
            return g, new
        lo, hi = (lo, new) if side == 0 else (new, hi)


@lru_cache(maxsize=None)
def _base_m(t: AdeType):
    g = build_minimal(t)
    return {v: g.m_column(v) for v in g.vertex_ids}


def curvette_values(t, pos: Position) -> dict:
    """``m_{sigma, pos}`` for every base vertex sigma."""
    m = _base_m(_type(t))
    if pos.is_vertex:
        return dict(m[pos.a])
    return {s: pos.p * m[pos.a][s] + pos.q * m[pos.b][s] for s in m[pos.a]}


@dataclass(frozen=True)
class PreResolutionAnswer:
    sigma0: Position
    ell: int

    def to_json(self):
        return {"sigma0": self.sigma0.to_json(), "label": self.sigma0.label, "ell": self.ell}


# -- the ratio test -----------------------------------------------------------------

def _multiset_remove(pool, values):
    pool = list(pool)
    for v in values:
        try:
            pool.remove(v)
        except ValueError:
            return None
    return pool


def _tails_ok(tails, ell, self_value, kind):
    if kind == "curve" and ell == 1:
        return not tails
    bound = ell * self_value
    return all(x > bound or (kind == "divisorial" and x == bound) for x in tails)


def ratio_candidates(c, t, kind="curve", mode=AssumptionMode.NONE) -> list:
    """Every ``(sigma0, ell)`` compatible with the denominators of ``c``.

    The end components of the minimal graph that do not contain ``sigma0``
    keep valency one, so their multiplicities ``ell * m_{sigma0, e}`` appear
    among the denominators; the remaining denominators come from the tail of
    the resolution beyond ``E_sigma0`` and exceed ``ell * m_{sigma0 sigma0}``.
    Along an edge of the minimal graph the ratios of the end multiplicities are
    strictly monotone, so a match there is unique and is solved for directly.
    """
    t = _type(t)
    mode = check_mode(t, mode)
    if isinstance(c, FactoredSeries):
        c = canonicalize(c)
    if c.nvars != 1:
        raise ValueError("the ratio test needs a single valuation")
    den = sorted(m[0] for m in c.denom_exponents)
    if not den:
        raise ReconstructionError("series without denominators")
    ends = [str(e) for e in t.ends()]
    m = _base_m(t)
    excluded = mode.excluded_vertex
    found = set()

    if t.rank == 1:
        ell = 2 * den[0]
        if ell.denominator == 1:
            found.add(PreResolutionAnswer(Position("1"), int(ell)))
        return sorted(found, key=lambda a: (a.sigma0, a.ell))

    def try_vertex(v):
        others = [e for e in ends if e != v]
        ref = m[v][others[0]]
        for x in sorted(set(den)):
            ell = x / ref
            if ell.denominator != 1 or ell < 1:
                continue
            tails = _multiset_remove(den, [ell * m[v][e] for e in others])
            if tails is not None and _tails_ok(tails, ell, m[v][v], kind):
                found.add(PreResolutionAnswer(Position(v), int(ell)))

    for v in m:
        if v != excluded:
            try_vertex(v)

    for a, b in t.base_edges():
        a, b = str(a), str(b)
        pair = None
        for e1, e2 in itertools.combinations(ends, 2):
            det = m[a][e1] * m[b][e2] - m[b][e1] * m[a][e2]
            if det:
                pair = (e1, e2, det)
                break
        if pair is None:
            continue
        e1, e2, det = pair
        values = sorted(set(den))
        for d1 in values:
            for d2 in values:
                x = (d1 * m[b][e2] - m[b][e1] * d2) / det
                y = (m[a][e1] * d2 - d1 * m[a][e2]) / det
                if x < 1 or y < 1 or x.denominator != 1 or y.denominator != 1:
                    continue
                ell = math.gcd(int(x), int(y))
                pos = Position(a, b, int(x) // ell, int(y) // ell)
                vals = [x * m[a][e] + y * m[b][e] for e in ends]
                tails = _multiset_remove(den, vals)
                if tails is None:
                    continue
                g, s0 = pre_resolution(t, pos)
                if _tails_ok(tails, ell, g.m(s0, s0), kind):
                    found.add(PreResolutionAnswer(pos, ell))

    canon = {PreResolutionAnswer(canonical_position(t, a.sigma0), a.ell) for a in found}
    return sorted(canon, key=lambda a: (a.sigma0, a.ell))


def recover_preresolution(c, t, kind="curve", mode=AssumptionMode.NONE) -> PreResolutionAnswer:
    found = ratio_candidates(c, t, kind, mode)
    if not found:
        raise ReconstructionError(f"no pre-resolution of {t} fits the series")
    if len(found) > 1:
        raise ReconstructionError(
            "the ratio test does not decide: " + ", ".join(f"{a.sigma0.label} (ell={a.ell})" for a in found)
        )
    return found[0]


def preresolution_of(g: ResolutionGraph, index=0) -> PreResolutionAnswer:
    """Ground truth read off a single-valuation graph built by its script from
    the minimal graph: ``sigma0`` ends the leading run of edge blow-ups (or is
    the component of the first free blow-up), and ``ell`` compares the
    multiplicities along a base component."""
    t = g.ade
    coords = {str(i): {str(i): 1} for i in range(1, t.rank + 1)}
    sigma0 = None
    steps = list(g.script)
    nid = t.rank
    for st in steps:
        nid += 1
        if st.kind != "edge":
            if sigma0 is None:
                sigma0 = st.at if st.kind == "free" else None
            break
        u, v = st.at
        acc = dict(coords[u])
        for k, x in coords[v].items():
            acc[k] = acc.get(k, 0) + x
        coords[str(nid)] = acc
        sigma0 = str(nid)
    taus = [v for _, v in g.arrows] + list(g.divisorial)
    tau = taus[index]
    if sigma0 is None:
        if steps and steps[0].kind == "arrow":
            raise ValueError("script starts at an arrow; no pre-resolution in the base graph")
        sigma0 = tau
    co = coords[sigma0]
    if len(co) == 1:
        pos = Position(next(iter(co)))
    else:
        (a, p), (b, q) = sorted(co.items(), key=lambda kv: _vkey(kv[0]))
        pos = Position(a, b, p, q)
    base = curvette_values(t, pos)
    ell = g.m("1", tau) / base["1"]
    if ell.denominator != 1:
        raise ValueError(f"non-integral ell {ell}")
    return PreResolutionAnswer(canonical_position(t, pos), int(ell))


# -- results --------------------------------------------------------------------------

@dataclass(frozen=True)
class ReconstructionResult:
    outcome: str  # "unique" | "ambiguous-known" | "unsupported"
    graphs: tuple = ()
    exception_id: str | None = None
    reason: str = ""
    info: dict = field(default_factory=dict, compare=False)

    @property
    def graph(self) -> ResolutionGraph:
        if self.outcome != "unique":
            raise ValueError(f"no unique graph: {self.outcome}")
        return self.graphs[0]

    def to_json(self) -> dict:
        from .graphs import graph_to_doc

        doc = {"outcome": self.outcome}
        if self.exception_id is not None:
            doc["exception"] = self.exception_id
        if self.reason:
            doc["reason"] = self.reason
        doc["candidates"] = [graph_to_doc(g) for g in self.graphs]
        return doc


def Unique(g, **info):
    return ReconstructionResult("unique", (g,), info=info)


def AmbiguousKnown(exception_id, graphs, **info):
    return ReconstructionResult("ambiguous-known", tuple(graphs), exception_id, info=info)


def Unsupported(reason, graphs=(), **info):
    return ReconstructionResult("unsupported", tuple(graphs), reason=reason, info=info)


# -- searches --------------------------------------------------------------------------

def _base_sum(g, w, n):
    col = g.m_column(w)
    return sum(col[str(i)] for i in range(1, n + 1))


class _Search:
    """Depth-first search over blow-up chains for one additional valuation.

    ``start`` is the graph before the chain and ``origin`` the component whose
    smooth point the chain starts from (``None``: anywhere).  Pruning uses two
    monotone quantities along a chain: the sum of the multiplicities on the
    base components (constant under a free blow-up, strictly increasing under
    the others, and equal to one of ``sum_targets`` at the end), and the self
    value ``m_ww`` (``+1`` under a free blow-up, ``m_uu + m_vv + 2 m_uv + 1``
    at an intersection point).  ``top`` bounds the self value of the final
    component when ``exact_top`` is set; otherwise it only bounds the values
    of the end components the chain leaves behind."""

    def __init__(self, target, kind, mode, cap, accept):
        self.target = target
        self.kind = kind
        self.mode = mode
        self.cap = cap
        self.accept = accept
        self.exhausted = False
        self.found = {}
        self.evaluated = 0
        self.anchors = []
        self.ell = None
        self.degree = None

    def _excess(self, h, w, n):
        """``(ell_w, m_ww - ell_w^2 m_aa)`` against the first anchor whose base
        vector is proportional to that of ``w``, else ``None``.  By Noether's
        formula the excess is the sum of squared multiplicities of the
        curvette of ``w`` at the points blown up after ``E_a``; it grows along
        the chain and is bounded by that of the final component."""
        col = h.m_column(w)
        for vec, maa, dmax in self.anchors:
            ratio = None
            for s in vec:
                r = col[s] / vec[s]
                if ratio is None:
                    ratio = r
                elif r != ratio:
                    break
            else:
                if ratio.denominator == 1:
                    return ratio, h.m(w, w) - ratio * ratio * maa, dmax, maa
        return None

    def _keep(self, st, h, w, bw, top, exact_top, sum_targets):
        sw = h.m(w, w)
        n = h.ade.rank
        if self.degree is not None:
            # sum_s chi_s m_{s,w} equals 1 + m_ww - sum_{e_s <= -3} (-2 - e_s) m_{s,w}
            # on an undecorated graph; it increases strictly along a chain and
            # the curve version (without m_ww) never increases
            q = _degree(h, w)
            if self.kind == "curve":
                # after a free step an intersection point of the run must still
                # be blown up, which costs at least m_pp more
                extra = h.m(st.at, st.at) if st.kind == "free" else 0
                if q - sw - extra < self.degree:
                    return False
                # the divisorial sum at the final component is m_LL + degree
                if q + (st.kind == "free") > top + self.degree:
                    return False
            if self.kind == "divisorial" and q > self.degree:
                return False
        if self.kind == "curve" or exact_top:
            if sw > top:
                return False
        ex = self._excess(h, w, n) if self.anchors else None
        if ex is not None:
            lw, d, dmax, maa = ex
            if dmax is not None:
                # a free component is followed by at least one more point
                if d + (st.kind == "free" and self.kind == "curve") > dmax:
                    return False
            elif self.kind == "divisorial" and st.kind == "free":
                ell = self.ell
                if (ell if bw in sum_targets else lw) * ell * maa + d > top:
                    return False
        if st.kind != "free":
            return True
        if self.kind == "curve":
            # an arrow on a fresh free component is contractible, so an edge
            # blow-up must follow, with self value at least 4 m_ww - 2
            return 4 * sw - 2 <= top
        if bw in sum_targets:
            return sw <= top
        # w stays an end.  Every later component restricts to the old ones as
        # a * curvette(w) + b * curvette(last) with a >= 1, b >= 0, so its
        # multiplicity on E_w is at least a m_ww + b (m_ww - 1), while its base
        # sum a * bw + b * bw must reach the target.
        need = Fraction(max(sum_targets), bw)
        return max(need * (sw - 1) + 1, 2 * sw - 1) <= top

    def run(self, start, origin, top, sum_targets, exact_top=False):
        n = start.ade.rank
        sum_targets = set(sum_targets)
        sum_bound = max(sum_targets)
        seen = set()
        stack = [(start, origin, None, 0)]
        while stack:
            g, origin_, last, depth = stack.pop()
            key = (canonical_key(g, marker=last or origin_), last is None)
            if key in seen:
                continue
            seen.add(key)
            ends = [last] if last is not None else ([origin_] if origin_ is not None else g.vertex_ids)
            for v in ends:
                if _base_sum(g, v, n) in sum_targets:
                    self._finish(g, v)
            if last is None and origin_ is None:
                steps = [FreePoint(v) for v in g.vertex_ids] + [EdgePoint(*e) for e in g.edges]
                if self.kind == "curve":
                    steps += [_arrow_step(a) for a, _ in g.arrows]
            elif last is None:
                steps = [FreePoint(origin_)]
            else:
                steps = [FreePoint(last)] + [EdgePoint(last, w) for w in g.neighbours[last]]
                if self.kind == "curve":
                    steps += [_arrow_step(a) for a in g.arrows_at[last]]
            for st in steps:
                h = blow_up(g, st)
                w = h.vertex_ids[-1]
                bw = _base_sum(h, w, n)
                if bw > sum_bound:
                    continue
                if not self._keep(st, h, w, bw, top, exact_top, sum_targets):
                    continue
                if depth + 1 > self.cap:
                    self.exhausted = True
                    continue
                stack.append((h, None, w, depth + 1))
        return self.found

    def _finish(self, g, v):
        if self.kind == "curve":
            h = g.with_arrow(v, "Cnew")
        else:
            if v in g.divisorial or v in {x for _, x in g.arrows}:
                return
            h = g.with_mark(v)
        h = self.accept(h)
        if h is None or not is_minimal(h) or violates(h, self.mode):
            return
        self.evaluated += 1
        if weil_poincare(h) == self.target:
            self.found.setdefault(canonical_key(h), h)


def _degree(g: ResolutionGraph, w) -> Fraction:
    col = g.m_column(w)
    return sum((euler_chi(g, s) * col[s] for s in g.vertex_ids), Fraction(0))


def series_degree(s: FactoredSeries, i=0) -> Fraction:
    """``sum_sigma chi_sigma m_{sigma,i}``; unchanged by cancellation of factors."""
    return -sum((e * m[i] for m, e in s.factors.items()), Fraction(0))


def _arrow_step(a):
    from .graphs import ArrowPoint

    return ArrowPoint(a)


def _place(h: ResolutionGraph, i: int, kind: str) -> ResolutionGraph:
    """Move the valuation added last to position ``i`` and renumber arrows."""
    if kind == "curve":
        arrows = list(h.arrows)
        new = arrows.pop()
        arrows.insert(i, new)
        return h.replace(arrows=tuple((f"C{j + 1}", v) for j, (_, v) in enumerate(arrows)))
    marks = list(h.divisorial)
    new = marks.pop()
    marks.insert(i, new)
    return h.replace(divisorial=tuple(marks))


def _cap(s: FactoredSeries, budget):
    return default_budget() if budget is None else int(budget)


def search_single(s: FactoredSeries, t, kind, mode, answers, budget=None):
    """Graphs reproducing ``s`` whose pre-resolution is one of ``answers``."""
    t = _type(t)
    srch = _Search(s, kind, mode, _cap(s, budget), lambda h: _place(h, 0, kind))
    for a in answers:
        g, s0 = pre_resolution(t, a.sigma0)
        total = a.ell * sum(curvette_values(t, a.sigma0).values())
        # a factor can cancel only against one of equal exponent; besides the
        # final component, numerators sit on the pre-resolution components,
        # whose values ell * m_{sigma, sigma0} are known
        col = g.m_column(s0)
        top = max([s.max_entry()] + [a.ell * x for x in col.values()])
        vec = curvette_values(t, a.sigma0)
        m00 = g.m(s0, s0)
        dmax = top - a.ell ** 2 * m00 if kind == "curve" else None
        srch.anchors = [(vec, m00, dmax)]
        srch.ell = a.ell
        srch.degree = series_degree(s)
        srch.run(g, s0, top, {total})
    return srch


def _kind(kinds):
    if isinstance(kinds, str):
        return kinds
    ks = set(kinds)
    if len(ks) != 1:
        raise ValueError("curve and divisorial valuations cannot be mixed")
    return ks.pop()


def recover_single(s: FactoredSeries, t, kind="curve", mode=AssumptionMode.NONE, budget=None) -> ReconstructionResult:
    t = _type(t)
    mode = check_mode(t, mode)
    if s.nvars != 1:
        raise ValueError("recover_single needs a single valuation")
    ok, out = _recover_single_cached(tuple(s.factors.items()), t, kind, mode, _cap(s, budget))
    if not ok:
        raise out
    return out


@lru_cache(maxsize=65536)
def _recover_single_cached(factors, t, kind, mode, cap):
    # peeling meets the same one-branch series over and over
    try:
        return True, _recover_single(FactoredSeries(1, dict(factors)), t, kind, mode, cap)
    except ReconstructionError as exc:
        return False, exc


def _recover_single(s, t, kind, mode, budget):
    answers = ratio_candidates(s, t, kind, mode)
    if not answers:
        raise ReconstructionError(f"no pre-resolution of {t} fits the series")
    srch = search_single(s, t, kind, mode, answers, budget)
    graphs = [srch.found[k] for k in sorted(srch.found)]
    info = {"preresolution": [a.to_json() for a in answers], "evaluated": srch.evaluated}
    return _conclude(s, t, kind, graphs, srch.exhausted, info)


def _conclude(s, t, kind, graphs, exhausted, info):
    if exhausted:
        raise BudgetExhausted(f"search depth cap reached with {len(graphs)} candidate(s) found")
    if not graphs:
        raise ReconstructionError(f"no configuration on {t} reproduces the series")
    if len(graphs) == 1:
        return Unique(graphs[0], **info)
    entry = lookup(s, t, kind)
    if entry is not None:
        return AmbiguousKnown(entry.exception_id, graphs, **info)
    return Unsupported(f"{len(graphs)} non-isomorphic configurations share the series", graphs, **info)


# -- several valuations ----------------------------------------------------------------

def kappa_candidates(s: FactoredSeries) -> list:
    """Pairs ``(k, i)`` (``k`` indexing the exponents in ``s``) meeting the two
    maximality conditions, best first."""
    r = s.nvars
    exps = list(s.factors)
    pos = [n for n, e in s.factors.items() if e > 0]

    def scaled(n, i):
        return tuple(x / n[i] for x in n)

    kappa = {}
    for i in range(r):
        for n in pos:
            sn = scaled(n, i)
            if all(all(a >= b for a, b in zip(scaled(nj, i), sn)) for nj in exps):
                kappa.setdefault(i, []).append(n)
    A = {}
    for i, ns in kappa.items():
        for n in ns:
            A.setdefault(n, []).append(i)
    out = []
    for n, idx in A.items():
        for i in idx:
            if any(n[i] < n[j] for j in idx):
                continue
            if any(n[j] > n2[i] for n2, idx2 in A.items() if n2 != n for j in idx2):
                continue
            out.append((n, i))
    out.sort(key=lambda ni: (sum(ni[0]), exps.index(ni[0]), ni[1]))
    # when exponents are proportional the inequalities tie and kappa is not
    # a function; every tied numerator is then a fallback, largest first
    rest = [(n, i) for i, ns in kappa.items() for n in ns if (n, i) not in out]
    rest.sort(key=lambda ni: (-ni[0][ni[1]], exps.index(ni[0]), ni[1]))
    return out + rest


def _align(g: ResolutionGraph, s: FactoredSeries, kind):
    """Reorder the valuations of ``g`` so that its series is ``s``."""
    n = s.nvars
    for perm in itertools.permutations(range(n)):
        if kind == "curve":
            arrows = tuple((f"C{j + 1}", g.arrows[perm[j]][1]) for j in range(n))
            h = g.replace(arrows=arrows)
        else:
            h = g.replace(divisorial=tuple(g.divisorial[perm[j]] for j in range(n)))
        if weil_poincare(h) == s:
            return h
    return None


def _registry_result(s, t, kind):
    entry = lookup(s, t, kind)
    if entry is None:
        return None
    graphs = [h for h in (_align(g, s, kind) for g in entry.configurations) if h is not None]
    return AmbiguousKnown(entry.exception_id, graphs)


def recover_multi(s: FactoredSeries, t, kinds="curve", mode=AssumptionMode.NONE, budget=None) -> ReconstructionResult:
    t = _type(t)
    kind = _kind(kinds)
    mode = check_mode(t, mode)
    if s.nvars == 1:
        return recover_single(s, t, kind, mode, budget)
    reg = _registry_result(s, t, kind)
    if reg is not None and not lookup(s, t, kind).collision:
        return reg
    if kind == "curve":
        plans = []
        for n, i in kappa_candidates(s):
            try:
                plans.append((i, n, single_from_multi(s, i, n), drop_variable(s, i, n)))
            except SeriesError:
                continue
    else:
        i = s.nvars - 1
        plans = [(i, None, s.restrict_to(i), s.specialize(i))]
    if kind == "curve" and s.nvars == 2:
        plans = itertools.chain(plans, _pair_fallback(s, t))
    last_error = None
    for i, n, own, rest in plans:
        try:
            return _join(s, t, kind, mode, budget, i, n, own, rest)
        except ReconstructionError as exc:
            last_error = exc
    if last_error is not None:
        raise last_error
    raise ReconstructionError("no branch can be peeled off")


def _pair_fallback(s: FactoredSeries, t):
    """Plans for two curves whose factor ``m_tau`` cancelled out of the series.

    Both projections only need the intersection number ``x = m_{tau(1), 2}``;
    it lies in ``(1/det) Z`` and is tried up to the largest exponent entry."""
    det = abs(determinant(build_minimal(t)))
    top = s.max_entry()
    for k in range(1, int(top * det) + 1):
        x = Fraction(k, det)
        for i in (0, 1):
            n = (x, x)
            try:
                own, rest = single_from_multi(s, i, n), drop_variable(s, i, n)
            except SeriesError:
                continue
            yield i, tuple(None if j == i else x for j in range(2)), own, rest


def _join(s, t, kind, mode, budget, i, n, own, rest):
    single = recover_single(own, t, kind, mode, budget)
    others = recover_multi(rest, t, kind, mode, budget)
    if single.outcome == "unsupported" or others.outcome == "unsupported":
        raise ReconstructionError("a peeled part is not determined: " + (single.reason or others.reason))
    found = {}
    evaluated = 0
    for base in others.graphs:
        for g_i in single.graphs:
            for phi in automorphism_group(t):
                for h in _merge(base, g_i, phi, kind, n, i):
                    h = _place(h, i, kind)
                    if not is_minimal(h) or violates(h, mode):
                        continue
                    evaluated += 1
                    if weil_poincare(h) == s:
                        found.setdefault(canonical_key(h), h)
    graphs = [found[k] for k in sorted(found)]
    info = {"peeled": i, "m_tau": None if n is None else [None if x is None else str(x) for x in n], "evaluated": evaluated}
    return _conclude(s, t, kind, graphs, False, info)


def _merge(base: ResolutionGraph, own: ResolutionGraph, phi, kind, n_tau=None, i=0):
    """Graphs obtained by adding the valuation of ``own`` to ``base``.

    The blow-up centres of ``own`` are replayed on ``base`` (moved by the
    symmetry ``phi`` of the Dynkin graph).  As long as they agree with centres
    already blown up for ``base`` the chain may follow those: a free point is
    either one of the free points blown up earlier, the point of an arrow, or
    a new point; an intersection point already blown up must be followed.  A
    curve may also keep following after its own chain ends (the blow-ups that
    separate it from the other branches); the entries of ``n_tau`` (the
    multiplicity vector of its final component, ``None`` where unknown) bound
    how far."""
    rank = base.ade.rank
    steps = own.script
    tau = own.arrows[0][1] if kind == "curve" else own.divisorial[0]

    def children(h, pred):
        return [str(rank + 1 + k) for k, st in enumerate(h.script) if pred(st)]

    def free_children(h, a):
        return children(h, lambda st: st.kind == "free" and st.at == a)

    def arrow_shares(h, a):
        out = []
        for x in h.arrows_at[a]:
            h2 = blow_up(h, _arrow_step(x))
            out.append((h2, h2.vertex_ids[-1]))
        return out

    def finish(h, v, shared):
        if kind == "divisorial":
            if v not in h.divisorial:
                yield h.with_mark(v)
            return
        if n_tau is not None:
            col = h.m_column(v)
            others = [x for j, x in enumerate(n_tau) if j != i]
            if n_tau[i] is not None and col[v] > n_tau[i]:
                return
            if any(x is not None and col[w] > x for x, (_, w) in zip(others, h.arrows)):
                return
        yield h.with_arrow(v, "Cnew")
        if shared:
            for x in free_children(h, v):
                yield from finish(h, x, True)
            for h2, y in arrow_shares(h, v):
                yield from finish(h2, y, True)

    def walk(h, mp, j, shared):
        if j == len(steps):
            yield from finish(h, mp[tau], shared)
            return
        st = steps[j]
        me = str(rank + 1 + j)
        if st.kind == "free":
            a = mp[st.at]
            if shared:
                for x in free_children(h, a):
                    yield from walk(h, {**mp, me: x}, j + 1, True)
                if kind == "curve":
                    for h2, y in arrow_shares(h, a):
                        yield from walk(h2, {**mp, me: y}, j + 1, True)
            h2 = blow_up(h, FreePoint(a))
            yield from walk(h2, {**mp, me: h2.vertex_ids[-1]}, j + 1, False)
        elif st.kind == "edge":
            a, b = mp[st.at[0]], mp[st.at[1]]
            if shared:
                hit = children(h, lambda x: x.kind == "edge" and set(x.at) == {a, b})
                if hit:
                    yield from walk(h, {**mp, me: hit[0]}, j + 1, True)
                    return
            if b in h.neighbours[a]:
                h2 = blow_up(h, EdgePoint(a, b))
                yield from walk(h2, {**mp, me: h2.vertex_ids[-1]}, j + 1, False)
        else:
            raise ReconstructionError("a single-branch graph has no blow-up at an arrow")

    start = {str(v): phi(v) for v in range(1, rank + 1)}
    yield from walk(base, start, 0, True)


def recover(s: FactoredSeries, t, kind="curve", mode=AssumptionMode.NONE, budget=None) -> ReconstructionResult:
    if s.nvars == 1:
        return recover_single(s, t, kind, mode, budget)
    return recover_multi(s, t, kind, mode, budget)


def recover_any_family(s: FactoredSeries, kind="curve", max_rank=8, budget=None) -> dict:
    """Try every ADE type up to ``max_rank``; report each type (and mode) with
    a reconstruction.  Nothing is claimed about the type being determined."""
    from .modes import legal_modes

    out = {}
    types = [AdeType("A", k) for k in range(1, max_rank + 1)]
    types += [AdeType("D", k) for k in range(4, max_rank + 1)]
    types += [AdeType("E", k) for k in (6, 7, 8) if k <= max_rank]
    for t in types:
        for m in legal_modes(t):
            try:
                out[(str(t), m.value)] = recover(s, t, kind, m, budget)
            except (ReconstructionError, GraphError, SeriesError):
                continue
    return out
