"""Weil--Poincare series of curve and divisorial valuations."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import FactoredSeries, SeriesError, as_exponent, binomial_power_coefficient
from .graphs import GraphError, ResolutionGraph, determinant, euler_chi


@dataclass(frozen=True)
class Valuation:
    kind: str  # "curve" or "divisorial"
    ref: str  # arrow id or vertex id

    def __post_init__(self):
        if self.kind not in ("curve", "divisorial"):
            raise ValueError(f"unknown valuation kind {self.kind!r}")


def CurveArrow(arrow_id) -> Valuation:
    return Valuation("curve", str(arrow_id))


def Divisorial(vertex_id) -> Valuation:
    return Valuation("divisorial", str(vertex_id))


@dataclass(frozen=True)
class ValuationSpec:
    valuations: tuple

    def __post_init__(self):
        object.__setattr__(self, "valuations", tuple(self.valuations))
        if len(set(self.valuations)) != len(self.valuations):
            raise ValueError("valuations must be distinct")

    @classmethod
    def default(cls, g: ResolutionGraph) -> "ValuationSpec":
        """Arrows in order, then divisorial marks in order."""
        return cls([CurveArrow(a) for a, _ in g.arrows] + [Divisorial(v) for v in g.divisorial])

    def __len__(self):
        return len(self.valuations)

    def __iter__(self):
        return iter(self.valuations)

    @property
    def kinds(self):
        return {v.kind for v in self.valuations}

    def tau(self, g: ResolutionGraph) -> list:
        out = []
        for v in self.valuations:
            if v.kind == "curve":
                out.append(g.arrow_vertex(v.ref))
            else:
                if v.ref not in g.weight:
                    raise GraphError(f"no vertex {v.ref!r} for divisorial valuation")
                out.append(v.ref)
        return out


def _spec(g, v):
    return ValuationSpec.default(g) if v is None else v


def multiplicity_vectors(g: ResolutionGraph, v: ValuationSpec | None = None) -> dict:
    """``m_sigma = (m_{sigma tau(1)}, ..., m_{sigma tau(r)})`` for each vertex."""
    taus = _spec(g, v).tau(g)
    cols = [g.m_column(t) for t in taus]
    return {s: tuple(c[s] for c in cols) for s in g.vertex_ids}


def weil_poincare(g: ResolutionGraph, v: ValuationSpec | None = None, check_denominators=True) -> FactoredSeries:
    spec = _spec(g, v)
    if not len(spec):
        raise ValueError("at least one valuation is required")
    arrowed = {x for _, x in g.arrows}
    for val in spec:
        if val.kind == "divisorial" and val.ref in arrowed:
            raise GraphError(f"vertex {val.ref} carries both an arrow and a divisorial mark")
    mv = multiplicity_vectors(g, spec)
    if check_denominators:
        d = determinant(g)
        for m in mv.values():
            if any(d % x.denominator for x in m):
                raise GraphError(f"exponent {m} has a denominator not dividing det = {d}")
    pairs = []
    for s in g.vertex_ids:
        chi = euler_chi(g, s)
        if chi:
            pairs.append((mv[s], -chi))
    return FactoredSeries.from_pairs(len(spec), pairs)


def intersection_number(g: ResolutionGraph, v: ValuationSpec | None, i: int, j: int) -> Fraction:
    spec = _spec(g, v)
    if i == j:
        raise ValueError("intersection number needs two different valuations")
    vi, vj = spec.valuations[i], spec.valuations[j]
    if vi.kind != "curve" or vj.kind != "curve":
        raise ValueError("intersection numbers are defined here for curve valuations")
    ti, tj = spec.tau(g)[i], spec.tau(g)[j]
    return g.m(ti, tj)


# -- projection formulas ---------------------------------------------------------------

def drop_variable(s: FactoredSeries, i0: int, m_tau: tuple) -> FactoredSeries:
    """``s|_{t_i0=1} / (1 - t^{m_tau})|_{t_i0=1}``."""
    if not 0 <= i0 < s.nvars:
        raise IndexError(f"variable index {i0} out of range")
    if s.nvars < 2:
        raise SeriesError("cannot drop the only variable")
    rest = tuple(m_tau[:i0]) + tuple(m_tau[i0 + 1:])
    return s.specialize(i0) / FactoredSeries(s.nvars - 1, {rest: 1})


def project_set_one(s: FactoredSeries, g: ResolutionGraph, v: ValuationSpec | None, i0: int):
    """Series of the collection without valuation ``i0`` and the exponent
    vector ``m_{tau(i0)}`` of the removed factor."""
    spec = _spec(g, v)
    if spec.kinds != {"curve"}:
        raise ValueError("the curve projection formula needs curve valuations only")
    if not 0 <= i0 < len(spec):
        raise IndexError(f"valuation index {i0} out of range")
    tau = spec.tau(g)[i0]
    m_tau = multiplicity_vectors(g, spec)[tau]
    return drop_variable(s, i0, m_tau), m_tau


def single_from_multi(s: FactoredSeries, i0: int, m_tau: tuple) -> FactoredSeries:
    """Series of branch ``i0`` alone, given ``m_{tau(i0)}``:
    ``s|_{t_j=1, j != i0} / prod_{i != i0} (1 - t^{m_{tau(i0), i}})``."""
    out = s.restrict_to(i0)
    for i, x in enumerate(m_tau):
        if i != i0:
            out = out / FactoredSeries(1, {(x,): 1})
    return out


# -- configuration-space oracle ----------------------------------------------------------

def oracle_coefficient(g: ResolutionGraph, v: ValuationSpec | None, u) -> int:
    """Coefficient of ``t^u`` as a sum over effective divisors on the smooth
    parts: ``sum over k with sum k_s m_s = u of prod_s c(chi_s, k_s)``, where
    ``c(chi, k)`` counts points of ``S^k`` weighted by Euler characteristic."""
    spec = _spec(g, v)
    u = as_exponent(u)
    mv = multiplicity_vectors(g, spec)
    parts = [(mv[s], euler_chi(g, s)) for s in g.vertex_ids if euler_chi(g, s)]

    def rec(idx, rest):
        if not any(rest):
            return 1
        if idx == len(parts):
            return 0
        m, chi = parts[idx]
        total = 0
        k = 0
        cur = rest
        while all(x >= 0 for x in cur):
            c = binomial_power_coefficient(-chi, k)
            if c:
                total += c * rec(idx + 1, cur)
            k += 1
            cur = tuple(a - b for a, b in zip(cur, m))
        return total

    return rec(0, u)
