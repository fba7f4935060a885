"""Registry of configurations whose series need special treatment.

Two sorts of entries:

* end-curvette collections on D_k, E_6, E_7, E_8 (and the two end curvettes on
  A_k with series 1) for which the peeling argument for several branches does
  not apply;
* the two pairs of non-isomorphic configurations on E_7 with equal series
  (one curve pair, one divisorial pair).

Every entry carries the series as printed in the literature (normalised to the
text grammar of :mod:`wps.algebra`) and the configurations producing it; the
two are checked against each other when the registry is built.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .algebra import FactoredSeries, parse_series
from .engine import weil_poincare
from .graphs import AdeType, EdgePoint, FreePoint, apply_script, blow_up, build_minimal


class RegistryError(RuntimeError):
    pass


@dataclass(frozen=True)
class ExceptionalEntry:
    exception_id: str
    ade: AdeType
    kind: str
    printed: str
    configurations: tuple
    collision: bool  # True when the configurations are non-isomorphic with equal series

    @property
    def series(self) -> FactoredSeries:
        return weil_poincare(self.configurations[0])


def _curvettes(t, ends):
    g = build_minimal(t)
    for e in ends:
        g = g.with_arrow(e)
    return g


def _d_rows(k):
    h = Fraction(k - 2, 2)
    q = Fraction(k - 2, 4)
    f = lambda x: str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return [
        ((1, k), f"(1 - t1 t2^{f(h)}) (1 - t1^1/2 t2^{f(q)})^-1"),
        ((k - 1, k), f"(1 - t1^{f(h)} t2^{f(h)}) (1 - t1^1/2 t2^1/2)^-1"),
        ((1, k - 1, k), f"(1 - t1 t2^{f(h)} t3^{f(h)})"),
    ]


# Printed rows for the exceptional types; `t_2{3/2}` (E7 {1,7}) and `t_2{^3}`
# (E8 {1,8}) are read as exponents.
_E_ROWS = {
    6: [
        ((1, 4), "(1 - t1^2 t2^3) (1 - t1^2/3 t2)^-1"),
        ((1, 6), "(1 - t1^2 t2^2) (1 - t1 t2)^-1"),
        ((1, 4, 6), "(1 - t1^2 t2^3 t3^2)"),
    ],
    7: [
        ((1, 4), "(1 - t1^4 t2^6) (1 - t1 t2^3/2)^-1"),
        ((1, 7), "(1 - t1^4 t2^3) (1 - t1^2 t2^3/2)^-1"),
        ((4, 7), "(1 - t1^6 t2^3) (1 - t1^2 t2)^-1"),
        ((1, 4, 7), "(1 - t1^4 t2^6 t3^3)"),
    ],
    8: [
        ((1, 4), "(1 - t1^10 t2^15) (1 - t1^2 t2^3)^-1"),
        ((1, 8), "(1 - t1^10 t2^6) (1 - t1^5 t2^3)^-1"),
        ((4, 8), "(1 - t1^15 t2^6) (1 - t1^5 t2^2)^-1"),
        ((1, 4, 8), "(1 - t1^10 t2^15 t3^6)"),
    ],
}

_E7_CURVE = "(1 - t1^2)^-1 (1 - t1^3)^-1 (1 - t1^4)^-1 (1 - t1^6) (1 - t1^8)"
_E7_DIV = "(1 - t1^2)^-1 (1 - t1^3)^-1 (1 - t1^4)^-1 (1 - t1^6) (1 - t1^8) (1 - t1^9)^-1"


def e7_pair_graphs():
    """``(C', C'', D', D'')`` on E_7."""
    g = build_minimal("E7")
    c1 = g.with_arrow(2)
    tangent = apply_script(g, [FreePoint(7), EdgePoint(7, 8)])
    c2 = tangent.with_arrow(9)
    d1 = blow_up(tangent, FreePoint(9)).with_mark(10)
    d2 = apply_script(g, [FreePoint(2), FreePoint(8), FreePoint(9)]).with_mark(10)
    return c1, c2, d1, d2


@lru_cache(maxsize=None)
def registry_for(t: AdeType) -> tuple:
    entries = []
    k = t.rank
    rows = []
    if t.family == "D":
        rows = _d_rows(k)
    elif t.family == "E":
        rows = _E_ROWS[k]
    for ends, printed in rows:
        label = "{" + ",".join(map(str, ends)) + "}"
        entries.append(ExceptionalEntry(f"{t} {label}", t, "curve", printed, (_curvettes(t, ends),), False))
    if t.family == "A":
        ends = (1, 1) if k == 1 else (1, k)
        entries.append(ExceptionalEntry(f"{t} trivial", t, "curve", "1", (_curvettes(t, ends),), False))
    if t == AdeType("E", 7):
        c1, c2, d1, d2 = e7_pair_graphs()
        entries.append(ExceptionalEntry("E7-curve-pair", t, "curve", _E7_CURVE, (c1, c2), True))
        entries.append(ExceptionalEntry("E7-divisorial-pair", t, "divisorial", _E7_DIV, (d1, d2), True))
    for e in entries:
        n = len(e.configurations[0].arrows) or len(e.configurations[0].divisorial)
        printed = parse_series(e.printed, n)
        for g in e.configurations:
            if weil_poincare(g) != printed:
                raise RegistryError(f"{e.exception_id}: computed {weil_poincare(g)} != printed {e.printed}")
    return tuple(entries)


def _match(s: FactoredSeries, target: FactoredSeries) -> bool:
    if s.nvars != target.nvars:
        return False
    return any(s == target.permute(p) for p in itertools.permutations(range(s.nvars)))


def lookup(s: FactoredSeries, t, kind=None):
    if isinstance(t, str):
        t = AdeType.parse(t)
    for e in registry_for(t):
        if kind is not None and e.kind != kind:
            continue
        if _match(s, e.series):
            return e
    return None


def detect_exceptional(s: FactoredSeries, t, kind=None):
    e = lookup(s, t, kind)
    return None if e is None else e.exception_id
