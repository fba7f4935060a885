"""Exact fractional power series in several variables.

Two representations are used side by side:

* :class:`FactoredSeries` -- a finite product ``prod (1 - t^m)^e`` stored as a
  mapping from exponent vectors to nonzero integer powers.  Products of this
  shape have a unique such representation, so equality is decided by comparing
  the mappings.
* :class:`TruncatedSeries` -- explicit integer coefficients up to a total
  degree bound.  Only used as an independent cross-check of the factored form.

Exponent vectors are tuples of :class:`fractions.Fraction`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping

Exponent = tuple  # tuple[Fraction, ...]


class SeriesError(ValueError):
    pass


def as_exponent(values: Iterable) -> Exponent:
    vec = tuple(Fraction(v) for v in values)
    if any(v < 0 for v in vec):
        raise SeriesError(f"negative exponent entry in {vec}")
    return vec


def degree(m: Exponent) -> Fraction:
    return sum(m, Fraction(0))


def sort_key(m: Exponent):
    """Order used everywhere for factors: total degree first, then lexicographic."""
    return (degree(m), m)


def _check_width(a, b):
    if a.nvars != b.nvars:
        raise SeriesError(f"variable count mismatch: {a.nvars} != {b.nvars}")


@dataclass(frozen=True)
class FactoredSeries:
    """``prod_m (1 - t^m)^{e_m}`` with ``factors = {m: e_m}``."""

    nvars: int
    factors: Mapping = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for m, e in self.factors.items():
            m = as_exponent(m)
            if len(m) != self.nvars:
                raise SeriesError(f"exponent {m} has wrong length for {self.nvars} variables")
            if not any(m):
                raise SeriesError("factor (1 - t^0) is not allowed")
            e = int(e)
            if e:
                clean[m] = e
        object.__setattr__(self, "factors", dict(sorted(clean.items(), key=lambda kv: sort_key(kv[0]))))

    @classmethod
    def one(cls, nvars: int) -> "FactoredSeries":
        return cls(nvars, {})

    @classmethod
    def from_pairs(cls, nvars: int, pairs: Iterable) -> "FactoredSeries":
        acc: dict = {}
        for m, e in pairs:
            m = as_exponent(m)
            acc[m] = acc.get(m, 0) + e
        return cls(nvars, acc)

    def __mul__(self, other: "FactoredSeries") -> "FactoredSeries":
        _check_width(self, other)
        acc = dict(self.factors)
        for m, e in other.factors.items():
            acc[m] = acc.get(m, 0) + e
        return FactoredSeries(self.nvars, acc)

    def inverse(self) -> "FactoredSeries":
        return FactoredSeries(self.nvars, {m: -e for m, e in self.factors.items()})

    def __truediv__(self, other: "FactoredSeries") -> "FactoredSeries":
        return self * other.inverse()

    def __eq__(self, other):
        if not isinstance(other, FactoredSeries):
            return NotImplemented
        return self.nvars == other.nvars and self.factors == other.factors

    def __hash__(self):
        return hash((self.nvars, tuple(self.factors.items())))

    def is_one(self) -> bool:
        return not self.factors

    def exponents(self):
        return list(self.factors)

    def max_entry(self) -> Fraction:
        return max((max(m) for m in self.factors), default=Fraction(0))

    def specialize(self, index: int) -> "FactoredSeries":
        """Put ``t_index = 1``.

        Factors that lose all their variables would become ``(1 - 1)``; they are
        not allowed here and must have been cancelled by the caller.
        """
        acc: dict = {}
        for m, e in self.factors.items():
            rest = m[:index] + m[index + 1:]
            if not any(rest):
                raise SeriesError(f"factor (1 - t^{m}) vanishes at t{index + 1} = 1")
            acc[rest] = acc.get(rest, 0) + e
        return FactoredSeries(self.nvars - 1, acc)

    def restrict_to(self, index: int) -> "FactoredSeries":
        """Put every variable except ``t_index`` equal to 1."""
        acc: dict = {}
        for m, e in self.factors.items():
            if not m[index]:
                raise SeriesError(f"factor (1 - t^{m}) vanishes when only t{index + 1} is kept")
            key = (m[index],)
            acc[key] = acc.get(key, 0) + e
        return FactoredSeries(1, acc)

    def permute(self, perm) -> "FactoredSeries":
        """New series whose variable ``perm[i]`` is the old variable ``i``."""
        acc = {}
        for m, e in self.factors.items():
            new = [None] * self.nvars
            for i, j in enumerate(perm):
                new[j] = m[i]
            acc[tuple(new)] = e
        return FactoredSeries(self.nvars, acc)

    def __str__(self):
        return render_series(self)

    def __repr__(self):
        return f"FactoredSeries({render_series(self)!r})"


@dataclass(frozen=True)
class CanonicalForm:
    """Denominator exponents ``m_1 <= ... <= m_q`` (with repeats) and the
    nonnegative numerator powers ``s_m``."""

    nvars: int
    denom_exponents: tuple
    numer_exponents: tuple  # ((m, s_m), ...)

    @property
    def q(self) -> int:
        return len(self.denom_exponents)

    def to_series(self) -> FactoredSeries:
        return FactoredSeries.from_pairs(
            self.nvars,
            [(m, -1) for m in self.denom_exponents] + list(self.numer_exponents),
        )


def canonicalize(f: FactoredSeries) -> CanonicalForm:
    denom, numer = [], []
    for m, e in f.factors.items():
        if e < 0:
            denom.extend([m] * (-e))
        else:
            numer.append((m, e))
    return CanonicalForm(f.nvars, tuple(denom), tuple(numer))


def factored_multiply(a: FactoredSeries, b: FactoredSeries) -> FactoredSeries:
    return a * b


def series_equal(a: FactoredSeries, b: FactoredSeries) -> bool:
    _check_width(a, b)
    return canonicalize(a) == canonicalize(b)


# -- truncated expansion ---------------------------------------------------

@dataclass(frozen=True)
class TruncatedSeries:
    nvars: int
    bound: Fraction
    coefficients: Mapping

    def __post_init__(self):
        object.__setattr__(self, "bound", Fraction(self.bound))
        clean = {}
        for m, c in self.coefficients.items():
            m = as_exponent(m)
            if degree(m) <= self.bound and c:
                clean[m] = int(c)
        object.__setattr__(self, "coefficients", clean)

    def __getitem__(self, m) -> int:
        return self.coefficients.get(as_exponent(m), 0)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        _check_width(self, other)
        bound = min(self.bound, other.bound)
        return TruncatedSeries(self.nvars, bound, _convolve(self.coefficients, other.coefficients, bound))

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.nvars, self.bound, self.coefficients) == (other.nvars, other.bound, other.coefficients)

    def is_one(self) -> bool:
        zero = (Fraction(0),) * self.nvars
        return self.coefficients == {zero: 1}


def _convolve(a: Mapping, b: Mapping, bound: Fraction) -> dict:
    out: dict = {}
    for ma, ca in a.items():
        da = degree(ma)
        for mb, cb in b.items():
            if da + degree(mb) > bound:
                continue
            m = tuple(x + y for x, y in zip(ma, mb))
            out[m] = out.get(m, 0) + ca * cb
    return {m: c for m, c in out.items() if c}


def binomial_power_coefficient(power: int, k: int) -> int:
    """Coefficient of ``x^k`` in ``(1 - x)^power``."""
    if k < 0:
        return 0
    if power >= 0:
        return (-1) ** k * comb(power, k)
    return comb(-power + k - 1, k)


def expand(f: FactoredSeries, bound) -> TruncatedSeries:
    bound = Fraction(bound)
    if bound <= 0:
        raise SeriesError("expansion bound must be positive")
    zero = (Fraction(0),) * f.nvars
    acc = {zero: 1}
    for m, e in f.factors.items():
        d = degree(m)
        if d > bound:
            continue
        kmax = int(bound // d)
        terms = {}
        for k in range(kmax + 1):
            c = binomial_power_coefficient(e, k)
            if c:
                terms[tuple(k * x for x in m)] = c
        acc = _convolve(acc, terms, bound)
    return TruncatedSeries(f.nvars, bound, acc)


# -- text form ----------------------------------------------------------------

def _fmt_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def render_monomial(m: Exponent) -> str:
    parts = []
    for i, x in enumerate(m, start=1):
        if x == 0:
            continue
        parts.append(f"t{i}" if x == 1 else f"t{i}^{_fmt_fraction(x)}")
    return " ".join(parts)


def render_series(f: FactoredSeries) -> str:
    if f.is_one():
        return "1"
    out = []
    for m, e in f.factors.items():
        base = f"(1 - {render_monomial(m)})"
        out.append(base if e == 1 else f"{base}^{e}")
    return " ".join(out)


_FACTOR = re.compile(r"\(\s*1\s*-\s*([^()]*?)\s*\)(?:\s*\^\s*(-?\d+))?")
_VAR = re.compile(r"t(\d+)(?:\s*\^\s*\{?\s*(-?\d+(?:/\d+)?)\s*\}?)?")


def parse_series(text: str, nvars: int | None = None) -> FactoredSeries:
    """Inverse of :func:`render_series`.

    ``nvars`` defaults to the largest variable index that occurs.
    """
    text = text.strip()
    pairs = []
    top = 0
    if text in ("", "1"):
        return FactoredSeries.one(nvars or 1)
    pos = 0
    for match in _FACTOR.finditer(text):
        if text[pos:match.start()].strip():
            raise SeriesError(f"unexpected text {text[pos:match.start()]!r}")
        pos = match.end()
        mono = match.group(1)
        entries: dict = {}
        consumed = _VAR.sub("", mono).strip()
        if consumed:
            raise SeriesError(f"cannot parse monomial {mono!r}")
        for v in _VAR.finditer(mono):
            idx = int(v.group(1))
            if idx < 1:
                raise SeriesError(f"bad variable t{idx}")
            entries[idx] = entries.get(idx, Fraction(0)) + Fraction(v.group(2) or 1)
            top = max(top, idx)
        power = int(match.group(2)) if match.group(2) else 1
        pairs.append((entries, power))
    if text[pos:].strip():
        raise SeriesError(f"unexpected trailing text {text[pos:]!r}")
    n = nvars if nvars is not None else top
    if top > n:
        raise SeriesError(f"variable t{top} exceeds declared count {n}")
    return FactoredSeries.from_pairs(
        n, [(tuple(e.get(i, 0) for i in range(1, n + 1)), p) for e, p in pairs]
    )
