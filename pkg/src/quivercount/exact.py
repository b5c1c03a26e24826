"""Exact scalars, integer partitions and univariate polynomials.

Everything here works over :class:`fractions.Fraction`; nothing in the
package uses floating point.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Iterator, Mapping, Sequence


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact scalar: {x!r}")


# ---------------------------------------------------------------------------
# partitions


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(self.parts)
        if any(p < 1 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"partition parts must be weakly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for p in self.parts if p >= j) for j in range(1, self.parts[0] + 1)))

    def multiplicities(self) -> dict[int, int]:
        return dict(Counter(self.parts))

    def __repr__(self) -> str:
        return f"Partition{self.parts}"


def _partitions_bounded(n: int, largest: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions_bounded(n - first, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _partitions_cached(n: int) -> tuple[Partition, ...]:
    return tuple(Partition(p) for p in _partitions_bounded(n, n))


def partitions_of(n: int) -> list[Partition]:
    """All partitions of ``n`` in lexicographically descending order.

    >>> [p.parts for p in partitions_of(4)]
    [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    return list(_partitions_cached(n))


def partition_pairing(lam: Partition, mu: Partition) -> int:
    """Sum over columns j of (#parts of lam >= j) * (#parts of mu >= j)."""
    a = lam.conjugate().parts
    b = mu.conjugate().parts
    return sum(x * y for x, y in zip(a, b))


def b_poly_at(lam: Partition, t) -> Fraction:
    """prod over distinct part sizes j of prod_{m=1}^{mult_j} (1 - t^m)."""
    t = as_fraction(t)
    out = Fraction(1)
    for mult in lam.multiplicities().values():
        for m in range(1, mult + 1):
            out *= 1 - t**m
    return out


def mobius(k: int) -> int:
    if k < 1:
        raise ValueError("mobius is defined for positive integers")
    result = 1
    p = 2
    while p * p <= k:
        if k % p == 0:
            k //= p
            if k % p == 0:
                return 0
            result = -result
        p += 1
    if k > 1:
        result = -result
    return result


# ---------------------------------------------------------------------------
# polynomials


class PolyQ:
    """Univariate polynomial with exact rational coefficients.

    ``coeffs[i]`` is the coefficient of ``x**i``; trailing zeros are stripped
    so the zero polynomial has ``coeffs == ()``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def monomial(cls, k: int, c=1) -> "PolyQ":
        return cls([0] * k + [c])

    @classmethod
    def x(cls) -> "PolyQ":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def int_coeffs(self) -> list[int]:
        if not self.is_integral():
            raise ValueError(f"polynomial has non-integral coefficients: {self}")
        return [int(c) for c in self.coeffs]

    def __call__(self, x) -> Fraction:
        x = as_fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    evaluate = __call__

    def __add__(self, other) -> "PolyQ":
        other = _coerce_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return PolyQ(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self) -> "PolyQ":
        return PolyQ(-c for c in self.coeffs)

    def __sub__(self, other) -> "PolyQ":
        return self + (-_coerce_poly(other))

    def __rsub__(self, other) -> "PolyQ":
        return _coerce_poly(other) - self

    def __mul__(self, other) -> "PolyQ":
        other = _coerce_poly(other)
        if not self.coeffs or not other.coeffs:
            return PolyQ()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return PolyQ(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        try:
            other = _coerce_poly(other)
        except TypeError:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"PolyQ({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        return format_poly(self.coeffs, "q")


def _coerce_poly(p) -> PolyQ:
    if isinstance(p, PolyQ):
        return p
    if isinstance(p, (int, Fraction)):
        return PolyQ([p])
    raise TypeError(f"cannot treat {p!r} as a polynomial")


def format_poly(coeffs: Sequence, var: str) -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        if i == 0:
            body = str(c)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            body = mono if c == 1 else f"-{mono}" if c == -1 else f"({c}){mono}" if c.denominator != 1 else f"{c}{mono}"
        terms.append(body)
    if not terms:
        return "0"
    return " + ".join(terms).replace("+ -", "- ")


class BinomialPolyG:
    """Polynomial in ``g`` written as ``sum_k coeff[k] * C(g, k)``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, object] | Iterable = ()):
        if isinstance(coeffs, Mapping):
            items = coeffs.items()
        else:
            items = enumerate(coeffs)
        clean = {}
        for k, c in items:
            k = int(k)
            if k < 0:
                raise ValueError("binomial index must be nonnegative")
            c = as_fraction(c)
            if c:
                clean[k] = clean.get(k, Fraction(0)) + c
        self.coeffs: dict[int, Fraction] = {k: clean[k] for k in sorted(clean) if clean[k]}

    @property
    def degree(self) -> int:
        return max(self.coeffs, default=-1)

    @property
    def leading(self) -> Fraction:
        return self.coeffs[self.degree] if self.coeffs else Fraction(0)

    def __call__(self, g: int) -> Fraction:
        return sum((c * comb(g, k) for k, c in self.coeffs.items()), Fraction(0))

    evaluate = __call__

    def __add__(self, other: "BinomialPolyG") -> "BinomialPolyG":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, Fraction(0)) + c
        return BinomialPolyG(out)

    def __sub__(self, other: "BinomialPolyG") -> "BinomialPolyG":
        return self + other.scale(-1)

    def scale(self, c) -> "BinomialPolyG":
        c = as_fraction(c)
        return BinomialPolyG({k: v * c for k, v in self.coeffs.items()})

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs.values())

    def int_coeffs(self) -> dict[int, int]:
        if not self.is_integral():
            raise ValueError(f"non-integral binomial coefficients: {self}")
        return {k: int(c) for k, c in self.coeffs.items()}

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinomialPolyG):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(tuple(self.coeffs.items()))

    def __repr__(self) -> str:
        return f"BinomialPolyG({ {k: str(c) for k, c in self.coeffs.items()} })"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in sorted(self.coeffs, reverse=True):
            c = self.coeffs[k]
            if k == 0:
                terms.append(str(c))
                continue
            mono = f"C(g,{k})"
            terms.append(mono if c == 1 else f"-{mono}" if c == -1 else f"{c}{mono}")
        return " + ".join(terms).replace("+ -", "- ")


def binomial_basis_poly(k: int) -> PolyQ:
    """C(g, k) = g (g-1) ... (g-k+1) / k! in the monomial basis."""
    p = PolyQ([1])
    for i in range(k):
        p = p * PolyQ([-i, 1])
    return p * PolyQ([Fraction(1, _factorial(k))])


@lru_cache(maxsize=None)
def _factorial(n: int) -> int:
    return 1 if n < 2 else n * _factorial(n - 1)


def binomial_to_monomial(p: BinomialPolyG) -> PolyQ:
    out = PolyQ()
    for k, c in p.coeffs.items():
        out = out + binomial_basis_poly(k) * PolyQ([c])
    return out


def monomial_to_binomial(p: PolyQ) -> BinomialPolyG:
    """Newton forward differences at g = 0, 1, ..., deg."""
    if p.is_zero():
        return BinomialPolyG()
    values = [p(g) for g in range(p.degree + 1)]
    return binomial_from_values(values)


def binomial_from_values(values: Sequence) -> BinomialPolyG:
    """Binomial-basis polynomial through ``(g, values[g])`` for g = 0..n-1."""
    diffs = [as_fraction(v) for v in values]
    coeffs = {}
    for k in range(len(diffs)):
        coeffs[k] = diffs[0]
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]
    return BinomialPolyG(coeffs)


# ---------------------------------------------------------------------------
# interpolation


@dataclass(frozen=True)
class InterpolationTable:
    points: tuple[tuple[Fraction, Fraction], ...]

    def __init__(self, points: Iterable[tuple[object, object]]):
        pts = tuple((as_fraction(x), as_fraction(y)) for x, y in points)
        xs = [x for x, _ in pts]
        if len(set(xs)) != len(xs):
            raise ValueError("interpolation abscissas must be distinct")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)


def lagrange_interpolate(table: InterpolationTable | Iterable[tuple[object, object]]) -> PolyQ:
    """Unique polynomial of degree < len(table) through every point.

    Computed in Newton form (divided differences) and expanded; equivalent to
    the Lagrange form but quadratic rather than cubic in the point count.
    """
    if not isinstance(table, InterpolationTable):
        table = InterpolationTable(table)
    if not table.points:
        raise ValueError("need at least one interpolation point")
    xs = [x for x, _ in table.points]
    dd = [y for _, y in table.points]
    n = len(xs)
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level])
    # Horner expansion of the Newton form, coefficients kept as a plain list.
    coeffs = [dd[n - 1]]
    for i in range(n - 2, -1, -1):
        shifted = [Fraction(0)] + coeffs
        for j, c in enumerate(coeffs):
            shifted[j] -= xs[i] * c
        shifted[0] += dd[i]
        coeffs = shifted
    return PolyQ(coeffs)
