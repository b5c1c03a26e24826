"""Exact coefficient fields: the rationals and small finite fields GF(p^r).

Finite-field elements are plain ints in ``range(q)``: the base-``p`` digits of
an element are the coefficients of its polynomial representative modulo the
defining irreducible polynomial.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence


class RationalField:
    name = "QQ"
    characteristic = 0
    order = None
    zero = Fraction(0)
    one = Fraction(1)

    def __repr__(self) -> str:
        return "RationalField()"

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash("QQ")

    def spec(self) -> dict:
        return {"kind": "QQ"}

    def coerce(self, x) -> Fraction:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, (int, str)):
            return Fraction(x)
        raise TypeError(f"cannot coerce {x!r} into QQ")

    def from_int(self, n: int) -> Fraction:
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def random_element(self, rng: random.Random, spread: int = 10) -> Fraction:
        return Fraction(rng.randint(-spread, spread))

    def to_json(self, a) -> str:
        return str(a)

    def from_json(self, s) -> Fraction:
        return Fraction(s)


QQ = RationalField()


def _poly_mod_is_irreducible(p: int, modulus: Sequence[int]) -> bool:
    """Trial division by every monic polynomial of degree 1..r//2 over GF(p)."""
    r = len(modulus) - 1
    if r < 1 or modulus[-1] % p == 0:
        return False
    for deg in range(1, r // 2 + 1):
        for tail in itertools.product(range(p), repeat=deg):
            divisor = list(tail) + [1]
            rem = [c % p for c in modulus]
            for shift in range(len(rem) - len(divisor), -1, -1):
                f = rem[shift + deg]
                if f:
                    for i, c in enumerate(divisor):
                        rem[shift + i] = (rem[shift + i] - f * c) % p
            if not any(rem[:deg]):
                return False
    return True


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def default_modulus(p: int, r: int) -> tuple[int, ...]:
    """Lexicographically first monic irreducible polynomial of degree r."""
    if r == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=r):
        cand = tuple(reversed(tail)) + (1,)
        if cand[0] and _poly_mod_is_irreducible(p, cand):
            return cand
    raise ValueError(f"no irreducible polynomial of degree {r} over GF({p})")


class FiniteField:
    """GF(p^r) with lookup tables; intended for orders up to a few hundred."""

    def __init__(self, p: int, r: int = 1, modulus: Sequence[int] | None = None):
        if not _is_prime(p):
            raise ValueError(f"characteristic must be prime, got {p}")
        if r < 1:
            raise ValueError("degree must be >= 1")
        if modulus is None:
            modulus = default_modulus(p, r)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != r + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree r (coefficients low to high)")
        if r > 1 and not _poly_mod_is_irreducible(p, modulus):
            raise ValueError(f"modulus {modulus} is reducible over GF({p})")
        self.characteristic = p
        self.degree = r
        self.modulus = modulus
        self.order = q = p**r
        if q > 1024:
            raise ValueError("finite fields are table-based; order must be <= 1024")
        self.zero = 0
        self.one = 1
        self.name = f"GF({q})"
        self._build_tables()

    def _digits(self, a: int) -> list[int]:
        p = self.characteristic
        out = []
        for _ in range(self.degree):
            out.append(a % p)
            a //= p
        return out

    def _undigits(self, ds: Sequence[int]) -> int:
        p = self.characteristic
        a = 0
        for d in reversed(ds):
            a = a * p + d
        return a

    def _build_tables(self) -> None:
        p, r, q = self.characteristic, self.degree, self.order
        digits = [self._digits(a) for a in range(q)]
        add = [0] * (q * q)
        mul = [0] * (q * q)
        for a in range(q):
            da = digits[a]
            for b in range(q):
                db = digits[b]
                add[a * q + b] = self._undigits([(x + y) % p for x, y in zip(da, db)])
                prod = [0] * (2 * r - 1)
                for i, x in enumerate(da):
                    if x:
                        for j, y in enumerate(db):
                            prod[i + j] = (prod[i + j] + x * y) % p
                for k in range(len(prod) - 1, r - 1, -1):
                    f = prod[k]
                    if f:
                        for i, c in enumerate(self.modulus):
                            prod[k - r + i] = (prod[k - r + i] - f * c) % p
                mul[a * q + b] = self._undigits(prod[:r])
        neg = [0] * q
        inv = [0] * q
        for a in range(q):
            for b in range(q):
                if add[a * q + b] == 0:
                    neg[a] = b
                if a and mul[a * q + b] == 1:
                    inv[a] = b
        self.add_table, self.mul_table, self.neg_table, self.inv_table = add, mul, neg, inv

    def __repr__(self) -> str:
        if self.degree == 1:
            return f"FiniteField({self.characteristic})"
        return f"FiniteField({self.characteristic}, {self.degree}, modulus={self.modulus})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FiniteField)
            and other.characteristic == self.characteristic
            and other.modulus == self.modulus
        )

    def __hash__(self) -> int:
        return hash(("GF", self.characteristic, self.modulus))

    def spec(self) -> dict:
        return {"kind": "GF", "p": self.characteristic, "r": self.degree, "modulus": list(self.modulus)}

    def coerce(self, x) -> int:
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, int):
            if self.degree == 1:
                return x % self.characteristic
            if 0 <= x < self.order:
                return x
            raise ValueError(f"{x} is not an element code of {self.name}")
        if isinstance(x, Fraction):
            if x.denominator == 1:
                return self.coerce(int(x))
            return self.mul(self.from_int(x.numerator), self.inv(self.from_int(x.denominator)))
        raise TypeError(f"cannot coerce {x!r} into {self.name}")

    def from_int(self, n: int) -> int:
        return n % self.characteristic

    def add(self, a: int, b: int) -> int:
        return self.add_table[a * self.order + b]

    def sub(self, a: int, b: int) -> int:
        return self.add_table[a * self.order + self.neg_table[b]]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a * self.order + b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self.inv_table[a]

    def elements(self) -> Iterator[int]:
        return iter(range(self.order))

    def random_element(self, rng: random.Random, spread: int | None = None) -> int:
        return rng.randrange(self.order)

    def to_json(self, a: int) -> int:
        return a

    def from_json(self, s) -> int:
        return self.coerce(int(s))


@lru_cache(maxsize=None)
def GF(q: int) -> FiniteField:
    """The finite field of order ``q`` with its default modulus."""
    for p in range(2, q + 1):
        if q % p == 0:
            break
    r = 0
    n = q
    while n % p == 0:
        n //= p
        r += 1
    if n != 1 or not _is_prime(p):
        raise ValueError(f"{q} is not a prime power")
    return FiniteField(p, r)


def field_from_spec(spec: dict):
    if spec.get("kind") == "QQ":
        return QQ
    if spec.get("kind") == "GF":
        return FiniteField(spec["p"], spec.get("r", 1), spec.get("modulus"))
    raise ValueError(f"unknown field spec: {spec}")
