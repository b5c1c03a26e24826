from __future__ import annotations

from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quivercount.exact import (
    BinomialPolyG,
    InterpolationTable,
    Partition,
    PolyQ,
    b_poly_at,
    binomial_from_values,
    binomial_to_monomial,
    lagrange_interpolate,
    mobius,
    monomial_to_binomial,
    partition_pairing,
    partitions_of,
)


def _brute_partitions(n, largest=None):
    if n == 0:
        return [()]
    largest = n if largest is None else largest
    out = []
    for first in range(min(n, largest), 0, -1):
        out += [(first,) + rest for rest in _brute_partitions(n - first, first)]
    return out


def test_partitions_small():
    assert [p.parts for p in partitions_of(0)] == [()]
    assert [p.parts for p in partitions_of(4)] == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert len(partitions_of(6)) == 11


@pytest.mark.parametrize("n", range(0, 13))
def test_partitions_match_recursion(n):
    got = [p.parts for p in partitions_of(n)]
    assert got == _brute_partitions(n)
    assert all(p.size == n for p in partitions_of(n))


def test_partition_invariants():
    with pytest.raises(ValueError):
        Partition((1, 2))
    with pytest.raises(ValueError):
        Partition((2, 0))
    assert Partition((3, 1, 1)).conjugate().parts == (3, 1, 1)
    assert Partition((4, 2)).conjugate().parts == (2, 2, 1, 1)


def test_partition_pairing_examples():
    assert partition_pairing(Partition((1,)), Partition((1,))) == 1
    assert partition_pairing(Partition((2, 2)), Partition((2, 2))) == 8
    for d in range(1, 7):
        ones = Partition((1,) * d)
        assert partition_pairing(ones, ones) == d * d


def test_b_poly_examples():
    assert b_poly_at(Partition(()), Fraction(1, 2)) == 1
    assert b_poly_at(Partition((1, 1)), Fraction(1, 2)) == Fraction(3, 8)
    assert b_poly_at(Partition((2, 1)), Fraction(1, 3)) == Fraction(4, 9)


def test_mobius():
    assert [mobius(k) for k in range(1, 13)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]
    with pytest.raises(ValueError):
        mobius(0)


def test_polyq_arithmetic():
    q = PolyQ.x()
    a = q * q * q + q * q * q * q * q
    assert a == PolyQ([0, 0, 0, 1, 0, 1])
    assert a(2) == 40 and a(3) == 270
    assert (a - a).is_zero()
    assert PolyQ([1, 0, 0]).degree == 0
    assert str(PolyQ([2, 2, 1])) == "q^2 + 2q + 2"
    assert PolyQ([1])(5) == 1
    assert (q + 1) * (q - 1) == q * q - 1


def test_binomial_examples():
    assert binomial_to_monomial(BinomialPolyG({1: 1, 2: 2})) == PolyQ([0, 0, 1])
    diff = BinomialPolyG({2: 1, 3: 12, 4: 16})
    g = PolyQ.x()
    want = PolyQ([Fraction(2, 3)]) * g * (g - Fraction(1, 2)) * (g - 1) * (g - Fraction(3, 2))
    assert binomial_to_monomial(diff) == want
    assert binomial_to_monomial(BinomialPolyG({0: 1})) == PolyQ([1])
    assert str(BinomialPolyG({1: 1, 2: 4})) == "4C(g,2) + C(g,1)"


@settings(max_examples=60, deadline=None)
@given(st.dictionaries(st.integers(0, 8), st.integers(-50, 50), max_size=6), st.integers(0, 15))
def test_binomial_round_trip_and_evaluation(coeffs, g):
    p = BinomialPolyG(coeffs)
    mono = binomial_to_monomial(p)
    assert monomial_to_binomial(mono) == p
    assert p(g) == mono(g) == sum(c * comb(g, k) for k, c in coeffs.items())


def test_binomial_from_values():
    p = BinomialPolyG({1: 1, 2: 20, 3: 32})
    assert binomial_from_values([p(g) for g in range(5)]) == p


def test_interpolation_examples():
    assert lagrange_interpolate([(0, 1), (1, 1)]) == PolyQ([1])
    target = PolyQ([0, 0, 0, 1, 0, 1])
    pts = [(2, 40), (3, 270), (4, 1088), (5, 3250), (6, 7992), (7, 17150)]
    assert lagrange_interpolate(pts) == target
    # with 8100 in place of target(6) = 7992 the six points fit a different quintic
    bad = pts[:4] + [(6, 8100)] + pts[5:]
    assert lagrange_interpolate(bad) != target
    # q^2 + 2q + 2 at 0..3; interpolation recovers it and re-evaluation agrees
    quad = PolyQ([2, 2, 1])
    table = InterpolationTable([(x, quad(x)) for x in range(4)])
    got = lagrange_interpolate(table)
    assert got == quad and got.degree == 2


def test_interpolation_rejects_duplicates():
    with pytest.raises(ValueError):
        InterpolationTable([(1, 2), (1, 3)])
    with pytest.raises(ValueError):
        lagrange_interpolate([])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.fractions(min_value=-20, max_value=20, max_denominator=7), min_size=1, max_size=7))
def test_interpolation_recovers_random_polys(coeffs):
    p = PolyQ(coeffs)
    n = max(p.degree, 0) + 1
    assert lagrange_interpolate([(Fraction(x, 3), p(Fraction(x, 3))) for x in range(n)]) == p
