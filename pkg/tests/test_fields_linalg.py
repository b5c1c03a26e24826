from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quivercount import _kernels_py, kernels, linalg
from quivercount.fields import GF, QQ, FiniteField, field_from_spec

try:
    from quivercount import _kernels as compiled
except ImportError:  # pragma: no cover - extension not built
    compiled = None

needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled extension not built")


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 16, 25, 27])
def test_field_axioms(q):
    f = GF(q)
    els = list(f.elements())
    assert len(els) == q
    for a in els:
        assert f.add(a, f.neg(a)) == f.zero
        if a:
            assert f.mul(a, f.inv(a)) == f.one
    rng = random.Random(q)
    for _ in range(200):
        a, b, c = (rng.choice(els) for _ in range(3))
        assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
        assert f.mul(a, b) == f.mul(b, a)


def test_gf4_default_modulus_and_round_trip():
    f = GF(4)
    assert f.characteristic == 2 and f.degree == 2
    # x is a root of x^2 + x + 1
    x = 2
    assert f.add(f.add(f.mul(x, x), x), f.one) == f.zero
    assert field_from_spec(f.spec()) == f
    assert field_from_spec(QQ.spec()) is QQ


def test_rejects_reducible_modulus_and_bad_order():
    with pytest.raises(ValueError):
        FiniteField(2, 2, (1, 0, 1))  # x^2 + 1 = (x + 1)^2 over F_2
    with pytest.raises(ValueError):
        GF(6)


def test_rational_rref_and_nullspace():
    rows = [[Fraction(1), Fraction(2), Fraction(3)], [Fraction(2), Fraction(4), Fraction(7)]]
    red, piv = linalg.rref(QQ, rows, 3)
    assert piv == [0, 2]
    assert red == [[1, 2, 0], [0, 0, 1]]
    ns = linalg.nullspace(QQ, rows, 3)
    assert ns == [[-2, 1, 0]]


def test_rational_rref_needs_large_entries():
    # entries whose reduced form has numerators beyond the reconstruction bound
    big = 10**12 + 39
    rows = [[Fraction(big), Fraction(1)], [Fraction(1), Fraction(big, 7)]]
    red, piv = linalg.rref(QQ, rows, 2)
    assert piv == [0, 1] and red == [[1, 0], [0, 1]]
    rows = [[Fraction(big), Fraction(big + 1), Fraction(1)], [Fraction(3), Fraction(5), Fraction(7)]]
    red, _ = linalg.rref(QQ, rows, 3)
    want, _ = linalg._rref_fractions(rows, 3)
    assert red == want


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=5), min_size=4, max_size=4),
                min_size=1, max_size=5))
def test_rational_rref_matches_fraction_elimination(rows):
    nonzero = [r for r in rows if any(r)]
    want = linalg._rref_fractions(nonzero, 4) if nonzero else ([], [])
    assert linalg.rref(QQ, rows, 4) == want


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.sampled_from([2, 3, 4, 5, 9]), st.integers(0, 10**6))
def test_nullspace_is_kernel(n, m, q, seed):
    f = GF(q)
    rng = random.Random(seed)
    a = [[rng.randrange(q) for _ in range(m)] for _ in range(n)]
    basis = linalg.nullspace(f, a, m)
    assert len(basis) + linalg.rank(f, a, m) == m
    for v in basis:
        prod = linalg.matmul(f, a, [[x] for x in v])
        assert linalg.is_zero(prod)


def test_inverse_and_nilpotent():
    f = GF(3)
    a = [[1, 2], [0, 1]]
    inv = linalg.inverse(f, a)
    assert linalg.matmul(f, a, inv) == linalg.identity(f, 2)
    assert linalg.is_nilpotent(f, [[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    assert not linalg.is_nilpotent(f, [[0, 1], [1, 0]])
    with pytest.raises(ZeroDivisionError):
        linalg.inverse(f, [[1, 1], [1, 1]])
    assert linalg.inverse(QQ, [[Fraction(2)]]) == [[Fraction(1, 2)]]


def test_backend_reported():
    assert kernels.BACKEND in ("compiled", "python")


@needs_compiled
@pytest.mark.parametrize("seed", range(25))
def test_compiled_matches_pure_mod_p(seed):
    rng = random.Random(seed)
    p = rng.choice([2, 3, 5, 7, 2147483629])
    n, m = rng.randint(1, 9), rng.randint(1, 9)
    a = [[rng.randrange(p) if rng.random() < 0.7 else 0 for _ in range(m)] for _ in range(n)]
    b = [[rng.randrange(p) for _ in range(rng.randint(1, 6))] for _ in range(m)]
    b = [row[: len(b[0])] + [0] * (len(b[0]) - len(row)) for row in b]
    assert compiled.rref_mod_p(a, m, p) == _kernels_py.rref_mod_p(a, m, p)
    assert compiled.matmul_mod_p(a, b, p) == _kernels_py.matmul_mod_p(a, b, p)


@needs_compiled
@pytest.mark.parametrize("q", [4, 8, 9, 16])
def test_compiled_matches_pure_tables(q):
    f = GF(q)
    rng = random.Random(q)
    for _ in range(20):
        n, m = rng.randint(1, 7), rng.randint(1, 7)
        a = [[rng.randrange(q) for _ in range(m)] for _ in range(n)]
        b = [[rng.randrange(q) for _ in range(n)] for _ in range(m)]
        args = (f.add_table, f.mul_table, f.neg_table, f.inv_table)
        assert compiled.rref_table(a, m, q, *args) == _kernels_py.rref_table(a, m, q, *args)
        assert compiled.matmul_table(a, b, q, f.add_table, f.mul_table) == _kernels_py.matmul_table(
            a, b, q, f.add_table, f.mul_table)
