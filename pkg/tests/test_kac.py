from __future__ import annotations

from fractions import Fraction

import pytest

from oracles import SMALL_QUIVERS, brute_class_count
from quivercount.exact import BinomialPolyG, PolyQ
from quivercount.fields import GF
from quivercount.kac import (
    KacResult,
    NormalizationError,
    _normalised,
    bad_characteristics,
    count_abs_indec_ff,
    count_abs_indec_ff_orbits,
    euler_form,
    example_wild_quiver,
    gl_order,
    hrv_leading_check,
    hua_series_at,
    kac_at_one_in_g,
    kac_at_one_sg,
    kac_polynomial,
    kac_value_at,
    predicted_degree,
    select_recipe,
    series_log,
    star_quiver,
)
from quivercount.quivers import Quiver, ResourceLimitError

KRONECKER = Quiver(2, ((0, 1), (0, 1)))
A2 = Quiver(2, ((0, 1),))


def _poly(*coeffs):
    return PolyQ([Fraction(c) for c in coeffs])


def test_euler_form_and_degree():
    assert euler_form(Quiver.loops(2), (2,), (2,)) == -4
    assert predicted_degree(Quiver.loops(2), (2,)) == 5
    assert euler_form(KRONECKER, (1, 1), (1, 1)) == 0
    assert predicted_degree(A2, (1, 1)) == 0


def test_gl_order():
    assert gl_order((1,), 2) == 1
    assert gl_order((2,), 2) == 6
    assert gl_order((2, 1), 3) == 48 * 2


def test_hua_low_terms():
    s = hua_series_at(Quiver.loops(1), (1,), 5)
    assert s[(0,)] == 1
    # dim 1: q representations, each with automorphism group of order q - 1
    assert s[(1,)] == Fraction(5, 4)
    for bad in (0, 1, -1):
        with pytest.raises(ValueError):
            hua_series_at(Quiver.loops(1), (1,), bad)
    with pytest.raises(ValueError):
        hua_series_at(A2, (1,), 3)


def test_series_log_of_exponential_shape():
    # log(1 + x) truncated at degree 3
    out = series_log({(0,): 1, (1,): 1}, (3,))
    assert out == {(1,): 1, (2,): Fraction(-1, 2), (3,): Fraction(1, 3)}
    with pytest.raises(ValueError):
        series_log({(0,): 2}, (1,))


def test_recipe_selection_is_primary():
    assert select_recipe() == "primary"


@pytest.mark.parametrize("g", range(1, 5))
def test_one_dimensional_loops(g):
    # every 1-dim representation is indecomposable, pairwise non-isomorphic: q^g classes
    poly = kac_polynomial(Quiver.loops(g), (1,)).polynomial
    assert poly == PolyQ([0] * g + [1])


@pytest.mark.parametrize("d", range(1, 5))
def test_jordan_loop(d):
    assert kac_polynomial(Quiver.loops(1), (d,)).polynomial == _poly(0, 1)


@pytest.mark.parametrize(
    "q,dims,want",
    [
        (Quiver.loops(2), (2,), (0, 0, 0, 1, 0, 1)),
        (Quiver.loops(3), (2,), (0, 0, 0, 0, 0, 1, 0, 1, 0, 1)),
        (example_wild_quiver(), (2, 2, 1), (2, 2, 1)),
        (A2, (1, 1), (1,)),
        (A2, (2, 1), ()),
        (KRONECKER, (1, 1), (1, 1)),
        (KRONECKER, (2, 2), (1, 1)),
        (star_quiver(4, 0), (2, 1, 1, 1, 1), (4, 1)),
        (star_quiver(2, 2), (2, 1, 1, 1, 1), (4, 1)),
    ],
)
def test_kac_polynomials(q, dims, want):
    res = kac_polynomial(q, dims)
    assert res.polynomial == _poly(*want)


def test_kac_result_json():
    res = kac_polynomial(example_wild_quiver(), (2, 2, 1))
    data = res.to_json()
    assert data["coeffs"] == [2, 2, 1]
    assert data["at_one"] == 5
    assert data["skip_chars"] == [2]
    assert data["recipe_variant"] == "primary"
    assert isinstance(res, KacResult) and res.degree == 2


def test_kac_rejects_bad_dims():
    with pytest.raises(ValueError):
        kac_polynomial(A2, (1,))
    with pytest.raises(ValueError):
        kac_polynomial(A2, (0, 0))


def test_kac_degree_guard():
    with pytest.raises(ResourceLimitError):
        kac_polynomial(Quiver.loops(3), (4,), max_degree=5)


def test_normalisation_predicate():
    assert _normalised(_poly(2, 2, 1))
    assert _normalised(PolyQ([]))
    assert not _normalised(PolyQ([Fraction(1, 2), Fraction(1)]))
    assert not _normalised(_poly(1, 2))
    assert issubclass(NormalizationError, RuntimeError)


def test_recipe_variants_disagree_off_the_pins():
    # the unused variant is not a silent alias of the chosen one
    assert kac_value_at(Quiver.loops(2), (2,), 3, "alternate") != kac_value_at(Quiver.loops(2), (2,), 3)
    with pytest.raises(ValueError):
        kac_value_at(Quiver.loops(2), (2,), 3, "bogus")


@pytest.mark.parametrize(
    "q,dims,order,want",
    [
        (Quiver.loops(2), (2,), 2, 40),
        (Quiver.loops(1), (2,), 3, 3),
        (A2, (1, 1), 2, 1),
        (KRONECKER, (1, 1), 3, 4),
        (example_wild_quiver(), (2, 2, 1), 2, 10),
    ],
)
def test_finite_field_counts(q, dims, order, want):
    assert count_abs_indec_ff(q, dims, order) == want
    assert kac_polynomial(q, dims).polynomial(order) == want


@pytest.mark.parametrize("q,dims", [(Quiver.loops(2), (2,)), (KRONECKER, (1, 1)), (A2, (1, 1))])
def test_orbit_count_matches_stabiliser_count(q, dims):
    assert count_abs_indec_ff_orbits(q, dims, 2) == count_abs_indec_ff(q, dims, 2)


@pytest.mark.parametrize(
    "name,dims",
    [("S1", (2,)), ("S1", (3,)), ("S2", (2,)), ("A2", (1, 1)), ("Kronecker", (1, 1)), ("Kronecker", (1, 2)),
     ("A3-in", (1, 1, 1))],
)
def test_counts_against_orbit_enumeration(name, dims):
    q = SMALL_QUIVERS[name]
    want = brute_class_count(q, dims, 2, absolutely=True)
    assert count_abs_indec_ff(q, dims, GF(2)) == want
    assert kac_polynomial(q, dims).polynomial(2) == want


def test_ff_guard():
    with pytest.raises(ResourceLimitError):
        count_abs_indec_ff(Quiver.loops(2), (3,), 2, guard=100)


def test_skip_list():
    assert bad_characteristics(example_wild_quiver(), (2, 2, 1)) == (2,)
    assert bad_characteristics(Quiver.loops(2), (2,)) == ()


@pytest.mark.parametrize("d", range(1, 5))
def test_at_one_on_loops(d):
    assert kac_at_one_sg(1, d) == 1
    assert kac_at_one_sg(0, d) == (1 if d == 1 else 0)


def test_at_one_in_g_examples():
    assert kac_at_one_in_g(1) == BinomialPolyG({0: 1})
    assert kac_at_one_in_g(2) == BinomialPolyG({1: 1})
    assert kac_at_one_in_g(3) == BinomialPolyG({1: 1, 2: 4})
    with pytest.raises(ValueError):
        kac_at_one_in_g(3, [0, 1])


@pytest.mark.parametrize("d,lead", [(1, 1), (2, 1), (3, 2), (4, Fraction(16, 3))])
def test_hrv_leading_term(d, lead):
    rec = hrv_leading_check(d)
    assert rec["ok"] and rec["degree"] == d - 1 and rec["leading"] == lead == rec["expected"]


def test_hrv_expected_d6():
    rec = hrv_leading_check(6, BinomialPolyG({5: 1}))
    assert rec["expected"] == Fraction(288, 5)
    assert not rec["ok"]
