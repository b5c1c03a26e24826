from __future__ import annotations

import itertools
from fractions import Fraction

import pytest

from oracles import sparse_tree_module_count

from quivercount.exact import BinomialPolyG
from quivercount.kac import example_wild_quiver, star_quiver
from quivercount.quivers import Quiver, ResourceLimitError, enumerate_tree_quivers, make_entry, orbit_count_poly
from quivercount.reps import is_absolutely_indecomposable, is_isomorphic
from quivercount.treemodules import (
    classes_by_dim_vector,
    enumerate_morphisms,
    formula_classes_on_sg,
    leading_term_check,
    tm_count,
    tm_count_vector,
    tm_sg,
    tm_sg_bruteforce,
)

PATH3 = Quiver(3, ((0, 1), (1, 2)))
IN_STAR3 = Quiver(3, ((1, 0), (2, 0)))
A2 = Quiver(2, ((0, 1),))

TABLE = {
    1: {0: 1},
    2: {1: 1},
    3: {1: 1, 2: 4},
    4: {1: 1, 2: 20, 3: 32},
    5: {1: 1, 2: 93, 3: 428, 4: 400},
    6: {1: 1, 2: 448, 3: 4524, 4: 10656, 5: 6912},
}


def _poly(coeffs):
    return BinomialPolyG({k: Fraction(v) for k, v in coeffs.items()})


def _brute_morphism_count(t, q, sincere):
    count = 0
    for vmap in itertools.product(range(q.vertex_count), repeat=t.vertex_count):
        if sincere and set(vmap) != set(range(q.vertex_count)):
            continue
        choices = 1
        for s, h in t.arrows:
            choices *= sum(1 for a in q.arrows if a == (vmap[s], vmap[h]))
        count += choices
    return count


def test_morphism_examples():
    assert len(list(enumerate_morphisms(Quiver(1, ()), Quiver.loops(3)))) == 1
    assert len(list(enumerate_morphisms(PATH3, Quiver.loops(2)))) == 4
    assert len(list(enumerate_morphisms(PATH3, IN_STAR3, sincere=True))) == 0


@pytest.mark.parametrize("t", [PATH3, IN_STAR3, Quiver(4, ((0, 1), (2, 1), (1, 3)))])
@pytest.mark.parametrize("q", [IN_STAR3, PATH3, example_wild_quiver(), Quiver.loops(2)])
@pytest.mark.parametrize("sincere", [False, True])
def test_morphism_counts_match_brute_force(t, q, sincere):
    got = list(enumerate_morphisms(t, q, sincere=sincere))
    assert len(got) == _brute_morphism_count(t, q, sincere)
    assert len({(f.vertex_map, f.arrow_map) for f in got}) == len(got)


def test_target_dims_filter():
    assert list(enumerate_morphisms(PATH3, A2)) == []  # no composable arrows in A2
    got = list(enumerate_morphisms(IN_STAR3, A2, target_dims=(2, 1)))
    assert [f.vertex_map for f in got] == [(1, 0, 0)]
    assert list(enumerate_morphisms(IN_STAR3, A2, target_dims=(1, 2))) == []


@pytest.mark.parametrize("d", range(1, 6))
def test_tree_quiver_has_one_sincere_tree_module(d):
    for e in enumerate_tree_quivers(d):
        assert tm_count_vector(e.quiver, (1,) * d).count == 1
        assert tm_count(e.quiver, d, sincere=True).count == 1


def test_small_counts():
    assert tm_count(A2, 3).count == 0
    assert tm_count_vector(A2, (1, 1)).count == 1
    assert tm_count_vector(example_wild_quiver(), (2, 2, 1)).count == 5
    assert sparse_tree_module_count(example_wild_quiver(), (2, 2, 1)) == 5


def test_dtilde4_delta_all_orientations():
    for k in range(5):
        assert tm_count_vector(star_quiver(4 - k, k), (2, 1, 1, 1, 1)).count == 6
        assert sparse_tree_module_count(star_quiver(4 - k, k), (2, 1, 1, 1, 1)) == 6
    report = tm_count(star_quiver(4, 0), 6)
    assert classes_by_dim_vector(report)[(2, 1, 1, 1, 1)] == 6


@pytest.mark.parametrize("d", range(1, 6))
def test_tm_sg_table(d):
    assert tm_sg(d).count == _poly(TABLE[d])


@pytest.mark.parametrize("g,d,want", [(1, 4, 1), (2, 4, 22), (2, 3, 6), (1, 2, 1), (3, 3, 15)])
def test_bruteforce_values(g, d, want):
    assert tm_sg_bruteforce(g, d).count == want
    assert tm_sg(d).count(g) == want


def test_bruteforce_guard():
    with pytest.raises(ResourceLimitError):
        tm_sg_bruteforce(3, 6, guard=10)


def test_tm_count_guard():
    with pytest.raises(ResourceLimitError):
        tm_count(Quiver.loops(1), 7)


def test_sparsity_of_representatives():
    for d in range(1, 5):
        for cls in tm_sg_bruteforce(2, d).classes:
            rep = cls.representative
            entries = rep.nonzero_entries()
            assert len(entries) == d - 1 and all(x == 1 for x in entries)


@pytest.mark.parametrize("d", [3, 4])
def test_leading_term(d):
    rec = leading_term_check(d)
    assert rec["formula_lead"] == rec["enumerated_lead"] == {3: 4, 4: 32}[d]


def test_tm_sg_terms_are_orbit_polys_times_counts():
    rep = tm_sg(4, with_terms=True)
    total = BinomialPolyG({})
    for term in rep.metadata["terms"]:
        q = Quiver(term["vertices"], tuple(tuple(a) for a in term["quiver"]))
        total = total + orbit_count_poly(make_entry(q)).scale(term["tm"])
    assert total == rep.count


@pytest.mark.parametrize("g,d", [(2, 3), (2, 4), (3, 3)])
def test_formula_classes_biject_with_bruteforce(g, d):
    formula = [rep for _, _, rep in formula_classes_on_sg(g, d)]
    brute = [c.representative for c in tm_sg_bruteforce(g, d).classes]
    assert len(formula) == len(brute)
    for rep in formula:
        matches = [b for b in brute if is_isomorphic(rep, b).kind == "yes"]
        assert len(matches) == 1


def test_report_json_has_binomial_coeffs():
    data = tm_sg(3).to_json()
    assert data["basis"] == "binomial"
    assert data["coeffs"] == {"1": 1, "2": 4}


def test_classes_are_pairwise_non_isomorphic_and_abs_indecomposable():
    classes = [c.representative for c in tm_count_vector(example_wild_quiver(), (2, 2, 1)).classes]
    for rep in classes:
        assert is_absolutely_indecomposable(rep)
    for a, b in itertools.combinations(classes, 2):
        assert is_isomorphic(a, b).kind == "no-certified"
