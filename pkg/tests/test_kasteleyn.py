import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from figures import fig4_graph
from helpers import four_cycle, path, single_edge
from matchkast.corpus import _weights, random_lattice_patch, random_map
from matchkast.graph import simple_cycles
from matchkast.kasteleyn import (
    OuterFaceGiven,
    UnbalancedColors,
    construct_sign_function,
    count_matchings,
    cycle_sign_identity,
    face_sign_product,
    format_signs,
    kasteleyn_matrix,
    parse_signs,
    verify_sign_function,
)
from matchkast.oracle import oracle_count
from matchkast.regions import rectangle
from matchkast.ring import Poly, determinant


def test_four_cycle_all_plus_is_negative():
    g = four_cycle()
    face = g.inner_faces()[0]
    assert face_sign_product(g, dict.fromkeys(g.edges, 1), face) == (1, False)
    assert face_sign_product(g, {**dict.fromkeys(g.edges, 1), "a": -1}, face) == (-1, True)


def test_outer_face_is_rejected():
    g = four_cycle()
    outer = next(f for f in g.faces if f.is_outer)
    with pytest.raises(OuterFaceGiven):
        face_sign_product(g, dict.fromkeys(g.edges, 1), outer)


def test_figure4_face_positivity_by_hexagon_signs():
    g = fig4_graph()
    face = g.inner_faces()[0]
    hexagon = ["e0", "e3", "e4", "e5", "e6", "e7"]
    for signs in itertools.product((1, -1), repeat=6):
        sf = dict.fromkeys(g.edges, 1)
        sf.update(zip(hexagon, signs))
        prod, ok = face_sign_product(g, sf, face)
        # doubled tree edges cancel, m = 6 wants -1
        assert ok == (prod == -1) == (signs.count(-1) % 2 == 1)


def test_verify_examples():
    g = four_cycle()
    assert verify_sign_function(g, {**dict.fromkeys(g.edges, 1), "a": -1}).status == "pass"
    g = rectangle(2, 3)
    r = verify_sign_function(g, dict.fromkeys(g.edges, 1))
    assert r.status == "fail" and r.reproducer["graph.pbg"].startswith("pbg v1")


def test_three_by_three_boundary_identity():
    g = rectangle(3, 3)
    sf = construct_sign_function(g)
    assert verify_sign_function(g, sf, cycle_budget=None).status == "pass"
    outer = next(f for f in g.faces if f.is_outer)
    prod, want = cycle_sign_identity(g, sf, outer.darts)
    assert prod == want == 1


def test_tree_gets_all_plus():
    g = path(5)
    assert set(construct_sign_function(g).values()) == {1}
    assert verify_sign_function(g, construct_sign_function(g)).status == "pass"


def test_four_cycle_has_odd_number_of_minus_signs():
    sf = construct_sign_function(four_cycle())
    assert list(sf.values()).count(-1) in (1, 3)


def test_r44_every_simple_cycle():
    g = rectangle(4, 4)
    r = verify_sign_function(g, construct_sign_function(g), cycle_budget=None)
    assert r.status == "pass" and r.witness["faces"] == 9
    assert r.witness["cycles"] == sum(1 for _ in simple_cycles(g))


def test_domain_mismatch_fails():
    g = four_cycle()
    assert verify_sign_function(g, {"a": -1}).status == "fail"
    assert verify_sign_function(g, {**dict.fromkeys(g.edges, 1), "a": 2}).status == "fail"


def test_matrix_examples():
    w = Poly.var("w")
    k = kasteleyn_matrix(single_edge(w), {"e": -1})
    assert k.to_lists() == [[-w]]
    a, b, c, d = map(Poly.var, "abcd")
    g = four_cycle((a, b, c, d))
    det = determinant(kasteleyn_matrix(g, {"a": 1, "b": 1, "c": 1, "d": -1}))
    assert det in (a * c + b * d, -(a * c + b * d))


def test_unbalanced_matrix():
    with pytest.raises(UnbalancedColors):
        kasteleyn_matrix(path(3), dict.fromkeys(path(3).edges, 1))
    assert count_matchings(path(3)).is_zero()


@pytest.mark.parametrize("g, n", [(single_edge(), 1), (rectangle(2, 2), 2), (rectangle(3, 4), 11)])
def test_count_examples(g, n):
    assert count_matchings(g) == Poly.const(n)


def test_count_with_negative_weights_keeps_sign():
    g = four_cycle((-1, 1, 1, 1))
    assert count_matchings(g) == oracle_count(g) == Poly.const(0)
    g = single_edge(-5)
    assert count_matchings(g) == Poly.const(-5)


def test_signs_text_round_trip():
    sf = construct_sign_function(rectangle(3, 3))
    assert parse_signs(format_signs(sf)) == sf


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 12), st.booleans())
def test_count_equals_oracle(seed, n, lattice):
    rng = random.Random(seed)
    g = random_lattice_patch(rng, n, hexagonal=seed % 2 == 0) if lattice else random_map(rng, n)
    g = _weights(rng, g, allow_vars=n <= 8)
    assert count_matchings(g) == oracle_count(g)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 10))
def test_constructed_sign_satisfies_all_cycles(seed, n):
    g = random_map(random.Random(seed), n, parallel=seed % 3 == 0)
    assert verify_sign_function(g, construct_sign_function(g), cycle_budget=None).status == "pass"
