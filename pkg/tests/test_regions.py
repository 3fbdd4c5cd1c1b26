import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from figures import FIG7_DIRECTIONS, FIG7_DOMINOES, fig2_points, fig7_cell
from matchkast.compound import check_odd_leaves
from matchkast.kasteleyn import count_matchings
from matchkast.oracle import oracle_count
from matchkast.regions import (
    DivisibilityPreconditionViolated,
    PrecisionInsufficient,
    aztec_pillow,
    decompose_rectangle,
    decomposition_term,
    pillow_cells,
    pillow_divisibility_scan,
    pillow_pairs,
    product_formula_count,
    rect_divisibility_scan,
    rectangle,
)


def n(g):
    return count_matchings(g).constant_value()


def test_rectangle_examples():
    r12 = rectangle(1, 2)
    assert len(r12.edges) == 1 and n(r12) == 1
    assert n(rectangle(3, 4)) == 11 == oracle_count(rectangle(3, 4)).constant_value()
    assert n(rectangle(5, 5)) == 0


def test_rectangle_coloring_and_ids():
    g = rectangle(2, 3)
    assert g.colors["1_1"] == "b" and g.colors["1_2"] == "w"
    assert rectangle(2, 3, origin_black=False).colors["1_1"] == "w"
    assert sorted(g.edges) == ["h1_1", "h1_2", "h2_1", "h2_2", "v1_1", "v1_2", "v1_3"]


def test_variable_rectangle_matches_oracle():
    g = rectangle(3, 4, variables=True)
    c = count_matchings(g)
    assert c == oracle_count(g)
    assert c.evaluate(dict.fromkeys(c.variables(), 1)) == 11


@pytest.mark.parametrize("m, k, expected", [(2, 2, 2), (2, 5, 8), (4, 4, 36), (8, 8, 12988816)])
def test_product_formula_examples(m, k, expected):
    assert product_formula_count(m, k) == expected


def test_product_formula_odd_area():
    assert product_formula_count(3, 5) == 0


def test_product_formula_precision_cap():
    with pytest.raises(PrecisionInsufficient):
        product_formula_count(8, 8, precision=16, max_precision=16)
    assert product_formula_count(8, 8, precision=16) == 12988816


def test_precision_environment(monkeypatch):
    monkeypatch.setenv("MATCHKAST_PRECISION", "64")
    assert product_formula_count(6, 6) == 6728


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6))
def test_product_formula_matches_determinant(m, k):
    assert product_formula_count(m, k) == n(rectangle(m, k))


def test_fibonacci():
    a, b = 1, 2
    for k in range(1, 12):
        assert n(rectangle(2, k)) == a
        a, b = b, a + b


# ---------------------------------------------------------------- decomposition


def test_decomposition_smallest_even_instance():
    terms = list(decompose_rectangle(3, 2, 1, 2))
    assert len(terms) == 3
    assert sum(n(t.compound.graph) for t in terms) == 3 == n(rectangle(3, 2))
    assert all(check_odd_leaves(t.compound) for t in terms)


def test_decomposition_identity_medium():
    total = 0
    for t in decompose_rectangle(5, 4, 2, 4):
        assert check_odd_leaves(t.compound)
        total += n(t.compound.graph)
    assert total == n(rectangle(5, 4))


def test_decomposition_preconditions():
    with pytest.raises(DivisibilityPreconditionViolated):
        next(decompose_rectangle(4, 4, 2, 2))
    with pytest.raises(DivisibilityPreconditionViolated):
        next(decompose_rectangle(3, 3, 1, 1))  # odd area


def test_figure7_term():
    t = decomposition_term(
        11, 14, 5, 4,
        [tuple(fig7_cell(p) for p in d) for d in FIG7_DOMINOES],
        [(fig7_cell(a), fig7_cell(b)) for a, b in FIG7_DIRECTIONS.items()],
        origin_black=False,
    )
    cg = t.compound
    assert len(cg.supergraph.vertices) == 6 and len(cg.base.vertices) == 20
    assert len(cg.stems) == len(cg.leaves) == 15
    assert check_odd_leaves(cg)


# ---------------------------------------------------------------- scans


def test_rect_scan_examples():
    rep = rect_divisibility_scan(2, 2, 5, 5)
    rows = {r.params: r for r in rep.rows}
    assert rows[2, 2, 2, 5].large == 8 and rows[2, 2, 2, 5].quotient == 4
    assert rows[2, 2, 5, 5].large == 0 and rows[2, 2, 5, 5].status == "pass"
    assert rep.ok
    rep = rect_divisibility_scan(3, 4, 7, 4)
    assert [(r.small, r.status) for r in rep.rows] == [(11, "pass"), (11, "pass")]
    assert rep.rows[-1].large % 11 == 0


def test_pillow_figure2():
    assert pillow_cells(9) == fig2_points()


def test_pillow_small_orders():
    assert n(aztec_pillow(1)) == oracle_count(aztec_pillow(1)).constant_value() == 2
    assert [n(aztec_pillow(k)) for k in range(1, 6)] == [2, 5, 20, 117, 1024]
    for k in range(1, 10):
        assert aztec_pillow(k).is_balanced()


def test_pillow_pairs():
    pairs = pillow_pairs(13)
    assert (1, 5) in pairs and (1, 2) not in pairs and (5, 13) in pairs


def test_pillow_scan_small():
    rep = pillow_divisibility_scan(9)
    assert rep.ok and {r.params for r in rep.rows} == set(pillow_pairs(9))
