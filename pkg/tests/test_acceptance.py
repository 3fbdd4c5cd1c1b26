"""Acceptance gate: one test per criterion, each reporting a single
pass/fail line (collected and printed in the terminal summary)."""

import time

import pytest

from figures import fig2_points
from matchkast.ciucu import ciucu_sign_function, verify_ciucu_lemma, verify_factorization
from matchkast.compound import (
    check_odd_leaves,
    default_sign_function,
    family,
    sign_weight,
    verify_divisibility,
    verify_zero_sum,
)
from matchkast.kasteleyn import construct_sign_function, count_matchings, verify_sign_function
from matchkast.oracle import oracle_count
from matchkast.regions import (
    _admissible,
    decompose_rectangle,
    pillow_cells,
    pillow_divisibility_scan,
    product_formula_count,
    rect_divisibility_scan,
    rectangle,
)
from matchkast.ring import exact_div

RESULTS: list[str] = []


def record(k, title, ok, detail):
    RESULTS.append(f"criterion {k:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
    assert ok, detail


def graph_of(ent):
    return ent.obj if ent.kind == "graph" else ent.obj.graph


def test_01_kasteleyn_equals_oracle(corpus_graphs):
    t = time.perf_counter()
    graphs = [e.obj for e in corpus_graphs]
    rects = [rectangle(m, n) for m in range(1, 37) for n in range(1, 37) if m * n <= 36]
    bad = [k for k, g in enumerate(graphs + rects) if count_matchings(g) != oracle_count(g)]
    dt = time.perf_counter() - t
    small = all(len(g.vertices) <= 14 for g in graphs)
    record(1, "count_matchings = oracle_count", not bad and len(graphs) >= 500 and small and dt < 60,
           f"{len(graphs)} corpus graphs + {len(rects)} rectangles, {len(bad)} mismatches, {dt:.1f}s")


def test_02_product_formula():
    bad = [(m, n) for m in range(1, 9) for n in range(1, 9)
           if (m * n) % 2 == 0 and product_formula_count(m, n) != count_matchings(rectangle(m, n)).constant_value()]
    record(2, "product formula = determinant, m,n <= 8", not bad, f"mismatches {bad}")


def test_03_fibonacci():
    fib = [1, 2]
    while len(fib) < 20:
        fib.append(fib[-1] + fib[-2])
    got = [count_matchings(rectangle(2, n)).constant_value() for n in range(1, 21)]
    record(3, "#R(2,n) = 1, 2, 3, 5, ... for n <= 20", got == fib, f"last {got[-1]}")


def test_04_zero_sum(corpus_compounds):
    families = fails = 0
    for ent in corpus_compounds:
        for leaf in sorted(ent.obj.leaves):
            families += 1
            r = verify_zero_sum(family(ent.obj, leaf))
            fails += r.status == "fail"
    record(4, "zero-sum lemma", len(corpus_compounds) >= 50 and fails == 0,
           f"{families} families from {len(corpus_compounds)} compounds, {fails} failures")


def test_05_divisibility(corpus_compounds):
    checked = fails = 0
    for ent in corpus_compounds:
        cg = ent.obj
        h = count_matchings(sign_weight(cg, default_sign_function(cg)))
        g = count_matchings(cg.base)
        if g.is_zero():
            fails += not h.is_zero()
            continue
        checked += 1
        q = exact_div(h, g)  # raises NotDivisible on failure
        fails += q * g != h
        fails += verify_divisibility(cg).status == "fail"
    record(5, "#G divides #H-bar", fails == 0 and checked >= 50,
           f"{checked} compounds with nonzero base count, {fails} failures")


def test_06_rectangle_scan():
    rows = []
    for a in range(1, 4):
        for b in range(1, 4):
            rows += rect_divisibility_scan(a, b, 11, 11).rows
    bad = [r.params for r in rows if r.status == "fail"]
    record(6, "#R(a,b) | #R(A,B), a,b <= 3, A,B <= 11", not bad and rows, f"{len(rows)} pairs, failures {bad}")


@pytest.mark.slow
def test_07_decomposition_identity():
    t = time.perf_counter()
    instances = terms = 0
    bad = []
    for A in range(1, 8):
        for B in range(1, 8):
            if (A * B) % 2:
                continue
            big = count_matchings(rectangle(A, B)).constant_value()
            for a in range(1, A + 1):
                for b in range(1, B + 1):
                    if not _admissible(A, B, a, b) or (a, b) == (A, B):
                        continue
                    instances += 1
                    total, odd = 0, True
                    for term in decompose_rectangle(A, B, a, b):
                        terms += 1
                        total += count_matchings(term.compound.graph).constant_value()
                        odd &= check_odd_leaves(term.compound)
                    if total != big or not odd:
                        bad.append((A, B, a, b))
    record(7, "sum over (S,D) of #R'' = #R(A,B), odd leaves", not bad,
           f"{instances} instances, {terms} terms, failures {bad}, {time.perf_counter() - t:.0f}s")


def test_08_ciucu(corpus_symmetric):
    lemma = fact = fails = 0
    variable = 0
    for ent in corpus_symmetric:
        sc = ent.obj
        variable += any(not sc.half.weight(e).is_constant() for e in sc.half.edges)
        if sc.leaves:
            for leaf in sc.leaves:
                lemma += 1
                fails += verify_ciucu_lemma(sc, leaf).status == "fail"
        else:
            fact += 1
            fails += verify_factorization(sc).status == "fail"
    record(8, "Ciucu lemma and factorization", len(corpus_symmetric) >= 30 and fails == 0 and variable > 0,
           f"{len(corpus_symmetric)} instances ({variable} variable-weighted): "
           f"{lemma} lemma checks, {fact} factorizations, {fails} failures")


def test_09_pillows():
    t = time.perf_counter()
    rep = pillow_divisibility_scan(13)
    dt = time.perf_counter() - t
    fig = pillow_cells(9) == fig2_points()
    record(9, "#AP_m | #AP_n for m+3 | n+3, order <= 13", rep.ok and fig and dt < 600,
           f"{len(rep.rows)} pairs, {sum(r.status == 'fail' for r in rep.rows)} failures, "
           f"Figure 2 vertex set {'matches' if fig else 'differs'}, {dt:.1f}s")


def test_10_sign_soundness(corpus):
    checked = fails = exhaustive = 0

    def check(g, sf):
        nonlocal checked, fails, exhaustive
        small = len(g.vertices) <= 12
        exhaustive += small
        checked += 1
        fails += verify_sign_function(g, sf, cycle_budget=None if small else 500).status == "fail"

    for ent in corpus:
        g = graph_of(ent)
        check(g, construct_sign_function(g))
        if ent.kind == "compound":
            check(g, default_sign_function(ent.obj))
        elif ent.kind == "symmetric" and ent.obj.leaves:
            check(g, ciucu_sign_function(ent.obj))
    record(10, "sign functions verify", fails == 0,
           f"{checked} sign functions ({exhaustive} on all simple cycles), {fails} failures")


