import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from figures import fig4_graph
from helpers import four_cycle, single_edge
from matchkast.corpus import random_map
from matchkast.graph import (
    BadRotation,
    DanglingReference,
    NotBipartite,
    NotGenusZero,
    build_graph,
    enclosed_vertices,
    induced_subgraph,
    mirror,
    same_graph,
    simple_cycles,
    trace_faces,
)
from matchkast.oracle import oracle_count
from matchkast.regions import rectangle


def test_single_edge_has_only_outer_face():
    g = single_edge()
    faces = trace_faces(g)
    assert len(faces) == 1 and faces[0].is_outer
    assert len(faces[0].darts) == 2


def test_four_cycle_faces():
    g = four_cycle()
    assert sorted((f.is_outer, len(f.darts)) for f in g.faces) == [(False, 4), (True, 4)]


def test_k33_any_rotation_is_not_planar():
    blacks, whites = ["b0", "b1", "b2"], ["w0", "w1", "w2"]
    edges = [(f"{b}{w}", b, w, 1) for b in blacks for w in whites]
    verts = [(b, "b") for b in blacks] + [(w, "w") for w in whites]
    inc = {v: [e for e, u, t, _ in edges if v in (u, t)] for v, _ in verts}
    # rotations of a degree-3 vertex: two cyclic orders each
    choices = [[inc[v], [inc[v][0], inc[v][2], inc[v][1]]] for v, _ in verts]
    for pick in itertools.product(*choices):
        with pytest.raises(NotGenusZero):
            build_graph(verts, edges, {v: r for (v, _), r in zip(verts, pick)})


def test_validation_errors():
    with pytest.raises(NotBipartite):
        build_graph([("a", "b"), ("c", "b")], [("e", "a", "c", 1)], {"a": ["e"], "c": ["e"]})
    with pytest.raises(DanglingReference):
        build_graph([("a", "b")], [("e", "a", "z", 1)], {"a": ["e"]})
    with pytest.raises(BadRotation):
        build_graph([("b", "b"), ("w", "w")], [("e", "b", "w", 1)], {"b": ["e", "e"], "w": ["e"]})


def test_unit_square_faces():
    g = rectangle(2, 2)
    assert sorted(len(f.darts) for f in g.faces) == [4, 4]


def test_enclosed_counts():
    g = rectangle(2, 2)
    assert enclosed_vertices(g, g.inner_faces()[0].darts) == 0
    g = rectangle(3, 3)
    outer = next(f for f in g.faces if f.is_outer)
    assert enclosed_vertices(g, outer.darts) == 1


def test_figure4_inner_walk_has_doubled_tree_edges():
    g = fig4_graph()
    inner = g.inner_faces()
    assert len(inner) == 1 and len(inner[0].darts) == 12
    edges = [e for e, _ in inner[0].darts]
    assert sorted(e for e in set(edges) if edges.count(e) == 2) == ["e1", "e8", "e9"]


def test_figure4_hexagon_encloses_three_vertices():
    g = fig4_graph()
    hexagon = next(c for c in simple_cycles(g) if len(c) == 6)
    assert enclosed_vertices(g, hexagon) == 3
    # |C'| = |C| + 2A for the walk around the face
    assert 12 == 6 + 2 * enclosed_vertices(g, hexagon)


def test_mirror_examples():
    assert same_graph(mirror(single_edge()), single_edge())
    g = four_cycle()
    m = mirror(g)
    assert len(m.faces) == len(g.faces)
    assert all(tuple(reversed(m.rotation[v])) in _rotations(g.rotation[v]) for v in g.vertices)


def _rotations(seq):
    seq = tuple(seq)
    return {seq[i:] + seq[:i] for i in range(len(seq))}


def test_induced_subgraph_keeps_embedding():
    g = rectangle(3, 3)
    h = induced_subgraph(g, [v for v in g.vertices if v != "2_2"])
    assert len(h.inner_faces()) == 1 and len(h.inner_faces()[0].darts) == 8


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 12))
def test_euler_and_dart_count(seed, n):
    g = random_map(random.Random(seed), n, parallel=seed % 3 == 0)
    assert sum(len(f.darts) for f in g.faces) == 2 * len(g.edges)
    # every component with an edge carries its own outer face; isolated vertices have none
    isolated = sum(len(c) == 1 for c in g.components)
    walled = len(g.components) - isolated
    assert sum(f.is_outer for f in g.faces) == walled
    assert len(g.vertices) - len(g.edges) + len(g.faces) == 2 * walled + isolated


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 12))
def test_outer_boundary_plus_inside_is_everything(seed, n):
    g = random_map(random.Random(seed), n)
    if len(g.components) != 1:
        return
    outer = next(f for f in g.faces if f.is_outer)
    on_boundary = {g.head(d) for d in outer.darts}
    cycle = [d for d in outer.darts]
    if len(on_boundary) != len(cycle) or len({e for e, _ in cycle}) != len(cycle):
        return  # only meaningful when the outer walk is a simple cycle
    assert enclosed_vertices(g, cycle) + len(on_boundary) == len(g.vertices)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 10))
def test_mirror_is_involution_preserving_count(seed, n):
    g = random_map(random.Random(seed), n)
    assert same_graph(mirror(mirror(g)), g)
    assert oracle_count(mirror(g)) == oracle_count(g)


def test_face_order_independent_of_edge_order():
    g = rectangle(3, 4)
    shuffled = list(g.edges.items())
    random.Random(1).shuffle(shuffled)
    h = build_graph(
        [(v, g.colors[v]) for v in reversed(g.vertices)],
        [(e, ed.u, ed.v, ed.weight) for e, ed in shuffled],
        g.rotation,
        g.outer_dart,
    )
    assert [f.darts for f in trace_faces(h)] == [f.darts for f in trace_faces(g)]
