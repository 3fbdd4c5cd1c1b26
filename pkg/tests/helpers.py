"""Small hand-built graphs shared by the unit tests."""

from matchkast.graph import build_graph


def single_edge(weight=1):
    return build_graph([("b", "b"), ("w", "w")], [("e", "b", "w", weight)], {"b": ["e"], "w": ["e"]})


def four_cycle(weights=(1, 1, 1, 1)):
    """b1 - w1 - b2 - w2 around a square; edges a, b, c, d (a and c opposite)."""
    return build_graph(
        [("b1", "b"), ("w1", "w"), ("b2", "b"), ("w2", "w")],
        [("a", "b1", "w1", weights[0]), ("b", "w1", "b2", weights[1]),
         ("c", "b2", "w2", weights[2]), ("d", "w2", "b1", weights[3])],
        {"b1": ["a", "d"], "w1": ["b", "a"], "b2": ["c", "b"], "w2": ["d", "c"]},
    )


def path(n, weights=None):
    """Path on n vertices p0 .. p{n-1}, p0 black."""
    verts = [(f"p{i}", "b" if i % 2 == 0 else "w") for i in range(n)]
    edges = [(f"e{i}", f"p{i}", f"p{i + 1}", (weights or {}).get(i, 1)) for i in range(n - 1)]
    rot = {f"p{i}": [e for e, u, v, _ in edges if f"p{i}" in (u, v)] for i in range(n)}
    return build_graph(verts, edges, rot)
