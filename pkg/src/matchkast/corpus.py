"""Deterministic random instances for the property suites and the CLI.

Everything derives from one ``random.Random(seed)``; no other entropy.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .ciucu import LEAF, STEM, AxisItem, SymmetricError, build_symmetric, format_axis, parse_axis
from .compound import (
    CompoundError,
    LeafPlacement,
    Placement,
    StemPlacement,
    build_compound,
    compound_from_parts,
    format_cpdmap,
    outer_walk,
    parse_cpdmap,
)
from .graph import BLACK, WHITE, GraphError, PlanarBipartiteGraph, build_graph
from .kasteleyn import find_perfect_matching
from .pbg import format_pbg, parse_pbg
from .regions import lattice_graph

DEFAULT_BUDGET = 14


@dataclass
class CorpusEntry:
    name: str
    kind: str  # "graph", "compound" or "symmetric"
    obj: Any
    files: dict[str, str] = field(default_factory=dict)


# ------------------------------------------------------------- random maps


class _Map:
    """A planar bipartite map under construction, kept as a rotation system."""

    def __init__(self):
        self.colors: dict[str, str] = {}
        self.edges: dict[str, tuple[str, str]] = {}
        self.rot: dict[str, list[str]] = {}

    def vertex(self, color: str) -> str:
        v = f"v{len(self.colors)}"
        self.colors[v] = color
        self.rot[v] = []
        return v

    def edge(self, u: str, v: str) -> str:
        e = f"e{len(self.edges)}"
        while e in self.edges:
            e += "x"
        self.edges[e] = (u, v)
        return e

    def graph(self) -> PlanarBipartiteGraph:
        return build_graph(
            list(self.colors.items()),
            [(e, u, v, 1) for e, (u, v) in self.edges.items()],
            {v: r for v, r in self.rot.items() if r},
        )

    def insert_at_corner(self, v: str, e_out: str, e: str) -> None:
        r = self.rot[v]
        if not r:
            r.append(e)
        else:
            r.insert(r.index(e_out) + 1, e)

    def corners(self, g: PlanarBipartiteGraph):
        """(face index, walk position, vertex, e_out) for every face corner."""
        out = []
        for fi, f in enumerate(g.faces):
            n = len(f.darts)
            for i, d in enumerate(f.darts):
                out.append((fi, i, g.head(d), f.darts[(i + 1) % n][0]))
        return out


def random_map(rng: random.Random, n_vertices: int, parallel: bool = False) -> PlanarBipartiteGraph:
    m = _Map()
    a, b = m.vertex(BLACK), m.vertex(WHITE)
    e = m.edge(a, b)
    m.rot[a].append(e)
    m.rot[b].append(e)
    while len(m.colors) < n_vertices:
        g = m.graph()
        op = rng.random()
        if op < 0.35:
            # new vertex joined to two same-colored corners of one face
            fi = rng.randrange(len(g.faces))
            f = g.faces[fi]
            n = len(f.darts)
            pairs = [
                (i, j) for i in range(n) for j in range(i + 2, n, 2)
                if g.head(f.darts[i]) != g.head(f.darts[j])
            ]
            if not pairs:
                continue
            i, j = rng.choice(pairs)
            va, vc = g.head(f.darts[i]), g.head(f.darts[j])
            oa, oc = f.darts[(i + 1) % n][0], f.darts[(j + 1) % n][0]
            x = m.vertex(WHITE if m.colors[va] == BLACK else BLACK)
            e1, e2 = m.edge(x, va), m.edge(x, vc)
            m.insert_at_corner(va, oa, e1)
            m.insert_at_corner(vc, oc, e2)
            m.rot[x] = [e1, e2]
        elif op < 0.6:
            # pendant vertex in some corner
            _, _, v, e_out = rng.choice(m.corners(g))
            x = m.vertex(WHITE if m.colors[v] == BLACK else BLACK)
            e1 = m.edge(v, x)
            m.insert_at_corner(v, e_out, e1)
            m.rot[x] = [e1]
        elif op < 0.8 and len(m.colors) + 2 <= n_vertices:
            # subdivide an edge twice
            e = rng.choice(sorted(m.edges))
            u, v = m.edges.pop(e)
            p = m.vertex(WHITE if m.colors[u] == BLACK else BLACK)
            q = m.vertex(m.colors[u])
            e1, e2, e3 = m.edge(u, p), m.edge(p, q), m.edge(q, v)
            m.rot[u][m.rot[u].index(e)] = e1
            m.rot[v][m.rot[v].index(e)] = e3
            m.rot[p] = [e1, e2]
            m.rot[q] = [e2, e3]
        else:
            # chord between opposite-colored corners of one face
            fi = rng.randrange(len(g.faces))
            f = g.faces[fi]
            n = len(f.darts)
            pairs = [(i, j) for i in range(n) for j in range(i + 1, n, 2)]
            adjacent = {frozenset(x) for x in m.edges.values()}
            pairs = [
                (i, j) for i, j in pairs
                if parallel or frozenset((g.head(f.darts[i]), g.head(f.darts[j]))) not in adjacent
            ]
            pairs = [(i, j) for i, j in pairs if g.head(f.darts[i]) != g.head(f.darts[j])]
            if not pairs:
                continue
            i, j = rng.choice(pairs)
            va, vc = g.head(f.darts[i]), g.head(f.darts[j])
            e1 = m.edge(va, vc)
            m.insert_at_corner(va, f.darts[(i + 1) % n][0], e1)
            m.insert_at_corner(vc, f.darts[(j + 1) % n][0], e1)
    # occasionally drop an edge (may disconnect)
    if rng.random() < 0.2 and len(m.edges) > 2:
        e = rng.choice(sorted(m.edges))
        u, v = m.edges.pop(e)
        m.rot[u].remove(e)
        m.rot[v].remove(e)
    return m.graph()


def random_lattice_patch(rng: random.Random, n_vertices: int, hexagonal: bool = False) -> PlanarBipartiteGraph:
    """Induced subgraph of a square grid, or of the brick-wall picture of the
    honeycomb lattice, grown from one cell."""
    cells = {(0, 0)}

    def linked(a, b) -> bool:
        if a[0] == b[0]:
            return True
        top = min(a, b)
        return not hexagonal or (top[0] + top[1]) % 2 == 0

    while len(cells) < n_vertices:
        i, j = rng.choice(sorted(cells))
        di, dj = rng.choice([(0, 1), (1, 0), (0, -1), (-1, 0)])
        c = (i + di, j + dj)
        if linked((i, j), c):
            cells.add(c)
    edges = []
    for c in sorted(cells):
        for d in (c[0], c[1] + 1), (c[0] + 1, c[1]):
            if d in cells and linked(c, d) and rng.random() < 0.9:
                edges.append((c, d))
    colors = {c: BLACK if (c[0] + c[1]) % 2 == 0 else WHITE for c in cells}
    return lattice_graph(sorted(cells), colors, edges)


def _weights(rng: random.Random, g: PlanarBipartiteGraph, allow_vars: bool = True) -> PlanarBipartiteGraph:
    r = rng.random()
    if r < 0.45:
        return g
    if r < 0.7 or not allow_vars:
        return g.with_weights({e: rng.choice([1, 1, 2, 3, -1]) for e in g.edges})
    return g.relabel_edges_as_variables("x_")


# ------------------------------------------------------------ compound graphs


def _supergraphs() -> list[PlanarBipartiteGraph]:
    def lattice(cells, edges):
        colors = {c: BLACK if (c[0] + c[1]) % 2 == 0 else WHITE for c in cells}
        return lattice_graph(cells, colors, edges)

    p = lambda n: lattice([(1, j) for j in range(1, n + 1)], [((1, j), (1, j + 1)) for j in range(1, n)])
    c4 = lattice([(1, 1), (1, 2), (2, 1), (2, 2)],
                 [((1, 1), (1, 2)), ((1, 1), (2, 1)), ((1, 2), (2, 2)), ((2, 1), (2, 2))])
    star = lattice([(1, 2), (2, 1), (2, 2), (2, 3)],
                   [((1, 2), (2, 2)), ((2, 1), (2, 2)), ((2, 2), (2, 3))])
    return [p(2), p(2), p(3), p(3), p(4), c4, star]


def _small_bases(rng: random.Random) -> PlanarBipartiteGraph:
    while True:
        kind = rng.random()
        if kind < 0.4:
            g = random_lattice_patch(rng, rng.choice([2, 2, 4, 4, 6]))
        else:
            g = random_map(rng, rng.choice([2, 4, 4, 6]))
        if g.is_balanced() and len(g.components) == 1 and g.edges:
            return g


def random_compound(rng: random.Random, budget: int, tries: int = 200):
    for _ in range(tries):
        base = _weights(rng, _small_bases(rng))
        sup = rng.choice(_supergraphs())
        nstem = rng.randint(0, 3)
        if len(sup.vertices) * len(base.vertices) + 2 * nstem > budget:
            continue
        walk = outer_walk(base)
        heads = [base.head(d) for d in walk]

        def pick(color: str):
            spots = [i for i, v in enumerate(heads) if base.colors[v] == color]
            if not spots:
                return None
            i = rng.choice(spots)
            return heads[i], heads[:i].count(heads[i])

        placement = Placement()
        ok = True
        for _ in range(nstem):
            w = pick(WHITE)
            b = pick(BLACK)
            if w is None or b is None:
                ok = False
                break
            placement.stems.append(StemPlacement(rng.choice(sorted(sup.edges)), w[0], w[1]))
            placement.leaves.append(LeafPlacement(rng.choice(sup.vertices), b[0], b[1]))
        if not ok:
            continue
        try:
            return build_compound(base, sup, placement)
        except (CompoundError, GraphError):
            continue
    raise RuntimeError("could not place a compound graph")


# ------------------------------------------------------- symmetric instances


def random_symmetric(rng: random.Random, budget: int, theorem: bool, tries: int = 500):
    for _ in range(tries):
        n = rng.choice([2, 3, 4, 5, 6])
        half = random_lattice_patch(rng, n) if rng.random() < 0.5 else random_map(rng, n)
        if len(half.components) != 1 or not half.edges:
            continue
        half = _weights(rng, half)
        walk = outer_walk(half)
        heads = [half.head(d) for d in walk]
        if theorem:
            k = 2 * rng.randint(0, 2)
            if k > len(set(heads)):
                continue
            idx = sorted(rng.sample(range(len(walk)), k))
            if len({heads[i] for i in idx}) != k:
                continue
            axis = [AxisItem(STEM, heads[i], 1, heads[:i].count(heads[i])) for i in idx]
        else:
            w = rng.randint(1, 3)
            idx = sorted(rng.choice(range(len(walk))) for _ in range(2 * w))
            first = rng.choice([STEM, LEAF])
            other = LEAF if first == STEM else STEM
            axis = [
                AxisItem(first if t % 2 == 0 else other, heads[i], rng.choice([1, 2]),
                         heads[:i].count(heads[i]))
                for t, i in enumerate(idx)
            ]
        if 2 * len(half.vertices) + len(axis) > budget:
            continue
        try:
            return build_symmetric(half, axis)
        except (SymmetricError, GraphError, CompoundError):
            continue
    raise RuntimeError("could not build a symmetric instance")


# ---------------------------------------------------------------- corpus


def gen_corpus(
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
    graphs: int = 500,
    compounds: int = 60,
    symmetric: int = 40,
) -> list[CorpusEntry]:
    """Plain maps and lattice patches, compound graphs, and symmetric
    instances (both leaf-carrying and theorem-form). Every graph has at most
    ``budget`` vertices."""
    rng = random.Random(seed)
    out: list[CorpusEntry] = []
    for k in range(graphs):
        # most graphs should have perfect matchings; one in ten is left to chance
        want_matching = k % 10 != 0
        n = rng.randint(2, budget)
        if want_matching and n % 2:
            n -= 1
        for _ in range(200):
            r = rng.random()
            if r < 0.5:
                g = random_map(rng, n, parallel=rng.random() < 0.1)
            else:
                g = random_lattice_patch(rng, n, hexagonal=r < 0.7)
            if not want_matching or find_perfect_matching(g) is not None:
                break
        # Berkowitz on many variables is the slow path; keep them on small graphs
        g = _weights(rng, g, allow_vars=len(g.vertices) <= 10)
        out.append(CorpusEntry(f"graph-{k:04d}", "graph", g, {"graph.pbg": format_pbg(g)}))
    for k in range(compounds):
        cg = random_compound(rng, budget)
        out.append(CorpusEntry(f"compound-{k:04d}", "compound", cg, {
            "graph.pbg": format_pbg(cg.graph),
            "graph.cpdmap": format_cpdmap(cg),
            "base.pbg": format_pbg(cg.base),
            "super.pbg": format_pbg(cg.supergraph),
        }))
    for k in range(symmetric):
        sc = random_symmetric(rng, budget, theorem=k % 2 == 1)
        out.append(CorpusEntry(f"symmetric-{k:04d}", "symmetric", sc, {
            "half.pbg": format_pbg(sc.half),
            "axis.txt": format_axis(sc.axis),
        }))
    return out


def write_corpus(entries: list[CorpusEntry], root: str | Path) -> list[Path]:
    root = Path(root)
    written = []
    for ent in entries:
        d = root / ent.name
        d.mkdir(parents=True, exist_ok=True)
        for fname, text in sorted(ent.files.items()):
            (d / fname).write_text(text, encoding="utf-8")
            written.append(d / fname)
    return written


def load_entry(directory: str | Path) -> CorpusEntry:
    d = Path(directory)
    if (d / "axis.txt").exists():
        half = parse_pbg((d / "half.pbg").read_text(encoding="utf-8"), str(d / "half.pbg"))
        sc = build_symmetric(half, parse_axis((d / "axis.txt").read_text(encoding="utf-8")))
        return CorpusEntry(d.name, "symmetric", sc)
    g = parse_pbg((d / "graph.pbg").read_text(encoding="utf-8"), str(d / "graph.pbg"))
    if (d / "graph.cpdmap").exists():
        copy_of, edge_of, stems, leaves, strict = parse_cpdmap((d / "graph.cpdmap").read_text(encoding="utf-8"))
        base = parse_pbg((d / "base.pbg").read_text(encoding="utf-8"))
        sup = parse_pbg((d / "super.pbg").read_text(encoding="utf-8"))
        return CorpusEntry(d.name, "compound",
                           compound_from_parts(g, base, sup, copy_of, stems, leaves, edge_of, strict))
    return CorpusEntry(d.name, "graph", g)
