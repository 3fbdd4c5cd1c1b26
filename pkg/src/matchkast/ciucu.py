"""Symmetric compound graphs: two mirror copies of a half joined across an
axis by stems and leaves of either color.

Copy 1 sits to the left of the axis and copy 2 is its reflection. Axis items
are listed bottom to top, which is the order in which the counterclockwise
outer walk of copy 1 meets them.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

from .compound import CompoundGraph, compound_from_parts, outer_walk
from .graph import (
    BLACK,
    WHITE,
    NotGenusZero,
    PlanarBipartiteGraph,
    build_graph,
    induced_subgraph,
)
from .kasteleyn import construct_sign_function, count_matchings
from .pbg import format_pbg
from .report import FAIL, PASS, VerificationReport
from .ring import Poly

STEM, LEAF = "stem", "leaf"


class SymmetricError(ValueError):
    pass


class NonAlternating(SymmetricError):
    pass


class ColorImbalance(SymmetricError):
    pass


class NotOuterFace(SymmetricError):
    pass


@dataclass(frozen=True)
class AxisItem:
    """A stem, or a leaf hanging off copy ``side`` (1 or 2). ``occurrence``
    picks among repeated visits of the outer walk to ``vertex``."""

    kind: str
    vertex: str
    side: int = 1
    occurrence: int = 0
    color: str | None = None


@dataclass(frozen=True)
class SymmetricCompound:
    half: PlanarBipartiteGraph
    axis: tuple[AxisItem, ...]
    graph: PlanarBipartiteGraph
    compound: CompoundGraph
    item_ids: tuple[str, ...]

    @property
    def w(self) -> int:
        return sum(1 for it in self.axis if it.kind == STEM)

    @property
    def stems(self) -> tuple[str, ...]:
        return tuple(x for x, it in zip(self.item_ids, self.axis) if it.kind == STEM)

    @property
    def leaves(self) -> tuple[str, ...]:
        return tuple(x for x, it in zip(self.item_ids, self.axis) if it.kind == LEAF)


def copy_id(side: int, x: str) -> str:
    return f"{side}/{x}"


def _p2() -> PlanarBipartiteGraph:
    return build_graph([("1", BLACK), ("2", WHITE)], [("s", "1", "2", 1)], {"1": ["s"], "2": ["s"]})


def build_symmetric(half: PlanarBipartiteGraph, axis: Sequence[AxisItem]) -> SymmetricCompound:
    """Assemble H from a half and its axis items.

    Leaves, when present, must alternate with stems. Item colors are forced
    by the attachment vertex; a stated color that disagrees is rejected.
    """
    axis = tuple(axis)
    if len(half.components) != 1 or not half.edges:
        raise SymmetricError("the half must be connected with at least one edge")
    kinds = [it.kind for it in axis]
    for k in kinds:
        if k not in (STEM, LEAF):
            raise SymmetricError(f"unknown axis item kind {k!r}")
    if LEAF in kinds:
        for x, y in zip(kinds, kinds[1:]):
            if x == y:
                raise NonAlternating(f"two consecutive {x}s on the axis")
    walk = outer_walk(half)
    heads = [half.head(d) for d in walk]
    # locate every item's corner on the walk
    corner_of = []
    for it in axis:
        if it.kind == LEAF and it.side not in (1, 2):
            raise SymmetricError(f"leaf side must be 1 or 2, got {it.side}")
        spots = [i for i, v in enumerate(heads) if v == it.vertex]
        if it.vertex not in half.colors:
            raise NotOuterFace(f"unknown vertex {it.vertex!r}")
        if not spots:
            raise NotOuterFace(f"{it.vertex!r} is not on the outer face of the half")
        if it.occurrence >= len(spots) or it.occurrence < 0:
            raise NotOuterFace(f"{it.vertex!r} has only {len(spots)} outer corners")
        corner_of.append(spots[it.occurrence])
        want = WHITE if half.colors[it.vertex] == BLACK else BLACK
        if it.color is not None and it.color != want:
            raise SymmetricError(f"{it.kind} at {it.vertex!r} must be {want!r}")
    if corner_of:
        n = len(walk)
        rel = [(c - corner_of[0]) % n for c in corner_of]
        if rel != sorted(rel):
            raise NotGenusZero("axis items are not in the order of the outer walk")

    ids = [f"{it.kind}.{k}" for k, it in enumerate(axis)]
    n = len(walk)
    in_corner: dict[int, list[int]] = {}
    for k, c in enumerate(corner_of):
        in_corner.setdefault(c, []).append(k)

    def ext_edges(k: int, side: int) -> list[str]:
        it = axis[k]
        if it.kind == STEM:
            return [f"{ids[k]}/{side}"]
        return [f"{ids[k]}/e"] if it.side == side else []

    # augmented clockwise rotation of copy 1, with external edges as
    # (item index) placeholders
    aug: dict[str, list] = {}
    corner_pairs: dict[str, dict[tuple[str, str], list[int]]] = {}
    for i, d in enumerate(walk):
        v = half.head(d)
        e_in, e_out = d[0], walk[(i + 1) % n][0]
        if i in in_corner:
            corner_pairs.setdefault(v, {})[e_out, e_in] = in_corner[i]
    for v in half.vertices:
        rot = list(half.incident(v))
        pairs = corner_pairs.get(v, {})
        seq: list = []
        for j, e in enumerate(rot):
            seq.append(e)
            nxt = rot[(j + 1) % len(rot)]
            for k in reversed(pairs.get((e, nxt), [])):
                seq.append(k)
        aug[v] = seq

    verts = []
    edges = []
    rotation: dict[str, list[str]] = {}
    copy_of, edge_of = {}, {}
    for side in (1, 2):
        for v in half.vertices:
            verts.append((copy_id(side, v), half.colors[v]))
            copy_of[copy_id(side, v)] = (str(side), v)
        for e, ed in half.edges.items():
            edges.append((copy_id(side, e), copy_id(side, ed.u), copy_id(side, ed.v), ed.weight))
            edge_of[copy_id(side, e)] = (str(side), e)
        for v, seq in aug.items():
            out: list[str] = []
            for x in seq:
                out.extend(ext_edges(x, side) if isinstance(x, int) else [copy_id(side, x)])
            if side == 2:
                out.reverse()
            if out:
                rotation[copy_id(side, v)] = out
    for k, it in enumerate(axis):
        col = WHITE if half.colors[it.vertex] == BLACK else BLACK
        verts.append((ids[k], col))
        sides = (1, 2) if it.kind == STEM else (it.side,)
        inc = []
        for side in sides:
            e = ext_edges(k, side)[0]
            edges.append((e, ids[k], copy_id(side, it.vertex), 1))
            inc.append(e)
        rotation[ids[k]] = inc
    if STEM in kinds:
        d = walk[corner_of[kinds.index(STEM)]]
        outer = [(copy_id(1, d[0]), copy_id(1, d[1]))]
    else:
        # two components; copy 2 is mirrored, so its outer walk runs backwards
        e, t = walk[0]
        outer = [(copy_id(1, e), copy_id(1, t)), (copy_id(2, e), copy_id(2, half.other(e, t)))]
    g = build_graph(verts, edges, rotation, outer)
    if not g.is_balanced():
        raise ColorImbalance(f"{len(g.black)} black vs {len(g.white)} white vertices in H")
    stems = [ids[k] for k, it in enumerate(axis) if it.kind == STEM]
    leaves = [ids[k] for k, it in enumerate(axis) if it.kind == LEAF]
    cg = compound_from_parts(g, half, _p2(), copy_of, stems, leaves, edge_of, strict=False)
    return SymmetricCompound(half, axis, g, cg, tuple(ids))


def ciucu_sign_function(sc: SymmetricCompound, base_sign: dict[str, int] | None = None) -> dict[str, int]:
    """Base signs on both copies; the two edges at a black stem agree, at a
    white stem they differ; leaf edges get +1.

    The rule only yields a sign function when no two stems are adjacent on
    the axis, so that every inner face of the reduced graph has six sides.
    """
    kinds = [it.kind for it in sc.axis]
    if any(x == y == STEM for x, y in zip(kinds, kinds[1:])):
        raise NonAlternating("consecutive stems: the stem sign rule does not apply")
    f = base_sign if base_sign is not None else construct_sign_function(sc.half)
    sf = {}
    for e, (_, be) in sc.compound.edge_of.items():
        sf[e] = f[be]
    for k, it in enumerate(sc.axis):
        x = sc.item_ids[k]
        if it.kind == STEM:
            sf[f"{x}/1"] = 1
            sf[f"{x}/2"] = 1 if sc.graph.colors[x] == BLACK else -1
        else:
            sf[f"{x}/e"] = 1
    return sf


def _reproducer(sc: SymmetricCompound) -> dict[str, str]:
    return {"half.pbg": format_pbg(sc.half), "axis.txt": format_axis(sc.axis), "graph.pbg": format_pbg(sc.graph)}


def flip_leaf(sc: SymmetricCompound, leaf: str) -> SymmetricCompound:
    """The other member of the leaf's family: same axis slot, mirror copy."""
    if leaf not in sc.leaves:
        raise SymmetricError(f"{leaf!r} is not an axis leaf")
    k = sc.item_ids.index(leaf)
    axis = list(sc.axis)
    axis[k] = replace(axis[k], side=3 - axis[k].side)
    return build_symmetric(sc.half, axis)


def verify_ciucu_lemma(sc: SymmetricCompound, leaf: str) -> VerificationReport:
    other = flip_leaf(sc, leaf)
    c1, c2 = count_matchings(sc.graph), count_matchings(other.graph)
    claim = "family of two: #H1 - #H2 = 0"
    wit = {"leaf": leaf, "count1": str(c1), "count2": str(c2)}
    if c1 == c2:
        return VerificationReport(f"ciucu-lemma:{leaf}", claim, PASS, wit)
    return VerificationReport(f"ciucu-lemma:{leaf}", claim, FAIL, wit, _reproducer(sc),
                              f"counts differ by {c1 - c2}")


def split_even_odd(sc: SymmetricCompound) -> tuple[PlanarBipartiteGraph, PlanarBipartiteGraph]:
    """(G_bw, G_wb). Stems are labeled even, odd, even, ... from the bottom of
    the axis; G_bw drops every half vertex next to a black even or white odd
    stem, G_wb every half vertex next to a white even or black odd stem."""
    if sc.leaves:
        raise SymmetricError("the factorization applies to axes without leaves")
    drop_bw, drop_wb = set(), set()
    stems = [it for it in sc.axis if it.kind == STEM]
    for idx, it in enumerate(stems):
        black = sc.half.colors[it.vertex] == WHITE
        even = idx % 2 == 0
        (drop_bw if black == even else drop_wb).add(it.vertex)
    g = sc.half
    return (
        induced_subgraph(g, [v for v in g.vertices if v not in drop_bw]),
        induced_subgraph(g, [v for v in g.vertices if v not in drop_wb]),
    )


def verify_factorization(sc: SymmetricCompound) -> VerificationReport:
    claim = "#H = 2^w #G_bw #G_wb"
    stems = [it for it in sc.axis if it.kind == STEM]
    if len(stems) % 2:
        raise SymmetricError("the factorization needs an even number of stems")
    if len({it.vertex for it in stems}) != len(stems):
        raise SymmetricError("stems must attach to distinct vertices")
    g_bw, g_wb = split_even_odd(sc)
    w = len(stems) // 2
    h = count_matchings(sc.graph)
    rhs = Poly.const(2**w) * count_matchings(g_bw) * count_matchings(g_wb)
    wit = {"w": w, "count_H": str(h), "count_bw": str(count_matchings(g_bw)),
           "count_wb": str(count_matchings(g_wb))}
    if h == rhs:
        return VerificationReport("ciucu-factorization", claim, PASS, wit)
    return VerificationReport("ciucu-factorization", claim, FAIL, wit, _reproducer(sc),
                              f"2^w #G_bw #G_wb = {rhs}")


# ------------------------------------------------------------------ text form


def format_axis(axis: Sequence[AxisItem]) -> str:
    """One item per line, bottom to top::

        stem <vertex> [occurrence]
        leaf <vertex> <side> [occurrence]
    """
    lines = ["axis v1"]
    for it in axis:
        if it.kind == STEM:
            lines.append(f"stem {it.vertex} {it.occurrence}")
        else:
            lines.append(f"leaf {it.vertex} {it.side} {it.occurrence}")
    return "\n".join(lines) + "\n"


def parse_axis(text: str, source: str = "<string>") -> tuple[AxisItem, ...]:
    items = []
    header = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if not header:
            if parts != ["axis", "v1"]:
                raise SymmetricError(f"{source}:{lineno}: expected header 'axis v1'")
            header = True
            continue
        try:
            if parts[0] == STEM and len(parts) in (2, 3):
                items.append(AxisItem(STEM, parts[1], 1, int(parts[2]) if len(parts) == 3 else 0))
            elif parts[0] == LEAF and len(parts) in (3, 4):
                items.append(AxisItem(LEAF, parts[1], int(parts[2]), int(parts[3]) if len(parts) == 4 else 0))
            else:
                raise ValueError
        except ValueError:
            raise SymmetricError(f"{source}:{lineno}: expected 'stem <v> [k]' or 'leaf <v> <side> [k]'") from None
    if not header:
        raise SymmetricError(f"{source}: missing 'axis v1' header")
    return tuple(items)
