"""Compound graphs: copies of a base graph joined by stems, plus leaves.

A compound graph ``H`` is stored as an ordinary embedded graph together with
the bookkeeping that says which vertex of ``H`` is which vertex of which copy
(``copy_of``), which base edge each copy edge replicates (``edge_of``), and
which added vertices are stems and leaves. Copies sitting at black supergraph
vertices keep the base embedding; copies at white vertices carry its mirror
image.

Two validation modes exist. ``strict`` enforces the classical rules (black
stems, white leaves, as many stems as leaves, balanced base). The relaxed mode
drops the color and count rules and is used for symmetric two-copy graphs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .graph import (
    BLACK,
    WHITE,
    Dart,
    GraphError,
    PlanarBipartiteGraph,
    build_graph,
    canonical_rotation,
)
from .kasteleyn import (
    SignFunction,
    construct_sign_function,
    count_matchings,
    face_sign_product,
    format_signs,
)
from .pbg import format_pbg, read_pbg
from .report import FAIL, PASS, VACUOUS, VerificationReport
from .ring import NotDivisible, Poly, exact_div


class CompoundError(ValueError):
    pass


class StemColorViolation(CompoundError):
    pass


class LeafColorViolation(CompoundError):
    pass


class InequivalentStemEndpoints(CompoundError):
    pass


class NotOuterFaceVertex(CompoundError):
    pass


class CountMismatch(CompoundError):
    pass


class CopyStructureError(CompoundError):
    """A copy does not reproduce the base graph (vertices, edges, rotations)."""


class InvalidInputSign(CompoundError):
    pass


class FamilyUndefined(CompoundError):
    pass


class PlacementImpossible(CompoundError):
    pass


class ScriptError(CompoundError):
    def __init__(self, lineno: int, msg: str, source: str = "<string>"):
        super().__init__(f"{source}:{lineno}: {msg}")
        self.lineno = lineno


def copy_prefix(s: str) -> str:
    return f"{s}/"


def outer_walk(g: PlanarBipartiteGraph) -> tuple[Dart, ...]:
    return g.faces[g.face_of[g.outer_dart]].darts


def _walk_from(rot: Mapping[str, Sequence[str]], other, start: Dart) -> list[Dart]:
    idx = {v: {e: i for i, e in enumerate(r)} for v, r in rot.items()}
    walk = [start]
    d = start
    while True:
        e, t = d
        v = other(e, t)
        r = rot[v]
        d = (r[idx[v][e] - 1], v)
        if d == start:
            return walk
        walk.append(d)


@dataclass(frozen=True, eq=False)
class CompoundGraph:
    graph: PlanarBipartiteGraph
    base: PlanarBipartiteGraph
    supergraph: PlanarBipartiteGraph
    copy_of: Mapping[str, tuple[str, str]]
    edge_of: Mapping[str, tuple[str, str]]
    stems: frozenset[str]
    leaves: frozenset[str]
    strict: bool = True

    @property
    def parity(self) -> dict[str, int]:
        return {s: 1 if c == BLACK else -1 for s, c in self.supergraph.colors.items()}

    @cached_property
    def copy_vertex(self) -> dict[tuple[str, str], str]:
        """(super-vertex, base-vertex) -> H vertex."""
        return {sv: h for h, sv in self.copy_of.items()}

    @cached_property
    def copy_edge(self) -> dict[tuple[str, str], str]:
        return {se: h for h, se in self.edge_of.items()}

    @cached_property
    def external_edges(self) -> frozenset[str]:
        return frozenset(e for e in self.graph.edges if e not in self.edge_of)

    def super_of(self, v: str) -> str:
        return self.copy_of[v][0]

    def equivalent(self, u: str, v: str) -> bool:
        return u in self.copy_of and v in self.copy_of and self.copy_of[u][1] == self.copy_of[v][1]

    @cached_property
    def copy_walks(self) -> dict[str, tuple[Dart, ...]]:
        """Outer walk of every copy, traced in H's rotation restricted to the copy."""
        g = self.graph
        rot = {
            v: [e for e in g.incident(v) if e in self.edge_of]
            for v in self.copy_of
        }
        bw = outer_walk(self.base)
        walks = {}
        for s in self.supergraph.vertices:
            e, t = bw[0]
            d = (self.copy_edge[s, e], self.copy_vertex[s, t])
            if self.parity[s] < 0:
                d = g.reverse(d)
            walks[s] = tuple(_walk_from(rot, g.other, d))
        return walks

    @cached_property
    def corners(self) -> dict[str, list[tuple[str, list[str]]]]:
        """Per copy, in walk order: (vertex, external edges listed clockwise
        from the outgoing walk edge)."""
        g = self.graph
        out = {}
        for s, walk in self.copy_walks.items():
            lst = []
            n = len(walk)
            for i, d in enumerate(walk):
                v = g.head(d)
                e_in, e_out = d[0], walk[(i + 1) % n][0]
                rot = g.incident(v)
                k = rot.index(e_out)
                ext = []
                while True:
                    k = (k + 1) % len(rot)
                    if rot[k] == e_in:
                        break
                    ext.append(rot[k])
                lst.append((v, ext))
            out[s] = lst
        return out

    @cached_property
    def _reduced(self) -> PlanarBipartiteGraph:
        return _reduce(self)

    def reduced(self) -> PlanarBipartiteGraph:
        return self._reduced


def reduced_vertex(s: str) -> str:
    return "@" + s


def _reduce(cg: CompoundGraph) -> PlanarBipartiteGraph:
    g = cg.graph
    verts = [(reduced_vertex(s), WHITE) for s in cg.supergraph.vertices]
    verts += [(x, BLACK) for x in sorted(cg.stems | cg.leaves)]

    def image(v: str) -> str:
        return reduced_vertex(cg.copy_of[v][0]) if v in cg.copy_of else v

    edges = []
    for e in sorted(cg.external_edges):
        ed = g.edges[e]
        edges.append((e, image(ed.u), image(ed.v), ed.weight))
    rot: dict[str, list[str]] = {}
    for s, lst in cg.corners.items():
        seq = []
        for _, ext in reversed(lst):
            seq.extend(ext)
        if seq:
            rot[reduced_vertex(s)] = seq
    for x in cg.stems | cg.leaves:
        rot[x] = list(g.incident(x))
    outer = []
    for d0 in g.outer_darts:
        for e, t in g.faces[g.face_of[d0]].darts:
            if e in cg.external_edges:
                outer.append((e, image(t)))
                break
    return build_graph(verts, edges, rot, outer)


# ---------------------------------------------------------------- validation


def validate_compound(cg: CompoundGraph) -> CompoundGraph:
    g, base, sup = cg.graph, cg.base, cg.supergraph
    if not base.edges or len(base.components) != 1:
        raise CopyStructureError("the base graph must be connected with at least one edge")
    if cg.strict and not base.is_balanced():
        raise CountMismatch("the base graph needs as many black as white vertices")
    roles = {}
    for v in g.vertices:
        tags = [v in cg.copy_of, v in cg.stems, v in cg.leaves]
        if sum(tags) != 1:
            raise CopyStructureError(f"vertex {v!r} must be exactly one of copy vertex, stem, leaf")
        roles[v] = tags.index(True)
    for x in cg.stems | cg.leaves:
        if x not in g.colors:
            raise CopyStructureError(f"unknown stem or leaf {x!r}")
    # copies reproduce the base
    for s in sup.vertices:
        for bv in base.vertices:
            h = cg.copy_vertex.get((s, bv))
            if h is None:
                raise CopyStructureError(f"copy {s!r} lacks base vertex {bv!r}")
            if g.colors[h] != base.colors[bv]:
                raise CopyStructureError(f"{h!r} and base vertex {bv!r} differ in color")
    if len(cg.copy_of) != len(sup.vertices) * len(base.vertices):
        raise CopyStructureError("copy_of maps vertices outside the supergraph or base")
    for h, (s, be) in cg.edge_of.items():
        if h not in g.edges or be not in base.edges or s not in sup.colors:
            raise CopyStructureError(f"bad edge map entry {h!r} -> {(s, be)}")
        ed, bed = g.edges[h], base.edges[be]
        ends = {cg.copy_of.get(ed.u), cg.copy_of.get(ed.v)}
        if ends != {(s, bed.u), (s, bed.v)}:
            raise CopyStructureError(f"edge {h!r} does not join the images of {be!r}'s endpoints")
        if ed.weight != bed.weight:
            raise CopyStructureError(f"edge {h!r} does not carry the weight of {be!r}")
    if len(cg.copy_edge) != len(cg.edge_of) or len(cg.edge_of) != len(sup.vertices) * len(base.edges):
        raise CopyStructureError("every copy must contain each base edge exactly once")
    parity = cg.parity
    for h, (s, bv) in cg.copy_of.items():
        restricted = [cg.edge_of[e][1] for e in g.incident(h) if e in cg.edge_of]
        want = list(base.incident(bv))
        if parity[s] < 0:
            want.reverse()
        if canonical_rotation(restricted) != canonical_rotation(want):
            side = "base" if parity[s] > 0 else "mirrored base"
            raise CopyStructureError(f"rotation at {h!r} does not follow the {side} rotation")
    # external edges
    for e in cg.external_edges:
        ed = g.edges[e]
        if (ed.u in cg.copy_of) == (ed.v in cg.copy_of):
            raise CopyStructureError(f"edge {e!r} must join a copy vertex to a stem or leaf")
    for x in cg.stems:
        nb = g.neighbors(x)
        if len(nb) != 2:
            raise CopyStructureError(f"stem {x!r} must have degree 2")
        if cg.strict and g.colors[x] != BLACK:
            raise StemColorViolation(f"stem {x!r} must be black")
        s1, s2 = (cg.copy_of[y][0] for y in nb)
        if s1 == s2:
            raise CopyStructureError(f"stem {x!r} joins two vertices of copy {s1!r}")
        if not any({sup.edges[se].u, sup.edges[se].v} == {s1, s2} for se in sup.edges):
            raise CopyStructureError(f"stem {x!r} joins copies {s1!r}, {s2!r} that are not adjacent")
        if not cg.equivalent(*nb):
            raise InequivalentStemEndpoints(f"stem {x!r} joins inequivalent vertices {nb[0]!r}, {nb[1]!r}")
    for x in cg.leaves:
        if g.degree(x) != 1:
            raise CopyStructureError(f"leaf {x!r} must have degree 1")
        if cg.strict and g.colors[x] != WHITE:
            raise LeafColorViolation(f"leaf {x!r} must be white")
    if cg.strict and len(cg.stems) != len(cg.leaves):
        raise CountMismatch(f"{len(cg.stems)} stems but {len(cg.leaves)} leaves")
    # external edges sit on the copies' outer walks
    placed = set()
    for s, lst in cg.corners.items():
        for _, ext in lst:
            placed.update(ext)
    stray = sorted(cg.external_edges - placed)
    if stray:
        e = stray[0]
        ed = g.edges[e]
        v = ed.u if ed.u in cg.copy_of else ed.v
        raise NotOuterFaceVertex(f"edge {e!r} leaves {v!r} inside a face of its copy")
    # copies' inner faces stay faces of H and are not the outer face
    walk_darts = {d for w in cg.copy_walks.values() for d in w}
    for d in g.outer_darts:
        for x in g.faces[g.face_of[d]].darts:
            if x[0] in cg.edge_of and x not in walk_darts:
                raise CopyStructureError("the outer face of H lies inside a copy")
    cg.reduced()
    return cg


def compound_from_parts(
    graph: PlanarBipartiteGraph,
    base: PlanarBipartiteGraph,
    supergraph: PlanarBipartiteGraph,
    copy_of: Mapping[str, tuple[str, str]],
    stems: Iterable[str],
    leaves: Iterable[str],
    edge_of: Mapping[str, tuple[str, str]] | None = None,
    strict: bool = True,
) -> CompoundGraph:
    """Wrap an already embedded graph. ``edge_of`` is derived from endpoint
    equivalence when omitted (ambiguous only with parallel base edges)."""
    copy_of = dict(copy_of)
    if edge_of is None:
        by_ends: dict[frozenset, list[str]] = {}
        for be, bed in base.edges.items():
            by_ends.setdefault(frozenset((bed.u, bed.v)), []).append(be)
        edge_of = {}
        for e, ed in graph.edges.items():
            if ed.u in copy_of and ed.v in copy_of:
                (s1, b1), (s2, b2) = copy_of[ed.u], copy_of[ed.v]
                if s1 != s2:
                    raise CopyStructureError(f"edge {e!r} joins copies {s1!r} and {s2!r}")
                cands = by_ends.get(frozenset((b1, b2)), [])
                if len(cands) != 1:
                    raise CopyStructureError(f"edge {e!r} has {len(cands)} candidate base edges")
                edge_of[e] = (s1, cands[0])
    cg = CompoundGraph(
        graph, base, supergraph, copy_of, dict(edge_of),
        frozenset(stems), frozenset(leaves), strict,
    )
    return validate_compound(cg)


# ------------------------------------------------------- scripted construction


@dataclass(frozen=True)
class StemPlacement:
    super_edge: str
    base_vertex: str
    occurrence: int | None = None  # None = first corner on the outer walk


@dataclass(frozen=True)
class LeafPlacement:
    super_vertex: str
    base_vertex: str
    occurrence: int | None = None


@dataclass
class Placement:
    stems: list[StemPlacement] = field(default_factory=list)
    leaves: list[LeafPlacement] = field(default_factory=list)
    outer: tuple[str, int] | None = None  # (super-vertex, index into base outer walk)


def _base_corner(base: PlanarBipartiteGraph, v: str, occurrence: int | None) -> int:
    walk = outer_walk(base)
    hits = [i for i, d in enumerate(walk) if base.head(d) == v]
    if not hits:
        raise NotOuterFaceVertex(f"base vertex {v!r} is not on the outer face")
    k = occurrence or 0
    if not 0 <= k < len(hits):
        raise NotOuterFaceVertex(f"base vertex {v!r} occurs {len(hits)} times on the outer walk, not {k + 1}")
    return hits[k]


def build_compound(
    base: PlanarBipartiteGraph, supergraph: PlanarBipartiteGraph, placement: Placement
) -> CompoundGraph:
    """Assemble H from a placement script.

    A stem or leaf is inserted at a corner of the base outer walk, chosen by
    the occurrence index of its base vertex on that walk. Items sharing a
    corner are inserted in script order (mirrored in white copies).
    """
    if not base.edges or len(base.components) != 1:
        raise CopyStructureError("the base graph must be connected with at least one edge")
    walk = outer_walk(base)
    n = len(walk)
    gaps: dict[tuple[str, int], list[str]] = {}
    edges: list[tuple[str, str, str, Poly]] = []
    verts: list[tuple[str, str]] = []
    rot: dict[str, list[str]] = {}
    stems, leaves = [], []
    one = Poly.const(1)
    for k, st in enumerate(placement.stems):
        if st.super_edge not in supergraph.edges:
            raise CompoundError(f"unknown supergraph edge {st.super_edge!r}")
        if base.colors.get(st.base_vertex) != WHITE:
            raise StemColorViolation(f"stem {k} attaches to {st.base_vertex!r}, which is not a white base vertex")
        c = _base_corner(base, st.base_vertex, st.occurrence)
        sid = f"stem.{k}"
        se = supergraph.edges[st.super_edge]
        verts.append((sid, BLACK))
        stems.append(sid)
        for s in sorted((se.u, se.v)):
            eid = f"{sid}/{s}"
            edges.append((eid, sid, copy_prefix(s) + st.base_vertex, one))
            gaps.setdefault((s, c), []).append(eid)
            rot.setdefault(sid, []).append(eid)
    for k, lf in enumerate(placement.leaves):
        if lf.super_vertex not in supergraph.colors:
            raise CompoundError(f"unknown supergraph vertex {lf.super_vertex!r}")
        if base.colors.get(lf.base_vertex) != BLACK:
            raise LeafColorViolation(f"leaf {k} attaches to {lf.base_vertex!r}, which is not a black base vertex")
        c = _base_corner(base, lf.base_vertex, lf.occurrence)
        lid = f"leaf.{k}"
        eid = f"{lid}/e"
        verts.append((lid, WHITE))
        leaves.append(lid)
        edges.append((eid, lid, copy_prefix(lf.super_vertex) + lf.base_vertex, one))
        gaps.setdefault((lf.super_vertex, c), []).append(eid)
        rot[lid] = [eid]
    if len(stems) != len(leaves):
        raise CountMismatch(f"{len(stems)} stems but {len(leaves)} leaves")

    copy_of, edge_of = {}, {}
    for s in supergraph.vertices:
        pre = copy_prefix(s)
        mirrored = supergraph.colors[s] == WHITE
        for v in base.vertices:
            copy_of[pre + v] = (s, v)
            verts.append((pre + v, base.colors[v]))
        for e, ed in base.edges.items():
            edge_of[pre + e] = (s, e)
            edges.append((pre + e, pre + ed.u, pre + ed.v, ed.weight))
        corner_at: dict[str, list[int]] = {}
        for i, d in enumerate(walk):
            corner_at.setdefault(base.head(d), []).append(i)
        for v in base.vertices:
            seq: list[str] = []
            for e in base.incident(v):
                seq.append(pre + e)
                for i in corner_at.get(v, ()):
                    e_out = walk[(i + 1) % n][0]
                    if e_out == e:
                        seq.extend(gaps.get((s, i), ()))
            if mirrored:
                seq.reverse()
            rot[pre + v] = seq

    # outer face: the face outside the designated copy's outer-walk dart
    s0, i0 = placement.outer or (supergraph.vertices[0], 0)
    e, t = walk[i0 % n]
    d = (copy_prefix(s0) + e, copy_prefix(s0) + t)
    if supergraph.colors[s0] == WHITE:
        d = (d[0], copy_prefix(s0) + base.other(e, t))
    outer = [d]
    probe = build_graph(verts, edges, rot, outer)
    seen_comp = {probe.component_of[d[1]]}
    for s in supergraph.vertices:
        e, t = walk[0]
        dd = (copy_prefix(s) + e, copy_prefix(s) + t)
        if supergraph.colors[s] == WHITE:
            dd = (dd[0], copy_prefix(s) + base.other(e, t))
        c = probe.component_of[dd[1]]
        if c not in seen_comp:
            seen_comp.add(c)
            outer.append(dd)
    g = build_graph(verts, edges, rot, outer)
    return compound_from_parts(g, base, supergraph, copy_of, stems, leaves, edge_of, strict=True)


# ----------------------------------------------------------- sign functions


def _check_sign_valid(g: PlanarBipartiteGraph, sf: SignFunction, what: str) -> None:
    if set(sf) != set(g.edges):
        raise InvalidInputSign(f"{what}: domain differs from the edge set")
    for face in g.inner_faces():
        if not face_sign_product(g, sf, face)[1]:
            raise InvalidInputSign(f"{what}: a face is negative")


def compose_sign_function(
    cg: CompoundGraph, sf_base: SignFunction, sf_red: SignFunction
) -> dict[str, int]:
    """The sign function on H whose restrictions are ``sf_base`` and ``sf_red``."""
    _check_sign_valid(cg.base, sf_base, "base sign function")
    _check_sign_valid(cg.reduced(), sf_red, "reduced sign function")
    out = {}
    for e in cg.graph.edges:
        if e in cg.edge_of:
            out[e] = sf_base[cg.edge_of[e][1]]
        else:
            out[e] = sf_red[e]
    return out


def restrict_sign_function(cg: CompoundGraph, sf: SignFunction) -> tuple[dict[str, int], dict[str, int]]:
    """Split a sign function on H into its base and reduced parts; raises if
    equivalent edges disagree."""
    sf_base: dict[str, int] = {}
    for e, (_, be) in cg.edge_of.items():
        if sf_base.setdefault(be, sf[e]) != sf[e]:
            raise InvalidInputSign(f"equivalent edges of base edge {be!r} carry different signs")
    sf_red = {e: sf[e] for e in cg.external_edges}
    return sf_base, sf_red


def default_sign_function(cg: CompoundGraph, sf_base: SignFunction | None = None) -> dict[str, int]:
    if sf_base is None:
        sf_base = construct_sign_function(cg.base)
    return compose_sign_function(cg, sf_base, construct_sign_function(cg.reduced()))


def sign_weight(cg: CompoundGraph, sf: SignFunction) -> PlanarBipartiteGraph:
    """H-bar: stem and leaf edge weights multiplied by their signs."""
    return cg.graph.with_weights(
        {e: cg.graph.weight(e) * sf[e] for e in cg.external_edges if sf[e] < 0}
    )


def check_odd_leaves(cg: CompoundGraph) -> bool:
    r = cg.reduced()
    for face in r.inner_faces():
        n = sum(1 for _, t in face.darts if t in cg.leaves)
        if n % 2 == 0:
            return False
    return True


# ----------------------------------------------------------------- families


@dataclass(frozen=True)
class Family:
    members: tuple[CompoundGraph, ...]
    moving_leaf: str
    anchor_class: str
    same_face: tuple[bool, ...]

    def __len__(self):
        return len(self.members)


def _leaf_face_key(cg: CompoundGraph, leaf: str) -> frozenset[Dart]:
    r = cg.reduced()
    (e,) = r.incident(leaf)
    face = r.faces[r.face_of[(e, leaf)]]
    return frozenset(d for d in face.darts if d[0] != e)


def move_leaf(cg: CompoundGraph, leaf: str, target: str, corner: int, position: int) -> CompoundGraph:
    """Re-attach ``leaf`` to copy vertex ``target`` at a corner (index into the
    target copy's outer walk) and a slot inside that corner."""
    g = cg.graph
    (e,) = g.incident(leaf)
    old = g.other(e, leaf)
    s = cg.copy_of[target][0]
    v, ext = cg.corners[s][corner]
    if v != target:
        raise PlacementImpossible(f"corner {corner} of copy {s!r} is at {v!r}, not {target!r}")
    ext = [x for x in ext if x != e]
    if not 0 <= position <= len(ext):
        raise PlacementImpossible(f"slot {position} out of range")
    walk = cg.copy_walks[s]
    e_out = walk[(corner + 1) % len(walk)][0]
    rot = {x: list(r) for x, r in g.rotation.items()}
    rot[old] = [x for x in rot[old] if x != e]
    seq = [x for x in rot[target] if x != e]
    k = seq.index(e_out)
    # the slot is counted from e_out in the clockwise corner list
    seq.insert(k + 1 + position, e)
    rot[target] = seq
    rot = {x: r for x, r in rot.items() if r}
    edges = []
    for eid, ed in g.edges.items():
        if eid == e:
            edges.append((eid, leaf, target, ed.weight))
        else:
            edges.append((eid, ed.u, ed.v, ed.weight))
    verts = [(x, g.colors[x]) for x in g.vertices]
    outer = [
        next(x for x in g.faces[g.face_of[d]].darts if x[0] != e) for d in g.outer_darts
    ]
    try:
        h = build_graph(verts, edges, rot, outer)
    except GraphError as exc:
        raise PlacementImpossible(str(exc)) from None
    return compound_from_parts(
        h, cg.base, cg.supergraph, cg.copy_of, cg.stems, cg.leaves, cg.edge_of, cg.strict
    )


def sibling(cg: CompoundGraph, leaf: str, target: str) -> tuple[CompoundGraph, bool]:
    """Move ``leaf`` to ``target``. The slot is the first one that keeps the
    leaf in the same reduced face; failing that, the first slot of the first
    corner. Returns the sibling and whether the face was kept."""
    key = _leaf_face_key(cg, leaf)
    s = cg.copy_of[target][0]
    first = None
    for ci, (v, ext) in enumerate(cg.corners[s]):
        if v != target:
            continue
        n_slots = len([x for x in ext if x not in cg.graph.incident(leaf)]) + 1
        for pos in range(n_slots):
            try:
                cand = move_leaf(cg, leaf, target, ci, pos)
            except (PlacementImpossible, CompoundError):
                continue
            if first is None:
                first = cand
            if _leaf_face_key(cand, leaf) == key:
                return cand, True
    if first is None:
        raise PlacementImpossible(f"no slot for leaf {leaf!r} at {target!r}")
    return first, False


def family(cg: CompoundGraph, leaf: str) -> Family:
    if leaf not in cg.leaves:
        raise FamilyUndefined(f"{leaf!r} is not a leaf of this compound graph")
    g = cg.graph
    (e,) = g.incident(leaf)
    q = g.other(e, leaf)
    s0, bq = cg.copy_of[q]
    members = [cg]
    kept = [True]
    for s in cg.supergraph.vertices:
        if s == s0:
            continue
        m, same = sibling(cg, leaf, cg.copy_vertex[s, bq])
        members.append(m)
        kept.append(same)
    return Family(tuple(members), leaf, bq, tuple(kept))


# ------------------------------------------------------------- verification


def _reproducer(cg: CompoundGraph, **extra: str) -> dict[str, str]:
    files = {
        "compound.pbg": format_pbg(cg.graph),
        "compound.cpdmap": format_cpdmap(cg),
        "base.pbg": format_pbg(cg.base),
        "super.pbg": format_pbg(cg.supergraph),
    }
    files.update(extra)
    return files


def find_zero_sum_signs(counts: Sequence[Poly]) -> tuple[int, ...] | None:
    if not counts:
        return None
    for rest in itertools.product((1, -1), repeat=len(counts) - 1):
        eps = (1, *rest)
        total = Poly.const(0)
        for e, c in zip(eps, counts):
            total = total + c * e
        if total.is_zero():
            return eps
    return None


def verify_zero_sum(fam: Family, sf_base: SignFunction | None = None) -> VerificationReport:
    """Count every sign-weighted member with sign functions that share one
    base part, then search for signs making the signed sum vanish."""
    base = fam.members[0].base
    if sf_base is None:
        sf_base = construct_sign_function(base)
    counts = []
    for m in fam.members:
        sf = default_sign_function(m, sf_base)
        counts.append(count_matchings(sign_weight(m, sf)))
    eps = find_zero_sum_signs(counts)
    witness = {
        "leaf": fam.moving_leaf,
        "anchor": fam.anchor_class,
        "members": len(fam.members),
        "counts": [str(c) for c in counts],
        "same_face": list(fam.same_face),
    }
    claim = "signed sum of sign-weighted family counts vanishes"
    if eps is None:
        return VerificationReport(
            "zero-sum", claim, FAIL, witness,
            reproducer=_reproducer(fam.members[0], **{"leaf.txt": fam.moving_leaf + "\n"}),
            message="no sign vector found",
        )
    witness["epsilon"] = list(eps)
    return VerificationReport("zero-sum", claim, PASS, witness)


def verify_divisibility(cg: CompoundGraph, sf: SignFunction | None = None) -> VerificationReport:
    if sf is None:
        sf = default_sign_function(cg)
    h_count = count_matchings(sign_weight(cg, sf))
    g_count = count_matchings(cg.base)
    claim = "base count divides sign-weighted compound count"
    witness = {"compound_count": str(h_count), "base_count": str(g_count)}
    if g_count.is_zero():
        if h_count.is_zero():
            return VerificationReport("divisibility", claim, VACUOUS, witness,
                                      message="base has no matchings; compound count is 0")
        return VerificationReport("divisibility", claim, FAIL, witness,
                                  reproducer=_reproducer(cg, **{"signs.txt": format_signs(sf)}),
                                  message="base count 0 but compound count nonzero")
    try:
        q = exact_div(h_count, g_count)
    except NotDivisible:
        return VerificationReport("divisibility", claim, FAIL, witness,
                                  reproducer=_reproducer(cg, **{"signs.txt": format_signs(sf)}),
                                  message="not divisible")
    witness["quotient"] = str(q)
    return VerificationReport("divisibility", claim, PASS, witness)


# ----------------------------------------------------------------- file I/O


def format_cpdmap(cg: CompoundGraph) -> str:
    lines = ["cpdmap v1"]
    if not cg.strict:
        lines.append("mode relaxed")
    for h in sorted(cg.copy_of):
        s, v = cg.copy_of[h]
        lines.append(f"vmap {h} {s} {v}")
    for h in sorted(cg.edge_of):
        s, e = cg.edge_of[h]
        lines.append(f"emap {h} {s} {e}")
    lines += [f"stem {x}" for x in sorted(cg.stems)]
    lines += [f"leaf {x}" for x in sorted(cg.leaves)]
    return "\n".join(lines) + "\n"


def parse_cpdmap(text: str, source: str = "<string>"):
    copy_of, edge_of, stems, leaves = {}, {}, [], []
    strict = True
    header = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if not header:
            if parts != ["cpdmap", "v1"]:
                raise ScriptError(lineno, "expected header 'cpdmap v1'", source)
            header = True
            continue
        kind, args = parts[0], parts[1:]
        if kind == "vmap" and len(args) == 3:
            copy_of[args[0]] = (args[1], args[2])
        elif kind == "emap" and len(args) == 3:
            edge_of[args[0]] = (args[1], args[2])
        elif kind == "stem" and len(args) == 1:
            stems.append(args[0])
        elif kind == "leaf" and len(args) == 1:
            leaves.append(args[0])
        elif kind == "mode" and args in (["strict"], ["relaxed"]):
            strict = args[0] == "strict"
        else:
            raise ScriptError(lineno, f"bad record {line!r}", source)
    if not header:
        raise ScriptError(1, "missing 'cpdmap v1' header", source)
    return copy_of, edge_of or None, stems, leaves, strict


def load_compound(
    pbg_path: str | Path, map_path: str | Path, base_path: str | Path, super_path: str | Path
) -> CompoundGraph:
    g = read_pbg(pbg_path)
    copy_of, edge_of, stems, leaves, strict = parse_cpdmap(
        Path(map_path).read_text(encoding="utf-8"), str(map_path)
    )
    return compound_from_parts(
        g, read_pbg(base_path), read_pbg(super_path), copy_of, stems, leaves, edge_of, strict
    )


def parse_cpd(text: str, source: str = "<string>", root: Path | None = None):
    """Parse a ``cpd v1`` script; returns (base, supergraph, placement).

    ::

        cpd v1
        base <file.pbg>
        super <file.pbg>
        stem <super-edge-id> <base-vertex-id> <auto|k>
        leaf <super-vertex-id> <base-vertex-id> <auto|k>
        outer <super-vertex-id> <k>          # optional

    ``k`` picks the k-th (from 0) occurrence of the vertex on the base outer
    walk. Paths are relative to the script's directory.
    """
    root = root or Path(".")
    base = sup = None
    placement = Placement()
    header = False

    def spec(tok: str, lineno: int) -> int | None:
        if tok == "auto":
            return None
        try:
            k = int(tok)
        except ValueError:
            raise ScriptError(lineno, f"face spec must be 'auto' or an integer, got {tok!r}", source) from None
        if k < 0:
            raise ScriptError(lineno, "face spec must be nonnegative", source)
        return k

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if not header:
            if parts != ["cpd", "v1"]:
                raise ScriptError(lineno, "expected header 'cpd v1'", source)
            header = True
            continue
        kind, args = parts[0], parts[1:]
        if kind in ("base", "super") and len(args) == 1:
            g = read_pbg(root / args[0])
            if kind == "base":
                base = g
            else:
                sup = g
        elif kind == "stem" and len(args) == 3:
            placement.stems.append(StemPlacement(args[0], args[1], spec(args[2], lineno)))
        elif kind == "leaf" and len(args) == 3:
            placement.leaves.append(LeafPlacement(args[0], args[1], spec(args[2], lineno)))
        elif kind == "outer" and len(args) == 2:
            placement.outer = (args[0], spec(args[1], lineno) or 0)
        else:
            raise ScriptError(lineno, f"bad record {line!r}", source)
    if not header:
        raise ScriptError(1, "missing 'cpd v1' header", source)
    if base is None or sup is None:
        raise ScriptError(lineno if text else 1, "script needs both 'base' and 'super' lines", source)
    return base, sup, placement


def read_cpd(path: str | Path) -> CompoundGraph:
    path = Path(path)
    base, sup, placement = parse_cpd(path.read_text(encoding="utf-8"), str(path), path.parent)
    return build_compound(base, sup, placement)


__all__ = [
    "CompoundGraph", "Family", "Placement", "StemPlacement", "LeafPlacement",
    "build_compound", "compound_from_parts", "validate_compound", "compose_sign_function",
    "restrict_sign_function", "default_sign_function", "sign_weight", "check_odd_leaves",
    "family", "sibling", "move_leaf", "verify_zero_sum", "verify_divisibility",
    "format_cpdmap", "parse_cpdmap", "load_compound", "parse_cpd", "read_cpd",
]
