"""Planar bipartite graphs as combinatorial maps.

A graph carries, for every vertex, the clockwise cyclic order of its incident
edges (the rotation). A dart is a pair ``(edge_id, tail_vertex)``.

Face tracing convention, used everywhere in the package: a walk that arrives
at ``v`` along edge ``e`` leaves along the edge that precedes ``e`` in the
clockwise rotation at ``v`` (its counterclockwise successor). With this rule
inner faces are traversed clockwise and the outer face counterclockwise.

Each connected component that has edges owns exactly one outer dart; the first
one stored is the designated outer dart of the whole graph. Components are
assumed to sit side by side in the outer face (no component is drawn inside a
bounded face of another).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

from .ring import Poly

BLACK, WHITE = "b", "w"
Dart = tuple[str, str]


class GraphError(ValueError):
    pass


class NotBipartite(GraphError):
    pass


class BadRotation(GraphError):
    pass


class NotGenusZero(GraphError):
    pass


class DanglingReference(GraphError):
    pass


class NotASimpleCycle(GraphError):
    pass


@dataclass(frozen=True)
class Edge:
    u: str
    v: str
    weight: Poly

    def other(self, x: str) -> str:
        if x == self.u:
            return self.v
        if x == self.v:
            return self.u
        raise KeyError(x)


@dataclass(frozen=True)
class FaceWalk:
    darts: tuple[Dart, ...]
    is_outer: bool

    def __len__(self):
        return len(self.darts)

    def edges(self) -> list[str]:
        """Edge ids with multiplicity."""
        return [e for e, _ in self.darts]

    def vertices(self) -> set[str]:
        return {t for _, t in self.darts}


@dataclass(frozen=True, eq=False)
class PlanarBipartiteGraph:
    colors: Mapping[str, str]
    edges: Mapping[str, Edge]
    rotation: Mapping[str, tuple[str, ...]]
    outer_darts: tuple[Dart, ...]

    # structure

    @cached_property
    def vertices(self) -> tuple[str, ...]:
        return tuple(sorted(self.colors))

    @cached_property
    def black(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if self.colors[v] == BLACK)

    @cached_property
    def white(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if self.colors[v] == WHITE)

    @property
    def outer_dart(self) -> Dart | None:
        return self.outer_darts[0] if self.outer_darts else None

    def is_balanced(self) -> bool:
        return len(self.black) == len(self.white)

    def degree(self, v: str) -> int:
        return len(self.rotation.get(v, ()))

    def incident(self, v: str) -> tuple[str, ...]:
        return self.rotation.get(v, ())

    def other(self, e: str, v: str) -> str:
        return self.edges[e].other(v)

    def neighbors(self, v: str) -> list[str]:
        return [self.edges[e].other(v) for e in self.incident(v)]

    def head(self, d: Dart) -> str:
        return self.edges[d[0]].other(d[1])

    def reverse(self, d: Dart) -> Dart:
        return (d[0], self.head(d))

    @cached_property
    def _rot_index(self) -> dict[str, dict[str, int]]:
        return {v: {e: i for i, e in enumerate(rot)} for v, rot in self.rotation.items()}

    def next_dart(self, d: Dart) -> Dart:
        e, _ = d
        v = self.head(d)
        rot = self.rotation[v]
        return (rot[self._rot_index[v][e] - 1], v)

    def darts(self) -> Iterator[Dart]:
        for e in sorted(self.edges):
            ed = self.edges[e]
            yield (e, ed.u)
            yield (e, ed.v)

    @cached_property
    def components(self) -> tuple[tuple[str, ...], ...]:
        seen: set[str] = set()
        comps = []
        for s in self.vertices:
            if s in seen:
                continue
            seen.add(s)
            queue = deque([s])
            comp = []
            while queue:
                x = queue.popleft()
                comp.append(x)
                for y in self.neighbors(x):
                    if y not in seen:
                        seen.add(y)
                        queue.append(y)
            comps.append(tuple(sorted(comp)))
        return tuple(comps)

    @cached_property
    def component_of(self) -> dict[str, int]:
        return {v: i for i, comp in enumerate(self.components) for v in comp}

    @cached_property
    def faces(self) -> tuple[FaceWalk, ...]:
        return tuple(_trace(self))

    @cached_property
    def face_of(self) -> dict[Dart, int]:
        return {d: i for i, f in enumerate(self.faces) for d in f.darts}

    def inner_faces(self) -> list[FaceWalk]:
        return [f for f in self.faces if not f.is_outer]

    def weight(self, e: str) -> Poly:
        return self.edges[e].weight

    # derived graphs

    def with_weights(self, weights: Mapping[str, Poly | int | str]) -> "PlanarBipartiteGraph":
        edges = dict(self.edges)
        for e, w in weights.items():
            old = edges[e]
            edges[e] = Edge(old.u, old.v, Poly.coerce(w))
        return PlanarBipartiteGraph(self.colors, edges, self.rotation, self.outer_darts)

    def relabel_edges_as_variables(self, prefix: str = "w_") -> "PlanarBipartiteGraph":
        """Give every edge its own variable weight ``prefix + edge_id``."""
        return self.with_weights({e: Poly.var(_var_name(prefix + e)) for e in self.edges})


def _var_name(s: str) -> str:
    out = "".join(ch if ch.isalnum() or ch == "_" else "_" for ch in s)
    return out if out[:1].isalpha() else "v" + out


def _trace(g: PlanarBipartiteGraph) -> list[FaceWalk]:
    outer = set(g.outer_darts)
    seen: set[Dart] = set()
    walks = []
    for d0 in g.darts():
        if d0 in seen:
            continue
        walk = []
        d = d0
        while d not in seen:
            seen.add(d)
            walk.append(d)
            d = g.next_dart(d)
        # d0 is the smallest dart of its walk since darts() is sorted.
        walks.append(FaceWalk(tuple(walk), any(x in outer for x in walk)))
    return walks


def trace_faces(g: PlanarBipartiteGraph) -> list[FaceWalk]:
    """All face walks, each starting at its smallest dart, sorted by that dart."""
    return list(g.faces)


def build_graph(
    vertices: Iterable[tuple[str, str]],
    edges: Iterable[tuple[str, str, str, Poly | int | str]],
    rotation: Mapping[str, Sequence[str]],
    outer: Dart | Sequence[Dart] | None = None,
) -> PlanarBipartiteGraph:
    """Validate a raw description and return an immutable graph.

    ``outer`` is one dart or a sequence of darts, at most one per component.
    Components without an outer dart get the face containing their smallest
    dart.
    """
    colors: dict[str, str] = {}
    for vid, col in vertices:
        if vid in colors:
            raise GraphError(f"duplicate vertex id {vid!r}")
        if col not in (BLACK, WHITE):
            raise GraphError(f"vertex {vid!r}: color must be 'b' or 'w', got {col!r}")
        colors[vid] = col
    emap: dict[str, Edge] = {}
    for eid, u, v, w in edges:
        if eid in emap:
            raise GraphError(f"duplicate edge id {eid!r}")
        for x in (u, v):
            if x not in colors:
                raise DanglingReference(f"edge {eid!r} references unknown vertex {x!r}")
        if colors[u] == colors[v]:
            raise NotBipartite(f"edge {eid!r} joins {u!r} and {v!r}, both colored {colors[u]!r}")
        emap[eid] = Edge(u, v, Poly.coerce(w))

    incident: dict[str, list[str]] = {v: [] for v in colors}
    for eid, ed in emap.items():
        incident[ed.u].append(eid)
        incident[ed.v].append(eid)
    rot: dict[str, tuple[str, ...]] = {}
    for v, seq in rotation.items():
        if v not in colors:
            raise DanglingReference(f"rotation given for unknown vertex {v!r}")
        for e in seq:
            if e not in emap:
                raise DanglingReference(f"rotation at {v!r} references unknown edge {e!r}")
        seq = tuple(seq)
        if len(set(seq)) != len(seq):
            raise BadRotation(f"rotation at {v!r} repeats an edge")
        if set(seq) != set(incident[v]):
            missing = set(incident[v]) - set(seq)
            extra = set(seq) - set(incident[v])
            raise BadRotation(
                f"rotation at {v!r} does not match incident edges"
                f" (missing {sorted(missing)}, not incident {sorted(extra)})"
            )
        if seq:
            rot[v] = seq
    for v, inc in incident.items():
        if inc and v not in rot:
            raise BadRotation(f"no rotation given for vertex {v!r}")

    if outer is None:
        outer_list: list[Dart] = []
    elif len(outer) == 2 and isinstance(outer[0], str):
        outer_list = [tuple(outer)]  # type: ignore[list-item]
    else:
        outer_list = [tuple(d) for d in outer]  # type: ignore[misc]
    for e, t in outer_list:
        if e not in emap:
            raise DanglingReference(f"outer dart references unknown edge {e!r}")
        if t not in (emap[e].u, emap[e].v):
            raise DanglingReference(f"outer dart tail {t!r} is not an endpoint of {e!r}")

    g = PlanarBipartiteGraph(colors, emap, rot, tuple(outer_list))
    comp_of = g.component_of
    chosen: dict[int, Dart] = {}
    for d in outer_list:
        c = comp_of[d[1]]
        if c in chosen:
            raise GraphError(f"two outer darts given for one component: {chosen[c]} and {d}")
        chosen[c] = d
    final = list(outer_list)
    for c, comp in enumerate(g.components):
        if c in chosen or not any(v in rot for v in comp):
            continue
        final.append(min(d for v in comp for d in ((e, v) for e in rot.get(v, ()))))
    if final != outer_list:
        g = PlanarBipartiteGraph(colors, emap, rot, tuple(final))

    walks_per_comp = [0] * len(g.components)
    for f in g.faces:
        walks_per_comp[comp_of[f.darts[0][1]]] += 1
    for c, comp in enumerate(g.components):
        ne = sum(len(rot.get(v, ())) for v in comp) // 2
        if ne == 0:
            continue
        chi = len(comp) - ne + walks_per_comp[c]
        if chi != 2:
            raise NotGenusZero(
                f"component containing {comp[0]!r}: V - E + F = {chi}, expected 2"
            )
    return g


def mirror(g: PlanarBipartiteGraph) -> PlanarBipartiteGraph:
    """Reflect the embedding: every rotation reversed, face walks reversed."""
    rot = {v: tuple(reversed(r)) for v, r in g.rotation.items()}
    outer = tuple(g.reverse(d) for d in g.outer_darts)
    return PlanarBipartiteGraph(g.colors, g.edges, rot, outer)


def same_graph(g: PlanarBipartiteGraph, h: PlanarBipartiteGraph) -> bool:
    """Structural equality: colors, edges, weights, cyclic rotations, outer faces."""
    if dict(g.colors) != dict(h.colors) or dict(g.edges) != dict(h.edges):
        return False
    for v in g.vertices:
        if _canon_cycle(g.incident(v)) != _canon_cycle(h.incident(v)):
            return False
    og = {frozenset(g.faces[g.face_of[d]].darts) for d in g.outer_darts}
    oh = {frozenset(h.faces[h.face_of[d]].darts) for d in h.outer_darts}
    return og == oh


def _canon_cycle(seq: Sequence[str]) -> tuple[str, ...]:
    if not seq:
        return ()
    i = seq.index(min(seq))
    return tuple(seq[i:]) + tuple(seq[:i])


def canonical_rotation(seq: Sequence[str]) -> tuple[str, ...]:
    return _canon_cycle(seq)


def cycle_vertices(g: PlanarBipartiteGraph, cycle: Sequence[Dart]) -> list[str]:
    """Check that ``cycle`` is a closed simple dart sequence; return its vertices."""
    if len(cycle) < 2:
        raise NotASimpleCycle("a cycle needs at least two darts")
    verts = []
    for i, d in enumerate(cycle):
        e, t = d
        if e not in g.edges or t not in (g.edges[e].u, g.edges[e].v):
            raise NotASimpleCycle(f"{d} is not a dart of the graph")
        nxt = cycle[(i + 1) % len(cycle)]
        if g.head(d) != nxt[1]:
            raise NotASimpleCycle(f"dart {d} does not end where {nxt} starts")
        verts.append(t)
    if len(set(verts)) != len(verts):
        raise NotASimpleCycle("cycle repeats a vertex")
    if len({e for e, _ in cycle}) != len(cycle):
        raise NotASimpleCycle("cycle repeats an edge")
    return verts


def enclosed_vertices(g: PlanarBipartiteGraph, cycle: Sequence[Dart]) -> int:
    """Number of vertices strictly inside a simple cycle.

    Faces inside are those the outer face cannot reach in the dual without
    crossing a cycle edge; the count then follows from Euler's formula on the
    closed disk bounded by the cycle.
    """
    verts = cycle_vertices(g, cycle)
    cyc_edges = {e for e, _ in cycle}
    comp = g.component_of[verts[0]]
    outer_face = next(
        g.face_of[d] for d in g.outer_darts if g.component_of[d[1]] == comp
    )
    reach = {outer_face}
    queue = deque([outer_face])
    while queue:
        f = queue.popleft()
        for d in g.faces[f].darts:
            if d[0] in cyc_edges:
                continue
            f2 = g.face_of[g.reverse(d)]
            if f2 not in reach:
                reach.add(f2)
                queue.append(f2)
    inside_faces = {
        g.face_of[d]
        for v in g.components[comp]
        for e in g.incident(v)
        for d in [(e, v)]
    } - reach
    inside_edges = {d[0] for f in inside_faces for d in g.faces[f].darts}
    return len(inside_edges) - len(inside_faces) + 1 - len(cycle)


def simple_cycles(g: PlanarBipartiteGraph, limit: int | None = None) -> Iterator[tuple[Dart, ...]]:
    """Every simple cycle once, as a dart sequence, in a deterministic order."""
    count = 0
    order = {v: i for i, v in enumerate(g.vertices)}
    for s in g.vertices:
        rank = order[s]
        path: list[Dart] = []
        on_path = {s}

        def extend(v: str) -> Iterator[tuple[Dart, ...]]:
            for e in sorted(g.incident(v)):
                w = g.other(e, v)
                if w == s:
                    if path and e != path[0][0] and path[0][0] < e:
                        yield tuple(path) + ((e, v),)
                    continue
                if order[w] < rank or w in on_path:
                    continue
                path.append((e, v))
                on_path.add(w)
                yield from extend(w)
                on_path.discard(w)
                path.pop()

        for cyc in extend(s):
            yield cyc
            count += 1
            if limit is not None and count >= limit:
                return


def face_union_cycles(g: PlanarBipartiteGraph, limit: int) -> Iterator[tuple[Dart, ...]]:
    """Up to ``limit`` distinct simple cycles that bound unions of inner faces.

    Starting from each inner face in turn, faces are added in dual BFS order;
    whenever the union's boundary is one simple cycle it is yielded. This
    reaches large cycles on graphs where exhaustive enumeration is hopeless.
    """
    seen: set[frozenset[Dart]] = set()
    inner = [i for i, f in enumerate(g.faces) if not f.is_outer]
    for start in inner:
        region: set[int] = set()
        queue = deque([start])
        queued = {start}
        while queue:
            f = queue.popleft()
            region.add(f)
            cyc = _region_boundary(g, region)
            if cyc is not None:
                key = frozenset(cyc)
                if key not in seen:
                    seen.add(key)
                    yield cyc
                    if len(seen) >= limit:
                        return
            for d in g.faces[f].darts:
                f2 = g.face_of[g.reverse(d)]
                if f2 not in queued and not g.faces[f2].is_outer:
                    queued.add(f2)
                    queue.append(f2)


def _region_boundary(g: PlanarBipartiteGraph, region: set[int]) -> tuple[Dart, ...] | None:
    darts = [
        d
        for f in region
        for d in g.faces[f].darts
        if g.face_of[g.reverse(d)] not in region
    ]
    if not darts:
        return None
    by_tail: dict[str, Dart] = {}
    for d in darts:
        if d[1] in by_tail:
            return None
        by_tail[d[1]] = d
    d0 = min(darts)
    cyc = [d0]
    d = by_tail.get(g.head(d0))
    while d is not None and d != d0:
        cyc.append(d)
        d = by_tail.get(g.head(d))
    if d is None or len(cyc) != len(darts) or len(cyc) < 2:
        return None
    if len({e for e, _ in cyc}) != len(cyc):
        return None
    return tuple(cyc)


def induced_subgraph(g: PlanarBipartiteGraph, keep: Iterable[str]) -> PlanarBipartiteGraph:
    """Delete every vertex not in ``keep``; rotations are restricted.

    Outer darts survive when possible; a component that lost all of its old
    outer darts falls back to the default choice of :func:`build_graph`.
    """
    keep = set(keep)
    edges = [
        (e, ed.u, ed.v, ed.weight)
        for e, ed in g.edges.items()
        if ed.u in keep and ed.v in keep
    ]
    kept_edges = {e for e, *_ in edges}
    rot = {v: [e for e in g.incident(v) if e in kept_edges] for v in keep}
    rot = {v: r for v, r in rot.items() if r}
    verts = [(v, g.colors[v]) for v in sorted(keep)]
    # A surviving dart of an old outer walk lies on the new outer walk.
    outer_faces = [g.faces[g.face_of[d]] for d in g.outer_darts]
    candidates = [d for f in outer_faces for d in f.darts if d[0] in kept_edges]
    probe = build_graph(verts, edges, rot, None)
    chosen: dict[int, Dart] = {}
    for d in candidates:
        c = probe.component_of[d[1]]
        chosen.setdefault(c, d)
    return build_graph(verts, edges, rot, list(chosen.values()))


def from_coordinates(
    points: Mapping[str, tuple[float, float]],
    colors: Mapping[str, str],
    edges: Iterable[tuple[str, str, str, Poly | int | str]],
    tangents: Mapping[tuple[str, str], tuple[float, float]] | None = None,
) -> PlanarBipartiteGraph:
    """Embed a drawing with y pointing up; straight edges unless a tangent
    point is supplied for ``(edge_id, end_vertex)`` (the first control point of
    a curve leaving that vertex).

    Each component's outer dart is taken from the walk with the largest signed
    area, which under the tracing convention is the counterclockwise one.
    """
    tangents = tangents or {}
    edges = list(edges)
    incident: dict[str, list[tuple[float, str]]] = {v: [] for v in colors}
    for eid, u, v, _ in edges:
        for a, b in ((u, v), (v, u)):
            tx, ty = tangents.get((eid, a), points[b])
            ax, ay = points[a]
            ang = math.atan2(ty - ay, tx - ax)
            incident[a].append((ang, eid))
    # Clockwise = decreasing angle.
    rot = {
        v: [e for _, e in sorted(lst, key=lambda t: (-t[0], t[1]))]
        for v, lst in incident.items()
        if lst
    }
    verts = [(v, colors[v]) for v in sorted(colors)]
    probe = build_graph(verts, edges, rot, None)
    best: dict[int, tuple[float, Dart]] = {}
    for f in probe.faces:
        area = 0.0
        for d in f.darts:
            x1, y1 = points[d[1]]
            x2, y2 = points[probe.head(d)]
            area += x1 * y2 - x2 * y1
        c = probe.component_of[f.darts[0][1]]
        key = (area, f.darts[0])
        if c not in best or area > best[c][0] + 1e-9:
            best[c] = key
    outer = [best[c][1] for c in sorted(best)]
    return build_graph(verts, edges, rot, outer)
