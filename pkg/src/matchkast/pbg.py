"""Reader and writer for the ``pbg v1`` text format.

::

    pbg v1
    vertex <id> <b|w>
    edge <id> <u-id> <v-id> <weight>
    rot <vertex-id> <edge-id> ...        # clockwise
    outer <edge-id> <tail-vertex-id>

Weights are single tokens: a decimal integer, a variable name, or any ring
element written without spaces (``-t``, ``2*x^2+1``). ``outer`` may repeat,
once per connected component; the first one is the designated outer dart.
"""

from __future__ import annotations

from pathlib import Path

from .graph import GraphError, PlanarBipartiteGraph, build_graph, canonical_rotation
from .ring import RingParseError, format_poly, parse_poly


class PbgParseError(ValueError):
    def __init__(self, lineno: int, msg: str, source: str = "<string>"):
        super().__init__(f"{source}:{lineno}: {msg}")
        self.lineno = lineno


def parse_pbg(text: str, source: str = "<string>") -> PlanarBipartiteGraph:
    vertices = []
    edges = []
    rotation: dict[str, list[str]] = {}
    outer = []
    header_seen = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if not header_seen:
            if parts != ["pbg", "v1"]:
                raise PbgParseError(lineno, f"expected header 'pbg v1', got {line!r}", source)
            header_seen = True
            continue
        kind, args = parts[0], parts[1:]
        if kind == "vertex":
            if len(args) != 2 or args[1] not in ("b", "w"):
                raise PbgParseError(lineno, "expected 'vertex <id> <b|w>'", source)
            vertices.append((args[0], args[1]))
        elif kind == "edge":
            if len(args) != 4:
                raise PbgParseError(lineno, "expected 'edge <id> <u> <v> <weight>'", source)
            try:
                w = parse_poly(args[3])
            except (RingParseError, ValueError) as exc:
                raise PbgParseError(lineno, f"bad weight: {exc}", source) from None
            edges.append((args[0], args[1], args[2], w))
        elif kind == "rot":
            if not args:
                raise PbgParseError(lineno, "expected 'rot <vertex> <edge>...'", source)
            if args[0] in rotation:
                raise PbgParseError(lineno, f"second rotation for {args[0]!r}", source)
            rotation[args[0]] = args[1:]
        elif kind == "outer":
            if len(args) != 2:
                raise PbgParseError(lineno, "expected 'outer <edge> <tail>'", source)
            outer.append((args[0], args[1]))
        else:
            raise PbgParseError(lineno, f"unknown record {kind!r}", source)
    if not header_seen:
        raise PbgParseError(1, "missing 'pbg v1' header", source)
    try:
        return build_graph(vertices, edges, rotation, outer)
    except GraphError as exc:
        raise type(exc)(f"{source}: {exc}") from None


def format_pbg(g: PlanarBipartiteGraph) -> str:
    lines = ["pbg v1"]
    for v in g.vertices:
        lines.append(f"vertex {v} {g.colors[v]}")
    for e in sorted(g.edges):
        ed = g.edges[e]
        lines.append(f"edge {e} {ed.u} {ed.v} {format_poly(ed.weight, compact=True)}")
    for v in g.vertices:
        rot = g.incident(v)
        if rot:
            lines.append("rot " + " ".join([v, *canonical_rotation(rot)]))
    for d in g.outer_darts:
        e, t = g.faces[g.face_of[d]].darts[0]
        lines.append(f"outer {e} {t}")
    return "\n".join(lines) + "\n"


def read_pbg(path: str | Path) -> PlanarBipartiteGraph:
    path = Path(path)
    return parse_pbg(path.read_text(encoding="utf-8"), source=str(path))


def write_pbg(g: PlanarBipartiteGraph, path: str | Path) -> None:
    Path(path).write_text(format_pbg(g), encoding="utf-8")
