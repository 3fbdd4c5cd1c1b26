"""Sign functions and the Kasteleyn-Percus matching count."""

from __future__ import annotations

from collections import deque
from typing import Mapping

from .graph import (
    FaceWalk,
    PlanarBipartiteGraph,
    enclosed_vertices,
    face_union_cycles,
    simple_cycles,
)
from .pbg import format_pbg
from .report import FAIL, PASS, VerificationReport
from .ring import Poly, RingMatrix, determinant

SignFunction = Mapping[str, int]


class OuterFaceGiven(ValueError):
    pass


class UnbalancedColors(ValueError):
    pass


def face_sign_product(
    g: PlanarBipartiteGraph, sf: SignFunction, face: FaceWalk
) -> tuple[int, bool]:
    """Product of ``sf`` over the face's edges counted with multiplicity, and
    whether the face is positive: a face with 2m edges needs ``(-1)**(m-1)``."""
    if face.is_outer:
        raise OuterFaceGiven("the outer face has no positivity condition")
    prod = 1
    for e, _ in face.darts:
        prod *= sf[e]
    m = len(face.darts) // 2
    return prod, prod == (-1) ** (m - 1)


def cycle_sign_identity(g: PlanarBipartiteGraph, sf: SignFunction, cycle) -> tuple[int, int]:
    """(product over the cycle, value demanded by the enclosure identity)."""
    prod = 1
    for e, _ in cycle:
        prod *= sf[e]
    inside = enclosed_vertices(g, cycle)
    return prod, (-1) ** (len(cycle) // 2 + inside - 1)


def verify_sign_function(
    g: PlanarBipartiteGraph, sf: SignFunction, cycle_budget: int | None = 0
) -> VerificationReport:
    """Check every inner face is positive, then test the enclosure identity on
    simple cycles: all of them when ``cycle_budget`` is None, otherwise up to
    ``cycle_budget`` cycles bounding unions of inner faces."""

    def fail(msg, **wit):
        return VerificationReport(
            subject="sign-function",
            claim="sign function: faces positive, cycle identity",
            status=FAIL,
            witness=wit,
            reproducer={"graph.pbg": format_pbg(g), "signs.txt": format_signs(sf)},
            message=msg,
        )

    if set(sf) != set(g.edges):
        return fail("domain differs from edge set",
                    missing=sorted(set(g.edges) - set(sf)), extra=sorted(set(sf) - set(g.edges)))
    bad = sorted(e for e, s in sf.items() if s not in (1, -1))
    if bad:
        return fail("values must be +1 or -1", edges=bad)
    for face in g.inner_faces():
        prod, ok = face_sign_product(g, sf, face)
        if not ok:
            return fail("negative face", face=[list(d) for d in face.darts], product=prod)
    checked = 0
    if cycle_budget is None:
        cycles = simple_cycles(g)
    elif cycle_budget > 0:
        cycles = face_union_cycles(g, cycle_budget)
    else:
        cycles = iter(())
    for cyc in cycles:
        prod, want = cycle_sign_identity(g, sf, cyc)
        checked += 1
        if prod != want:
            return fail("cycle identity violated", cycle=[list(d) for d in cyc],
                        product=prod, expected=want)
    return VerificationReport(
        subject="sign-function",
        claim="sign function: faces positive, cycle identity",
        status=PASS,
        witness={"faces": len(g.inner_faces()), "cycles": checked},
    )


def construct_sign_function(g: PlanarBipartiteGraph) -> dict[str, int]:
    """A sign function built face by face from the outer face inward.

    The faces of each component are put in a BFS tree of the dual rooted at
    the outer face. Every edge starts at +1; faces are then fixed from the
    leaves of that tree toward the root by flipping the dual-tree edge to the
    parent face. That edge is touched by no face processed later except the
    parent, so earlier faces stay positive.
    """
    sf = {e: 1 for e in g.edges}
    roots = {g.face_of[d] for d in g.outer_darts}
    parent_edge: dict[int, str] = {}
    order: list[int] = []
    seen = set(roots)
    queue = deque(sorted(roots))
    while queue:
        f = queue.popleft()
        order.append(f)
        for d in g.faces[f].darts:
            f2 = g.face_of[g.reverse(d)]
            if f2 not in seen:
                seen.add(f2)
                parent_edge[f2] = d[0]
                queue.append(f2)
    for f in reversed(order):
        if f in roots:
            continue
        _, ok = face_sign_product(g, sf, g.faces[f])
        if not ok:
            e = parent_edge[f]
            sf[e] = -sf[e]
    return sf


def kasteleyn_matrix(g: PlanarBipartiteGraph, sf: SignFunction) -> RingMatrix:
    """Rows are black vertices, columns white vertices, both sorted by id.
    Parallel edges add up in one entry."""
    if not g.is_balanced():
        raise UnbalancedColors(f"{len(g.black)} black vs {len(g.white)} white vertices")
    entries: dict[tuple[str, str], Poly] = {}
    for e, ed in g.edges.items():
        b, w = (ed.u, ed.v) if g.colors[ed.u] == "b" else (ed.v, ed.u)
        term = ed.weight * sf[e]
        entries[b, w] = entries.get((b, w), Poly.const(0)) + term
    return RingMatrix(g.black, g.white, {k: v for k, v in entries.items() if v})


def find_perfect_matching(g: PlanarBipartiteGraph) -> dict[str, str] | None:
    """Black vertex -> edge id for one perfect matching, or None."""
    if not g.is_balanced():
        return None
    match_w: dict[str, str] = {}
    match_b: dict[str, str] = {}

    def augment(b: str, seen: set[str]) -> bool:
        for e in g.incident(b):
            w = g.other(e, b)
            if w in seen:
                continue
            seen.add(w)
            if w not in match_w or augment(g.other(match_w[w], w), seen):
                match_w[w] = e
                match_b[b] = e
                return True
        return False

    for b in sorted(g.black, key=g.degree):
        if not augment(b, set()):
            return None
    return match_b


def _perm_sign(perm: list[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def count_matchings(g: PlanarBipartiteGraph, sf: SignFunction | None = None) -> Poly:
    """Weighted number of perfect matchings via det K.

    The determinant is only defined up to sign; the sign is fixed by one
    perfect matching found by augmenting paths, whose term in the Leibniz
    expansion carries the same sign as every other matching. The result is
    therefore the exact weighted count even when some weights are negative.
    """
    if not g.is_balanced():
        return Poly.const(0)
    anchor = find_perfect_matching(g)
    if anchor is None:
        return Poly.const(0)
    if sf is None:
        sf = construct_sign_function(g)
    k = kasteleyn_matrix(g, sf)
    det = determinant(k)
    col = {w: j for j, w in enumerate(k.cols)}
    perm = [col[g.other(anchor[b], b)] for b in k.rows]
    sign = _perm_sign(perm)
    for e in anchor.values():
        sign *= sf[e]
    return det * sign


def format_signs(sf: SignFunction) -> str:
    return "".join(f"{e} {'+1' if sf[e] > 0 else '-1'}\n" for e in sorted(sf))


def parse_signs(text: str) -> dict[str, int]:
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2 or parts[1] not in ("+1", "-1", "1"):
            raise ValueError(f"line {lineno}: expected '<edge-id> <+1|-1>'")
        out[parts[0]] = -1 if parts[1] == "-1" else 1
    return out
