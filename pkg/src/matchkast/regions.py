"""Rectangles, Aztec 3-pillows, the rectangle decomposition into compound
graphs, and the divisibility scans built on them."""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator

import mpmath

from .compound import CompoundGraph, compound_from_parts
from .graph import BLACK, WHITE, PlanarBipartiteGraph, build_graph
from .kasteleyn import count_matchings
from .pbg import format_pbg
from .report import FAIL, PASS, VerificationReport
from .ring import NotDivisible, Poly, exact_div

Cell = tuple[int, int]


class PrecisionInsufficient(ArithmeticError):
    pass


class DivisibilityPreconditionViolated(ValueError):
    pass


# ------------------------------------------------------------ lattice graphs


def vertex_id(i: int, j: int) -> str:
    return f"{i}_{j}".replace("-", "m")


def lattice_graph(
    cells: Iterable[Cell],
    colors: dict[Cell, str],
    edges: Iterable[tuple[Cell, Cell]],
    weights: dict[tuple[Cell, Cell], Poly | int | str] | None = None,
) -> PlanarBipartiteGraph:
    """Embed a subgraph of the square lattice drawn with ``(row, col)``
    coordinates, rows growing downward.

    Edges are unit steps given with the smaller cell first. Ids are
    ``h<i>_<j>`` for the step right of (i, j) and ``v<i>_<j>`` for the step
    below it.
    """
    cells = list(cells)
    weights = weights or {}
    # clockwise starting from "up": up, right, down, left
    slots: dict[Cell, list[str | None]] = {c: [None] * 4 for c in cells}
    elist = []
    for a, b in edges:
        if b[0] == a[0]:
            eid = "h" + vertex_id(*a)
            slots[a][1], slots[b][3] = eid, eid
        else:
            eid = "v" + vertex_id(*a)
            slots[a][2], slots[b][0] = eid, eid
        elist.append((eid, vertex_id(*a), vertex_id(*b), weights.get((a, b), 1)))
    rot = {vertex_id(*c): [e for e in s if e] for c, s in slots.items()}
    rot = {v: r for v, r in rot.items() if r}
    # Outer dart per component: leave its top-left cell downward if possible.
    adj: dict[Cell, list[Cell]] = {c: [] for c in cells}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen: set[Cell] = set()
    outer = []
    for c in sorted(cells):
        if c in seen:
            continue
        comp, stack = [c], [c]
        seen.add(c)
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.append(y)
                    stack.append(y)
        top = min(comp)
        s = slots[top]
        e = s[2] or s[1]
        if e:
            outer.append((e, vertex_id(*top)))
    verts = [(vertex_id(*c), colors[c]) for c in cells]
    return build_graph(verts, elist, rot, outer)


def _checker(i: int, j: int, origin_black: bool = True) -> str:
    return BLACK if ((i + j) % 2 == 0) == origin_black else WHITE


# ---------------------------------------------------------------- rectangles


@dataclass(frozen=True)
class RectangleSpec:
    m: int
    n: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError(f"rectangle needs m, n >= 1, got {self.m}x{self.n}")


def rectangle(m: int, n: int, variables: bool = False, origin_black: bool = True) -> PlanarBipartiteGraph:
    """R(m, n): m rows, n columns, vertex ``i_j`` at row i, column j, with
    (1, 1) in the upper left corner and colored black by default."""
    RectangleSpec(m, n)
    cells = [(i, j) for i in range(1, m + 1) for j in range(1, n + 1)]
    edges = [((i, j), (i, j + 1)) for i, j in cells if j < n]
    edges += [((i, j), (i + 1, j)) for i, j in cells if i < m]
    colors = {c: _checker(*c, origin_black) for c in cells}
    g = lattice_graph(cells, colors, sorted(edges))
    return g.relabel_edges_as_variables("") if variables else g


def default_precision() -> int:
    return int(os.environ.get("MATCHKAST_PRECISION", "128"))


def product_formula_count(m: int, n: int, precision: int | None = None, max_precision: int = 1024) -> int:
    """Kasteleyn's closed product for R(m, n), evaluated in floating point and
    rounded. The precision doubles until the rounding residual is below 1/4."""
    if m < 1 or n < 1:
        raise ValueError("m, n >= 1")
    if (m * n) % 2:
        return 0
    bits = precision or default_precision()
    while True:
        with mpmath.workprec(bits):
            total = mpmath.mpf(1)
            for j in range(1, m + 1):
                cj = 4 * mpmath.cos(mpmath.pi * j / (m + 1)) ** 2
                for k in range(1, n + 1):
                    total *= mpmath.root(cj + 4 * mpmath.cos(mpmath.pi * k / (n + 1)) ** 2, 4)
            nearest = int(mpmath.nint(total))
            residual = abs(total - nearest)
            # trust the rounding only while the working precision also
            # resolves the units digit with room to spare
            if residual <= 0.25 and abs(total) * mpmath.ldexp(1, 40 - bits) < 0.25:
                return nearest
        if bits >= max_precision:
            raise PrecisionInsufficient(
                f"R({m},{n}): residual {mpmath.nstr(residual, 5)} at {bits} bits"
            )
        bits *= 2


# ------------------------------------------------------------- decomposition


def _admissible(A: int, B: int, a: int, b: int) -> bool:
    return (A + 1) % (a + 1) == 0 and (B + 1) % (b + 1) == 0


@dataclass(frozen=True)
class Decomposition:
    """One term of the decomposition: the root dominoes, the direction each
    remaining white root is matched in, and the resulting compound graph."""

    dominoes: tuple[tuple[Cell, Cell], ...]
    directions: tuple[tuple[Cell, Cell], ...]
    compound: CompoundGraph


class _Layout:
    def __init__(self, A: int, B: int, a: int, b: int, origin_black: bool = True):
        self.A, self.B, self.a, self.b = A, B, a, b
        self.k, self.l = (A + 1) // (a + 1), (B + 1) // (b + 1)
        cells = [(i, j) for i in range(1, A + 1) for j in range(1, B + 1)]
        self.cells = cells
        self.is_root = {c: c[0] % (a + 1) == 0 or c[1] % (b + 1) == 0 for c in cells}
        self.roots = [c for c in cells if self.is_root[c]]
        self.crossings = {c for c in self.roots if c[0] % (a + 1) == 0 and c[1] % (b + 1) == 0}
        self.colors = {c: _checker(*c, origin_black) for c in cells}
        # copy (I, J) is reflected in rows when I is odd, columns when J is odd,
        # so that vertices facing each other across a root line are equivalent
        self.copy_of: dict[Cell, tuple[str, str]] = {}
        for I, J in product(range(self.k), range(self.l)):
            for p, q in product(range(1, a + 1), range(1, b + 1)):
                r = I * (a + 1) + (p if I % 2 == 0 else a + 1 - p)
                c = J * (b + 1) + (q if J % 2 == 0 else b + 1 - q)
                self.copy_of[r, c] = (vertex_id(I + 1, J + 1), vertex_id(p, q))
        self.base = rectangle(a, b, origin_black=origin_black)
        self.supergraph = rectangle(self.k, self.l)

    def neighbors(self, c: Cell) -> list[Cell]:
        i, j = c
        out = [(i - 1, j), (i, j + 1), (i + 1, j), (i, j - 1)]
        return [x for x in out if 1 <= x[0] <= self.A and 1 <= x[1] <= self.B]

    def root_domino_sets(self) -> Iterator[tuple[tuple[Cell, Cell], ...]]:
        """Disjoint root dominoes covering every crossing, in a fixed order."""
        roots = self.roots
        chosen: list[tuple[Cell, Cell]] = []
        used: set[Cell] = set()

        def rec(idx: int) -> Iterator[tuple[tuple[Cell, Cell], ...]]:
            while idx < len(roots) and roots[idx] in used:
                idx += 1
            if idx == len(roots):
                yield tuple(chosen)
                return
            c = roots[idx]
            if c not in self.crossings:
                yield from rec(idx + 1)
            for d in self.neighbors(c):
                if d > c and self.is_root[d] and d not in used:
                    used.update((c, d))
                    chosen.append((c, d))
                    yield from rec(idx + 1)
                    chosen.pop()
                    used.difference_update((c, d))
            # c stays unused only when it is not a crossing (handled above)

        yield from rec(0)

    def compound(self, dominoes, directions) -> CompoundGraph:
        gone = {c for dom in dominoes for c in dom}
        keep_dir = dict(directions)
        cells = [c for c in self.cells if c not in gone]
        edges = []
        for c in cells:
            for d in (c[0], c[1] + 1), (c[0] + 1, c[1]):
                if d in gone or d[0] > self.A or d[1] > self.B:
                    continue
                if self.is_root[c] and self.is_root[d]:
                    continue
                for x, y in ((c, d), (d, c)):
                    if self.is_root[x] and self.colors[x] == WHITE and keep_dir[x] != y:
                        break
                else:
                    edges.append((c, d))
        g = lattice_graph(cells, {c: self.colors[c] for c in cells}, edges)
        free = [c for c in self.roots if c not in gone]
        stems = [vertex_id(*c) for c in free if self.colors[c] == BLACK]
        leaves = [vertex_id(*c) for c in free if self.colors[c] == WHITE]
        copy_of = {vertex_id(*c): sv for c, sv in self.copy_of.items()}
        return compound_from_parts(g, self.base, self.supergraph, copy_of, stems, leaves)


def decompose_rectangle(A: int, B: int, a: int, b: int) -> Iterator[Decomposition]:
    """Every (S, D) term of the root decomposition of R(A, B) over R(a, b).

    S ranges over sets of disjoint root dominoes that cover every crossing of
    root lines (any other S leaves a root with no neighbors); D picks, for
    each white root outside S, the copy vertex it is matched to.
    """
    if a < 1 or b < 1 or not _admissible(A, B, a, b):
        raise DivisibilityPreconditionViolated(
            f"need a+1 | A+1 and b+1 | B+1, got A={A}, B={B}, a={a}, b={b}"
        )
    if (A * B) % 2:
        raise DivisibilityPreconditionViolated(f"R({A},{B}) has odd area")
    lay = _Layout(A, B, a, b)
    for dominoes in lay.root_domino_sets():
        gone = {c for dom in dominoes for c in dom}
        whites = [c for c in lay.roots if c not in gone and lay.colors[c] == WHITE]
        options = [[d for d in lay.neighbors(c) if not lay.is_root[d]] for c in whites]
        for choice in product(*options):
            directions = tuple(zip(whites, choice))
            yield Decomposition(dominoes, directions, lay.compound(dominoes, directions))


def decomposition_term(
    A: int, B: int, a: int, b: int,
    dominoes: Iterable[tuple[Cell, Cell]],
    directions: Iterable[tuple[Cell, Cell]],
    origin_black: bool = True,
) -> Decomposition:
    """A single (S, D) term, for instances given by hand."""
    if not _admissible(A, B, a, b):
        raise DivisibilityPreconditionViolated(f"R({a},{b}) does not tile R({A},{B}) with roots")
    lay = _Layout(A, B, a, b, origin_black)
    dominoes = tuple(tuple(sorted(d)) for d in dominoes)
    directions = tuple(directions)
    return Decomposition(dominoes, directions, lay.compound(dominoes, directions))


# --------------------------------------------------------------------- scans


@dataclass(frozen=True)
class ScanRow:
    params: tuple[int, ...]
    small: int
    large: int
    quotient: int | None
    status: str
    note: str = ""

    def tsv_fields(self) -> list[str]:
        q = "" if self.quotient is None else str(self.quotient)
        return [",".join(map(str, self.params)), str(self.small), str(self.large), q, self.status, self.note]


@dataclass
class ScanReport:
    claim: str
    rows: list[ScanRow]
    reproducers: dict[tuple[int, ...], dict[str, str]]

    @property
    def ok(self) -> bool:
        return all(r.status != FAIL for r in self.rows)

    def __bool__(self):
        return self.ok

    def reports(self) -> list[VerificationReport]:
        out = []
        for r in self.rows:
            out.append(VerificationReport(
                subject=",".join(map(str, r.params)),
                claim=self.claim,
                status=r.status,
                witness={"small": r.small, "large": r.large, "quotient": r.quotient, "note": r.note},
                reproducer=self.reproducers.get(r.params),
                message=r.note,
            ))
        return out


def _int(p: Poly) -> int:
    return p.constant_value()


def _divides(small: int, large: int) -> tuple[str, int | None]:
    try:
        q = exact_div(Poly.const(large), Poly.const(small))
    except NotDivisible:
        return FAIL, None
    except ZeroDivisionError:
        # 0 | x only for x = 0
        return (PASS, 0) if large == 0 else (FAIL, None)
    return PASS, _int(q)


def rect_divisibility_scan(a: int, b: int, max_A: int, max_B: int) -> ScanReport:
    """#R(a, b) | #R(A, B) for every admissible A <= max_A, B <= max_B. Counts
    come from the determinant and are cross-checked with the product formula."""
    small = _int(count_matchings(rectangle(a, b)))
    rows, repro = [], {}
    for A in range(a, max_A + 1):
        for B in range(b, max_B + 1):
            if not _admissible(A, B, a, b):
                continue
            g = rectangle(A, B)
            large = _int(count_matchings(g))
            status, q = _divides(small, large)
            note = ""
            formula = product_formula_count(A, B)
            if formula != large:
                status, note = FAIL, f"product formula gives {formula}"
            elif small == 0 and large == 0:
                note = "both counts zero"
            if status == FAIL:
                repro[(a, b, A, B)] = {"small.pbg": format_pbg(rectangle(a, b)), "large.pbg": format_pbg(g)}
            rows.append(ScanRow((a, b, A, B), small, large, q, status, note))
    return ScanReport("#R(a,b) divides #R(A,B) when a+1 | A+1 and b+1 | B+1", rows, repro)


# ---------------------------------------------------------------- pillows


@dataclass(frozen=True)
class PillowSpec:
    order: int

    def __post_init__(self):
        if self.order < 1:
            raise ValueError(f"pillow order must be >= 1, got {self.order}")


def pillow_cells(order: int) -> dict[tuple[int, int], str]:
    """Lattice points (x, y) of AP_order with y pointing up, mapped to colors.

    The graph spans 2*order columns x = 0 .. 2*order-1. The top boundary
    climbs one unit every three columns from the left and falls one unit per
    column at the right; the bottom boundary is the top one rotated by a half
    turn about the center.
    """
    PillowSpec(order)
    last = 2 * order - 1

    def top(x: int) -> int:
        return 1 + min(x // 3, last - x)

    out = {}
    for x in range(last + 1):
        for y in range(1 - top(last - x), top(x) + 1):
            out[x, y] = BLACK if (x + y) % 2 else WHITE
    return out


def aztec_pillow(order: int) -> PlanarBipartiteGraph:
    pts = pillow_cells(order)
    # lattice_graph works in (row, col) with rows growing downward
    cells = {(-y, x): c for (x, y), c in pts.items()}
    edges = []
    for r, c in cells:
        for d in (r, c + 1), (r + 1, c):
            if d in cells:
                edges.append(((r, c), d))
    g = lattice_graph(sorted(cells), cells, sorted(edges))
    if not g.is_balanced():
        raise AssertionError(f"pillow of order {order} is unbalanced")
    return g


def pillow_pairs(max_order: int) -> list[tuple[int, int]]:
    return [
        (m, n)
        for m in range(1, max_order + 1)
        for n in range(m + 1, max_order + 1)
        if (n + 3) % (m + 3) == 0
    ]


def pillow_divisibility_scan(max_order: int) -> ScanReport:
    """#AP_m | #AP_n for m < n <= max_order with m+3 | n+3."""
    counts: dict[int, int] = {}

    def count(k: int) -> int:
        if k not in counts:
            counts[k] = _int(count_matchings(aztec_pillow(k)))
        return counts[k]

    rows, repro = [], {}
    for m, n in pillow_pairs(max_order):
        status, q = _divides(count(m), count(n))
        if status == FAIL:
            repro[(m, n)] = {"small.pbg": format_pbg(aztec_pillow(m)), "large.pbg": format_pbg(aztec_pillow(n))}
        rows.append(ScanRow((m, n), count(m), count(n), q, status))
    return ScanReport("#AP_m divides #AP_n when m+3 | n+3", rows, repro)
