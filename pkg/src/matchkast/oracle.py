"""Brute-force perfect matching enumeration.

Deliberately naive: it shares nothing with the determinant code except the
graph type, so agreement between the two is meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .graph import PlanarBipartiteGraph
from .ring import Poly

DEFAULT_BUDGET = 10**7


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Matching:
    edges: frozenset[str]

    def sorted_edges(self) -> list[str]:
        return sorted(self.edges)


def _iter_matchings(g: PlanarBipartiteGraph, budget: int) -> Iterator[list[str]]:
    if len(g.vertices) % 2:
        return
    nodes = 0
    covered: set[str] = set()
    chosen: list[str] = []

    def free_degree(v: str) -> int:
        return sum(1 for e in g.incident(v) if g.other(e, v) not in covered)

    def rec() -> Iterator[list[str]]:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"more than {budget} search nodes")
        free = [v for v in g.vertices if v not in covered]
        if not free:
            yield list(chosen)
            return
        best, best_deg = None, None
        for v in free:
            d = free_degree(v)
            if d == 0:
                return
            if best_deg is None or d < best_deg:
                best, best_deg = v, d
        for e in sorted(g.incident(best)):
            u = g.other(e, best)
            if u in covered:
                continue
            covered.update((best, u))
            chosen.append(e)
            yield from rec()
            chosen.pop()
            covered.difference_update((best, u))

    yield from rec()


def enumerate_matchings(g: PlanarBipartiteGraph, budget: int = DEFAULT_BUDGET) -> list[Matching]:
    """Every perfect matching once, sorted by edge-id list."""
    out = [Matching(frozenset(m)) for m in _iter_matchings(g, budget)]
    out.sort(key=Matching.sorted_edges)
    return out


def oracle_count(g: PlanarBipartiteGraph, budget: int = DEFAULT_BUDGET) -> Poly:
    total = Poly.const(0)
    for m in _iter_matchings(g, budget):
        term = Poly.const(1)
        for e in m:
            term = term * g.weight(e)
        total = total + term
    return total
