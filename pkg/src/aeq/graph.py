"""Combinatorial checks on unit-distance graphs and closed-form cardinality bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .core import (
    CONSTRUCTION_TOL,
    PointsLike,
    Tolerance,
    UnitDistanceGraph,
    as_points,
    diameter,
    is_almost_equidistant,
)
from .errors import BudgetExceededError, InvalidInputError, PreconditionError

MAX_CLIQUE_VERTICES = 200
MAX_CLIQUE_NODES = 10**7


def non_neighbor_violations(g: UnitDistanceGraph, d: int) -> List[int]:
    """Vertices with more than ``d + 1`` non-neighbors.

    In a realizable almost-equidistant set the non-neighbors of a vertex are
    pairwise at unit distance, so more than ``d + 1`` of them would be a unit
    simplex too large for R^d.
    """
    if d < 1:
        raise InvalidInputError("d must be at least 1")
    non_nbrs = g.n - 1 - g.degrees()
    return [int(v) for v in np.nonzero(non_nbrs > d + 1)[0]]


def complement_triangle(g: UnitDistanceGraph) -> Optional[Tuple[int, int, int]]:
    """Lexicographically smallest independent triple of ``g``, if any."""
    nbrs = g.neighbors()
    for i in range(g.n):
        for j in range(i + 1, g.n):
            if j in nbrs[i]:
                continue
            for k in range(j + 1, g.n):
                if k not in nbrs[i] and k not in nbrs[j]:
                    return (i, j, k)
    return None


def _color_bound(cands: List[int], adj: List[int]) -> Tuple[List[int], List[int]]:
    """Greedy sequential coloring; returns vertices sorted by color with their color numbers."""
    order: List[int] = []
    colors: List[int] = []
    uncolored = list(cands)
    color = 0
    while uncolored:
        color += 1
        avail = 0
        for v in uncolored:
            avail |= 1 << v
        keep = []
        for v in uncolored:
            if avail >> v & 1:
                order.append(v)
                colors.append(color)
                avail &= ~adj[v]
                avail &= ~(1 << v)
            else:
                keep.append(v)
        uncolored = keep
    return order, colors


def max_clique(g: UnitDistanceGraph, node_limit: int = MAX_CLIQUE_NODES) -> int:
    """Exact clique number by branch and bound with a greedy coloring bound.

    Vertices are ordered by descending degree, ties by index.
    """
    if g.n > MAX_CLIQUE_VERTICES:
        raise InvalidInputError(f"max_clique supports at most {MAX_CLIQUE_VERTICES} vertices")
    if g.n == 0:
        return 0
    adj = [0] * g.n
    for i, j in g.edges:
        adj[i] |= 1 << j
        adj[j] |= 1 << i
    deg = [bin(a).count("1") for a in adj]
    start = sorted(range(g.n), key=lambda v: (-deg[v], v))

    best = 1
    nodes = 0

    def expand(size: int, cands: List[int]):
        nonlocal best, nodes
        order, colors = _color_bound(cands, adj)
        # scan highest color first so the bound prunes early
        for pos in range(len(order) - 1, -1, -1):
            if size + colors[pos] <= best:
                return
            nodes += 1
            if nodes > node_limit:
                raise BudgetExceededError(f"max_clique exceeded {node_limit} search nodes")
            v = order[pos]
            nxt = [u for u in order[:pos] if adj[v] >> u & 1]
            if nxt:
                expand(size + 1, nxt)
            elif size + 1 > best:
                best = size + 1

    expand(0, start)
    return best


def bound_theorem(d: int) -> float:
    """Upper bound ``5 d^(13/9)`` on the size of an almost-equidistant set in R^d."""
    if d < 1:
        raise InvalidInputError("d must be at least 1")
    return 5.0 * d ** (13.0 / 9.0)


def bound_ramsey(d: int) -> float:
    """Ramsey-number bound ``2.4 (d+2)^2 / ln(d+2)``."""
    if d < 1:
        raise InvalidInputError("d must be at least 1")
    return 2.4 * (d + 2) ** 2 / math.log(d + 2)


@dataclass(frozen=True)
class BoundReport:
    d: int
    theorem_bound: float
    ramsey_bound: float
    observed_n: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "theorem_bound": self.theorem_bound,
            "ramsey_bound": self.ramsey_bound,
            "observed_n": self.observed_n,
        }


def bound_report(d: int, observed_n: Optional[int] = None) -> BoundReport:
    return BoundReport(d, bound_theorem(d), bound_ramsey(d), observed_n)


@dataclass(frozen=True)
class DiameterVerdict:
    applicable: bool
    ok: bool
    diameter: float
    n: int
    bound: int

    @property
    def margin(self) -> Optional[float]:
        return float(self.bound - self.n) if self.applicable else None


def diameter_bound_check(
    ps: PointsLike, tol: Tolerance = CONSTRUCTION_TOL, d: Optional[int] = None
) -> DiameterVerdict:
    """Large-diameter bound: diameter at least sqrt(2) forces ``n <= 4d + 4``."""
    arr = as_points(ps)
    verdict = is_almost_equidistant(arr, tol)
    if not verdict.ok:
        raise PreconditionError(
            f"diameter_bound_check requires an almost-equidistant set; "
            f"triple {verdict.witness} has no unit pair",
            witness=verdict.witness,
        )
    d = int(d if d is not None else arr.shape[1])
    n = arr.shape[0]
    bound = 4 * d + 4
    if n < 2:
        return DiameterVerdict(False, True, 0.0, n, bound)
    diam = diameter(arr)
    applicable = diam >= math.sqrt(2.0) - tol.unit_eps
    return DiameterVerdict(applicable, (n <= bound) if applicable else True, diam, n, bound)
