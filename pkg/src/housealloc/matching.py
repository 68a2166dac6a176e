"""Maximum-weight perfect matching on balanced bipartite graphs.

The solver is an exact integer Hungarian method (shortest augmenting paths
with potentials, O(|V|^3)).  Two encoding tricks give it the contract the
mechanisms need:

* Missing edges become a forbidden cost level strictly worse than any total
  a real matching can reach, so "no perfect matching exists" is detected by
  inspecting whether the optimum used a forbidden slot.

* Among equal-weight perfect matchings, the returned one is the
  lexicographically smallest assignment sequence (right index chosen for
  left vertex 0, then 1, ...).  This is enforced by adding a positional
  tie-break term ``j * R^(L-1-i)`` to the cost of edge (i, j): distinct
  assignment sequences then have distinct totals, so the optimum is unique
  and the output cannot depend on internal scan order.

Python integers keep the composite costs exact at any graph size.
"""

from __future__ import annotations

from dataclasses import dataclass


class UnbalancedGraph(ValueError):
    """Left and right sides differ in size; pad with dummies first."""


class UnknownVertex(ValueError):
    pass


class WeightedBipartiteGraph:
    """Bipartite graph with labelled vertices and {0,1} edge weights.

    Vertices are addressed by index into ``left`` / ``right``; labels exist
    for reporting.  Edges live in a dict keyed by (left, right) index pairs,
    so removal and restoration are exact inverses.
    """

    __slots__ = ("left", "right", "_weights")

    def __init__(self, left: tuple[str, ...], right: tuple[str, ...]) -> None:
        self.left = tuple(left)
        self.right = tuple(right)
        self._weights: dict[tuple[int, int], int] = {}

    def add_edge(self, li: int, rj: int, weight: int) -> None:
        if weight not in (0, 1):
            raise ValueError(f"edge weight must be 0 or 1, got {weight}")
        if not (0 <= li < len(self.left) and 0 <= rj < len(self.right)):
            raise UnknownVertex(f"edge ({li}, {rj}) is out of range")
        existing = self._weights.get((li, rj))
        if existing is not None and existing != weight:
            raise ValueError(f"edge ({li}, {rj}) added twice with different weights")
        self._weights[(li, rj)] = weight

    def weight(self, li: int, rj: int) -> int | None:
        return self._weights.get((li, rj))

    def edges(self) -> list[tuple[int, int, int]]:
        """All edges as (left, right, weight), in index order."""
        return [(li, rj, w) for (li, rj), w in sorted(self._weights.items())]

    def edges_of(self, li: int) -> list[tuple[int, int]]:
        """(right index, weight) pairs of one left vertex, in right order."""
        return [
            (rj, w)
            for (i, rj), w in sorted(self._weights.items())
            if i == li
        ]

    def copy(self) -> "WeightedBipartiteGraph":
        dup = WeightedBipartiteGraph(self.left, self.right)
        dup._weights = dict(self._weights)
        return dup

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightedBipartiteGraph):
            return NotImplemented
        return (
            self.left == other.left
            and self.right == other.right
            and self._weights == other._weights
        )


@dataclass(frozen=True)
class Matching:
    """A perfect matching: ``assignment[i]`` is the right index paired with
    left vertex i; ``weight`` is the sum of matched edge weights."""

    assignment: tuple[int, ...]
    weight: int

    @property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple((i, j) for i, j in enumerate(self.assignment))


@dataclass(frozen=True)
class EdgeDelta:
    """Edges removed from a graph; restoring them undoes the removal exactly."""

    vertex: int
    removed: tuple[tuple[int, int, int], ...]  # (left, right, weight)


def _solve_min_cost(cost: list[list[int]]) -> list[int]:
    # Hungarian method with potentials on a complete square matrix
    # (1-indexed internally; p[j] is the row matched to column j).
    n = len(cost)
    inf = float("inf")
    u = [0] * (n + 1)
    v = [0] * (n + 1)
    p = [0] * (n + 1)
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv: list = [inf] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = inf
            j1 = 0
            row = cost[i0 - 1]
            ui0 = u[i0]
            for j in range(1, n + 1):
                if not used[j]:
                    cur = row[j - 1] - ui0 - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    row_to_col = [0] * n
    for j in range(1, n + 1):
        row_to_col[p[j] - 1] = j - 1
    return row_to_col


def max_weight_perfect_matching(graph: WeightedBipartiteGraph) -> Matching | None:
    """Maximum-weight perfect matching, or None if no perfect matching exists.

    Deterministic: among equal-weight optima, returns the lexicographically
    smallest assignment sequence.
    """
    size = len(graph.left)
    if size != len(graph.right):
        raise UnbalancedGraph(
            f"graph has {size} left and {len(graph.right)} right vertices"
        )
    if size == 0:
        return Matching(assignment=(), weight=0)

    # cost(i, j) = -w * SCALE + j * R^(L-1-i); forbidden slots cost
    # (L+2) * SCALE, strictly worse than any all-real matching.
    scale = size**size
    forbidden = (size + 2) * scale
    position = [size ** (size - 1 - i) for i in range(size)]
    cost = [[forbidden] * size for _ in range(size)]
    for (li, rj), w in graph._weights.items():
        cost[li][rj] = -w * scale + rj * position[li]

    assignment = _solve_min_cost(cost)
    total = 0
    for li, rj in enumerate(assignment):
        w = graph.weight(li, rj)
        if w is None:
            return None
        total += w
    return Matching(assignment=tuple(assignment), weight=total)


def has_perfect_matching(graph: WeightedBipartiteGraph) -> bool:
    """True iff a perfect matching exists; edge weights are irrelevant."""
    return max_weight_perfect_matching(graph) is not None


def remove_zero_edges(graph: WeightedBipartiteGraph, li: int) -> EdgeDelta:
    """Remove every weight-0 edge of left vertex ``li`` from the graph.

    Returns the removed edges; :func:`restore_edges` puts them back exactly.
    """
    if not (0 <= li < len(graph.left)):
        raise UnknownVertex(f"left vertex {li} is out of range")
    removed = tuple(
        (li, rj, 0) for rj, w in graph.edges_of(li) if w == 0
    )
    for _, rj, _ in removed:
        del graph._weights[(li, rj)]
    return EdgeDelta(vertex=li, removed=removed)


def restore_edges(graph: WeightedBipartiteGraph, delta: EdgeDelta) -> None:
    """Reinsert the edges recorded in ``delta``."""
    for li, rj, w in delta.removed:
        graph._weights[(li, rj)] = w
