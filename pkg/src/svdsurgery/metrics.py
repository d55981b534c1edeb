"""Bottleneck distance between persistence diagrams.

Finite points may be matched to each other (L-infinity cost) or to the
diagonal (half their persistence).  Infinite bars are matched separately by
sorted birth values; a mismatch in their count makes the distance infinite.
The optimum is found by binary search over the finite set of candidate costs,
with feasibility decided by maximum bipartite matching, so the result is an
exact candidate value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .homology import PersistenceDiagram


@dataclass(frozen=True)
class MatchingProblem:
    """Finite (birth, death) pairs of one dimension from each diagram."""

    left: tuple[tuple[float, float], ...]
    right: tuple[tuple[float, float], ...]


def _cost(p: tuple[float, float], q: tuple[float, float]) -> float:
    return max(abs(p[0] - q[0]), abs(p[1] - q[1]))


def _diag_cost(p: tuple[float, float]) -> float:
    return (p[1] - p[0]) / 2.0


def _feasible(problem: MatchingProblem, t: float) -> bool:
    """Perfect matching in the threshold graph at cost t.

    Standard augmented construction: the left side is the first diagram's
    points plus one diagonal node per right point, the right side is the
    second diagram's points plus one diagonal slot per left point.  A point
    reaches any diagonal node iff half its persistence is <= t; diagonal
    nodes reach every slot for free.  Kuhn's augmenting-path matching.
    """
    left, right = problem.left, problem.right
    n1, n2 = len(left), len(right)
    left_diag = [_diag_cost(p) <= t for p in left]
    right_diag = [_diag_cost(q) <= t for q in right]

    def neighbors(i: int):
        if i < n1:  # real left point
            for j in range(n2):
                if _cost(left[i], right[j]) <= t:
                    yield j
            if left_diag[i]:
                yield from range(n2, n2 + n1)
        else:  # diagonal node standing in for a right point
            for j in range(n2):
                if right_diag[j]:
                    yield j
            yield from range(n2, n2 + n1)

    match_right: dict[int, int] = {}

    def augment(i: int, seen: set[int]) -> bool:
        for j in neighbors(i):
            if j in seen:
                continue
            seen.add(j)
            if j not in match_right or augment(match_right[j], seen):
                match_right[j] = i
                return True
        return False

    for i in range(n1 + n2):
        if not augment(i, set()):
            return False
    return True


def bottleneck_matching_distance(problem: MatchingProblem) -> float:
    left, right = problem.left, problem.right
    if not left and not right:
        return 0.0
    candidates = {0.0}
    candidates.update(_diag_cost(p) for p in left)
    candidates.update(_diag_cost(q) for q in right)
    for p in left:
        for q in right:
            candidates.add(_cost(p, q))
    ordered = sorted(candidates)
    lo, hi = 0, len(ordered) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _feasible(problem, ordered[mid]):
            hi = mid
        else:
            lo = mid + 1
    return ordered[lo]


def bottleneck_distance(d1: PersistenceDiagram, d2: PersistenceDiagram,
                        dimension: int) -> float:
    """Bottleneck distance between the dimension-``dimension`` parts."""
    p1 = d1.in_dimension(dimension)
    p2 = d2.in_dimension(dimension)
    inf1 = sorted(p.birth for p in p1 if math.isinf(p.death))
    inf2 = sorted(p.birth for p in p2 if math.isinf(p.death))
    if len(inf1) != len(inf2):
        return math.inf
    inf_part = max((abs(a - b) for a, b in zip(inf1, inf2)), default=0.0)
    problem = MatchingProblem(
        left=tuple((p.birth, p.death) for p in p1 if math.isfinite(p.death)),
        right=tuple((p.birth, p.death) for p in p2 if math.isfinite(p.death)),
    )
    return max(inf_part, bottleneck_matching_distance(problem))
