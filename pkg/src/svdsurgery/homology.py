"""Vietoris-Rips persistent homology of finite Euclidean point clouds.

H0 comes from a union-find pass over the sorted edges (finite deaths are the
minimum-spanning-tree edge weights).  Positive-dimensional pairs come from
reducing coboundary columns over Z/2 in decreasing filtration order with
clearing: dimension-0 pivots (tree edges) are never reduced in dimension 1,
and dimension-1 pivot triangles are never reduced in dimension 2.  Simplices
are ordered by (filtration value, lexicographic vertex tuple), which makes the
output deterministic.
"""

from __future__ import annotations

import heapq
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .cloud import PointCloud
from .errors import BudgetExceeded, InvalidInput

try:
    from . import _reduction
except ImportError:  # pragma: no cover - numba is an optional accelerator
    _reduction = None

DEFAULT_SIMPLEX_BUDGET = 50_000_000


class PersistencePair(NamedTuple):
    dimension: int
    birth: float
    death: float  # math.inf for essential classes


@dataclass(frozen=True)
class PersistenceDiagram:
    pairs: tuple[PersistencePair, ...]
    max_dimension: int
    filtration_cap: float

    def in_dimension(self, dim: int) -> list[PersistencePair]:
        return [p for p in self.pairs if p.dimension == dim]


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


def pairwise_distances(cloud: PointCloud | np.ndarray) -> np.ndarray:
    """Symmetric Euclidean distance matrix; each pair computed once."""
    points = cloud.points if isinstance(cloud, PointCloud) else np.asarray(cloud)
    if points.ndim != 2 or points.shape[0] < 1:
        raise InvalidInput(f"expected (count, dim) points, got shape {points.shape}")
    if not np.all(np.isfinite(points)):
        raise InvalidInput("points have non-finite coordinates")
    if points.shape[0] == 1:
        return np.zeros((1, 1))
    return squareform(pdist(points))


def validate_distance_matrix(dm) -> np.ndarray:
    dm = np.asarray(dm, dtype=np.float64)
    if dm.ndim != 2 or dm.shape[0] != dm.shape[1]:
        raise InvalidInput(f"distance matrix must be square, got {dm.shape}")
    if not np.all(np.isfinite(dm)):
        raise InvalidInput("distance matrix has non-finite entries")
    if np.any(dm < 0.0) or np.any(np.diagonal(dm) != 0.0):
        raise InvalidInput("distances must be >= 0 with a zero diagonal")
    if not np.array_equal(dm, dm.T):
        raise InvalidInput("distance matrix must be symmetric")
    return dm


def enclosing_radius(dm) -> float:
    """min over points of the max distance to that point; the default cap."""
    dm = validate_distance_matrix(dm)
    return float(dm.max(axis=1).min())


def _sorted_edges(dm: np.ndarray, cap: float):
    n = dm.shape[0]
    iu = np.triu_indices(n, 1)
    w = dm[iu]
    keep = w <= cap
    ei, ej, ew = iu[0][keep], iu[1][keep], w[keep]
    order = np.lexsort((ej, ei, ew))
    return ei[order], ej[order], ew[order]


def h0_persistence(dm) -> list[PersistencePair]:
    """All n bars of dimension 0: n-1 finite deaths at the MST edge weights
    plus one infinite bar.  Zero-weight merges are kept here (no cap, no
    zero-persistence filtering); rips_persistence applies both."""
    dm = validate_distance_matrix(dm)
    n = dm.shape[0]
    ei, ej, ew = _sorted_edges(dm, math.inf)
    uf = UnionFind(n)
    bars = []
    for a, b, w in zip(ei.tolist(), ej.tolist(), ew.tolist()):
        if uf.union(a, b):
            bars.append(PersistencePair(0, 0.0, w))
    bars.append(PersistencePair(0, 0.0, math.inf))
    return bars


def _triangle_key(i, j, k_arr: np.ndarray, n: int) -> np.ndarray:
    """Lex codes for sorted triples {i, j, k} with i < j; k may fall anywhere."""
    a = np.minimum(k_arr, i)
    c = np.maximum(k_arr, j)
    b = i + j + k_arr - a - c
    return (a * n + b) * n + c


def _pack_keys(ranks: np.ndarray, codes: np.ndarray, base: int,
               n_levels: int) -> np.ndarray:
    """Combine (filtration rank, simplex code) into single sortable keys,
    key = rank * base + code; falls back to python-int object arrays when
    the largest key would overflow int64."""
    if n_levels * base < 2**62:
        return ranks * base + codes
    keys = [r * base + c for r, c in zip(ranks.tolist(), codes.tolist())]
    return np.array(keys, dtype=object)


def _pop_pivot(heap: list) -> int | None:
    """Pop the minimal key, cancelling duplicate entries mod 2."""
    while heap:
        top = heapq.heappop(heap)
        count = 1
        while heap and heap[0] == top:
            heapq.heappop(heap)
            count += 1
        if count % 2:
            return top
    return None


def _reduce_columns(columns: Iterable[tuple[int, int, int | None]], cofacets,
                    levels: np.ndarray, base: int,
                    pairs_out: list[PersistencePair], dim: int) -> set[int]:
    """Coboundary reduction over Z/2 with factored column storage.

    Every cofacet is identified by a single integer key = (filtration rank)
    * base + (lexicographic vertex code), so key order is exactly
    (filtration, lex) order and the rank recovers the filtration value from
    ``levels``.  ``columns`` yields (birth rank, generator id, emergent
    candidate key) in decreasing column order; ``cofacets(gen)`` lists the
    generator's cofacet keys.  The emergent candidate is the generator's
    minimal cofacet when that cofacet enters at the generator's own
    filtration value, -1 when there is none, or None to have it computed
    here.  A free candidate that is not yet a pivot closes the column as a
    zero-persistence pair with no reduction work (the emergent pair
    shortcut, which covers the vast majority of columns).

    Otherwise the working column is a min-heap of keys with mod-2
    multiplicity, and only the generator list of each reduced column is
    stored (the V-column); a collision pushes the pivot back together with
    the stored generators' cofacets, so the pivot cancels.  Returns the
    pivot codes (used to clear the next dimension).
    """
    pivots: dict[int, list[int]] = {}
    cache: dict[int, list] = {}

    def expand(gen: int) -> list:
        keys = cache.get(gen)
        if keys is None:
            keys = cofacets(gen).tolist()
            cache[gen] = keys
        return keys

    for birth_rank, gen, cand in columns:
        if cand is None:
            keys = expand(gen)
            cand = -1
            if keys:
                kmin = min(keys)
                if kmin // base == birth_rank:
                    cand = kmin
        if cand >= 0 and cand not in pivots:
            pivots[cand] = [gen]
            continue
        heap = list(expand(gen))
        heapq.heapify(heap)
        red = [gen]
        while True:
            key = _pop_pivot(heap)
            if key is None:
                pairs_out.append(
                    PersistencePair(dim, float(levels[birth_rank]), math.inf))
                break
            stored = pivots.get(key)
            if stored is None:
                if len(red) > 1:
                    red = [g for g, c in Counter(red).items() if c % 2]
                pivots[key] = red
                death_rank = key // base
                if death_rank > birth_rank:
                    pairs_out.append(PersistencePair(
                        dim, float(levels[birth_rank]),
                        float(levels[death_rank])))
                break
            # the stored expansion contains the pivot an odd number of
            # times; push the popped copy back so the two cancel
            heapq.heappush(heap, key)
            for g in stored:
                red.append(g)
                for e in expand(g):
                    heapq.heappush(heap, e)
    return {key % base for key in pivots}


def rips_persistence(dm, max_dim: int = 1, cap: float | None = None,
                     budget: int = DEFAULT_SIMPLEX_BUDGET) -> PersistenceDiagram:
    """Persistence diagram of the Vietoris-Rips filtration up to ``cap``.

    A simplex enters at the maximum pairwise distance of its vertices; only
    simplices with filtration value <= cap exist.  Bars alive at the cap get
    death = inf.  Zero-persistence pairs are dropped.
    """
    dm = validate_distance_matrix(dm)
    if max_dim not in (1, 2):
        raise InvalidInput(f"max_dim must be 1 or 2, got {max_dim}")
    if cap is None:
        cap = enclosing_radius(dm)
    cap = float(cap)
    if cap <= 0.0:
        raise InvalidInput(f"cap must be > 0, got {cap}")
    n = dm.shape[0]

    ei, ej, ew = _sorted_edges(dm, cap)
    n_edges = ei.shape[0]

    adj = dm <= cap
    np.fill_diagonal(adj, False)

    # dimension 0: union-find over sorted edges; tree edges are the dim-0
    # pivots and are cleared from the dim-1 reduction
    uf = UnionFind(n)
    tree = np.zeros(n_edges, dtype=bool)
    pairs: list[PersistencePair] = []
    for idx, (a, b, w) in enumerate(zip(ei.tolist(), ej.tolist(), ew.tolist())):
        if uf.union(a, b):
            tree[idx] = True
            if w > 0.0:
                pairs.append(PersistencePair(0, 0.0, w))
    n_components = sum(1 for x in range(n) if uf.find(x) == x)
    pairs.extend([PersistencePair(0, 0.0, math.inf)] * n_components)

    # count triangles for the budget check; when max_dim == 2 they are also
    # materialised as the dimension-2 columns
    tri_i: list[np.ndarray] = []
    tri_j: list[np.ndarray] = []
    tri_k: list[np.ndarray] = []
    tri_f: list[np.ndarray] = []
    if max_dim == 1:
        # each triangle contributes one common neighbour to each of its
        # three edges, so (A^2 * A) over the edge pairs counts them 6 times
        am = adj.astype(np.float64)
        n_triangles = int(round(((am @ am) * am).sum() / 6.0))
        if n + n_edges + n_triangles > budget:
            raise BudgetExceeded(
                f"{n} vertices + {n_edges} edges need more than "
                f"{budget} simplices at cap {cap:g}; lower the cap or max_dim"
            )
    else:
        n_triangles = 0
        for a, b, w in zip(ei.tolist(), ej.tolist(), ew.tolist()):
            common = adj[a] & adj[b]
            ks = np.nonzero(common[b + 1:])[0]
            if ks.size == 0:
                continue
            ks = ks + b + 1
            n_triangles += ks.size
            if n + n_edges + n_triangles > budget:
                raise BudgetExceeded(
                    f"{n} vertices + {n_edges} edges need more than "
                    f"{budget} simplices at cap {cap:g}; lower the cap or max_dim"
                )
            f = np.maximum(np.maximum(dm[a, ks], dm[b, ks]), w)
            tri_i.append(np.full(ks.size, a))
            tri_j.append(np.full(ks.size, b))
            tri_k.append(ks)
            tri_f.append(f)

    n_tetra = 0
    if max_dim == 2 and n_triangles:
        ti = np.concatenate(tri_i)
        tj = np.concatenate(tri_j)
        tk = np.concatenate(tri_k)
        tf = np.concatenate(tri_f)
        for a, b, c in zip(ti.tolist(), tj.tolist(), tk.tolist()):
            n_tetra += int(np.count_nonzero((adj[a] & adj[b] & adj[c])[c + 1:]))
        if n + n_edges + n_triangles + n_tetra > budget:
            raise BudgetExceeded(
                f"filtration needs more than {budget} simplices at cap {cap:g}; "
                "lower the cap or max_dim"
            )

    # filtration values of triangles and tetrahedra are always edge weights,
    # so ranking against the sorted unique weights turns every (filtration,
    # code) pair into a single integer key
    levels = np.unique(ew)
    n_levels = levels.size
    rank_e = np.searchsorted(levels, ew)
    base1 = n * n * n

    # dimension 1: columns are the non-tree edges, decreasing (filt, i, j).
    # The emergent candidate of an edge is its smallest common neighbour k
    # with both legs no longer than the edge itself: that triangle enters at
    # the edge's own filtration value, and the smallest such k always gives
    # the lexicographically smallest triangle code.  Computed for all edges
    # at once, in chunks, so the reduction rarely has to expand a column.
    cand_keys = [-1] * n_edges
    chunk = max(1, 4_000_000 // max(n, 1))
    for s in range(0, n_edges, chunk):
        a, b, w = ei[s:s + chunk], ej[s:s + chunk], ew[s:s + chunk]
        ok = (dm[a] <= w[:, None]) & (dm[b] <= w[:, None])
        rows = np.arange(a.size)
        ok[rows, a] = False
        ok[rows, b] = False
        has = np.nonzero(ok.any(axis=1))[0]
        ks = ok[has].argmax(axis=1)
        codes = _triangle_key(a[has], b[has], ks, n)
        keys = _pack_keys(rank_e[s:s + chunk][has], codes, base1, n_levels)
        for pos, key in zip(has.tolist(), keys.tolist()):
            cand_keys[s + pos] = key

    nontree = np.nonzero(~tree)[0][::-1]
    if _reduction is not None and n_levels * base1 < 2**62:
        rank_m = np.searchsorted(levels, dm)
        births, deaths, pivot_keys = _reduction.reduce_edge_columns(
            ei.astype(np.int64), ej.astype(np.int64), rank_e.astype(np.int64),
            rank_m.astype(np.int64), adj, nontree.astype(np.int64),
            np.array(cand_keys, dtype=np.int64), base1, n)
        for br, dr in zip(births.tolist(), deaths.tolist()):
            death = math.inf if dr < 0 else float(levels[dr])
            pairs.append(PersistencePair(1, float(levels[br]), death))
        tri_pivots = set((pivot_keys % base1).tolist())
    else:
        def edge_cofacets(idx: int) -> np.ndarray:
            a, b, w = int(ei[idx]), int(ej[idx]), float(ew[idx])
            ks = np.nonzero(adj[a] & adj[b])[0]
            f = np.maximum(np.maximum(dm[a, ks], dm[b, ks]), w)
            codes = _triangle_key(a, b, ks, n)
            return _pack_keys(np.searchsorted(levels, f), codes, base1,
                              n_levels)

        def edge_columns():
            for idx in nontree.tolist():
                yield int(rank_e[idx]), idx, cand_keys[idx]

        tri_pivots = _reduce_columns(
            edge_columns(), edge_cofacets, levels, base1, pairs, 1)

    # dimension 2: columns are triangles that were not dim-1 pivots,
    # decreasing (filt, lex code)
    if max_dim == 2 and n_triangles:
        t_codes = (ti * n + tj) * n + tk
        t_rank = np.searchsorted(levels, tf)
        order = np.lexsort((t_codes, tf))[::-1]
        base2 = base1 * n

        def triangle_cofacets(idx: int) -> list:
            a, b, c = int(ti[idx]), int(tj[idx]), int(tk[idx])
            w = float(tf[idx])
            ks = np.nonzero(adj[a] & adj[b] & adj[c])[0]
            f = np.maximum(
                np.maximum(dm[a, ks], dm[b, ks]),
                np.maximum(dm[c, ks], w),
            )
            codes4 = _tetra_codes(a, b, c, ks, n)
            return _pack_keys(np.searchsorted(levels, f), codes4,
                              base2, n_levels)

        def triangle_columns():
            for idx in order.tolist():
                if int(t_codes[idx]) in tri_pivots:
                    continue
                yield int(t_rank[idx]), idx, None

        _reduce_columns(
            triangle_columns(), triangle_cofacets, levels, base2, pairs, 2)

    pairs.sort(key=lambda p: (p.dimension, p.birth, p.death))
    return PersistenceDiagram(tuple(pairs), max_dim, cap)


def _tetra_codes(i: int, j: int, k: int, l_arr: np.ndarray, n: int) -> np.ndarray:
    tri = np.array(sorted((i, j, k)))
    stacked = np.empty((l_arr.size, 4), dtype=np.int64)
    stacked[:, :3] = tri
    stacked[:, 3] = l_arr
    stacked.sort(axis=1)
    return ((stacked[:, 0] * n + stacked[:, 1]) * n + stacked[:, 2]) * n + stacked[:, 3]


def barcodes(diagram: PersistenceDiagram) -> dict[int, list[tuple[float, float]]]:
    """Per-dimension (birth, death) lists, stably sorted by (birth, death)."""
    out: dict[int, list[tuple[float, float]]] = {
        d: [] for d in range(diagram.max_dimension + 1)
    }
    for p in diagram.pairs:
        out[p.dimension].append((p.birth, p.death))
    for bars in out.values():
        bars.sort(key=lambda bd: (bd[0], bd[1]))
    return out


def write_diagram(diagram: PersistenceDiagram, path, extra_header: str = "") -> None:
    lines = [f"# cap={diagram.filtration_cap!r} maxdim={diagram.max_dimension}"]
    if extra_header:
        lines.append(f"# {extra_header}")
    lines.append("dimension,birth,death")
    for p in diagram.pairs:
        death = "inf" if math.isinf(p.death) else repr(p.death)
        lines.append(f"{p.dimension},{p.birth!r},{death}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_diagram(path) -> PersistenceDiagram:
    cap = math.inf
    max_dim = 0
    pairs = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("dimension,"):
                continue
            if line.startswith("#"):
                for token in line[1:].split():
                    if token.startswith("cap="):
                        cap = float(token[4:])
                    elif token.startswith("maxdim="):
                        max_dim = int(token[7:])
                continue
            d, b, dd = line.split(",")
            death = math.inf if dd == "inf" else float(dd)
            pairs.append(PersistencePair(int(d), float(b), death))
    max_dim = max([max_dim] + [p.dimension for p in pairs])
    return PersistenceDiagram(tuple(pairs), max_dim, cap)


def barcode_svg(diagram: PersistenceDiagram, path) -> None:
    """Horizontal bars stacked per dimension; infinite bars run to the cap
    and are marked with an open arrowhead."""
    bars = barcodes(diagram)
    cap = diagram.filtration_cap
    if math.isinf(cap):
        finite = [p.death for p in diagram.pairs if math.isfinite(p.death)]
        cap = max(finite) * 1.05 if finite else 1.0
    width, row_h, margin = 640.0, 6.0, 30.0
    colors = {0: "#1f77b4", 1: "#d62728", 2: "#2ca02c"}
    total_rows = sum(len(v) for v in bars.values()) + len(bars)
    height = margin * 2 + total_rows * row_h
    scale = (width - 2 * margin) / cap if cap > 0 else 1.0

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:g}" '
        f'height="{height:g}" viewBox="0 0 {width:g} {height:g}">'
    ]
    y = margin
    for dim in sorted(bars):
        parts.append(
            f'<text x="4" y="{y + row_h:g}" font-size="10">H{dim}</text>'
        )
        y += row_h
        for birth, death in bars[dim]:
            x0 = margin + birth * scale
            x1 = margin + min(death, cap) * scale
            color = colors.get(dim, "#444444")
            parts.append(
                f'<line x1="{x0:g}" y1="{y:g}" x2="{x1:g}" y2="{y:g}" '
                f'stroke="{color}" stroke-width="3"/>'
            )
            if math.isinf(death):
                parts.append(
                    f'<path d="M {x1:g} {y - 3:g} L {x1 + 6:g} {y:g} '
                    f'L {x1:g} {y + 3:g}" fill="none" stroke="{color}"/>'
                )
            y += row_h
        y += row_h
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")
