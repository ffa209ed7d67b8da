"""Exact brute-force solvers for tree cover and tree partition numbers.

A cover by k monochromatic trees exists iff k monochromatic components
cover the vertex set: every tree lies inside a component of its colour,
and every component carries a spanning tree.  The cover number therefore
reduces to minimum set cover over the component lists of all colours,
solved here by branch and bound.  The partition number is found by
recursive search over colour-connected parts with memoisation on the
remaining vertex mask.

Both searches are exponential in the worst case and exist as desk-scale
oracles; ``tp_exact`` and ``exhaustive_knn_check`` carry hard size
guards that a ``force`` flag can lift.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidArgumentError, TooLargeError
from .graph import (BipartiteGraph, Colour, MonoPartition,
                    components_from_rows, iter_bits, vertex_set)

TP_VERTEX_GUARD = 16
KNN_ENUMERATION_GUARD = 1 << 16


@dataclass
class ExactResult:
    value: int
    witness: object  # cover: list[(colour, frozenset[Vertex])]; partition: MonoPartition
    nodes_explored: int


def _component_sets(g: BipartiteGraph, colouring) -> list[tuple[int, int, frozenset[Vertex]]]:
    """(colour, combined bit mask, vertex set) for every monochromatic component.

    The combined mask places part-1 bits at 0..n1-1 and part-2 bits at
    n1..n1+n2-1.  Singleton components are included so the universe is
    always coverable.
    """
    shift = g.n1
    out = []
    for c in range(colouring.num_colours):
        rows1, rows2 = colouring.layer_rows(c)
        for m1, m2 in components_from_rows(g.n1, g.n2, rows1, rows2):
            out.append((c, m1 | (m2 << shift), vertex_set(m1, m2)))
    return out


def _min_cover(universe: int, sets: list[int]) -> tuple[int, list[int], int]:
    """Exact minimum set cover by branch and bound.

    Returns (size, chosen set indices, nodes explored).  ``sets`` must be
    able to cover ``universe``.
    """
    order = sorted(range(len(sets)), key=lambda k: -sets[k].bit_count())
    sets_by_size = [sets[k] for k in order]

    covering: dict[int, list[int]] = {}
    cover_union: dict[int, int] = {}
    for v in iter_bits(universe):
        bit = 1 << v
        covering[v] = [k for k, s in enumerate(sets_by_size) if s & bit]
        if not covering[v]:
            raise InvalidArgumentError("universe element not covered by any set")
        cover_union[v] = 0
        for k in covering[v]:
            cover_union[v] |= sets_by_size[k]

    # Greedy upper bound.
    best: list[int] = []
    left = universe
    while left:
        k = max(range(len(sets_by_size)), key=lambda t: (sets_by_size[t] & left).bit_count())
        best.append(k)
        left &= ~sets_by_size[k]
    best_size = len(best)

    nodes = 0

    def lower_bound(left: int) -> int:
        # Pick pairwise set-independent uncovered vertices greedily: no
        # single set touches two of them, so each costs one set.
        count = 0
        while left:
            v = (left & -left).bit_length() - 1
            count += 1
            left &= ~cover_union[v]
        return count

    def search(left: int, chosen: list[int]) -> None:
        nonlocal best, best_size, nodes
        nodes += 1
        if not left:
            if len(chosen) < best_size:
                best = list(chosen)
                best_size = len(chosen)
            return
        if len(chosen) + lower_bound(left) >= best_size:
            return
        # Branch on the uncovered vertex with fewest candidate sets.
        v = min(iter_bits(left),
                key=lambda u: sum(1 for k in covering[u] if sets_by_size[k] & left))
        candidates = sorted((k for k in covering[v]),
                            key=lambda k: -(sets_by_size[k] & left).bit_count())
        for k in candidates:
            chosen.append(k)
            search(left & ~sets_by_size[k], chosen)
            chosen.pop()

    search(universe, [])
    return best_size, [order[k] for k in best], nodes


def tc_exact(g: BipartiteGraph, colouring) -> ExactResult:
    """Minimum number of monochromatic components covering V(G), with witness."""
    comps = _component_sets(g, colouring)
    universe = (1 << (g.n1 + g.n2)) - 1

    # Deduplicate identical masks and drop sets contained in others.
    seen_masks: dict[int, int] = {}
    for k, (_, mask, _) in enumerate(comps):
        if mask not in seen_masks:
            seen_masks[mask] = k
    masks = sorted(seen_masks, key=lambda m: -m.bit_count())
    kept: list[int] = []
    for m in masks:
        if not any(m & ~other == 0 and other != m for other in kept):
            kept.append(m)
    value, chosen, nodes = _min_cover(universe, kept)
    two = colouring.num_colours == 2
    witness = []
    for idx in chosen:
        k = seen_masks[kept[idx]]
        colour, _, vertices = comps[k]
        witness.append((Colour(colour) if two else colour, vertices))
    return ExactResult(value, witness, nodes)


def _colour_rows_combined(g: BipartiteGraph, colouring) -> list[list[int]]:
    """Per colour, adjacency over combined vertex ids 0..n1+n2-1."""
    shift = g.n1
    total = g.n1 + g.n2
    out = []
    for c in range(colouring.num_colours):
        rows1, rows2 = colouring.layer_rows(c)
        adj = [0] * total
        for i in range(g.n1):
            adj[i] = rows1[i] << shift
        for j in range(g.n2):
            adj[shift + j] = rows2[j]
        out.append(adj)
    return out


def _connected_subsets(anchor: int, allowed: int, adj: list[int]) -> list[int]:
    """All subsets of ``allowed`` containing ``anchor`` that are connected
    under ``adj``.  Standard grow-by-frontier enumeration without
    duplicates: each extension step may only add allowed neighbours not
    previously declined."""
    results: list[int] = []
    anchor_bit = 1 << anchor

    def grow(current: int, candidates: int, banned: int) -> None:
        results.append(current)
        frontier = candidates & ~banned
        declined = 0
        for v in iter_bits(frontier):
            bit = 1 << v
            new_candidates = (candidates | adj[v]) & allowed & ~(current | bit)
            grow(current | bit, new_candidates, banned | declined)
            declined |= bit
        return

    grow(anchor_bit, adj[anchor] & allowed, 0)
    return results


def tp_exact(g: BipartiteGraph, colouring, allow_singletons: bool = True,
             force: bool = False) -> ExactResult:
    """Minimum partition of V(G) into parts each connected in one colour.

    Exponential search, guarded to 16 vertices unless ``force``.
    """
    total = g.n1 + g.n2
    if total > TP_VERTEX_GUARD and not force:
        raise TooLargeError(f"{total} vertices exceeds the guard of {TP_VERTEX_GUARD}; "
                            "pass force=True to override")
    colour_adj = _colour_rows_combined(g, colouring)
    r = colouring.num_colours
    full = (1 << total) - 1
    nodes = 0
    memo: dict[int, tuple[int, list[tuple[int, int]]] | None] = {}

    def component_of(v: int, allowed: int, adj: list[int]) -> int:
        comp = 1 << v
        frontier = comp
        while frontier:
            grow = 0
            for u in iter_bits(frontier):
                grow |= adj[u]
            frontier = grow & allowed & ~comp
            comp |= frontier
        return comp

    def solve(remaining: int) -> tuple[int, list[tuple[int, int]]] | None:
        nonlocal nodes
        if remaining == 0:
            return 0, []
        if remaining in memo:
            return memo[remaining]
        nodes += 1
        v = (remaining & -remaining).bit_length() - 1
        # A single part absorbing everything left is always optimal; check
        # before enumerating subsets.
        if allow_singletons or remaining.bit_count() >= 2:
            for c in range(r):
                if component_of(v, remaining, colour_adj[c]) == remaining:
                    memo[remaining] = (1, [(c, remaining)])
                    return memo[remaining]
        best: tuple[int, list[tuple[int, int]]] | None = None
        tried: set[int] = set()
        for c in range(r):
            for part in _connected_subsets(v, remaining, colour_adj[c]):
                if part in tried:
                    continue
                tried.add(part)
                if not allow_singletons and part.bit_count() < 2:
                    continue
                sub = solve(remaining & ~part)
                if sub is None:
                    continue
                cand = (sub[0] + 1, [(c, part)] + sub[1])
                if best is None or cand[0] < best[0]:
                    best = cand
        memo[remaining] = best
        return best

    solution = solve(full)
    if solution is None:
        raise InvalidArgumentError(
            "no partition exists without singleton parts on this instance")
    value, raw_parts = solution
    shift = g.n1
    mask2_all = ((1 << g.n2) - 1) << shift
    parts = []
    for c, mask in raw_parts:
        m1 = mask & ((1 << g.n1) - 1)
        m2 = (mask & mask2_all) >> shift
        parts.append((Colour(c) if c < 2 else c, vertex_set(m1, m2)))
    return ExactResult(value, MonoPartition(tuple(parts)), nodes)


@dataclass
class KnnReport:
    """Outcome of exhausting all r-colourings of K_{n,n}."""

    n: int
    r: int
    bound: int
    total_colourings: int
    max_tc: int
    tc_histogram: dict[int, int] = field(default_factory=dict)
    violations: list[int] = field(default_factory=list)  # colouring codes with tc > bound


def _decode_colouring(code: int, n: int, r: int) -> list[list[int]]:
    """Colour layers (rows per part-1 vertex) of colouring ``code`` in base r."""
    layers = [[0] * n for _ in range(r)]
    for slot in range(n * n):
        c = code % r
        code //= r
        i, j = divmod(slot, n)
        layers[c][i] |= 1 << j
    return layers


def exhaustive_knn_check(n: int, r: int, bound: int, force: bool = False) -> KnnReport:
    """Compute tc over every r-colouring of K_{n,n} and report the maximum.

    The enumeration is unreduced (no symmetry quotient) so counts are
    directly comparable across implementations.
    """
    if n < 1 or r < 1:
        raise InvalidArgumentError("n and r must be positive")
    total = r ** (n * n)
    if total > KNN_ENUMERATION_GUARD and not force:
        raise TooLargeError(f"{total} colourings exceed the guard of "
                            f"{KNN_ENUMERATION_GUARD}; pass force=True to override")
    g = BipartiteGraph.complete(n, n)
    universe = (1 << (2 * n)) - 1
    report = KnnReport(n=n, r=r, bound=bound, total_colourings=total, max_tc=0)
    for code in range(total):
        layers1 = _decode_colouring(code, n, r)
        masks: set[int] = set()
        for c in range(r):
            rows1 = layers1[c]
            rows2 = [0] * n
            for i in range(n):
                row = rows1[i]
                for j in iter_bits(row):
                    rows2[j] |= 1 << i
            for m1, m2 in components_from_rows(n, n, tuple(rows1), tuple(rows2)):
                masks.add(m1 | (m2 << n))
        kept = sorted(masks, key=lambda m: -m.bit_count())
        kept = [m for k, m in enumerate(kept)
                if not any(m & ~other == 0 for other in kept[:k])]
        value, _, _ = _min_cover(universe, kept)
        report.tc_histogram[value] = report.tc_histogram.get(value, 0) + 1
        if value > report.max_tc:
            report.max_tc = value
        if value > bound:
            report.violations.append(code)
    return report
