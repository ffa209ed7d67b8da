"""Shared helpers: tiny graph builders and independent naive oracles.

The naive validators and the all-partitions enumerator deliberately use
plain dict/set logic instead of the package's bit-set machinery, so they
can serve as independent cross-checks.
"""

from __future__ import annotations

from bipcover import (BLUE, RED, BipartiteGraph, Colour, TwoColouring, Vertex)


def graph_from_coloured_edges(n1, n2, coloured):
    """coloured: iterable of (i, j, Colour)."""
    edges = [(i, j) for i, j, _ in coloured]
    g = BipartiteGraph.from_edges(n1, n2, edges)
    colouring = TwoColouring.from_edge_map(g, {(i, j): c for i, j, c in coloured})
    return g, colouring


def matching_graph():
    """3x3 perfect matching a_i b_i with a1b1 red, a2b2 and a3b3 blue."""
    return graph_from_coloured_edges(
        3, 3, [(0, 0, RED), (1, 1, BLUE), (2, 2, BLUE)])


def adjacency_dict(g: BipartiteGraph) -> dict[Vertex, set[Vertex]]:
    adj: dict[Vertex, set[Vertex]] = {v: set() for v in g.vertices()}
    for i, j in g.edges():
        adj[Vertex(1, i)].add(Vertex(2, j))
        adj[Vertex(2, j)].add(Vertex(1, i))
    return adj


def colour_dict(g: BipartiteGraph, colouring: TwoColouring) -> dict:
    return {(i, j): colouring.colour_of(i, j) for i, j in g.edges()}


def naive_connected(vertices: set[Vertex], edges: list[tuple[Vertex, Vertex]]) -> bool:
    if not vertices:
        return False
    adj: dict[Vertex, set[Vertex]] = {v: set() for v in vertices}
    for a, b in edges:
        if a not in adj or b not in adj:
            return False
        adj[a].add(b)
        adj[b].add(a)
    seen = set()
    stack = [next(iter(sorted(vertices)))]
    while stack:
        v = stack.pop()
        if v in seen:
            continue
        seen.add(v)
        stack.extend(adj[v] - seen)
    return seen == vertices


def naive_validate_cover(g, colouring, cover) -> bool:
    """Independent re-derivation of every cover invariant from scratch."""
    colours = colour_dict(g, colouring)
    all_vertices = set(g.vertices())
    claimed: list[set[Vertex]] = []
    for tree in cover.trees:
        vs = set(tree.vertices)
        if not vs or not vs <= all_vertices:
            return False
        if len(tree.edges) != len(vs) - 1:
            return False
        for a, b in tree.edges:
            u, w = (a, b) if a.part == 1 else (b, a)
            if u not in vs or w not in vs:
                return False
            if (u.index, w.index) not in colours:
                return False
            if colours[(u.index, w.index)] is not tree.colour:
                return False
        if not naive_connected(vs, list(tree.edges)):
            return False
        claimed.append(vs)
    claimed.append(set(cover.uncovered))
    union: set[Vertex] = set()
    total = 0
    for group in claimed:
        union |= group
        total += len(group)
    return union == all_vertices and total == len(all_vertices)


def naive_validate_partition(g, colouring, partition) -> bool:
    all_vertices = set(g.vertices())
    union: set[Vertex] = set()
    total = 0
    for colour, part in partition.parts:
        vs = set(part)
        if not vs or not vs <= all_vertices:
            return False
        edges = []
        for v in vs:
            for w in vs:
                if v.part == 1 and w.part == 2 and g.has_edge(v.index, w.index):
                    if colouring.colour_of(v.index, w.index) is colour:
                        edges.append((v, w))
        if not naive_connected(vs, edges):
            return False
        union |= vs
        total += len(vs)
    return union == all_vertices and total == len(all_vertices)


def set_partitions(items: list):
    """Every partition of ``items`` into nonempty blocks (Bell-number many)."""
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for smaller in set_partitions(rest):
        for k in range(len(smaller)):
            yield smaller[:k] + [[head] + smaller[k]] + smaller[k + 1:]
        yield [[head]] + smaller


def naive_tp(g, colouring, allow_singletons=True) -> int | None:
    """Minimum monochromatic-connected partition size by full enumeration.

    Block feasibility is cached per vertex set; the same blocks recur
    across the Bell-number many partitions.
    """
    vertices = sorted(g.vertices())
    cache: dict[frozenset, bool] = {}

    def block_ok(block: frozenset) -> bool:
        if block not in cache:
            cache[block] = _block_ok(g, colouring, set(block), allow_singletons)
        return cache[block]

    best = None
    for blocks in set_partitions(vertices):
        if not allow_singletons and any(len(b) == 1 for b in blocks):
            continue
        if best is not None and len(blocks) >= best:
            continue
        if all(block_ok(frozenset(block)) for block in blocks):
            best = len(blocks)
    return best


def _block_ok(g, colouring, block: set[Vertex], allow_singletons: bool) -> bool:
    if len(block) == 1:
        return allow_singletons
    for colour in (RED, BLUE):
        edges = []
        for v in block:
            if v.part != 1:
                continue
            for w in block:
                if w.part == 2 and g.has_edge(v.index, w.index) \
                        and colouring.colour_of(v.index, w.index) is colour:
                    edges.append((v, w))
        if naive_connected(block, edges):
            return True
    return False
