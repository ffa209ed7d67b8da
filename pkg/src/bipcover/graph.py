"""Bipartite graphs, edge 2-colourings, and the cover/partition validators.

Vertices are addressed as (part, index) with part in {1, 2} and a
0-based index within the part.  Adjacency is stored as one bit-set row
per vertex over the opposite part, so neighbourhood intersections and
restricted degree counts are single integer operations.

All graph and colouring objects are immutable after construction and
safe to share across threads or processes; every operation here is a
pure query.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterable, Iterator, NamedTuple

from .errors import InvalidArgumentError, NotConnectedError


class Vertex(NamedTuple):
    part: int
    index: int

    def __str__(self) -> str:  # matches the "part:index" file token
        return f"{self.part}:{self.index}"


def v1(index: int) -> Vertex:
    return Vertex(1, index)


def v2(index: int) -> Vertex:
    return Vertex(2, index)


class Colour(IntEnum):
    RED = 0
    BLUE = 1

    @property
    def token(self) -> str:
        return "R" if self is Colour.RED else "B"

    @property
    def other(self) -> "Colour":
        return Colour.BLUE if self is Colour.RED else Colour.RED


RED = Colour.RED
BLUE = Colour.BLUE


def iter_bits(mask: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def transpose_rows(rows: tuple[int, ...], width: int) -> tuple[int, ...]:
    out = [0] * width
    for i, row in enumerate(rows):
        bit = 1 << i
        for j in iter_bits(row):
            out[j] |= bit
    return tuple(out)


class BipartiteGraph:
    """Immutable bipartite graph with bit-set adjacency rows.

    ``row(1, i)`` is the neighbour set of part-1 vertex i as a bit mask
    over part-2 indices, and symmetrically for ``row(2, j)``.
    """

    __slots__ = ("n1", "n2", "_rows1", "_rows2")

    def __init__(self, n1: int, n2: int, rows1: tuple[int, ...], rows2: tuple[int, ...]):
        self.n1 = n1
        self.n2 = n2
        self._rows1 = rows1
        self._rows2 = rows2

    @classmethod
    def from_rows(cls, n1: int, n2: int, rows1: Iterable[int],
                  rows2: Iterable[int] | None = None) -> "BipartiteGraph":
        if n1 < 1 or n2 < 1:
            raise InvalidArgumentError("both parts must be nonempty")
        r1 = tuple(rows1)
        if len(r1) != n1:
            raise InvalidArgumentError(f"expected {n1} part-1 rows, got {len(r1)}")
        full2 = (1 << n2) - 1
        for i, row in enumerate(r1):
            if row & ~full2:
                raise InvalidArgumentError(f"row of vertex 1:{i} has bits outside part 2")
        r2 = tuple(rows2) if rows2 is not None else transpose_rows(r1, n2)
        if len(r2) != n2:
            raise InvalidArgumentError(f"expected {n2} part-2 rows, got {len(r2)}")
        return cls(n1, n2, r1, r2)

    @classmethod
    def from_edges(cls, n1: int, n2: int, edges: Iterable[tuple[int, int]]) -> "BipartiteGraph":
        rows1 = [0] * n1
        rows2 = [0] * n2
        for i, j in edges:
            if not (0 <= i < n1 and 0 <= j < n2):
                raise InvalidArgumentError(f"edge ({i},{j}) out of range")
            rows1[i] |= 1 << j
            rows2[j] |= 1 << i
        return cls.from_rows(n1, n2, rows1, rows2)

    @classmethod
    def complete(cls, n1: int, n2: int) -> "BipartiteGraph":
        full2 = (1 << n2) - 1
        full1 = (1 << n1) - 1
        return cls(n1, n2, tuple([full2] * n1), tuple([full1] * n2))

    def part_size(self, part: int) -> int:
        if part == 1:
            return self.n1
        if part == 2:
            return self.n2
        raise InvalidArgumentError(f"part must be 1 or 2, got {part}")

    def row(self, part: int, index: int) -> int:
        if part == 1:
            return self._rows1[index]
        if part == 2:
            return self._rows2[index]
        raise InvalidArgumentError(f"part must be 1 or 2, got {part}")

    def neighbours(self, v: Vertex) -> int:
        self.check_vertex(v)
        return self.row(v.part, v.index)

    def check_vertex(self, v: Vertex) -> None:
        if v.part not in (1, 2) or not (0 <= v.index < self.part_size(v.part)):
            raise InvalidArgumentError(f"vertex {v!r} not in this graph")

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self._rows1[i] >> j & 1)

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges as (part-1 index, part-2 index), row-major order."""
        for i, row in enumerate(self._rows1):
            for j in iter_bits(row):
                yield i, j

    @property
    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self._rows1)

    def vertices(self) -> Iterator[Vertex]:
        for i in range(self.n1):
            yield Vertex(1, i)
        for j in range(self.n2):
            yield Vertex(2, j)

    @property
    def vertex_count(self) -> int:
        return self.n1 + self.n2

    def min_degree(self) -> int:
        return min(row.bit_count() for row in self._rows1 + self._rows2)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, BipartiteGraph)
                and self.n1 == other.n1 and self.n2 == other.n2
                and self._rows1 == other._rows1)

    def __hash__(self) -> int:
        return hash((self.n1, self.n2, self._rows1))

    def __repr__(self) -> str:
        return f"BipartiteGraph(n1={self.n1}, n2={self.n2}, edges={self.edge_count})"


class TwoColouring:
    """Red/blue label per edge, stored as red-neighbour bit rows.

    The blue rows are the adjacency rows minus the red rows, so the
    colouring is total on E(G) by construction.
    """

    __slots__ = ("graph", "_red1", "_red2")

    num_colours = 2

    def __init__(self, graph: BipartiteGraph, red1: tuple[int, ...], red2: tuple[int, ...]):
        self.graph = graph
        self._red1 = red1
        self._red2 = red2

    @classmethod
    def from_red_rows(cls, graph: BipartiteGraph, red1: Iterable[int],
                      red2: Iterable[int] | None = None) -> "TwoColouring":
        r1 = tuple(red1)
        if len(r1) != graph.n1:
            raise InvalidArgumentError("one red row per part-1 vertex required")
        for i, row in enumerate(r1):
            if row & ~graph.row(1, i):
                raise InvalidArgumentError(f"red row of 1:{i} marks a non-edge")
        r2 = tuple(red2) if red2 is not None else transpose_rows(r1, graph.n2)
        return cls(graph, r1, r2)

    @classmethod
    def from_edge_map(cls, graph: BipartiteGraph,
                      colours: dict[tuple[int, int], Colour]) -> "TwoColouring":
        red1 = [0] * graph.n1
        seen = 0
        for (i, j), c in colours.items():
            if not graph.has_edge(i, j):
                raise InvalidArgumentError(f"({i},{j}) is not an edge")
            if c is Colour.RED:
                red1[i] |= 1 << j
            seen += 1
        if seen != graph.edge_count:
            raise InvalidArgumentError("colouring must cover every edge exactly once")
        return cls.from_red_rows(graph, red1)

    @classmethod
    def monochromatic(cls, graph: BipartiteGraph, colour: Colour) -> "TwoColouring":
        if colour is Colour.RED:
            return cls(graph, graph._rows1, graph._rows2)
        return cls(graph, tuple([0] * graph.n1), tuple([0] * graph.n2))

    def coloured_row(self, part: int, index: int, colour: Colour) -> int:
        red = self._red1[index] if part == 1 else self._red2[index]
        if colour is Colour.RED:
            return red
        return self.graph.row(part, index) & ~red

    def coloured_neighbours(self, v: Vertex, colour: Colour) -> int:
        return self.coloured_row(v.part, v.index, colour)

    def colour_of(self, i: int, j: int) -> Colour:
        if not self.graph.has_edge(i, j):
            raise InvalidArgumentError(f"({i},{j}) is not an edge")
        return Colour.RED if self._red1[i] >> j & 1 else Colour.BLUE

    def layer_rows(self, colour: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Adjacency rows of the single-colour subgraph (part 1, part 2)."""
        c = Colour(colour)
        if c is Colour.RED:
            return self._red1, self._red2
        g = self.graph
        blue1 = tuple(g.row(1, i) & ~self._red1[i] for i in range(g.n1))
        blue2 = tuple(g.row(2, j) & ~self._red2[j] for j in range(g.n2))
        return blue1, blue2

    def swapped(self) -> "TwoColouring":
        """The same edges with red and blue exchanged."""
        blue1, blue2 = self.layer_rows(Colour.BLUE)
        return TwoColouring(self.graph, blue1, blue2)

    def edge_colours(self) -> Iterator[tuple[int, int, Colour]]:
        for i, j in self.graph.edges():
            yield i, j, Colour.RED if self._red1[i] >> j & 1 else Colour.BLUE

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, TwoColouring)
                and self.graph == other.graph and self._red1 == other._red1)

    def __hash__(self) -> int:
        return hash((self.graph, self._red1))


class RColouring:
    """Edge colouring with colour indices 0..r-1 (the exact solver's input)."""

    __slots__ = ("graph", "num_colours", "_layers1", "_layers2")

    def __init__(self, graph: BipartiteGraph, layers1: tuple[tuple[int, ...], ...],
                 layers2: tuple[tuple[int, ...], ...]):
        self.graph = graph
        self.num_colours = len(layers1)
        self._layers1 = layers1
        self._layers2 = layers2

    @classmethod
    def from_edge_map(cls, graph: BipartiteGraph, r: int,
                      colours: dict[tuple[int, int], int]) -> "RColouring":
        if r < 1:
            raise InvalidArgumentError("need at least one colour")
        layers1 = [[0] * graph.n1 for _ in range(r)]
        layers2 = [[0] * graph.n2 for _ in range(r)]
        seen = 0
        for (i, j), c in colours.items():
            if not graph.has_edge(i, j):
                raise InvalidArgumentError(f"({i},{j}) is not an edge")
            if not (0 <= c < r):
                raise InvalidArgumentError(f"colour {c} out of range 0..{r - 1}")
            layers1[c][i] |= 1 << j
            layers2[c][j] |= 1 << i
            seen += 1
        if seen != graph.edge_count:
            raise InvalidArgumentError("colouring must cover every edge exactly once")
        return cls(graph, tuple(tuple(l) for l in layers1), tuple(tuple(l) for l in layers2))

    @classmethod
    def from_two(cls, colouring: TwoColouring) -> "RColouring":
        red1, red2 = colouring.layer_rows(Colour.RED)
        blue1, blue2 = colouring.layer_rows(Colour.BLUE)
        return cls(colouring.graph, (red1, blue1), (red2, blue2))

    def layer_rows(self, colour: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return self._layers1[colour], self._layers2[colour]

    def colour_of(self, i: int, j: int) -> int:
        for c in range(self.num_colours):
            if self._layers1[c][i] >> j & 1:
                return c
        raise InvalidArgumentError(f"({i},{j}) is not an edge")


# ---------------------------------------------------------------------------
# Queries


def _vertex_masks(g: BipartiteGraph, vertices: Iterable[Vertex]) -> tuple[int, int]:
    """Split a vertex set into (part-1 mask, part-2 mask), validating ids."""
    m1 = m2 = 0
    for v in vertices:
        g.check_vertex(v)
        if v.part == 1:
            m1 |= 1 << v.index
        else:
            m2 |= 1 << v.index
    return m1, m2


def vertex_set(mask1: int, mask2: int) -> frozenset[Vertex]:
    return frozenset(
        [Vertex(1, i) for i in iter_bits(mask1)] + [Vertex(2, j) for j in iter_bits(mask2)]
    )


def degree(g: BipartiteGraph, v: Vertex, *, within: Iterable[Vertex] | None = None,
           colouring: TwoColouring | None = None, colour: Colour | None = None) -> int:
    """|N(v)| restricted to ``within`` and, if given, to one colour's edges."""
    g.check_vertex(v)
    if (colouring is None) != (colour is None):
        raise InvalidArgumentError("colouring and colour must be given together")
    row = colouring.coloured_row(v.part, v.index, colour) if colouring else g.row(v.part, v.index)
    if within is None:
        return row.bit_count()
    m1, m2 = _vertex_masks(g, within)
    opposite = m2 if v.part == 1 else m1
    if (m1 if v.part == 1 else m2):
        raise InvalidArgumentError("'within' must lie in the part opposite to v")
    return (row & opposite).bit_count()


def edge_count_between(g: BipartiteGraph, a: Iterable[Vertex], b: Iterable[Vertex], *,
                       colouring: TwoColouring | None = None,
                       colour: Colour | None = None) -> int:
    """Number of (optionally colour-restricted) edges with one end in each set."""
    if (colouring is None) != (colour is None):
        raise InvalidArgumentError("colouring and colour must be given together")
    a1, a2 = _vertex_masks(g, a)
    b1, b2 = _vertex_masks(g, b)
    if (a1 and a2) or (b1 and b2):
        raise InvalidArgumentError("each set must lie within a single part")
    if (a1 or a2) == 0 or (b1 or b2) == 0:
        return 0
    if (a1 and b1) or (a2 and b2):
        raise InvalidArgumentError("sets must lie in opposite parts")
    left, right = (a1, b2) if a1 else (b1, a2)
    total = 0
    for i in iter_bits(left):
        row = colouring.coloured_row(1, i, colour) if colouring else g.row(1, i)
        total += (row & right).bit_count()
    return total


def components_from_rows(n1: int, n2: int, rows1: tuple[int, ...],
                         rows2: tuple[int, ...]) -> list[tuple[int, int]]:
    """Connected components of a bipartite subgraph given by bit rows.

    Returns (part-1 mask, part-2 mask) pairs covering all n1+n2 vertices;
    vertices with empty rows come back as singletons.  Ordered by their
    smallest vertex (part 1 first).
    """
    unseen1 = (1 << n1) - 1
    unseen2 = (1 << n2) - 1
    comps: list[tuple[int, int]] = []
    order: list[tuple[int, int]] = [(1, i) for i in range(n1)] + [(2, j) for j in range(n2)]
    for part, idx in order:
        if part == 1:
            if not unseen1 >> idx & 1:
                continue
            m1, m2 = 1 << idx, 0
        else:
            if not unseen2 >> idx & 1:
                continue
            m1, m2 = 0, 1 << idx
        unseen1 &= ~m1
        unseen2 &= ~m2
        frontier1, frontier2 = m1, m2
        while frontier1 or frontier2:
            grow2 = 0
            for i in iter_bits(frontier1):
                grow2 |= rows1[i]
            grow1 = 0
            for j in iter_bits(frontier2):
                grow1 |= rows2[j]
            frontier1 = grow1 & unseen1
            frontier2 = grow2 & unseen2
            unseen1 &= ~frontier1
            unseen2 &= ~frontier2
            m1 |= frontier1
            m2 |= frontier2
        comps.append((m1, m2))
    return comps


def monochromatic_components(g: BipartiteGraph, colouring, colour) -> list[frozenset[Vertex]]:
    """Components of one colour's subgraph; together they partition V(G).

    Vertices with no edge of the colour appear as singletons, so the
    result is always a partition of the whole vertex set.
    """
    rows1, rows2 = colouring.layer_rows(colour)
    return [vertex_set(m1, m2) for m1, m2 in components_from_rows(g.n1, g.n2, rows1, rows2)]


# ---------------------------------------------------------------------------
# Covers and partitions


@dataclass(frozen=True)
class MonoTree:
    """A tree using edges of one colour; a single vertex with no edges is allowed."""

    colour: Colour
    vertices: frozenset[Vertex]
    edges: tuple[tuple[Vertex, Vertex], ...]


@dataclass(frozen=True)
class TreeCover:
    """Vertex-disjoint monochromatic trees plus the vertices left uncovered."""

    trees: tuple[MonoTree, ...]
    uncovered: frozenset[Vertex]


@dataclass(frozen=True)
class MonoPartition:
    """Disjoint parts, each connected inside one colour, covering V(G)."""

    parts: tuple[tuple[Colour, frozenset[Vertex]], ...]


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, message: str) -> None:
        self.violations.append(message)


def _check_tree(g: BipartiteGraph, colouring: TwoColouring, tree: MonoTree,
                label: str, report: ValidationReport) -> None:
    if not tree.vertices:
        report.add(f"{label}: empty vertex set")
        return
    for v in tree.vertices:
        try:
            g.check_vertex(v)
        except InvalidArgumentError:
            report.add(f"{label}: vertex {v} not in graph")
            return
    if len(tree.edges) != len(tree.vertices) - 1:
        report.add(f"{label}: {len(tree.edges)} edges for {len(tree.vertices)} vertices")
    adjacency: dict[Vertex, list[Vertex]] = {v: [] for v in tree.vertices}
    for a, b in tree.edges:
        u, w = (a, b) if a.part == 1 else (b, a)
        if u.part != 1 or w.part != 2:
            report.add(f"{label}: edge {a}-{b} does not join the two parts")
            continue
        if u not in tree.vertices or w not in tree.vertices:
            report.add(f"{label}: edge {a}-{b} leaves the tree's vertex set")
            continue
        if not g.has_edge(u.index, w.index):
            report.add(f"{label}: edge {a}-{b} not present in the graph")
            continue
        if colouring.colour_of(u.index, w.index) is not tree.colour:
            report.add(f"{label}: edge {a}-{b} is not {tree.colour.token}")
            continue
        adjacency[u].append(w)
        adjacency[w].append(u)
    # Connectivity over the tree's own edges; with the edge count check
    # this certifies acyclicity as well.
    start = min(tree.vertices)
    seen = {start}
    stack = [start]
    while stack:
        for nxt in adjacency[stack.pop()]:
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    if len(seen) != len(tree.vertices):
        report.add(f"{label}: edges do not connect all vertices")


def validate_cover(g: BipartiteGraph, colouring: TwoColouring,
                   cover: TreeCover) -> ValidationReport:
    """Re-derive every TreeCover invariant from raw adjacency.

    Violations are report entries, not exceptions; an empty report means
    the cover is valid.
    """
    report = ValidationReport()
    for t, tree in enumerate(cover.trees):
        _check_tree(g, colouring, tree, f"tree {t}", report)
    groups = [tree.vertices for tree in cover.trees] + [cover.uncovered]
    names = [f"tree {t}" for t in range(len(cover.trees))] + ["uncovered"]
    for a in range(len(groups)):
        for b in range(a + 1, len(groups)):
            shared = groups[a] & groups[b]
            if shared:
                report.add(f"{names[a]} and {names[b]} share {sorted(shared)[0]}")
    covered: set[Vertex] = set()
    for grp in groups:
        covered |= grp
    everything = set(g.vertices())
    missing = everything - covered
    extra = covered - everything
    if missing:
        report.add(f"coverage: {len(missing)} vertices unaccounted, e.g. {sorted(missing)[0]}")
    if extra:
        report.add(f"coverage: {len(extra)} foreign vertices, e.g. {sorted(extra)[0]}")
    return report


def validate_partition(g: BipartiteGraph, colouring: TwoColouring,
                       partition: MonoPartition) -> ValidationReport:
    """Check disjointness, exact coverage, and per-part colour connectivity."""
    report = ValidationReport()
    seen: set[Vertex] = set()
    for k, (colour, part) in enumerate(partition.parts):
        if not part:
            report.add(f"part {k}: empty")
            continue
        for v in part:
            try:
                g.check_vertex(v)
            except InvalidArgumentError:
                report.add(f"part {k}: vertex {v} not in graph")
                return report
        overlap = seen & part
        if overlap:
            report.add(f"part {k} overlaps an earlier part at {sorted(overlap)[0]}")
        seen |= part
        m1, m2 = _vertex_masks(g, part)
        rows1, rows2 = colouring.layer_rows(colour)
        sub1 = tuple(rows1[i] & m2 if m1 >> i & 1 else 0 for i in range(g.n1))
        sub2 = tuple(rows2[j] & m1 if m2 >> j & 1 else 0 for j in range(g.n2))
        # Rows restricted to the part: components that touch the part lie
        # entirely inside it, everything else shows up as a foreign singleton.
        inside = [c for c in components_from_rows(g.n1, g.n2, sub1, sub2)
                  if (c[0] & m1) or (c[1] & m2)]
        if len(inside) != 1:
            report.add(f"part {k}: {len(inside)} {colour.token}-components, expected 1")
    missing = set(g.vertices()) - seen
    if missing:
        report.add(f"coverage: {len(missing)} vertices missing, e.g. {sorted(missing)[0]}")
    return report


def spanning_tree_of(g: BipartiteGraph, colouring: TwoColouring, colour: Colour,
                     vertices: Iterable[Vertex]) -> MonoTree:
    """Breadth-first spanning tree of ``vertices`` inside one colour's subgraph."""
    vset = frozenset(vertices)
    if not vset:
        raise InvalidArgumentError("cannot build a tree on no vertices")
    m1, m2 = _vertex_masks(g, vset)
    root = min(vset)
    reached1, reached2 = (1 << root.index, 0) if root.part == 1 else (0, 1 << root.index)
    frontier = [root]
    edges: list[tuple[Vertex, Vertex]] = []
    while frontier:
        nxt: list[Vertex] = []
        for v in frontier:
            inside = m2 if v.part == 1 else m1
            seen = reached2 if v.part == 1 else reached1
            fresh = colouring.coloured_row(v.part, v.index, colour) & inside & ~seen
            for idx in iter_bits(fresh):
                w = Vertex(2 if v.part == 1 else 1, idx)
                if v.part == 1:
                    reached2 |= 1 << idx
                    edges.append((v, w))
                else:
                    reached1 |= 1 << idx
                    edges.append((w, v))
                nxt.append(w)
        frontier = nxt
    if (reached1, reached2) != (m1, m2):
        raise NotConnectedError(
            f"vertex set is not connected in {colour.token}: "
            f"{(m1 & ~reached1).bit_count() + (m2 & ~reached2).bit_count()} unreachable")
    return MonoTree(colour, vset, tuple(edges))
