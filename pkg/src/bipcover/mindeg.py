"""Partition a dense 2-coloured balanced bipartite graph into at most
three monochromatic connected parts.

Requires minimum degree at least (13/16 + delta) * n.  Outline:

1. If no vertex is heavy in one of the colours (colour degree at least
   (9/16 + 3*delta/4) * n), the other colour's subgraph has minimum
   degree above n/4 and its components, of which there are at most
   three, already partition the graph.
2. Otherwise pick heavy roots of the two colours in opposite parts and
   carve a base set out of each root's neighbourhood.  The majority
   colour between the two bases orients everything below.
3. Jokers are minority-base vertices with many majority-coloured edges
   into the majority base.  The majority base is thinned to a small
   random sample (so that its part is mostly free for re-assignment),
   retried until every joker keeps majority edges into the sample.
4. Every remaining vertex on the sample's side prefers a colour in
   which it has many joker neighbours; joker preferences are drawn at
   random and retried until everyone keeps enough matching jokers.
5. The remaining vertices on the other side attach through whichever of
   the two preference classes grew large; if some vertex has no edge of
   that colour there, a relink set around it is re-randomised so that
   everybody can still pick a colour, at the cost of the majority class
   splitting into at most two connected parts.

Every probabilistic step verifies its matching condition and retries up
to ``retry_limit``; exhaustion raises PartitionFailureError rather than
ever returning an invalid partition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvalidArgumentError, PartitionFailureError
from .graph import (BLUE, RED, BipartiteGraph, Colour, MonoPartition,
                    TwoColouring, Vertex, components_from_rows, iter_bits,
                    vertex_set)
from .models import as_fraction
from .rng import RandomStream

SUBSAMPLE_CAP = Fraction(1, 25)  # keeps the sampled side mostly intact


@dataclass(frozen=True)
class PartitionParams:
    delta: Fraction
    subsample_p: Fraction | None = None  # default min(1/25, delta)
    retry_limit: int = 32
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "delta", as_fraction(self.delta))
        if not 0 < self.delta < Fraction(3, 16):
            raise InvalidArgumentError("delta must be in (0, 3/16)")
        sp = self.subsample_p
        sp = min(SUBSAMPLE_CAP, self.delta) if sp is None else as_fraction(sp)
        object.__setattr__(self, "subsample_p", sp)
        if not 0 < sp <= SUBSAMPLE_CAP:
            raise InvalidArgumentError(f"subsample probability must be in (0, {SUBSAMPLE_CAP}]")
        if self.retry_limit < 1:
            raise InvalidArgumentError("retry limit must be at least 1")


@dataclass
class PartitionState:
    """Decisions of one partition3 run, in absolute red/blue terms."""

    n: int
    delta: Fraction
    subsample_p: Fraction
    branch: str  # "one-colour", "two-parts", or "relink"
    heavy_red: frozenset[Vertex] = frozenset()
    heavy_blue: frozenset[Vertex] = frozenset()
    root_red: Vertex | None = None
    root_blue: Vertex | None = None
    base_red: frozenset[Vertex] = frozenset()
    base_blue: frozenset[Vertex] = frozenset()
    majority: Colour | None = None
    jokers: frozenset[Vertex] = frozenset()
    base_sample: frozenset[Vertex] = frozenset()
    bulk: frozenset[Vertex] = frozenset()
    bulk_red: frozenset[Vertex] = frozenset()
    bulk_blue: frozenset[Vertex] = frozenset()
    rest: frozenset[Vertex] = frozenset()
    second_root: Vertex | None = None
    relink: frozenset[Vertex] = frozenset()
    preference: dict[Vertex, Colour] = field(default_factory=dict)
    min_bulk_matches: int | None = None  # smallest per-bulk-vertex joker match count


def _lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def _lowest_k(mask: int, k: int) -> int:
    out = 0
    for idx in iter_bits(mask):
        if k == 0:
            break
        out |= 1 << idx
        k -= 1
    if k:
        raise PartitionFailureError("base-size", f"needed {k} more vertices than available")
    return out


class _Run:
    def __init__(self, g: BipartiteGraph, colouring: TwoColouring, params: PartitionParams):
        if g.n1 != g.n2:
            raise InvalidArgumentError("partition3 needs a balanced graph")
        self.g = g
        self.col = colouring
        self.params = params
        self.n = g.n1
        self.delta = params.delta
        self.rng = RandomStream(params.seed)
        need = (Fraction(13, 16) + self.delta) * self.n
        if g.min_degree() < need:
            raise InvalidArgumentError(
                f"minimum degree {g.min_degree()} below required {float(need):.2f}")

    def crow(self, part: int, idx: int, colour: Colour) -> int:
        return self.col.coloured_row(part, idx, colour)

    def full(self, part: int) -> int:
        return (1 << self.g.part_size(part)) - 1

    def run(self) -> tuple[MonoPartition, PartitionState]:
        n, delta = self.n, self.delta
        heavy_thr = (Fraction(9, 16) + 3 * delta / 4) * n
        heavy = {}
        for colour in (RED, BLUE):
            masks = []
            for part in (1, 2):
                m = 0
                for i in range(self.g.part_size(part)):
                    if self.crow(part, i, colour).bit_count() >= heavy_thr:
                        m |= 1 << i
                masks.append(m)
            heavy[colour] = (masks[0], masks[1])

        state = PartitionState(
            n=n, delta=delta, subsample_p=self.params.subsample_p, branch="one-colour",
            heavy_red=vertex_set(*heavy[RED]), heavy_blue=vertex_set(*heavy[BLUE]))

        for missing, keep in ((BLUE, RED), (RED, BLUE)):
            if heavy[missing] == (0, 0):
                return self._one_colour_partition(keep, state), state

        roots = self._pick_roots(heavy)
        if roots is None:
            raise PartitionFailureError(
                "opposite-roots", "both colours' heavy vertices lie in a single part")
        root_red, root_blue = roots
        state.root_red, state.root_blue = root_red, root_blue
        return self._deep(state, root_red, root_blue)

    def _one_colour_partition(self, colour: Colour,
                              state: PartitionState) -> MonoPartition:
        # With no heavy vertex in the other colour, this colour's degree
        # exceeds n/4 everywhere, which caps the component count at 3.
        rows1, rows2 = self.col.layer_rows(colour)
        floor = self.n // 4
        for part in (1, 2):
            rows = rows1 if part == 1 else rows2
            for i in range(self.g.part_size(part)):
                if 4 * rows[i].bit_count() <= self.n:
                    raise PartitionFailureError(
                        "one-colour-degree",
                        f"{colour.token}-degree of {part}:{i} is {rows[i].bit_count()}, "
                        f"not above n/4={floor}")
        comps = components_from_rows(self.g.n1, self.g.n2, rows1, rows2)
        if len(comps) > 3:
            raise PartitionFailureError(
                "one-colour-components", f"{len(comps)} components, expected at most 3")
        parts = tuple((colour, vertex_set(m1, m2)) for m1, m2 in comps)
        for colour_, part in parts:
            for v in part:
                state.preference[v] = colour_
        return MonoPartition(parts)

    def _pick_roots(self, heavy) -> tuple[Vertex, Vertex] | None:
        hr1, hr2 = heavy[RED]
        hb1, hb2 = heavy[BLUE]
        if hr1 and hb2:
            return Vertex(1, _lowest(hr1)), Vertex(2, _lowest(hb2))
        if hr2 and hb1:
            return Vertex(2, _lowest(hr2)), Vertex(1, _lowest(hb1))
        return None

    def _deep(self, state: PartitionState, root_red: Vertex,
              root_blue: Vertex) -> tuple[MonoPartition, PartitionState]:
        g, col, n, delta = self.g, self.col, self.n, self.delta
        retry = self.params.retry_limit

        base_size = int((Fraction(9, 16) + delta / 2) * n)
        nr = self.crow(root_red.part, root_red.index, RED) & ~(1 << root_blue.index)
        nb = self.crow(root_blue.part, root_blue.index, BLUE) & ~(1 << root_red.index)
        base_red_mask = _lowest_k(nr, base_size)    # on root_blue's part side
        base_blue_mask = _lowest_k(nb, base_size)   # on root_red's part side
        side_red_base = root_blue.part  # the side base_red lives on
        side_blue_base = root_red.part
        state.base_red = vertex_set(*((base_red_mask, 0) if side_red_base == 1
                                      else (0, base_red_mask)))
        state.base_blue = vertex_set(*((base_blue_mask, 0) if side_blue_base == 1
                                       else (0, base_blue_mask)))

        e_red = e_blue = 0
        for i in iter_bits(base_blue_mask):
            row = self.crow(side_blue_base, i, RED)
            e_red += (row & base_red_mask).bit_count()
            e_blue += (g.row(side_blue_base, i) & ~row & base_red_mask).bit_count()
        total_bound = (Fraction(3, 8) + delta) * n * base_size
        if e_red + e_blue < total_bound:
            raise PartitionFailureError(
                "base-edges", f"e(bases)={e_red + e_blue} below {float(total_bound):.1f}")
        maj = RED if e_red >= e_blue else BLUE
        maj_bound = (Fraction(3, 16) + delta / 2) * n * base_size
        if max(e_red, e_blue) < maj_bound:
            raise PartitionFailureError(
                "majority-edges", f"max colour count {max(e_red, e_blue)} "
                f"below {float(maj_bound):.1f}")
        state.majority = maj
        minr = maj.other

        # Orient: jokers sit in the minority root's base, the sample is
        # drawn from the majority root's base.
        if maj is RED:
            root_p, root_s = root_red, root_blue
            base_p, base_s = base_red_mask, base_blue_mask
            side_p_base, side_s_base = side_red_base, side_blue_base
        else:
            root_p, root_s = root_blue, root_red
            base_p, base_s = base_blue_mask, base_red_mask
            side_p_base, side_s_base = side_blue_base, side_red_base

        joker_thr = delta * n / 100
        jokers = 0
        for v in iter_bits(base_s):
            if (self.crow(side_s_base, v, maj) & base_p).bit_count() >= joker_thr:
                jokers |= 1 << v
        if jokers.bit_count() < Fraction(3, 16) * n:
            raise PartitionFailureError(
                "joker-count", f"{jokers.bit_count()} jokers, "
                f"below 3n/16={float(Fraction(3, 16) * n):.1f}")
        state.jokers = vertex_set(*((jokers, 0) if side_s_base == 1 else (0, jokers)))

        # Thin the majority base to a small random sample that every joker
        # still reaches in the majority colour.
        sp = self.params.subsample_p
        lo, hi = sp * n / 2, sp * n
        match_thr = delta * sp * n / 200
        sample = 0
        for attempt in range(retry):
            sample = 0
            for v in iter_bits(base_p):
                if self.rng.bernoulli(sp):
                    sample |= 1 << v
            if not lo <= sample.bit_count() <= hi:
                continue
            if all((self.crow(side_s_base, y, maj) & sample).bit_count() >= match_thr
                   for y in iter_bits(jokers)):
                break
        else:
            raise PartitionFailureError(
                "sample-retry", f"no draw in {retry} tries hit size "
                f"[{float(lo):.1f}, {float(hi):.1f}] with all jokers matched")
        state.base_sample = vertex_set(*((sample, 0) if side_p_base == 1
                                         else (0, sample)))

        # Everyone else on the sample's side picks the colour with more
        # joker neighbours (guaranteed at least delta*n/2 in one colour).
        bulk = self.full(side_p_base) & ~(1 << root_s.index) & ~sample
        bulk_choice: dict[int, Colour] = {}
        for w in iter_bits(bulk):
            cnt_p = (self.crow(side_p_base, w, maj) & jokers).bit_count()
            cnt_s = (self.crow(side_p_base, w, minr) & jokers).bit_count()
            if max(cnt_p, cnt_s) * 2 < delta * n:
                raise PartitionFailureError(
                    "bulk-choice", f"vertex {side_p_base}:{w} has only "
                    f"{max(cnt_p, cnt_s)} joker neighbours in its best colour")
            bulk_choice[w] = maj if cnt_p >= cnt_s else minr

        # Joker preference draw: every bulk vertex must keep enough
        # matching jokers of its chosen colour.
        match_floor = delta * n / 8
        jok_p = jok_s = 0
        min_matches = None
        for attempt in range(retry):
            jok_p = jok_s = 0
            for v in iter_bits(jokers):
                if self.rng.coin():
                    jok_p |= 1 << v
                else:
                    jok_s |= 1 << v
            min_matches = None
            ok = True
            for w, cw in bulk_choice.items():
                match = jok_p if cw is maj else jok_s
                cnt = (self.crow(side_p_base, w, cw) & match).bit_count()
                min_matches = cnt if min_matches is None else min(min_matches, cnt)
                if cnt < match_floor:
                    ok = False
                    break
            if ok:
                break
        else:
            raise PartitionFailureError(
                "joker-retry", f"some bulk vertex kept fewer than "
                f"{float(match_floor):.1f} matching jokers in {retry} draws")
        state.min_bulk_matches = min_matches

        bulk_p = 0
        bulk_s = 0
        for w, cw in bulk_choice.items():
            if cw is maj:
                bulk_p |= 1 << w
            else:
                bulk_s |= 1 << w
        pack_p_side = lambda m: (m, 0) if side_p_base == 1 else (0, m)  # noqa: E731
        state.bulk = vertex_set(*pack_p_side(bulk))
        state.bulk_red = vertex_set(*pack_p_side(bulk_p if maj is RED else bulk_s))
        state.bulk_blue = vertex_set(*pack_p_side(bulk_s if maj is RED else bulk_p))

        # The big preference class on the bulk side absorbs the leftover part.
        two_fifths = Fraction(2, 5) * n
        if bulk_s.bit_count() >= two_fifths:
            big_colour, big_mask = minr, bulk_s
        elif bulk_p.bit_count() >= two_fifths:
            big_colour, big_mask = maj, bulk_p
        else:
            raise PartitionFailureError(
                "bulk-split", f"neither preference class reached 0.4n "
                f"({bulk_p.bit_count()} vs {bulk_s.bit_count()})")

        rest = self.full(side_s_base) & ~(1 << root_p.index) & ~base_s
        state.rest = vertex_set(*((rest, 0) if side_s_base == 1 else (0, rest)))
        reach_bound = (Fraction(3, 16) + delta) * n
        for u in iter_bits(rest):
            if (g.row(side_s_base, u) & big_mask).bit_count() < reach_bound:
                raise PartitionFailureError(
                    "rest-degree", f"vertex {side_s_base}:{u} sees only "
                    f"{(g.row(side_s_base, u) & big_mask).bit_count()} of the big class")

        # preference assembly (absolute colours)
        prefs: dict[Vertex, Colour] = {root_p: maj, root_s: minr}
        for v in iter_bits(sample):
            prefs[Vertex(side_p_base, v)] = maj
        for v in iter_bits(base_s & ~jokers):
            prefs[Vertex(side_s_base, v)] = minr
        for v in iter_bits(jok_p):
            prefs[Vertex(side_s_base, v)] = maj
        for v in iter_bits(jok_s):
            prefs[Vertex(side_s_base, v)] = minr
        for w, cw in bulk_choice.items():
            prefs[Vertex(side_p_base, w)] = cw
        # note: base_p minus the sample is part of the bulk, already chosen

        stuck = None
        for u in iter_bits(rest):
            if not self.crow(side_s_base, u, big_colour) & big_mask:
                stuck = u
                break

        if stuck is None:
            for u in iter_bits(rest):
                prefs[Vertex(side_s_base, u)] = big_colour
            state.branch = "two-parts"
            state.preference = prefs
            partition = self._assemble(prefs, {RED: 1, BLUE: 1})
            return partition, state

        # Some vertex has no big-colour edge into the big class: rewire a
        # relink set around it so every leftover vertex can still choose.
        state.branch = "relink"
        other_colour = big_colour.other
        u0 = Vertex(side_s_base, stuck)
        state.second_root = u0
        relink_size = int((Fraction(3, 16) + delta) * n)
        relink_pool = self.crow(side_s_base, stuck, other_colour) & big_mask
        relink = _lowest_k(relink_pool, relink_size)
        state.relink = vertex_set(*pack_p_side(relink))

        rest_choice: dict[int, Colour] = {}
        for u in iter_bits(rest):
            cnt_other = (self.crow(side_s_base, u, other_colour) & relink).bit_count()
            cnt_big = (self.crow(side_s_base, u, big_colour) & relink).bit_count()
            if cnt_other + cnt_big < 2 * delta * n:
                raise PartitionFailureError(
                    "relink-degree", f"vertex {side_s_base}:{u} sees only "
                    f"{cnt_other + cnt_big} relink vertices")
            if max(cnt_other, cnt_big) < delta * n:
                raise PartitionFailureError(
                    "relink-choice", f"vertex {side_s_base}:{u} has no colour with "
                    f"{float(delta * n):.1f} relink neighbours")
            rest_choice[u] = other_colour if cnt_other >= cnt_big else big_colour

        relink_other = relink_big = 0
        half_floor = delta * n / 2
        for attempt in range(retry):
            relink_other = relink_big = 0
            for v in iter_bits(relink):
                if self.rng.coin():
                    relink_other |= 1 << v
                else:
                    relink_big |= 1 << v
            ok = True
            for u, cu in rest_choice.items():
                match = relink_other if cu is other_colour else relink_big
                if (self.crow(side_s_base, u, cu) & match).bit_count() < half_floor:
                    ok = False
                    break
            if ok:
                break
        else:
            raise PartitionFailureError(
                "relink-retry", f"some leftover vertex kept fewer than "
                f"{float(half_floor):.1f} matching relink vertices in {retry} draws")

        for v in iter_bits(relink_other):
            prefs[Vertex(side_p_base, v)] = other_colour
        for v in iter_bits(relink_big):
            prefs[Vertex(side_p_base, v)] = big_colour
        for u, cu in rest_choice.items():
            prefs[Vertex(side_s_base, u)] = cu
        state.preference = prefs
        partition = self._assemble(prefs, {other_colour: 2, big_colour: 1})
        return partition, state

    def _assemble(self, prefs: dict[Vertex, Colour],
                  allowed: dict[Colour, int]) -> MonoPartition:
        """Split each preference class into its colour components and check
        the component counts the construction promises."""
        g = self.g
        parts = []
        for colour in (RED, BLUE):
            m1 = m2 = 0
            for v, c in prefs.items():
                if c is colour:
                    if v.part == 1:
                        m1 |= 1 << v.index
                    else:
                        m2 |= 1 << v.index
            if not (m1 | m2):
                continue
            rows1, rows2 = self.col.layer_rows(colour)
            sub1 = tuple(rows1[i] & m2 if m1 >> i & 1 else 0 for i in range(g.n1))
            sub2 = tuple(rows2[j] & m1 if m2 >> j & 1 else 0 for j in range(g.n2))
            comps = [c_ for c_ in components_from_rows(g.n1, g.n2, sub1, sub2)
                     if (c_[0] & m1) or (c_[1] & m2)]
            if len(comps) > allowed[colour]:
                raise PartitionFailureError(
                    "connectivity", f"{colour.token}-preference class spans "
                    f"{len(comps)} components, expected at most {allowed[colour]}")
            parts.extend((colour, vertex_set(c1, c2)) for c1, c2 in comps)
        if len(parts) > 3:
            raise PartitionFailureError("part-count", f"{len(parts)} parts")
        return MonoPartition(tuple(parts))


def partition3(g: BipartiteGraph, colouring: TwoColouring,
               params: PartitionParams) -> tuple[MonoPartition, PartitionState]:
    """Partition V(G) into at most three monochromatic connected parts.

    Precondition: balanced parts and minimum degree at least
    (13/16 + delta) * n, checked on entry.  Raises
    PartitionFailureError when a claimed bound fails at this scale or a
    randomised step exhausts its retries; never returns an invalid
    partition.
    """
    return _Run(g, colouring, params).run()


def audit_partition_state(state: PartitionState, g: BipartiteGraph,
                          colouring: TwoColouring,
                          params: PartitionParams):
    """Measured values against the construction's claimed bounds."""
    from .cover import AuditEntry, AuditReport  # shared report shape

    report = AuditReport()
    n, delta = state.n, state.delta

    def add(name, measured, bound, satisfied):
        report.entries.append(AuditEntry(name, measured, bound, satisfied))

    deep = state.majority is not None
    if deep:
        maj = state.majority
        red_base_mask = 0
        for w in state.base_red:
            red_base_mask |= 1 << w.index
        e_total = e_maj = 0
        for v in state.base_blue:  # opposite side of base_red by construction
            e_total += (g.row(v.part, v.index) & red_base_mask).bit_count()
            e_maj += (colouring.coloured_row(v.part, v.index, maj)
                      & red_base_mask).bit_count()
        size = len(state.base_red)
        add("base-edges", e_total, float((Fraction(3, 8) + delta) * n * size),
            Fraction(e_total) >= (Fraction(3, 8) + delta) * n * size)
        add("majority-base-edges", e_maj,
            float((Fraction(3, 16) + delta / 2) * n * size),
            Fraction(e_maj) >= (Fraction(3, 16) + delta / 2) * n * size)
        add("joker-count", len(state.jokers), float(Fraction(3, 16) * n),
            Fraction(len(state.jokers)) >= Fraction(3, 16) * n)
        sp = state.subsample_p
        sample_size = len(state.base_sample)
        add("sample-size", sample_size, float(sp * n),
            sp * n / 2 <= sample_size <= sp * n)
        add("bulk-matches", state.min_bulk_matches, float(delta * n / 8),
            None if state.min_bulk_matches is None
            else Fraction(state.min_bulk_matches) >= delta * n / 8)
    else:
        for name in ("base-edges", "majority-base-edges", "joker-count",
                     "sample-size", "bulk-matches"):
            add(name, None, None, None)
    return report
