"""Critical site percolation with two-arc boundary conditions.

Hexagons are coloured blue/yellow uniformly at random.  Virtual hexagons
along the clockwise boundary arc from the first marked midpoint to the
second are blue, those along the counterclockwise arc yellow (the outer
colour is carried per boundary *side*, and the two marked sides carry one
colour per half-side, so the rule is well defined for concave domains too).
The mismatch edges of a coloring then form a single open broken line joining
the marked midpoints, the interface, plus disjoint loops.

This module is the readable reference implementation; the batched Monte
Carlo and enumeration drivers live in :mod:`hexperc.engine` on top of
compiled kernels and are cross-checked against this one in the tests.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .hexgrid import HexDomain, Midpoint, NotOnBoundary

BLUE = 1
YELLOW = 0
INTERIOR = 2  # outer-colour placeholder for interior sides


class OutOfDomain(Exception):
    """A marked point lies outside the lattice approximation."""


class Outcome(enum.Enum):
    LEFT_TOGETHER = "left"
    RIGHT_TOGETHER = "right"
    NEITHER = "neither"


@dataclass
class Coloring:
    """One blue/yellow assignment per hexagon; True means blue."""

    bits: np.ndarray

    def __post_init__(self):
        self.bits = np.asarray(self.bits, dtype=bool)

    def packed(self) -> int:
        return int(sum(1 << i for i, b in enumerate(self.bits) if b))

    @classmethod
    def from_packed(cls, value: int, n: int) -> "Coloring":
        return cls(np.array([(value >> i) & 1 for i in range(n)], dtype=bool))

    def swapped(self) -> "Coloring":
        return Coloring(~self.bits)


def sample_coloring(dom: HexDomain, rng: np.random.Generator) -> Coloring:
    """Each hexagon independently blue with probability 1/2."""
    return Coloring(rng.integers(0, 2, size=dom.n_cells, dtype=np.uint8).astype(bool))


@dataclass(frozen=True)
class DobrushinMarks:
    """Derived data for one placement of the interface endpoints a, b."""

    sa: int
    sb: int
    outer: np.ndarray          # (S,) uint8: BLUE/YELLOW for boundary sides, INTERIOR else
    ha_yellow: int             # half of side sa adjacent to the yellow arc
    ha_blue: int
    hb_yellow: int
    hb_blue: int
    cell_a: int                # domain hexagon carrying midpoint a
    cell_b: int

    @classmethod
    def build(cls, dom: HexDomain, a: Midpoint, b: Midpoint) -> "DobrushinMarks":
        t = dom.tables
        sa, sb = a.index, b.index
        if sa == sb:
            raise ValueError("marked midpoints must be distinct")
        pos = dom.side_cycle_pos
        if pos[sa] < 0 or pos[sb] < 0:
            raise NotOnBoundary("interface endpoints must lie on the boundary cycle")
        m = len(dom.cycle_sides)
        ia, ib = int(pos[sa]), int(pos[sb])
        dab = (ib - ia) % m
        outer = np.full(t.n_sides, INTERIOR, dtype=np.uint8)
        for s in dom.cycle_sides:
            d = (int(pos[s]) - ia) % m
            if 0 < d < dab:
                outer[s] = YELLOW      # counterclockwise arc a -> b
            elif d > dab:
                outer[s] = BLUE        # clockwise arc a -> b

        def half_at(s: int, vert: int) -> int:
            return 2 * s if t.side_vA[s] == vert else 2 * s + 1

        ha_yellow = half_at(sa, int(dom.bnd_next_vert[sa]))
        ha_blue = half_at(sa, int(dom.bnd_prev_vert[sa]))
        hb_yellow = half_at(sb, int(dom.bnd_prev_vert[sb]))
        hb_blue = half_at(sb, int(dom.bnd_next_vert[sb]))
        cell_a = int(t.side_c0[sa]) if t.side_c0[sa] >= 0 else int(t.side_c1[sa])
        cell_b = int(t.side_c0[sb]) if t.side_c0[sb] >= 0 else int(t.side_c1[sb])
        return cls(sa, sb, outer, ha_yellow, ha_blue, hb_yellow, hb_blue, cell_a, cell_b)


def mismatch_sides(dom: HexDomain, marks: DobrushinMarks, coloring: Coloring) -> np.ndarray:
    """Per-side colour-change indicator; the two marked sides are handled per half."""
    t = dom.tables
    bits = coloring.bits
    mism = np.zeros(t.n_sides, dtype=bool)
    for s in range(t.n_sides):
        c0, c1 = int(t.side_c0[s]), int(t.side_c1[s])
        if s == marks.sa or s == marks.sb:
            continue
        if c0 >= 0 and c1 >= 0:
            mism[s] = bits[c0] != bits[c1]
        else:
            cell = c0 if c0 >= 0 else c1
            mism[s] = int(bits[cell]) != int(marks.outer[s])
    return mism


def make_member(dom: HexDomain, marks: DobrushinMarks, coloring: Coloring, gamma: set[int] | None = None):
    """Membership test over half-sides for the loop configuration of a coloring.

    With ``gamma`` given, membership is XOR-ed with the reference broken line,
    yielding the four-disorder configuration.
    """
    mism = mismatch_sides(dom, marks, coloring)
    ha_sel = marks.ha_yellow if coloring.bits[marks.cell_a] else marks.ha_blue
    hb_sel = marks.hb_yellow if coloring.bits[marks.cell_b] else marks.hb_blue
    gamma = gamma or set()

    def member(h: int) -> bool:
        s = h >> 1
        if s == marks.sa:
            base = h == ha_sel
        elif s == marks.sb:
            base = h == hb_sel
        else:
            base = bool(mism[s])
        return base != (h in gamma)

    member.start_half = ha_sel  # type: ignore[attr-defined]
    return member


@dataclass
class BrokenLine:
    """An open broken line traversed midpoint-to-midpoint through half-sides."""

    start_side: int
    end_side: int
    half_ids: list[int]
    vertices: list[int]
    full_sides: list[int]
    full_dirs: list[int]       # +1 when the side was crossed vA -> vB
    start_dir: int
    end_dir: int

    @cached_property
    def half_set(self) -> frozenset[int]:
        return frozenset(self.half_ids)

    @cached_property
    def vert_set(self) -> frozenset[int]:
        return frozenset(self.vertices)

    @cached_property
    def mid_side_set(self) -> frozenset[int]:
        return frozenset(self.full_sides) | {self.start_side, self.end_side}

    def tag_records(self):
        yield self.start_side, self.start_dir
        yield from zip(self.full_sides, self.full_dirs)
        yield self.end_side, self.end_dir

    @property
    def n_half_sides(self) -> int:
        return len(self.half_ids)


def walk_line(dom: HexDomain, member, start_side: int, start_half: int) -> BrokenLine:
    """Follow a broken line of the configuration from a degree-one midpoint.

    At a midpoint the line continues through the partner half of the same
    side; at a vertex exactly one other member half must be incident.
    """
    t = dom.tables
    halves = [start_half]
    verts: list[int] = []
    full_sides: list[int] = []
    full_dirs: list[int] = []
    w = int(t.side_vA[start_side]) if start_half == 2 * start_side else int(t.side_vB[start_side])
    start_dir = 1 if start_half == 2 * start_side + 1 else -1
    cur = start_half
    limit = 2 * t.n_sides + 2
    for _ in range(limit):
        verts.append(w)
        nxt = -1
        for h2 in t.vert_hs[w]:
            h2 = int(h2)
            if h2 >= 0 and h2 != cur and member(h2):
                if nxt >= 0:
                    raise AssertionError("three configuration halves at one vertex")
                nxt = h2
        if nxt < 0:
            raise AssertionError("broken line dead-ends at a vertex")
        halves.append(nxt)
        s2 = nxt >> 1
        partner = nxt ^ 1
        if member(partner):
            d = 1 if w == int(t.side_vA[s2]) else -1
            full_sides.append(s2)
            full_dirs.append(d)
            halves.append(partner)
            cur = partner
            w = int(t.side_vB[s2]) if w == int(t.side_vA[s2]) else int(t.side_vA[s2])
        else:
            end_dir = 1 if w == int(t.side_vA[s2]) else -1
            return BrokenLine(start_side, s2, halves, verts, full_sides, full_dirs, start_dir, end_dir)
    raise AssertionError("broken line failed to terminate")


@dataclass
class InterfacePath:
    """The oriented exploration path from a to b: blue on its left, yellow on its right."""

    dom: HexDomain
    a: Midpoint
    b: Midpoint
    line: BrokenLine

    @property
    def half_sides(self) -> list[int]:
        return self.line.half_ids

    @property
    def n_half_sides(self) -> int:
        return len(self.line.half_ids)

    def point_list(self) -> list[complex]:
        """Vertex/midpoint positions along the path, in traversal order."""
        from .hexgrid import exact_to_complex

        t = self.dom.tables
        d = self.dom.delta
        pts = [self.dom.midpoint(self.line.start_side).position]
        for i, w in enumerate(self.line.vertices):
            pts.append(exact_to_complex(int(t.vert_x4[w]), int(t.vert_y4[w]), d))
            if i < len(self.line.full_sides):
                pts.append(self.dom.midpoint(self.line.full_sides[i]).position)
        pts.append(self.dom.midpoint(self.line.end_side).position)
        return pts


def trace_interface(dom: HexDomain, coloring: Coloring, a: Midpoint, b: Midpoint) -> InterfacePath:
    marks = DobrushinMarks.build(dom, a, b)
    member = make_member(dom, marks, coloring)
    line = walk_line(dom, member, marks.sa, member.start_half)
    if line.end_side != marks.sb:
        raise AssertionError("interface did not terminate at b")
    return InterfacePath(dom, a, b, line)


# -- complement structure ---------------------------------------------------

LEFT = 1
RIGHT = 2


def region_fill(dom: HexDomain, line: BrokenLine) -> tuple[np.ndarray, dict[int, int]]:
    """Connected hexagon regions of the complement of a broken line, with side tags.

    Two hexagons are in one region when their shared side is not part of the
    line; a region is tagged by which side of the oriented line it borders.
    """
    t = dom.tables
    blocked = set(line.full_sides)
    region = np.full(t.n_cells, -1, dtype=np.int64)
    nreg = 0
    for seed in range(t.n_cells):
        if region[seed] >= 0:
            continue
        region[seed] = nreg
        stack = [seed]
        while stack:
            i = stack.pop()
            for k in range(6):
                s = int(t.cell_nbr_side[i, k])
                nb = int(t.cell_nbr_cell[i, k])
                if nb < 0 or region[nb] >= 0 or s in blocked:
                    continue
                region[nb] = nreg
                stack.append(nb)
        nreg += 1
    tags: dict[int, int] = {}
    for s, d in line.tag_records():
        lc = int(t.left_cell_AB[s]) if d > 0 else int(t.right_cell_AB[s])
        rc = int(t.right_cell_AB[s]) if d > 0 else int(t.left_cell_AB[s])
        for cell, tag in ((lc, LEFT), (rc, RIGHT)):
            if cell < 0:
                continue
            r = int(region[cell])
            if tags.setdefault(r, tag) != tag:
                raise AssertionError("complement region borders the line from both sides")
    return region, tags


def component_fill(dom: HexDomain, line: BrokenLine) -> np.ndarray:
    """Component id per half-side of the side complex minus the line.

    Adjacency through a midpoint or vertex of the line is refused; half-sides
    of the line itself get component -1.
    """
    t = dom.tables
    n_half = 2 * t.n_sides
    comp = np.full(n_half, -2, dtype=np.int64)
    for h in line.half_set:
        comp[h] = -1
    ncomp = 0
    for seed in range(n_half):
        if comp[seed] != -2:
            continue
        comp[seed] = ncomp
        stack = [seed]
        while stack:
            h = stack.pop()
            s = h >> 1
            partner = h ^ 1
            if s not in line.mid_side_set and comp[partner] == -2:
                comp[partner] = ncomp
                stack.append(partner)
            w = int(t.side_vA[s]) if h == 2 * s else int(t.side_vB[s])
            if w not in line.vert_set:
                for h2 in t.vert_hs[w]:
                    h2 = int(h2)
                    if h2 >= 0 and comp[h2] == -2:
                        comp[h2] = ncomp
                        stack.append(h2)
        ncomp += 1
    return comp


def hex_beside(dom: HexDomain, side: int) -> int:
    t = dom.tables
    return int(t.side_c0[side]) if t.side_c0[side] >= 0 else int(t.side_c1[side])


@dataclass(frozen=True)
class SideComponents:
    """Components of the side complex minus the interface, with side tags.

    ``component`` holds one id per half-side (-1 on the interface itself);
    ``tag`` maps a component id to LEFT or RIGHT.
    """

    component: np.ndarray
    tag: dict[int, int]


def side_components(dom: HexDomain, interface: InterfacePath) -> SideComponents:
    line = interface.line
    comp = component_fill(dom, line)
    region, region_tags = region_fill(dom, line)
    tags: dict[int, int] = {}
    for h, c in enumerate(comp):
        if c < 0 or int(c) in tags:
            continue
        tags[int(c)] = region_tags[int(region[hex_beside(dom, h >> 1)])]
    return SideComponents(comp, tags)


def split_components(
    dom: HexDomain, coloring: Coloring, interface: InterfacePath, u: Midpoint, v: Midpoint
) -> Outcome:
    """Classify whether u and v share a complement component, and its side.

    Points lying on the interface belong to no component and give NEITHER,
    as do points in different components.
    """
    line = interface.line
    if u.index in line.mid_side_set or v.index in line.mid_side_set:
        return Outcome.NEITHER
    if u.index != v.index:
        comp = component_fill(dom, line)
        if comp[2 * u.index] != comp[2 * v.index]:
            return Outcome.NEITHER
    region, tags = region_fill(dom, line)
    tag = tags.get(int(region[hex_beside(dom, u.index)]))
    if tag is None:
        raise AssertionError("component region is not tagged")
    return Outcome.LEFT_TOGETHER if tag == LEFT else Outcome.RIGHT_TOGETHER
