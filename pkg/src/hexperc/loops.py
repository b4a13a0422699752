"""Loop configurations, link patterns, and the exact interface observable.

A coloring's colour-change edges form a loop configuration with two open
ends at the marked boundary midpoints a, b.  Taking the symmetric difference
with a fixed reference broken line joining two further midpoints u, v turns
it into a configuration with four open ends; the map is a bijection, so
exhaustive enumeration of colorings counts configurations per link pattern
exactly.  The observable is stored as a pair of integers (A, B) over the
denominator 2^n, encoding (A + i*sqrt(3)*B) / 2^n: A collects the pairing
counts, B the left/right counts, and every structural identity below holds
at the integer level with zero tolerance.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import sqrt

import numpy as np

from .hexgrid import HexDomain, Midpoint
from .percolation import (
    LEFT,
    BrokenLine,
    Coloring,
    DobrushinMarks,
    hex_beside,
    make_member,
    region_fill,
    walk_line,
)

SQRT3 = sqrt(3.0)

ENUMERATION_CAP = 24


class TooLarge(Exception):
    """Domain exceeds the exhaustive-enumeration cap."""


class NoPath(Exception):
    """No reference broken line exists between the requested midpoints."""


class LinkPattern(enum.Enum):
    AU_BV = "au_bv"
    AV_BU = "av_bu"
    AB_UV_LEFT = "ab_uv_left"
    AB_UV_RIGHT = "ab_uv_right"


@dataclass(frozen=True)
class LoopConfig:
    """A set of half-sides forming disjoint broken lines, open at the disorders."""

    half_sides: frozenset[int]
    disorders: tuple[int, ...]  # side indices of the degree-one midpoints

    def degree_check(self, dom: HexDomain) -> None:
        t = dom.tables
        mid_deg = np.zeros(t.n_sides, dtype=int)
        vert_deg = np.zeros(t.n_verts, dtype=int)
        for h in self.half_sides:
            s = h >> 1
            mid_deg[s] += 1
            w = int(t.side_vA[s]) if h == 2 * s else int(t.side_vB[s])
            vert_deg[w] += 1
        for s in range(t.n_sides):
            want = 1 if s in self.disorders else None
            if want is None and mid_deg[s] not in (0, 2):
                raise AssertionError(f"midpoint degree {mid_deg[s]} at side {s}")
            if want is not None and mid_deg[s] != want:
                raise AssertionError(f"disorder degree {mid_deg[s]} at side {s}")
        for w in range(t.n_verts):
            if vert_deg[w] not in (0, 2):
                raise AssertionError(f"vertex degree {vert_deg[w]} at vertex {w}")


@dataclass(frozen=True)
class ObservableValue:
    """Exact value (A + i*sqrt(3)*B) / 2^n of the interface observable."""

    A: int
    B: int
    n: int

    @property
    def value(self) -> complex:
        scale = 0.5**self.n
        return complex(self.A * scale, SQRT3 * self.B * scale)

    @property
    def real_fraction(self) -> Fraction:
        return Fraction(self.A, 2**self.n)

    @property
    def imag_sqrt3_fraction(self) -> Fraction:
        """Coefficient of i*sqrt(3), as an exact fraction."""
        return Fraction(self.B, 2**self.n)


@dataclass(frozen=True)
class PatternCounts:
    """Exhaustive link-pattern counts for one placement of (a, b, u, v)."""

    c_au_bv: int
    c_av_bu: int
    c_left: int
    c_right: int
    n: int

    @property
    def total(self) -> int:
        return self.c_au_bv + self.c_av_bu + self.c_left + self.c_right

    @property
    def observable(self) -> ObservableValue:
        return ObservableValue(self.c_av_bu - self.c_au_bv, self.c_left - self.c_right, self.n)


def edge_set_of_coloring(dom: HexDomain, coloring: Coloring, a: Midpoint, b: Midpoint) -> LoopConfig:
    """All half-sides separating differently coloured hexagons (halo included)."""
    marks = DobrushinMarks.build(dom, a, b)
    member = make_member(dom, marks, coloring)
    halves = frozenset(h for h in range(2 * dom.tables.n_sides) if member(h))
    return LoopConfig(halves, (a.index, b.index))


def reference_path(
    dom: HexDomain, u: Midpoint, v: Midpoint, forbidden: tuple[Midpoint, Midpoint]
) -> list[int]:
    """Deterministic shortest broken line from u to v avoiding the midpoints a, b.

    The unordered pair (u, v) is canonicalised first so that both orders give
    the same geometric path; returns the ordered list of half-sides.
    """
    if u.index == v.index:
        raise ValueError("reference path endpoints must be distinct")
    t = dom.tables
    lo, hi = sorted((u.index, v.index))
    banned = {m.index for m in forbidden}
    if lo in banned or hi in banned:
        raise ValueError("reference path endpoints collide with the interface marks")

    # nodes: midpoints 0..S-1, vertices S..S+V-1; edges are half-sides
    S = t.n_sides
    n_nodes = S + t.n_verts

    def node_edges(node: int):
        if node < S:
            if node in banned:
                return
            yield 2 * node
            yield 2 * node + 1
        else:
            for h in t.vert_hs[node - S]:
                if h >= 0:
                    yield int(h)

    def other_end(node: int, h: int) -> int:
        s = h >> 1
        w = int(t.side_vA[s]) if h == 2 * s else int(t.side_vB[s])
        return S + w if node < S else s

    parent_edge = np.full(n_nodes, -1, dtype=np.int64)
    parent_node = np.full(n_nodes, -1, dtype=np.int64)
    seen = np.zeros(n_nodes, dtype=bool)
    seen[lo] = True
    queue = deque([lo])
    while queue:
        node = queue.popleft()
        if node == hi:
            break
        for h in sorted(node_edges(node)):
            nxt = other_end(node, h)
            if nxt < S and nxt in banned and nxt != hi:
                continue
            if not seen[nxt]:
                seen[nxt] = True
                parent_edge[nxt] = h
                parent_node[nxt] = node
                queue.append(nxt)
    if not seen[hi]:
        raise NoPath("midpoints are disconnected once the marks are removed")
    path = []
    node = hi
    while node != lo:
        path.append(int(parent_edge[node]))
        node = int(parent_node[node])
    path.reverse()
    return path


def loop_config_with_four_disorders(
    dom: HexDomain,
    coloring: Coloring,
    a: Midpoint,
    b: Midpoint,
    u: Midpoint,
    v: Midpoint,
    gamma: list[int] | None = None,
) -> LoopConfig:
    """Symmetric difference of the coloring's edge set with the u-v reference line."""
    if len({a.index, b.index, u.index, v.index}) != 4:
        raise ValueError("the four disorders must be pairwise distinct")
    if gamma is None:
        gamma = reference_path(dom, u, v, (a, b))
    base = edge_set_of_coloring(dom, coloring, a, b)
    halves = frozenset(base.half_sides ^ frozenset(gamma))
    return LoopConfig(halves, (a.index, b.index, u.index, v.index))


def _walk_from(dom: HexDomain, halves: frozenset[int], start_side: int) -> BrokenLine:
    start = [h for h in (2 * start_side, 2 * start_side + 1) if h in halves]
    if len(start) != 1:
        raise AssertionError("walk must start at a degree-one midpoint")
    return walk_line(dom, lambda h: h in halves, start_side, start[0])


def classify_link_pattern(
    dom: HexDomain, cfg: LoopConfig, a: Midpoint, b: Midpoint, u: Midpoint, v: Midpoint
) -> LinkPattern:
    """Pair up the open ends of the configuration; for the a-b pairing, decide
    which side of the oriented a-b line the u-v line lies on."""
    line = _walk_from(dom, cfg.half_sides, a.index)
    if line.end_side == u.index:
        return LinkPattern.AU_BV
    if line.end_side == v.index:
        return LinkPattern.AV_BU
    if line.end_side != b.index:
        raise AssertionError("open line from a must end at b, u or v")
    region, tags = region_fill(dom, line)
    tag = tags.get(int(region[hex_beside(dom, u.index)]))
    if tag is None:
        raise AssertionError("u-v line region is untagged")
    return LinkPattern.AB_UV_LEFT if tag == LEFT else LinkPattern.AB_UV_RIGHT


# -- exhaustive enumeration (reference path; compiled drivers in engine.py) --


def _check_cap(dom: HexDomain, cap: int):
    if dom.n_cells > cap:
        raise TooLarge(f"{dom.n_cells} hexagons exceed the enumeration cap {cap}")


def pattern_counts_python(
    dom: HexDomain, a: Midpoint, b: Midpoint, u: Midpoint, v: Midpoint, cap: int = ENUMERATION_CAP
) -> PatternCounts:
    """Link-pattern counts over all colorings, via the per-coloring bijection."""
    _check_cap(dom, cap)
    gamma = reference_path(dom, u, v, (a, b))
    counts = {p: 0 for p in LinkPattern}
    n = dom.n_cells
    for value in range(1 << n):
        col = Coloring.from_packed(value, n)
        cfg = loop_config_with_four_disorders(dom, col, a, b, u, v, gamma=gamma)
        counts[classify_link_pattern(dom, cfg, a, b, u, v)] += 1
    return PatternCounts(
        counts[LinkPattern.AU_BV],
        counts[LinkPattern.AV_BU],
        counts[LinkPattern.AB_UV_LEFT],
        counts[LinkPattern.AB_UV_RIGHT],
        n,
    )


def point_side_counts_python(
    dom: HexDomain, a: Midpoint, b: Midpoint, u: Midpoint, cap: int = ENUMERATION_CAP
) -> tuple[int, int, int]:
    """(left, right, on-interface) counts of the single midpoint u over all colorings."""
    from .percolation import Outcome, split_components, trace_interface

    _check_cap(dom, cap)
    n = dom.n_cells
    n_left = n_right = n_on = 0
    for value in range(1 << n):
        col = Coloring.from_packed(value, n)
        path = trace_interface(dom, col, a, b)
        out = split_components(dom, col, path, u, u)
        if out is Outcome.LEFT_TOGETHER:
            n_left += 1
        elif out is Outcome.RIGHT_TOGETHER:
            n_right += 1
        else:
            n_on += 1
    return n_left, n_right, n_on


def observable_exact(
    dom: HexDomain,
    a: Midpoint,
    b: Midpoint,
    u: Midpoint,
    v: Midpoint,
    cap: int = ENUMERATION_CAP,
    engine: str = "kernel",
) -> ObservableValue:
    """Exact observable by exhaustive enumeration of all 2^n colorings."""
    _check_cap(dom, cap)
    if u.index == v.index:
        if engine == "python":
            nl, nr, _ = point_side_counts_python(dom, a, b, u, cap=cap)
        else:
            from .engine import point_side_counts_exhaustive

            nl, nr, _ = point_side_counts_exhaustive(dom, a, b, u)
        return ObservableValue(0, nl - nr, dom.n_cells)
    if engine == "python":
        return pattern_counts_python(dom, a, b, u, v, cap=cap).observable
    from .engine import pattern_counts_exhaustive

    return pattern_counts_exhaustive(dom, a, b, u, v).observable


# -- exact residual arithmetic ------------------------------------------------
#
# Points are (delta/4) * (x4 + i*sqrt(3)*y4); observable values are
# (A + i*sqrt(3)*B) / 2^n.  Products therefore live in the module
# Z + i*sqrt(3)*Z up to the common positive factor delta / (4 * 2^n), and
# sums can be tested against zero in integer arithmetic.


def _mul_point_value(sx: int, ty: int, A: int, B: int) -> tuple[int, int]:
    """(sx + i*sqrt(3)*ty) * (A + i*sqrt(3)*B) as (real, i*sqrt(3)) integers."""
    return sx * A - 3 * ty * B, sx * B + ty * A


@dataclass(frozen=True)
class ObservableTable:
    """Exact observable values u -> (A, B) for one fixed (a, b, v)."""

    a_side: int
    b_side: int
    v_side: int
    n: int
    entries: dict[int, tuple[int, int]]  # side index -> (A, B)

    def value(self, side: int) -> ObservableValue:
        A, B = self.entries[side]
        return ObservableValue(A, B, self.n)


def discrete_analyticity_residual(
    dom: HexDomain, table: ObservableTable, vertex: int
) -> tuple[int, int]:
    """Exact residual of the three-midpoint relation around an interior vertex.

    Returns integers (re, im3) meaning (re + i*sqrt(3)*im3) * delta/(4*2^n);
    both vanish for a correct table.
    """
    t = dom.tables
    cells = dom.vert_cells[vertex]
    if any(c < 0 for c in cells):
        raise ValueError("analyticity residual requires an interior vertex")
    re = im = 0
    for s in dom.vert_sides[vertex]:
        s = int(s)
        A, B = table.entries[s]
        sx = int(t.side_mx4[s]) - int(t.vert_x4[vertex])
        ty = int(t.side_my4[s]) - int(t.vert_y4[vertex])
        dre, dim = _mul_point_value(sx, ty, A, B)
        re += dre
        im += dim
    return re, im


def contour_integral(
    dom: HexDomain, table: ObservableTable, contour_cells: list[int]
) -> tuple[int, int]:
    """Discrete integral of the observable along a closed cell-centre contour.

    ``contour_cells`` lists hexagon indices; consecutive cells (cyclically)
    must share a side.  Returns exact integers as in the residual.
    """
    t = dom.tables
    m = len(contour_cells)
    if m < 3:
        raise ValueError("contour needs at least three cells")
    re = im = 0
    for j in range(m):
        i0 = contour_cells[j]
        i1 = contour_cells[(j + 1) % m]
        side = -1
        for k in range(6):
            if int(t.cell_nbr_cell[i0, k]) == i1:
                side = int(t.cell_nbr_side[i0, k])
                break
        if side < 0:
            raise ValueError("consecutive contour cells must share a side")
        A, B = table.entries[side]
        sx = int(t.cell_x4[i1]) - int(t.cell_x4[i0])
        ty = int(t.cell_y4[i1]) - int(t.cell_y4[i0])
        dre, dim = _mul_point_value(sx, ty, A, B)
        re += dre
        im += dim
    return re, im


def triangle_contour(dom: HexDomain, vertex: int) -> list[int]:
    """The three cells around an interior vertex, counterclockwise."""
    import cmath

    t = dom.tables
    cells = [int(c) for c in dom.vert_cells[vertex]]
    if any(c < 0 for c in cells):
        raise ValueError("triangular contours exist only around interior vertices")
    zx, zy = float(t.vert_x4[vertex]), float(t.vert_y4[vertex]) * SQRT3
    cells.sort(key=lambda c: cmath.phase(complex(float(t.cell_x4[c]) - zx,
                                                 float(t.cell_y4[c]) * SQRT3 - zy)))
    return cells


def _canonical_cycle(cells: list[int]) -> tuple[int, ...]:
    m = len(cells)
    best = None
    for seq in (cells, cells[::-1]):
        for shift in range(m):
            cand = tuple(seq[shift:] + seq[:shift])
            if best is None or cand < best:
                best = cand
    return best


def contour_family(dom: HexDomain, n_larger: int = 10) -> list[list[int]]:
    """All minimal triangles plus a deterministic batch of larger closed contours.

    Larger contours are four-cycles through the two common neighbours of an
    adjacent cell pair, and six-rings around cells whose whole neighbourhood
    is present.
    """
    t = dom.tables
    contours = [triangle_contour(dom, z) for z in dom.interior_vertices()]
    larger: dict[tuple[int, ...], list[int]] = {}
    n = t.n_cells
    for i in range(n):
        ring = [int(t.cell_nbr_cell[i, k]) for k in range(6)]
        if all(c >= 0 for c in ring):
            larger.setdefault(_canonical_cycle(ring), ring)
        for k in range(6):
            j = int(t.cell_nbr_cell[i, k])
            if j < i:
                continue
            # common neighbours of an adjacent pair close a rhombus
            common = [c for c in ring if c >= 0 and c in
                      {int(t.cell_nbr_cell[j, kk]) for kk in range(6)}]
            if len(common) == 2:
                cyc = [i, common[0], j, common[1]]
                larger.setdefault(_canonical_cycle(cyc), cyc)
    ordered = [larger[key] for key in sorted(larger)]
    return contours + ordered[:n_larger]


def contour_crossed_sides(dom: HexDomain, cells: list[int]) -> list[int]:
    """Sides whose midpoints the closed cell-centre contour passes through."""
    t = dom.tables
    out = []
    m = len(cells)
    for j in range(m):
        i0, i1 = cells[j], cells[(j + 1) % m]
        side = -1
        for k in range(6):
            if int(t.cell_nbr_cell[i0, k]) == i1:
                side = int(t.cell_nbr_side[i0, k])
                break
        if side < 0:
            raise ValueError("consecutive contour cells must share a side")
        out.append(side)
    return out


def midpoint_outside_contour(dom: HexDomain, cells: list[int], mid_side: int) -> bool:
    """Whether a side midpoint lies strictly outside the cell-centre polygon.

    Midpoints of crossed sides sit exactly on the curve and are excluded by
    the integer test; the remaining cases are bounded away from the polygon,
    so the float test only needs to be distance-robust.
    """
    if mid_side in contour_crossed_sides(dom, cells):
        return False
    from shapely.geometry import Point, Polygon

    t = dom.tables
    poly = Polygon(
        [(0.25 * dom.delta * float(t.cell_x4[c]),
          0.25 * dom.delta * SQRT3 * float(t.cell_y4[c])) for c in cells]
    )
    p = dom.midpoint(mid_side).position
    pt = Point(p.real, p.imag)
    return (not poly.covers(pt)) and poly.distance(pt) > 1e-6 * dom.delta


def table_to_json(table: ObservableTable, dom: HexDomain) -> list[dict]:
    """Dump format consumed by the verifier: one row per midpoint."""
    rows = []
    for s in sorted(table.entries):
        A, B = table.entries[s]
        rows.append(
            {
                "midpoint_id": _side_label(dom, s),
                "A": int(A),
                "B": int(B),
                "n": table.n,
            }
        )
    return rows


def _side_label(dom: HexDomain, s: int) -> str:
    (q0, r0), (q1, r1) = dom.sides[s]
    return f"{q0},{r0};{q1},{r1}"


def table_from_json(rows: list[dict], dom: HexDomain, a_side: int, b_side: int,
                    v_side: int) -> ObservableTable:
    """Rebuild an observable table from its dump rows."""
    entries: dict[int, tuple[int, int]] = {}
    n = None
    for row in rows:
        cells = tuple(tuple(int(t) for t in part.split(",")) for part in
                      row["midpoint_id"].split(";"))
        side = dom.side_index[cells]
        entries[side] = (int(row["A"]), int(row["B"]))
        n = int(row["n"]) if n is None else n
        if n != int(row["n"]):
            raise ValueError("inconsistent coloring counts in table rows")
    if n is None:
        raise ValueError("empty table")
    return ObservableTable(a_side, b_side, v_side, n, entries)
