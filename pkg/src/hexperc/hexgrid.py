"""Hexagonal-lattice approximations of smooth planar domains.

The lattice is the flat-top hexagonal tiling with side ``delta``; the cell
with axial coordinates ``(q, r)`` is centred at
``(1.5*delta*q, sqrt(3)*delta*(q/2 + r))``.  Every lattice point used here
(cell centres, corner vertices, side midpoints) has coordinates of the form
``(delta/4) * (x4 + i*sqrt(3)*y4)`` with integers ``x4, y4``, and that pair
is the exact identity of the point.  Incidence, orientation signs and
tie-breaks are therefore computed in integer arithmetic; floating point only
enters containment tests against the continuum domain.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

SQRT3 = math.sqrt(3.0)

# Axial offsets of the six side-neighbours, counterclockwise, k-th entry in
# direction 30 + 60k degrees from the cell centre.
AXIAL_NEIGHBORS = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))
# Corner vertices in delta/4 units, k-th entry at angle 60k degrees.
VERTEX_OFFSETS = ((4, 0), (2, 2), (-2, 2), (-4, 0), (-2, -2), (2, -2))
# Side midpoints in delta/4 units, k-th entry towards AXIAL_NEIGHBORS[k].
MIDPOINT_OFFSETS = ((3, 1), (0, 2), (-3, 1), (-3, -1), (0, -2), (3, -1))

Cell = tuple[int, int]
SideId = tuple[Cell, Cell]

DOMAIN_JSON_VERSION = 1


class EmptyApproximation(Exception):
    """No hexagon of the requested mesh fits inside the domain."""


class NotOnBoundary(Exception):
    """A midpoint expected on the domain boundary is interior."""


class InvalidDomain(Exception):
    """The hexagon set violates a structural invariant."""


def cell_center_exact(q: int, r: int) -> tuple[int, int]:
    return 6 * q, 2 * q + 4 * r


def exact_to_complex(x4: int, y4: int, delta: float) -> complex:
    return complex(0.25 * delta * x4, 0.25 * delta * SQRT3 * y4)


@dataclass(frozen=True)
class DiskDomain:
    """Open disk |z - center| < radius."""

    center: complex = 0j
    radius: float = 1.0

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("radius must be positive")

    def bounds(self) -> tuple[float, float, float, float]:
        c, r = self.center, self.radius
        return c.real - r, c.imag - r, c.real + r, c.imag + r

    def contains_points(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        dx = xs - self.center.real
        dy = ys - self.center.imag
        return dx * dx + dy * dy < self.radius * self.radius

    def boundary_point(self, angle: float) -> complex:
        return self.center + self.radius * complex(math.cos(angle), math.sin(angle))


@dataclass(frozen=True)
class PolygonDomain:
    """Domain bounded by a dense simple closed polyline, counterclockwise."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 3:
            raise ValueError("points must be an (m, 2) array with m >= 3")
        from shapely.geometry import Polygon

        poly = Polygon(pts)
        if not poly.is_valid or poly.area <= 0:
            raise InvalidDomain("boundary polyline is self-intersecting or degenerate")
        # normalise to counterclockwise orientation
        area2 = np.sum(pts[:, 0] * np.roll(pts[:, 1], -1) - np.roll(pts[:, 0], -1) * pts[:, 1])
        if area2 < 0:
            pts = pts[::-1].copy()
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "_poly", poly)

    def bounds(self) -> tuple[float, float, float, float]:
        xs, ys = self.points[:, 0], self.points[:, 1]
        return xs.min(), ys.min(), xs.max(), ys.max()

    def contains_points(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        import shapely

        return shapely.contains_xy(self._poly, xs, ys)


DomainSpec = DiskDomain | PolygonDomain


@dataclass(frozen=True)
class Midpoint:
    """Midpoint of a hexagon side; ``side`` is the sorted pair of adjacent cells."""

    index: int
    side: SideId
    x4: int
    y4: int
    position: complex
    on_boundary: bool

    def __repr__(self):  # keep test output readable
        return f"Midpoint({self.side}, boundary={self.on_boundary})"


class KernelTables(NamedTuple):
    """Flat integer arrays describing a HexDomain, shared by all fast kernels."""

    n_cells: int
    n_sides: int
    n_verts: int
    side_c0: np.ndarray      # (S,) cell index or -1
    side_c1: np.ndarray
    side_vA: np.ndarray      # (S,) vertex index, vA < vB
    side_vB: np.ndarray
    side_boundary: np.ndarray  # (S,) uint8
    vert_hs: np.ndarray      # (V, 3) half-side ids, -1 padded
    left_cell_AB: np.ndarray   # (S,) cell on the left when traversing vA -> vB
    right_cell_AB: np.ndarray
    cell_nbr_cell: np.ndarray  # (n, 6)
    cell_nbr_side: np.ndarray  # (n, 6)
    cell_x4: np.ndarray
    cell_y4: np.ndarray
    side_mx4: np.ndarray
    side_my4: np.ndarray
    vert_x4: np.ndarray
    vert_y4: np.ndarray


class HexDomain:
    """Maximal connected set of lattice hexagons inside a smooth domain.

    Immutable after construction; all derived structure (sides, vertices,
    half-sides, boundary cycle) is built once and reused by every consumer.
    """

    def __init__(self, cells: Iterable[Cell], delta: float):
        if delta <= 0:
            raise ValueError("delta must be positive")
        cells = sorted(set((int(q), int(r)) for q, r in cells))
        if not cells:
            raise EmptyApproximation("no hexagons")
        self.delta = float(delta)
        self.cells: list[Cell] = cells
        self.cell_index: dict[Cell, int] = {c: i for i, c in enumerate(cells)}
        if not self._connected():
            raise InvalidDomain("hexagon set is not edge-connected")
        self._build_structure()

    # -- construction -----------------------------------------------------

    def _connected(self) -> bool:
        seen = {self.cells[0]}
        stack = [self.cells[0]]
        while stack:
            q, r = stack.pop()
            for dq, dr in AXIAL_NEIGHBORS:
                nb = (q + dq, r + dr)
                if nb in self.cell_index and nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        return len(seen) == len(self.cells)

    def _build_structure(self):
        n = len(self.cells)
        side_ids: set[SideId] = set()
        for q, r in self.cells:
            for dq, dr in AXIAL_NEIGHBORS:
                pair = ((q, r), (q + dq, r + dr))
                side_ids.add((min(pair), max(pair)))
        self.sides: list[SideId] = sorted(side_ids)
        self.side_index: dict[SideId, int] = {s: i for i, s in enumerate(self.sides)}
        S = len(self.sides)

        # exact midpoint coordinates; midpoint of a side is the average of the
        # two adjacent cell centres
        side_mx4 = np.empty(S, dtype=np.int64)
        side_my4 = np.empty(S, dtype=np.int64)
        side_c0 = np.full(S, -1, dtype=np.int32)
        side_c1 = np.full(S, -1, dtype=np.int32)
        for i, (ca, cb) in enumerate(self.sides):
            ax, ay = cell_center_exact(*ca)
            bx, by = cell_center_exact(*cb)
            side_mx4[i] = (ax + bx) // 2
            side_my4[i] = (ay + by) // 2
            side_c0[i] = self.cell_index.get(ca, -1)
            side_c1[i] = self.cell_index.get(cb, -1)

        # vertices: endpoints of every side, identified by exact coordinates
        vert_coord: dict[tuple[int, int], int] = {}
        side_ends: list[tuple[tuple[int, int], tuple[int, int]]] = []
        for ca, cb in self.sides:
            k = AXIAL_NEIGHBORS.index((cb[0] - ca[0], cb[1] - ca[1]))
            cx, cy = cell_center_exact(*ca)
            va = (cx + VERTEX_OFFSETS[k][0], cy + VERTEX_OFFSETS[k][1])
            vb = (cx + VERTEX_OFFSETS[(k + 1) % 6][0], cy + VERTEX_OFFSETS[(k + 1) % 6][1])
            side_ends.append((va, vb))
            for v in (va, vb):
                vert_coord.setdefault(v, 0)
        verts = sorted(vert_coord)
        self._vert_coords = verts
        vert_coord = {v: i for i, v in enumerate(verts)}
        V = len(verts)

        side_vA = np.empty(S, dtype=np.int32)
        side_vB = np.empty(S, dtype=np.int32)
        for i, (va, vb) in enumerate(side_ends):
            ia, ib = vert_coord[va], vert_coord[vb]
            side_vA[i], side_vB[i] = min(ia, ib), max(ia, ib)

        vert_hs = np.full((V, 3), -1, dtype=np.int32)
        vert_deg = np.zeros(V, dtype=np.int32)
        for s in range(S):
            for h, v in ((2 * s, side_vA[s]), (2 * s + 1, side_vB[s])):
                d = vert_deg[v]
                if d >= 3:
                    raise InvalidDomain("more than three sides at a vertex")
                vert_hs[v, d] = h
                vert_deg[v] = d + 1

        vert_x4 = np.array([v[0] for v in verts], dtype=np.int64)
        vert_y4 = np.array([v[1] for v in verts], dtype=np.int64)
        cell_x4 = np.empty(n, dtype=np.int64)
        cell_y4 = np.empty(n, dtype=np.int64)
        for i, c in enumerate(self.cells):
            cell_x4[i], cell_y4[i] = cell_center_exact(*c)

        # orientation: cell on the left of the directed segment vA -> vB
        left_AB = np.full(S, -1, dtype=np.int32)
        right_AB = np.full(S, -1, dtype=np.int32)
        for s, (ca, cb) in enumerate(self.sides):
            dx = vert_x4[side_vB[s]] - vert_x4[side_vA[s]]
            dy = vert_y4[side_vB[s]] - vert_y4[side_vA[s]]
            for cell, idx in ((ca, side_c0[s]), (cb, side_c1[s])):
                cx, cy = cell_center_exact(*cell)
                ex, ey = cx - side_mx4[s], cy - side_my4[s]
                cross = dx * ey - dy * ex
                if cross == 0:
                    raise InvalidDomain("degenerate side orientation")
                if cross > 0:
                    left_AB[s] = idx
                else:
                    right_AB[s] = idx

        cell_nbr_cell = np.full((n, 6), -1, dtype=np.int32)
        cell_nbr_side = np.full((n, 6), -1, dtype=np.int32)
        for i, (q, r) in enumerate(self.cells):
            for k, (dq, dr) in enumerate(AXIAL_NEIGHBORS):
                nb = (q + dq, r + dr)
                pair = (min((q, r), nb), max((q, r), nb))
                cell_nbr_side[i, k] = self.side_index[pair]
                cell_nbr_cell[i, k] = self.cell_index.get(nb, -1)

        side_boundary = np.asarray(
            [(side_c0[s] < 0) != (side_c1[s] < 0) for s in range(S)], dtype=np.uint8
        )

        self.tables = KernelTables(
            n_cells=n, n_sides=S, n_verts=V,
            side_c0=side_c0, side_c1=side_c1,
            side_vA=side_vA, side_vB=side_vB,
            side_boundary=side_boundary, vert_hs=vert_hs,
            left_cell_AB=left_AB, right_cell_AB=right_AB,
            cell_nbr_cell=cell_nbr_cell, cell_nbr_side=cell_nbr_side,
            cell_x4=cell_x4, cell_y4=cell_y4,
            side_mx4=side_mx4, side_my4=side_my4,
            vert_x4=vert_x4, vert_y4=vert_y4,
        )

        # vertex -> incident cells (for interior-vertex sweeps)
        vert_cells = np.full((V, 3), -1, dtype=np.int32)
        vert_sides = np.full((V, 3), -1, dtype=np.int32)
        vcnt = np.zeros(V, dtype=np.int32)
        for s in range(S):
            for v in (side_vA[s], side_vB[s]):
                vert_sides[v, vcnt[v]] = s
                vcnt[v] += 1
        for i in range(n):
            q, r = self.cells[i]
            cx, cy = cell_x4[i], cell_y4[i]
            for k in range(6):
                v = vert_coord.get((cx + VERTEX_OFFSETS[k][0], cy + VERTEX_OFFSETS[k][1]))
                if v is None:
                    continue
                row = vert_cells[v]
                for j in range(3):
                    if row[j] == i:
                        break
                    if row[j] == -1:
                        row[j] = i
                        break
        self.vert_cells = vert_cells
        self.vert_sides = vert_sides

        self._trace_boundary()
        self._positions = None
        self._midpoints = None

    def _trace_boundary(self):
        t = self.tables
        bnd = [s for s in range(t.n_sides) if t.side_boundary[s]]
        vert_bnd: dict[int, list[int]] = {}
        for s in bnd:
            for v in (t.side_vA[s], t.side_vB[s]):
                vert_bnd.setdefault(int(v), []).append(s)
        for v, ss in vert_bnd.items():
            if len(ss) != 2:
                raise InvalidDomain("boundary vertex without exactly two boundary sides")

        start = min(bnd)
        cycle = [start]
        v = int(t.side_vA[start])
        while True:
            s0, s1 = vert_bnd[v]
            nxt = s1 if s0 == cycle[-1] else s0
            if nxt == start:
                break
            cycle.append(nxt)
            va, vb = int(t.side_vA[nxt]), int(t.side_vB[nxt])
            v = vb if va == v else va
        if len(cycle) != len(bnd):
            raise InvalidDomain("boundary is not a single cycle")

        # orientation via the shoelace sum over the shared-vertex loop
        loop = []
        for i, s in enumerate(cycle):
            s_next = cycle[(i + 1) % len(cycle)]
            shared = {int(t.side_vA[s]), int(t.side_vB[s])} & {
                int(t.side_vA[s_next]), int(t.side_vB[s_next])
            }
            if len(shared) != 1:
                raise InvalidDomain("consecutive boundary sides must share one vertex")
            loop.append(shared.pop())
        area2 = 0
        for i, v in enumerate(loop):
            w = loop[(i + 1) % len(loop)]
            area2 += int(t.vert_x4[v]) * int(t.vert_y4[w]) - int(t.vert_x4[w]) * int(t.vert_y4[v])
        if area2 < 0:
            cycle.reverse()
            loop.reverse()
        rot = cycle.index(min(cycle))
        cycle = cycle[rot:] + cycle[:rot]

        self.cycle_sides: list[int] = cycle
        m = len(cycle)
        pos = np.full(t.n_sides, -1, dtype=np.int32)
        nxtv = np.full(t.n_sides, -1, dtype=np.int32)
        prvv = np.full(t.n_sides, -1, dtype=np.int32)
        for i, s in enumerate(cycle):
            pos[s] = i
        for i, s in enumerate(cycle):
            s_next = cycle[(i + 1) % m]
            shared = {int(t.side_vA[s]), int(t.side_vB[s])} & {
                int(t.side_vA[s_next]), int(t.side_vB[s_next])
            }
            w = shared.pop()
            nxtv[s] = w
            prvv[s_next] = w
        self.side_cycle_pos = pos
        self.bnd_next_vert = nxtv
        self.bnd_prev_vert = prvv

    # -- queries -----------------------------------------------------------

    @property
    def n_cells(self) -> int:
        return len(self.cells)

    def midpoint(self, side: int | SideId) -> Midpoint:
        if not isinstance(side, int):
            side = self.side_index[side]
        if self._midpoints is None:
            t = self.tables
            self._midpoints = [
                Midpoint(
                    index=s,
                    side=self.sides[s],
                    x4=int(t.side_mx4[s]),
                    y4=int(t.side_my4[s]),
                    position=exact_to_complex(int(t.side_mx4[s]), int(t.side_my4[s]), self.delta),
                    on_boundary=bool(t.side_boundary[s]),
                )
                for s in range(t.n_sides)
            ]
        return self._midpoints[side]

    @property
    def midpoints(self) -> list[Midpoint]:
        return [self.midpoint(s) for s in range(self.tables.n_sides)]

    @property
    def boundary_cycle(self) -> list[Midpoint]:
        """Boundary midpoints in counterclockwise order."""
        return [self.midpoint(s) for s in self.cycle_sides]

    def _midpoint_positions(self) -> np.ndarray:
        if self._positions is None:
            t = self.tables
            self._positions = np.stack(
                [0.25 * self.delta * t.side_mx4, 0.25 * self.delta * SQRT3 * t.side_my4], axis=1
            )
        return self._positions

    def nearest_midpoint(self, p: complex, on_boundary: bool = False) -> Midpoint:
        """Closest side midpoint to ``p``; ties go to the smallest side id.

        With ``on_boundary=True`` the search is restricted to the boundary
        cycle, which is how the two interface endpoints are snapped.
        """
        pts = self._midpoint_positions()
        d2 = (pts[:, 0] - p.real) ** 2 + (pts[:, 1] - p.imag) ** 2
        if on_boundary:
            cand = np.asarray(self.cycle_sides)
        else:
            cand = np.arange(self.tables.n_sides)
        dists = d2[cand]
        dmin = dists.min()
        tol = 1e-12 * max(1.0, dmin)
        tied = cand[dists <= dmin + tol]
        best = min((self.sides[int(s)], int(s)) for s in tied)[1]
        return self.midpoint(best)

    def boundary_order(self, pts: Sequence[Midpoint], labels: Sequence[str] = ("a", "b", "u", "v")) -> str:
        """Counterclockwise cyclic order of boundary midpoints, as a label string."""
        if len(pts) != len(labels):
            raise ValueError("one label per point")
        seen = set()
        order = []
        for lab, mp in zip(labels, pts):
            posn = int(self.side_cycle_pos[mp.index])
            if posn < 0:
                raise NotOnBoundary(f"{lab} is not a boundary midpoint")
            if mp.index in seen:
                raise ValueError("points must be distinct")
            seen.add(mp.index)
            order.append((posn, lab))
        order.sort()
        labs = [lab for _, lab in order]
        i0 = labs.index(labels[0])
        labs = labs[i0:] + labs[:i0]
        return ",".join(labs)

    def half_side_graph(self) -> dict[str, np.ndarray]:
        """Adjacency structure over half-sides (2s, 2s+1 are the halves of side s)."""
        t = self.tables
        return {
            "halfside_vertex": np.concatenate(
                [np.stack([t.side_vA, t.side_vB], axis=1).reshape(-1)]
            ),
            "vertex_halfsides": t.vert_hs,
        }

    def interior_vertices(self) -> list[int]:
        """Vertices where three domain hexagons meet."""
        return [v for v in range(self.tables.n_verts) if all(self.vert_cells[v] >= 0)]

    def cell_containing(self, p: complex) -> int:
        """Index of the hexagon containing the point, or -1 if outside."""
        d = self.delta
        qf = p.real / (1.5 * d)
        rf = p.imag / (SQRT3 * d) - qf / 2.0
        # cube rounding
        x, z = qf, rf
        y = -x - z
        rx, ry, rz = round(x), round(y), round(z)
        dx, dy, dz = abs(rx - x), abs(ry - y), abs(rz - z)
        if dx > dy and dx > dz:
            rx = -ry - rz
        elif dy > dz:
            pass
        else:
            rz = -rx - ry
        return self.cell_index.get((int(rx), int(rz)), -1)

    # -- serialisation -----------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "format_version": DOMAIN_JSON_VERSION,
            "delta": self.delta,
            "cells": [list(c) for c in self.cells],
            "boundary_cycle": [list(map(list, self.sides[s])) for s in self.cycle_sides],
        }

    def dump_json(self, path) -> None:
        with open(path, "w") as f:
            json.dump(self.to_json_dict(), f, indent=1, sort_keys=True)

    @classmethod
    def from_json_dict(cls, doc: dict) -> "HexDomain":
        if doc.get("format_version") != DOMAIN_JSON_VERSION:
            raise ValueError("unsupported domain format version")
        return cls([tuple(c) for c in doc["cells"]], doc["delta"])


def build_lattice_approximation(spec: DomainSpec, delta: float) -> HexDomain:
    """Largest edge-connected set of hexagons lying strictly inside the domain.

    A hexagon qualifies when all six of its corner vertices are strictly
    inside; among equal-size connected components the one whose smallest
    (q, r) cell is lexicographically least is chosen, so the result is
    deterministic.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    xmin, ymin, xmax, ymax = spec.bounds()
    q_lo = math.floor((xmin - delta) / (1.5 * delta)) - 1
    q_hi = math.ceil((xmax + delta) / (1.5 * delta)) + 1
    cand: list[Cell] = []
    for q in range(q_lo, q_hi + 1):
        r_lo = math.floor((ymin - delta) / (SQRT3 * delta) - q / 2.0) - 1
        r_hi = math.ceil((ymax + delta) / (SQRT3 * delta) - q / 2.0) + 1
        cand.extend((q, r) for r in range(r_lo, r_hi + 1))
    if not cand:
        raise EmptyApproximation("domain bounding box fits no hexagon")

    centers = np.array([cell_center_exact(q, r) for q, r in cand], dtype=np.int64)
    vx = np.empty((len(cand), 6), dtype=float)
    vy = np.empty((len(cand), 6), dtype=float)
    for k in range(6):
        vx[:, k] = 0.25 * delta * (centers[:, 0] + VERTEX_OFFSETS[k][0])
        vy[:, k] = 0.25 * delta * SQRT3 * (centers[:, 1] + VERTEX_OFFSETS[k][1])
    inside = spec.contains_points(vx.ravel(), vy.ravel()).reshape(len(cand), 6).all(axis=1)
    kept = {c for c, ok in zip(cand, inside) if ok}
    if not kept:
        raise EmptyApproximation("no hexagon fits inside the domain")

    components: list[set[Cell]] = []
    todo = set(kept)
    while todo:
        seed = todo.pop()
        comp = {seed}
        stack = [seed]
        while stack:
            q, r = stack.pop()
            for dq, dr in AXIAL_NEIGHBORS:
                nb = (q + dq, r + dr)
                if nb in todo:
                    todo.remove(nb)
                    comp.add(nb)
                    stack.append(nb)
        components.append(comp)
    components.sort(key=lambda c: (-len(c), min(c)))
    return HexDomain(components[0], delta)
