"""Batched enumeration and Monte Carlo drivers on top of the compiled kernels.

Work is split into fixed chunks of at most 2**16 colorings.  Chunk k of a
Monte Carlo run draws from its own Philox stream keyed by (seed, k), so the
merged integer counts do not depend on how many workers consume the chunks;
exhaustive runs enumerate packed coloring ranges through the same path.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .hexgrid import HexDomain, Midpoint
from .percolation import DobrushinMarks, OutOfDomain

CHUNK = 1 << 16


@dataclass(frozen=True)
class EstimateReport:
    """Monte Carlo estimates of the two same-component probabilities."""

    p_left: float
    p_right: float
    stderr_left: float
    stderr_right: float
    p_neither: float
    n_samples: int
    seed: int
    delta: float

    @classmethod
    def from_counts(cls, n_left: int, n_right: int, n_samples: int, seed: int, delta: float):
        pl = n_left / n_samples
        pr = n_right / n_samples
        return cls(
            p_left=pl,
            p_right=pr,
            stderr_left=math.sqrt(pl * (1.0 - pl) / n_samples),
            stderr_right=math.sqrt(pr * (1.0 - pr) / n_samples),
            p_neither=1.0 - pl - pr,
            n_samples=n_samples,
            seed=seed,
            delta=delta,
        )

    @property
    def diff(self) -> float:
        return self.p_left - self.p_right

    @property
    def stderr_diff(self) -> float:
        d = self.p_left + self.p_right - (self.p_left - self.p_right) ** 2
        return math.sqrt(max(d, 0.0) / self.n_samples)


@dataclass(frozen=True)
class ObservableEstimate:
    """Monte Carlo estimate of the complex observable with componentwise errors."""

    re: float
    im_sqrt3: float            # coefficient of i*sqrt(3)
    stderr_re: float
    stderr_im_sqrt3: float
    n_samples: int
    seed: int

    @property
    def value(self) -> complex:
        return complex(self.re, math.sqrt(3.0) * self.im_sqrt3)

    @property
    def stderr_value(self) -> tuple[float, float]:
        return self.stderr_re, math.sqrt(3.0) * self.stderr_im_sqrt3


class _Context:
    """Type-normalised arrays for one (domain, a, b) placement."""

    def __init__(self, dom: HexDomain, a: Midpoint, b: Midpoint):
        t = dom.tables
        marks = DobrushinMarks.build(dom, a, b)
        self.dom = dom
        self.marks = marks
        self.S = t.n_sides
        self.V = t.n_verts
        self.n_cells = t.n_cells
        self.words = (t.n_cells + 63) // 64
        as64 = lambda arr: np.ascontiguousarray(arr, dtype=np.int64)
        self.side_c0 = as64(t.side_c0)
        self.side_c1 = as64(t.side_c1)
        self.outer = np.ascontiguousarray(marks.outer, dtype=np.uint8)
        self.side_vA = as64(t.side_vA)
        self.side_vB = as64(t.side_vB)
        self.vert_hs = as64(t.vert_hs)
        self.left_AB = as64(t.left_cell_AB)
        self.right_AB = as64(t.right_cell_AB)
        self.cell_nbr_cell = as64(t.cell_nbr_cell)
        self.cell_nbr_side = as64(t.cell_nbr_side)

    def static_args(self):
        m = self.marks
        return (
            self.S, self.V, self.n_cells, self.side_c0, self.side_c1, self.outer,
            m.sa, m.sb, m.ha_yellow, m.ha_blue, m.hb_yellow, m.hb_blue,
            m.cell_a, m.cell_b,
            self.side_vA, self.side_vB, self.vert_hs, self.left_AB, self.right_AB,
            self.cell_nbr_cell, self.cell_nbr_side,
        )


def _context(dom: HexDomain, a: Midpoint, b: Midpoint) -> _Context:
    cache = getattr(dom, "_engine_cache", None)
    if cache is None:
        cache = {}
        dom._engine_cache = cache
    key = (a.index, b.index)
    if key not in cache:
        cache[key] = _Context(dom, a, b)
    return cache[key]


def _chunks_exhaustive(n_cells: int):
    total = 1 << n_cells
    return [(k, start, min(CHUNK, total - start)) for k, start in enumerate(range(0, total, CHUNK))]


def _chunks_mc(n_samples: int):
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    out = []
    k = 0
    left = n_samples
    while left > 0:
        cnt = min(CHUNK, left)
        out.append((k, cnt))
        left -= cnt
        k += 1
    return out


def _enum_block(start: int, count: int, words: int) -> np.ndarray:
    cols = np.zeros((count, words), dtype=np.uint64)
    cols[:, 0] = np.arange(start, start + count, dtype=np.uint64)
    return cols


def _mc_block(seed: int, chunk_idx: int, count: int, words: int) -> np.ndarray:
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, chunk_idx], dtype=np.uint64)
    rng = np.random.Generator(np.random.Philox(key=key))
    return rng.integers(0, np.iinfo(np.uint64).max, size=(count, words),
                        dtype=np.uint64, endpoint=True)


def _run_chunks(worker_fn, chunks, workers: int):
    if workers <= 1:
        return [worker_fn(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(worker_fn, chunks))


def _check_errors(out: np.ndarray):
    if (out == kernels.OUT_ERR).any():
        raise AssertionError("kernel reported a malformed configuration")


# -- same-component pair probabilities ---------------------------------------


def pair_outcome_batch(ctx: _Context, cols: np.ndarray, su: int, sv: int) -> np.ndarray:
    out = np.empty(cols.shape[0], dtype=np.uint8)
    kernels.pair_kernel(cols, *ctx.static_args(), su, sv, out)
    _check_errors(out)
    return out


def pair_counts_exhaustive(dom, a, b, u: Midpoint, v: Midpoint, workers: int = 1):
    """(n_left, n_right, n_total) over every coloring."""
    ctx = _context(dom, a, b)

    def work(chunk):
        k, start, cnt = chunk
        out = pair_outcome_batch(ctx, _enum_block(start, cnt, ctx.words), u.index, v.index)
        return np.bincount(out, minlength=3)[:3]

    counts = sum(_run_chunks(work, _chunks_exhaustive(ctx.n_cells), workers))
    return int(counts[0]), int(counts[1]), 1 << ctx.n_cells


def pair_probabilities_mc(dom, a, b, u, v, n_samples: int, seed: int, workers: int = 1) -> EstimateReport:
    ctx = _context(dom, a, b)

    def work(chunk):
        k, cnt = chunk
        out = pair_outcome_batch(ctx, _mc_block(seed, k, cnt, ctx.words), u.index, v.index)
        return np.bincount(out, minlength=3)[:3]

    counts = sum(_run_chunks(work, _chunks_mc(n_samples), workers))
    return EstimateReport.from_counts(int(counts[0]), int(counts[1]), n_samples, seed, dom.delta)


# -- single-midpoint passage side --------------------------------------------


def point_side_batch(ctx: _Context, cols: np.ndarray, su: int) -> np.ndarray:
    out = np.empty(cols.shape[0], dtype=np.uint8)
    kernels.pair_kernel(cols, *ctx.static_args(), su, su, out)
    _check_errors(out)
    return out


def point_side_counts_exhaustive(dom, a, b, u: Midpoint, workers: int = 1):
    """(n_left, n_right, n_on_interface) of one midpoint, over every coloring."""
    ctx = _context(dom, a, b)

    def work(chunk):
        k, start, cnt = chunk
        out = point_side_batch(ctx, _enum_block(start, cnt, ctx.words), u.index)
        return np.bincount(out, minlength=3)[:3]

    counts = sum(_run_chunks(work, _chunks_exhaustive(ctx.n_cells), workers))
    return int(counts[0]), int(counts[1]), int(counts[2])


# -- surrounding (right-passage) of an interior point -------------------------


def surround_batch(ctx: _Context, cols: np.ndarray, cell_p: int) -> np.ndarray:
    out = np.empty(cols.shape[0], dtype=np.uint8)
    kernels.surround_kernel(cols, *ctx.static_args(), cell_p, out)
    _check_errors(out)
    return out


def _cell_of_point(dom: HexDomain, p: complex) -> int:
    cell = dom.cell_containing(p)
    if cell < 0:
        raise OutOfDomain(f"point {p} lies outside the lattice approximation")
    return cell


def surrounding_probability_mc(dom, a, b, p: complex, n_samples: int, seed: int,
                               workers: int = 1) -> EstimateReport:
    ctx = _context(dom, a, b)
    cell_p = _cell_of_point(dom, p)

    def work(chunk):
        k, cnt = chunk
        out = surround_batch(ctx, _mc_block(seed, k, cnt, ctx.words), cell_p)
        return np.bincount(out, minlength=2)[:2]

    counts = sum(_run_chunks(work, _chunks_mc(n_samples), workers))
    return EstimateReport.from_counts(int(counts[0]), int(counts[1]), n_samples, seed, dom.delta)


def surrounding_counts_exhaustive(dom, a, b, p: complex, workers: int = 1):
    ctx = _context(dom, a, b)
    cell_p = _cell_of_point(dom, p)

    def work(chunk):
        k, start, cnt = chunk
        out = surround_batch(ctx, _enum_block(start, cnt, ctx.words), cell_p)
        return np.bincount(out, minlength=2)[:2]

    counts = sum(_run_chunks(work, _chunks_exhaustive(ctx.n_cells), workers))
    return int(counts[0]), int(counts[1]), 1 << ctx.n_cells


# -- blue crossing between two boundary arcs ----------------------------------


def _arc_cells(dom: HexDomain, s_from: int, s_to: int) -> np.ndarray:
    """Hexagons touching the closed counterclockwise boundary arc s_from..s_to."""
    pos = dom.side_cycle_pos
    m = len(dom.cycle_sides)
    i0, i1 = int(pos[s_from]), int(pos[s_to])
    span = (i1 - i0) % m
    cells = []
    for d in range(span + 1):
        s = dom.cycle_sides[(i0 + d) % m]
        t = dom.tables
        cells.append(int(t.side_c0[s]) if t.side_c0[s] >= 0 else int(t.side_c1[s]))
    return np.unique(np.array(cells, dtype=np.int64))


def _crossing_setup(dom: HexDomain, a, b, v, u):
    order = dom.boundary_order([a, b, v, u], labels=("a", "b", "v", "u"))
    if order != "a,b,v,u":
        raise ValueError(f"marked points must be in counterclockwise order a,b,v,u; got {order}")
    arc1 = _arc_cells(dom, u.index, a.index)   # ccw arc u..a, i.e. the arc a..u avoiding b, v
    arc2 = _arc_cells(dom, b.index, v.index)
    return arc1, arc2


def crossing_probability_mc(dom, a, b, v, u, n_samples: int, seed: int, workers: int = 1):
    """Frequency of a blue cluster joining the boundary arcs a..u and b..v."""
    arc1, arc2 = _crossing_setup(dom, a, b, v, u)
    t = dom.tables
    nbr = np.ascontiguousarray(t.cell_nbr_cell, dtype=np.int64)
    words = (dom.n_cells + 63) // 64

    def work(chunk):
        k, cnt = chunk
        cols = _mc_block(seed, k, cnt, words)
        out = np.empty(cnt, dtype=np.uint8)
        kernels.crossing_kernel(cols, dom.n_cells, nbr, arc1, arc2, out)
        return np.bincount(out, minlength=2)[:2]

    counts = sum(_run_chunks(work, _chunks_mc(n_samples), workers))
    p = int(counts[1]) / n_samples
    return EstimateReport(
        p_left=p, p_right=0.0,
        stderr_left=math.sqrt(p * (1 - p) / n_samples), stderr_right=0.0,
        p_neither=1.0 - p, n_samples=n_samples, seed=seed, delta=dom.delta,
    )


def crossing_counts_exhaustive(dom, a, b, v, u, workers: int = 1):
    arc1, arc2 = _crossing_setup(dom, a, b, v, u)
    t = dom.tables
    nbr = np.ascontiguousarray(t.cell_nbr_cell, dtype=np.int64)
    words = (dom.n_cells + 63) // 64

    def work(chunk):
        k, start, cnt = chunk
        cols = _enum_block(start, cnt, words)
        out = np.empty(cnt, dtype=np.uint8)
        kernels.crossing_kernel(cols, dom.n_cells, nbr, arc1, arc2, out)
        return np.bincount(out, minlength=2)[:2]

    counts = sum(_run_chunks(work, _chunks_exhaustive(dom.n_cells), workers))
    return int(counts[1]), 1 << dom.n_cells


# -- link patterns and the observable -----------------------------------------


def _gamma_mask(dom: HexDomain, path: list[int]) -> np.ndarray:
    g = np.zeros(2 * dom.tables.n_sides, dtype=np.uint8)
    for h in path:
        g[h] = 1
    return g


def pattern_batch(ctx: _Context, cols: np.ndarray, gamma2d: np.ndarray,
                  su_arr: np.ndarray, sv: int) -> np.ndarray:
    out = np.empty((cols.shape[0], su_arr.shape[0]), dtype=np.uint8)
    kernels.pattern_kernel(cols, *ctx.static_args(), gamma2d, su_arr, sv, out)
    if (out == kernels.OUT_ERR).any():
        raise AssertionError("kernel reported a malformed configuration")
    return out


def _pattern_run(dom, a, b, u_list, v, chunks, block_fn, workers):
    from .loops import reference_path

    ctx = _context(dom, a, b)
    gamma2d = np.stack([
        _gamma_mask(dom, reference_path(dom, u, v, (a, b))) for u in u_list
    ])
    su_arr = np.array([u.index for u in u_list], dtype=np.int64)

    def work(chunk):
        cols = block_fn(chunk)
        out = pattern_batch(ctx, cols, gamma2d, su_arr, v.index)
        return np.stack([np.bincount(out[:, j], minlength=4)[:4] for j in range(len(u_list))])

    return sum(_run_chunks(work, chunks, workers))


def pattern_counts_exhaustive(dom, a, b, u: Midpoint, v: Midpoint, workers: int = 1):
    from .loops import PatternCounts

    counts = _pattern_run(
        dom, a, b, [u], v, _chunks_exhaustive(dom.n_cells),
        lambda chunk: _enum_block(chunk[1], chunk[2], (dom.n_cells + 63) // 64), workers,
    )[0]
    return PatternCounts(int(counts[0]), int(counts[1]), int(counts[2]), int(counts[3]), dom.n_cells)


def pattern_counts_mc(dom, a, b, u, v, n_samples: int, seed: int, workers: int = 1):
    counts = _pattern_run(
        dom, a, b, [u], v, _chunks_mc(n_samples),
        lambda chunk: _mc_block(seed, chunk[0], chunk[1], (dom.n_cells + 63) // 64), workers,
    )[0]
    return tuple(int(c) for c in counts)


def observable_mc(dom, a, b, u: Midpoint, v: Midpoint, n_samples: int, seed: int,
                  workers: int = 1) -> ObservableEstimate:
    """Monte Carlo estimate of the observable; exact per-sample pattern draws."""
    if u.index == v.index:
        rep = pair_probabilities_mc(dom, a, b, u, v, n_samples, seed, workers)
        dB = rep.p_left - rep.p_right
        return ObservableEstimate(0.0, dB, 0.0, rep.stderr_diff, n_samples, seed)
    c_au, c_av, c_l, c_r = pattern_counts_mc(dom, a, b, u, v, n_samples, seed, workers)
    n = n_samples
    p_au, p_av, p_l, p_r = c_au / n, c_av / n, c_l / n, c_r / n
    dA = p_av - p_au
    dB = p_l - p_r
    var_A = max(p_av + p_au - dA * dA, 0.0) / n
    var_B = max(p_l + p_r - dB * dB, 0.0) / n
    return ObservableEstimate(dA, dB, math.sqrt(var_A), math.sqrt(var_B), n, seed)


def pattern_counts_table(dom, a, b, v: Midpoint, cap: int | None = None, workers: int = 1):
    """Exhaustive per-u link-pattern counts at fixed (a, b, v): u side -> 4 counts."""
    from .loops import ENUMERATION_CAP, TooLarge

    cap = ENUMERATION_CAP if cap is None else cap
    if dom.n_cells > cap:
        raise TooLarge(f"{dom.n_cells} hexagons exceed the enumeration cap {cap}")
    u_list = [dom.midpoint(s) for s in range(dom.tables.n_sides)
              if s not in (a.index, b.index, v.index)]
    counts = _pattern_run(
        dom, a, b, u_list, v, _chunks_exhaustive(dom.n_cells),
        lambda chunk: _enum_block(chunk[1], chunk[2], (dom.n_cells + 63) // 64), workers,
    )
    return {u.index: tuple(int(x) for x in counts[j]) for j, u in enumerate(u_list)}


def observable_table_exact(dom, a, b, v: Midpoint, cap: int | None = None, workers: int = 1):
    """Exact observable for every midpoint u at fixed (a, b, v), plus the diagonal."""
    from .loops import ObservableTable

    raw = pattern_counts_table(dom, a, b, v, cap=cap, workers=workers)
    entries: dict[int, tuple[int, int]] = {}
    for side, (c_au, c_av, c_l, c_r) in raw.items():
        entries[side] = (c_av - c_au, c_l - c_r)
    nl, nr, _ = point_side_counts_exhaustive(dom, a, b, v, workers=workers)
    entries[v.index] = (0, nl - nr)
    return ObservableTable(a.index, b.index, v.index, dom.n_cells, entries)
