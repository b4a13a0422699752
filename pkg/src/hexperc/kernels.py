"""Compiled per-coloring kernels for enumeration and Monte Carlo batches.

Everything here works on flat integer arrays derived from a HexDomain plus a
packed array of colorings (one row of 64-bit words per sample, bit i = cell i
blue).  Scratch arrays use a stamp counter instead of clearing, so the inner
loops touch only what a walk actually visits.  Outcome codes are shared with
the drivers in :mod:`hexperc.engine`.
"""

from __future__ import annotations

import numpy as np
from numba import njit

OUT_LEFT = 0
OUT_RIGHT = 1
OUT_NEITHER = 2
PAT_AU_BV = 0
PAT_AV_BU = 1
PAT_AB_LEFT = 2
PAT_AB_RIGHT = 3
OUT_ERR = 255


@njit(inline="always")
def _bit(cols, i, c):
    return np.int64((cols[i, c >> 6] >> np.uint64(c & 63)) & np.uint64(1))


@njit(inline="always")
def _mismatch(cols, i, S, side_c0, side_c1, outer, sa, sb, mism):
    for s in range(S):
        if s == sa or s == sb:
            mism[s] = 0
            continue
        c0 = side_c0[s]
        c1 = side_c1[s]
        if c0 >= 0 and c1 >= 0:
            mism[s] = 1 if _bit(cols, i, c0) != _bit(cols, i, c1) else 0
        else:
            cell = c0 if c0 >= 0 else c1
            mism[s] = 1 if _bit(cols, i, cell) != np.int64(outer[s]) else 0


@njit(inline="always")
def _member(h, mism, gamma, sa, sb, ha_sel, hb_sel):
    s = h >> 1
    if s == sa:
        base = 1 if h == ha_sel else 0
    elif s == sb:
        base = 1 if h == hb_sel else 0
    else:
        base = np.int64(mism[s])
    return base != np.int64(gamma[h])


@njit
def _walk(mism, gamma, sa, sb, ha_sel, hb_sel, side_vA, side_vB, vert_hs,
          stamp, sstamp, sdir, vstamp, hstamp, start_half):
    """Follow the open broken line from a degree-one midpoint.

    Marks fully crossed sides (with direction), visited vertices and all
    traversed halves under the current stamp.  Returns (end_side, start_dir,
    end_dir); end_side is -1 when the configuration is malformed.
    """
    S = mism.shape[0]
    h = start_half
    s0 = h >> 1
    hstamp[h] = stamp
    w = side_vA[s0] if h == 2 * s0 else side_vB[s0]
    start_dir = 1 if h == 2 * s0 + 1 else -1
    cur = h
    for _ in range(2 * S + 4):
        vstamp[w] = stamp
        nxt = np.int64(-1)
        for k in range(3):
            h2 = np.int64(vert_hs[w, k])
            if h2 < 0 or h2 == cur:
                continue
            if _member(h2, mism, gamma, sa, sb, ha_sel, hb_sel):
                if nxt >= 0:
                    return np.int64(-1), 0, 0
                nxt = h2
        if nxt < 0:
            return np.int64(-1), 0, 0
        hstamp[nxt] = stamp
        s2 = nxt >> 1
        partner = nxt ^ 1
        if _member(partner, mism, gamma, sa, sb, ha_sel, hb_sel):
            d = 1 if w == side_vA[s2] else -1
            sstamp[s2] = stamp
            sdir[s2] = d
            hstamp[partner] = stamp
            cur = partner
            w = side_vB[s2] if w == side_vA[s2] else side_vA[s2]
        else:
            end_dir = 1 if w == side_vA[s2] else -1
            return s2, start_dir, end_dir
    return np.int64(-1), 0, 0


@njit
def _tag_from_cell(cell0, stamp, sstamp, sdir, s_start, d_start, s_end, d_end,
                   left_AB, right_AB, cell_nbr_cell, cell_nbr_side, cstamp, cstack):
    """Side of the walked line seen from the complement region of ``cell0``.

    Flood fill over hexagons blocked by fully crossed sides; the first
    line-adjacent hexagon met (including via the two terminal half-sides)
    resolves the tag.
    """
    top = 0
    cstack[top] = cell0
    top += 1
    cstamp[cell0] = stamp
    while top > 0:
        top -= 1
        i = cstack[top]
        for k in range(6):
            s = cell_nbr_side[i, k]
            if sstamp[s] == stamp and sdir[s] != 0:
                d = sdir[s]
                lc = left_AB[s] if d > 0 else right_AB[s]
                return OUT_LEFT if lc == i else OUT_RIGHT
            if s == s_start:
                lc = left_AB[s] if d_start > 0 else right_AB[s]
                return OUT_LEFT if lc == i else OUT_RIGHT
            if s == s_end:
                lc = left_AB[s] if d_end > 0 else right_AB[s]
                return OUT_LEFT if lc == i else OUT_RIGHT
            nb = cell_nbr_cell[i, k]
            if nb >= 0 and cstamp[nb] != stamp:
                cstamp[nb] = stamp
                cstack[top] = nb
                top += 1
    return OUT_ERR


@njit
def _same_component(su, sv, stamp, sstamp, sdir, vstamp, hstamp, sa, sb,
                    side_vA, side_vB, vert_hs, compstamp, hstack):
    """Whether u and v lie in one component of the side complex minus the line.

    Adjacency through midpoints or vertices of the line is refused; both
    endpoints are assumed off the line.
    """
    top = 0
    h0 = 2 * su
    compstamp[h0] = stamp
    hstack[top] = h0
    top += 1
    while top > 0:
        top -= 1
        h = hstack[top]
        s = h >> 1
        if s == sv:
            return True
        mid_on_line = (sstamp[s] == stamp and sdir[s] != 0) or s == sa or s == sb
        if not mid_on_line:
            p = h ^ 1
            if hstamp[p] != stamp and compstamp[p] != stamp:
                compstamp[p] = stamp
                hstack[top] = p
                top += 1
        w = side_vA[s] if h == 2 * s else side_vB[s]
        if vstamp[w] != stamp:
            for k in range(3):
                h2 = np.int64(vert_hs[w, k])
                if h2 >= 0 and h2 != h and hstamp[h2] != stamp and compstamp[h2] != stamp:
                    compstamp[h2] = stamp
                    hstack[top] = h2
                    top += 1
    return False


@njit(cache=True, nogil=True)
def pair_kernel(cols, S, V, n_cells, side_c0, side_c1, outer, sa, sb,
                ha_y, ha_b, hb_y, hb_b, cell_a, cell_b,
                side_vA, side_vB, vert_hs, left_AB, right_AB,
                cell_nbr_cell, cell_nbr_side, su, sv, out):
    mism = np.zeros(S, dtype=np.uint8)
    gamma0 = np.zeros(2 * S, dtype=np.uint8)
    sstamp = np.zeros(S, dtype=np.int64)
    sdir = np.zeros(S, dtype=np.int8)
    vstamp = np.zeros(V, dtype=np.int64)
    hstamp = np.zeros(2 * S, dtype=np.int64)
    compstamp = np.zeros(2 * S, dtype=np.int64)
    cstamp = np.zeros(n_cells, dtype=np.int64)
    cstack = np.zeros(n_cells, dtype=np.int64)
    hstack = np.zeros(2 * S, dtype=np.int64)
    stamp = np.int64(0)
    for i in range(cols.shape[0]):
        stamp += 1
        _mismatch(cols, i, S, side_c0, side_c1, outer, sa, sb, mism)
        ha_sel = ha_y if _bit(cols, i, cell_a) else ha_b
        hb_sel = hb_y if _bit(cols, i, cell_b) else hb_b
        end, d0, d1 = _walk(mism, gamma0, sa, sb, ha_sel, hb_sel, side_vA, side_vB,
                            vert_hs, stamp, sstamp, sdir, vstamp, hstamp, ha_sel)
        if end != sb:
            out[i] = OUT_ERR
            continue
        if (sstamp[su] == stamp and sdir[su] != 0) or (sstamp[sv] == stamp and sdir[sv] != 0):
            out[i] = OUT_NEITHER
            continue
        if su != sv and not _same_component(su, sv, stamp, sstamp, sdir, vstamp, hstamp,
                                            sa, sb, side_vA, side_vB, vert_hs,
                                            compstamp, hstack):
            out[i] = OUT_NEITHER
            continue
        cell0 = side_c0[su] if side_c0[su] >= 0 else side_c1[su]
        out[i] = _tag_from_cell(cell0, stamp, sstamp, sdir, sa, d0, sb, d1,
                                left_AB, right_AB, cell_nbr_cell, cell_nbr_side,
                                cstamp, cstack)


@njit(cache=True, nogil=True)
def surround_kernel(cols, S, V, n_cells, side_c0, side_c1, outer, sa, sb,
                    ha_y, ha_b, hb_y, hb_b, cell_a, cell_b,
                    side_vA, side_vB, vert_hs, left_AB, right_AB,
                    cell_nbr_cell, cell_nbr_side, cell_p, out):
    mism = np.zeros(S, dtype=np.uint8)
    gamma0 = np.zeros(2 * S, dtype=np.uint8)
    sstamp = np.zeros(S, dtype=np.int64)
    sdir = np.zeros(S, dtype=np.int8)
    vstamp = np.zeros(V, dtype=np.int64)
    hstamp = np.zeros(2 * S, dtype=np.int64)
    cstamp = np.zeros(n_cells, dtype=np.int64)
    cstack = np.zeros(n_cells, dtype=np.int64)
    stamp = np.int64(0)
    for i in range(cols.shape[0]):
        stamp += 1
        _mismatch(cols, i, S, side_c0, side_c1, outer, sa, sb, mism)
        ha_sel = ha_y if _bit(cols, i, cell_a) else ha_b
        hb_sel = hb_y if _bit(cols, i, cell_b) else hb_b
        end, d0, d1 = _walk(mism, gamma0, sa, sb, ha_sel, hb_sel, side_vA, side_vB,
                            vert_hs, stamp, sstamp, sdir, vstamp, hstamp, ha_sel)
        if end != sb:
            out[i] = OUT_ERR
            continue
        out[i] = _tag_from_cell(cell_p, stamp, sstamp, sdir, sa, d0, sb, d1,
                                left_AB, right_AB, cell_nbr_cell, cell_nbr_side,
                                cstamp, cstack)


@njit(inline="always")
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@njit(cache=True, nogil=True)
def crossing_kernel(cols, n_cells, cell_nbr_cell, arc1_cells, arc2_cells, out):
    parent = np.zeros(n_cells, dtype=np.int64)
    mark = np.zeros(n_cells, dtype=np.int64)
    stamp = np.int64(0)
    for i in range(cols.shape[0]):
        stamp += 1
        for c in range(n_cells):
            parent[c] = c
        for c in range(n_cells):
            if _bit(cols, i, c) == 0:
                continue
            for k in range(6):
                nb = cell_nbr_cell[c, k]
                if nb > c and _bit(cols, i, nb) == 1:
                    ra = _find(parent, c)
                    rb = _find(parent, nb)
                    if ra != rb:
                        parent[rb] = ra
        for j in range(arc1_cells.shape[0]):
            c = arc1_cells[j]
            if _bit(cols, i, c) == 1:
                mark[_find(parent, c)] = stamp
        hit = 0
        for j in range(arc2_cells.shape[0]):
            c = arc2_cells[j]
            if _bit(cols, i, c) == 1 and mark[_find(parent, c)] == stamp:
                hit = 1
                break
        out[i] = hit


@njit(cache=True, nogil=True)
def pattern_kernel(cols, S, V, n_cells, side_c0, side_c1, outer, sa, sb,
                   ha_y, ha_b, hb_y, hb_b, cell_a, cell_b,
                   side_vA, side_vB, vert_hs, left_AB, right_AB,
                   cell_nbr_cell, cell_nbr_side, gamma2d, su_arr, sv, out2d):
    mism = np.zeros(S, dtype=np.uint8)
    sstamp = np.zeros(S, dtype=np.int64)
    sdir = np.zeros(S, dtype=np.int8)
    vstamp = np.zeros(V, dtype=np.int64)
    hstamp = np.zeros(2 * S, dtype=np.int64)
    cstamp = np.zeros(n_cells, dtype=np.int64)
    cstack = np.zeros(n_cells, dtype=np.int64)
    stamp = np.int64(0)
    n_u = su_arr.shape[0]
    for i in range(cols.shape[0]):
        _mismatch(cols, i, S, side_c0, side_c1, outer, sa, sb, mism)
        ha_sel = ha_y if _bit(cols, i, cell_a) else ha_b
        hb_sel = hb_y if _bit(cols, i, cell_b) else hb_b
        for j in range(n_u):
            stamp += 1
            end, d0, d1 = _walk(mism, gamma2d[j], sa, sb, ha_sel, hb_sel,
                                side_vA, side_vB, vert_hs,
                                stamp, sstamp, sdir, vstamp, hstamp, ha_sel)
            if end == su_arr[j]:
                out2d[i, j] = PAT_AU_BV
            elif end == sv:
                out2d[i, j] = PAT_AV_BU
            elif end == sb:
                su = su_arr[j]
                cell0 = side_c0[su] if side_c0[su] >= 0 else side_c1[su]
                tag = _tag_from_cell(cell0, stamp, sstamp, sdir, sa, d0, sb, d1,
                                     left_AB, right_AB, cell_nbr_cell, cell_nbr_side,
                                     cstamp, cstack)
                if tag == OUT_LEFT:
                    out2d[i, j] = PAT_AB_LEFT
                elif tag == OUT_RIGHT:
                    out2d[i, j] = PAT_AB_RIGHT
                else:
                    out2d[i, j] = OUT_ERR
            else:
                out2d[i, j] = OUT_ERR
