import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hexperc import (
    Coloring,
    HexDomain,
    LinkPattern,
    TooLarge,
    classify_link_pattern,
    edge_set_of_coloring,
    loop_config_with_four_disorders,
    observable_exact,
    reference_path,
    trace_interface,
)
from hexperc import engine
from hexperc.loops import (
    ObservableTable,
    contour_family,
    contour_integral,
    discrete_analyticity_residual,
    midpoint_outside_contour,
    pattern_counts_python,
    table_to_json,
    triangle_contour,
)

from conftest import all_colorings, interior_midpoints


def test_all_blue_edge_set_is_the_boundary_interface(disk7, marks7):
    a, b = marks7
    col = Coloring(np.ones(disk7.n_cells, bool))
    cfg = edge_set_of_coloring(disk7, col, a, b)
    path = trace_interface(disk7, col, a, b)
    assert cfg.half_sides == frozenset(path.half_sides)  # no loops at all
    cfg.degree_check(disk7)


def test_edge_set_invariant_under_full_color_swap(disk7, marks7):
    # swapping every colour, halo arcs included, leaves the mismatch relation
    # unchanged; the halo swap is realised by exchanging the two marks
    a, b = marks7
    for value in (0, 5, 77, 127):
        col = Coloring.from_packed(value, disk7.n_cells)
        s1 = edge_set_of_coloring(disk7, col, a, b).half_sides
        s2 = edge_set_of_coloring(disk7, col.swapped(), b, a).half_sides
        assert s1 == s2


def test_edge_set_open_component_is_the_interface(disk7, marks7):
    a, b = marks7
    for col in all_colorings(disk7):
        cfg = edge_set_of_coloring(disk7, col, a, b)
        path = trace_interface(disk7, col, a, b)
        assert frozenset(path.half_sides) <= cfg.half_sides
        cfg.degree_check(disk7)


def test_reference_path_is_deterministic_and_symmetric(disk7, marks7):
    a, b = marks7
    mids = interior_midpoints(disk7)
    u, v = mids[0], mids[9]
    p1 = reference_path(disk7, u, v, (a, b))
    p2 = reference_path(disk7, u, v, (a, b))
    p3 = reference_path(disk7, v, u, (a, b))
    assert p1 == p2 == p3


def test_reference_path_avoids_marks(disk13, marks13):
    a, b = marks13
    rng = np.random.default_rng(0)
    sides = [s for s in range(disk13.tables.n_sides) if s not in (a.index, b.index)]
    for _ in range(100):
        su, sv = rng.choice(sides, size=2, replace=False)
        path = reference_path(disk13, disk13.midpoint(int(su)), disk13.midpoint(int(sv)), (a, b))
        crossed = {h >> 1 for h in path}
        assert a.index not in crossed and b.index not in crossed


def test_reference_path_between_adjacent_midpoints(disk7, marks7):
    a, b = marks7
    t = disk7.tables
    # two sides sharing a vertex, away from the marks
    for s1 in range(t.n_sides):
        if s1 in (a.index, b.index):
            continue
        w = int(t.side_vA[s1])
        partners = [int(h) >> 1 for h in t.vert_hs[w] if h >= 0 and (int(h) >> 1) != s1]
        partners = [s for s in partners if s not in (a.index, b.index)]
        if partners:
            s2 = partners[0]
            path = reference_path(disk7, disk7.midpoint(s1), disk7.midpoint(s2), (a, b))
            assert len(path) == 2
            return
    pytest.fail("no adjacent midpoint pair found")


def test_xor_map_is_involutive_and_injective(disk7, marks7):
    a, b = marks7
    mids = interior_midpoints(disk7)
    u, v = mids[2], mids[7]
    gamma = reference_path(disk7, u, v, (a, b))
    seen = set()
    for col in all_colorings(disk7):
        cfg = loop_config_with_four_disorders(disk7, col, a, b, u, v, gamma=gamma)
        cfg.degree_check(disk7)
        back = cfg.half_sides ^ frozenset(gamma)
        assert back == edge_set_of_coloring(disk7, col, a, b).half_sides
        seen.add(cfg.half_sides)
    assert len(seen) == 1 << disk7.n_cells


def test_single_hexagon_two_configs_by_hand():
    dom = HexDomain([(0, 0)], 1.0)
    cyc = dom.cycle_sides
    a, b, u, v = (dom.midpoint(cyc[k]) for k in (0, 3, 1, 2))
    configs = set()
    for value in (0, 1):
        col = Coloring.from_packed(value, 1)
        cfg = loop_config_with_four_disorders(dom, col, a, b, u, v)
        cfg.degree_check(dom)
        configs.add(cfg.half_sides)
    assert len(configs) == 2


def test_interleaved_disorders_admit_no_reference_line():
    # on one hexagon, removing two opposite midpoints disconnects the others
    from hexperc.loops import NoPath

    dom = HexDomain([(0, 0)], 1.0)
    cyc = dom.cycle_sides
    a, b, u, v = (dom.midpoint(cyc[k]) for k in (0, 3, 1, 4))
    with pytest.raises(NoPath):
        reference_path(dom, u, v, (a, b))


def test_single_hexagon_observable_matches_hand_enumeration():
    # counterclockwise order a,u,v,b: one coloring has its open line along the
    # u,v arc and pairs a with u, the other leaves the u-v line right of the
    # a-b line, so the enumeration must give A = -1, B = -1 over 2^1
    dom = HexDomain([(0, 0)], 1.0)
    cyc = dom.cycle_sides
    a, b, u, v = (dom.midpoint(cyc[k]) for k in (0, 3, 1, 2))
    assert dom.boundary_order([a, b, u, v]) == "a,u,v,b"
    pats = set()
    for value in (0, 1):
        col = Coloring.from_packed(value, 1)
        cfg = loop_config_with_four_disorders(dom, col, a, b, u, v)
        pats.add(classify_link_pattern(dom, cfg, a, b, u, v))
    assert pats == {LinkPattern.AU_BV, LinkPattern.AB_UV_RIGHT}
    obs = observable_exact(dom, a, b, u, v, engine="python")
    assert (obs.A, obs.B, obs.n) == (-1, -1, 1)


def test_pattern_counts_sum_for_random_placements(disk7, marks7):
    a, b = marks7
    rng = np.random.default_rng(3)
    sides = [s for s in range(disk7.tables.n_sides) if s not in (a.index, b.index)]
    for _ in range(6):
        su, sv = rng.choice(sides, size=2, replace=False)
        pc = engine.pattern_counts_exhaustive(
            disk7, a, b, disk7.midpoint(int(su)), disk7.midpoint(int(sv)))
        assert pc.total == 1 << disk7.n_cells


def test_kernel_patterns_match_python(disk7, marks7):
    a, b = marks7
    mids = interior_midpoints(disk7)
    u, v = mids[1], mids[8]
    assert engine.pattern_counts_exhaustive(disk7, a, b, u, v) == \
        pattern_counts_python(disk7, a, b, u, v)


def test_exact_antisymmetry_integer_identity(disk13, marks13):
    a, b = marks13
    mids = interior_midpoints(disk13)
    for u, v in ((mids[0], mids[5]), (mids[3], mids[14]), (mids[2], mids[9])):
        o1 = observable_exact(disk13, a, b, u, v)
        o2 = observable_exact(disk13, a, b, v, u)
        assert o1.A == -o2.A and o1.B == o2.B


def test_mirror_reflection_swaps_left_right_counts(disk7, marks7):
    a, b = marks7

    def mirror(m):
        pair = tuple(sorted((q, -q - r) for q, r in m.side))
        return disk7.midpoint(disk7.side_index[pair])

    mids = interior_midpoints(disk7)
    u, v = mids[2], mids[7]
    pc = engine.pattern_counts_exhaustive(disk7, a, b, u, v)
    pm = engine.pattern_counts_exhaustive(disk7, mirror(a), mirror(b), mirror(u), mirror(v))
    assert (pc.c_left, pc.c_right) == (pm.c_right, pm.c_left)
    assert (pc.c_au_bv, pc.c_av_bu) == (pm.c_au_bv, pm.c_av_bu)


def test_boundary_order_segment_identities(disk7, marks7):
    a, b = marks7
    total = 1 << disk7.n_cells
    bnd = [disk7.midpoint(s) for s in disk7.cycle_sides if s not in (a.index, b.index)]
    seen = set()
    for u, v in itertools.permutations(bnd, 2):
        tag = disk7.boundary_order([a, b, u, v])
        if tag in seen:
            continue
        seen.add(tag)
        pc = engine.pattern_counts_exhaustive(disk7, a, b, u, v)
        o = pc.observable
        if tag == "a,b,u,v":
            assert pc.c_au_bv == 0 and pc.c_right == 0 and o.A + o.B == total
        elif tag == "a,b,v,u":
            assert pc.c_av_bu == 0 and pc.c_right == 0 and o.B - o.A == total
        elif tag == "a,u,v,b":
            assert pc.c_av_bu == 0 and pc.c_left == 0 and o.A + o.B == -total
        elif tag == "a,v,u,b":
            assert pc.c_au_bv == 0 and pc.c_left == 0 and o.A - o.B == total
        else:
            assert pc.c_left == 0 and pc.c_right == 0 and o.B == 0
    assert seen == {"a,b,u,v", "a,b,v,u", "a,u,v,b", "a,v,u,b", "a,u,b,v", "a,v,b,u"}


def test_component_and_pattern_routes_agree_for_every_placement(disk7, marks7):
    # the same-component frequencies and the link-pattern fractions are
    # computed by two unrelated exact routes; they must agree for every
    # placement of the observation points
    a, b = marks7
    sides = [s for s in range(disk7.tables.n_sides) if s not in (a.index, b.index)]
    for su in sides:
        for sv in sides:
            if su == sv:
                continue
            u, v = disk7.midpoint(su), disk7.midpoint(sv)
            pc = engine.pattern_counts_exhaustive(disk7, a, b, u, v)
            nl, nr, tot = engine.pair_counts_exhaustive(disk7, a, b, u, v)
            assert (nl, nr) == (pc.c_left, pc.c_right), (su, sv)
            assert tot == pc.total


def test_observable_cap_guard(disk7, marks7):
    a, b = marks7
    mids = interior_midpoints(disk7)
    with pytest.raises(TooLarge):
        observable_exact(disk7, a, b, mids[0], mids[1], cap=5)


def test_residual_zero_everywhere(disk7, marks7):
    a, b = marks7
    for v_side in range(disk7.tables.n_sides):
        if v_side in (a.index, b.index):
            continue
        table = engine.observable_table_exact(disk7, a, b, disk7.midpoint(v_side))
        for z in disk7.interior_vertices():
            if v_side in (int(s) for s in disk7.vert_sides[z]):
                continue
            assert discrete_analyticity_residual(disk7, table, z) == (0, 0)


def test_residual_perturbation_is_linear(disk7, marks7):
    a, b = marks7
    v = interior_midpoints(disk7)[7]
    table = engine.observable_table_exact(disk7, a, b, v)
    z = next(zz for zz in disk7.interior_vertices()
             if v.index not in (int(s) for s in disk7.vert_sides[zz]))
    p_side = int(disk7.vert_sides[z][0])
    bumped = dict(table.entries)
    A, B = bumped[p_side]
    bumped[p_side] = (A + 1, B)
    t2 = ObservableTable(table.a_side, table.b_side, table.v_side, table.n, bumped)
    t = disk7.tables
    sx = int(t.side_mx4[p_side]) - int(t.vert_x4[z])
    ty = int(t.side_my4[p_side]) - int(t.vert_y4[z])
    assert discrete_analyticity_residual(disk7, t2, z) == (sx, ty)


def test_contour_integrals_vanish_and_triangle_identity(disk7, marks7):
    a, b = marks7
    v = interior_midpoints(disk7)[7]
    table = engine.observable_table_exact(disk7, a, b, v)
    for cells in contour_family(disk7):
        if not midpoint_outside_contour(disk7, cells, v.index):
            continue
        assert contour_integral(disk7, table, cells) == (0, 0)
        assert contour_integral(disk7, table, list(reversed(cells))) == (0, 0)
    # triangle integral equals 2*sqrt(3)*i times the vertex residual, checked
    # on a perturbed table where both are nonzero
    z = next(zz for zz in disk7.interior_vertices()
             if v.index not in (int(s) for s in disk7.vert_sides[zz]))
    tri = triangle_contour(disk7, z)
    bumped = dict(table.entries)
    p_side = int(disk7.vert_sides[z][1])
    A, B = bumped[p_side]
    bumped[p_side] = (A + 3, B - 2)
    t2 = ObservableTable(table.a_side, table.b_side, table.v_side, table.n, bumped)
    res = discrete_analyticity_residual(disk7, t2, z)
    integ = contour_integral(disk7, t2, tri)
    # 2*sqrt(3)*i * (re + i*sqrt(3)*im) = -6*im + i*sqrt(3)*(2*re)
    assert integ == (-6 * res[1], 2 * res[0])
    rev = contour_integral(disk7, t2, list(reversed(tri)))
    assert rev == (6 * res[1], -2 * res[0])


def test_observable_mc_agrees_with_exact(disk7, marks7):
    a, b = marks7
    mids = interior_midpoints(disk7)
    u, v = mids[2], mids[7]
    exact = engine.pattern_counts_exhaustive(disk7, a, b, u, v)
    total = 1 << disk7.n_cells
    n = 100_000
    for seed in (1, 2, 3):
        counts = engine.pattern_counts_mc(disk7, a, b, u, v, n, seed=seed)
        for c_hat, c_exact in zip(counts, (exact.c_au_bv, exact.c_av_bu,
                                           exact.c_left, exact.c_right)):
            p = c_exact / total
            sigma = math.sqrt(p * (1 - p) / n)
            assert abs(c_hat / n - p) <= 4.0 * sigma


def test_observable_mc_swap_identity_per_sample_set(disk7, marks7):
    a, b = marks7
    mids = interior_midpoints(disk7)
    u, v = mids[2], mids[7]
    c_uv = engine.pattern_counts_mc(disk7, a, b, u, v, 20_000, seed=12)
    c_vu = engine.pattern_counts_mc(disk7, a, b, v, u, 20_000, seed=12)
    assert c_vu == (c_uv[1], c_uv[0], c_uv[2], c_uv[3])


def test_boundary_order_abuv_forbids_two_patterns_samplewise(disk7, marks7):
    a, b = marks7
    bnd = {disk7.boundary_order([a, b, disk7.midpoint(s1), disk7.midpoint(s2)]): (s1, s2)
           for s1 in disk7.cycle_sides for s2 in disk7.cycle_sides
           if len({s1, s2, a.index, b.index}) == 4}
    s1, s2 = bnd["a,b,u,v"]
    counts = engine.pattern_counts_mc(
        disk7, a, b, disk7.midpoint(s1), disk7.midpoint(s2), 20_000, seed=4)
    assert counts[0] == 0 and counts[3] == 0  # no a-u pairing, no right lines


def test_observable_value_encoding(disk7, marks7):
    a, b = marks7
    mids = interior_midpoints(disk7)
    obs = observable_exact(disk7, a, b, mids[2], mids[7])
    assert abs(obs.A) <= 1 << obs.n and abs(obs.B) <= 1 << obs.n
    want = complex(obs.A, math.sqrt(3.0) * obs.B) / (1 << obs.n)
    assert obs.value == pytest.approx(want)


def test_table_dump_format(disk7, marks7):
    a, b = marks7
    v = interior_midpoints(disk7)[7]
    table = engine.observable_table_exact(disk7, a, b, v)
    rows = table_to_json(table, disk7)
    assert len(rows) == disk7.tables.n_sides - 2
    for row in rows:
        assert set(row) == {"midpoint_id", "A", "B", "n"}
        assert row["n"] == disk7.n_cells


def test_observable_golden_snapshot(disk7):
    import json
    import pathlib

    golden = json.loads(
        (pathlib.Path(__file__).parent / "golden" / "observable_disk7.json").read_text())
    a = disk7.midpoint(tuple(tuple(c) for c in golden["a"]))
    b = disk7.midpoint(tuple(tuple(c) for c in golden["b"]))
    v = disk7.midpoint(tuple(tuple(c) for c in golden["v"]))
    table = engine.observable_table_exact(disk7, a, b, v)
    assert table_to_json(table, disk7) == golden["rows"]


def test_table_json_roundtrip(disk7, marks7):
    from hexperc.loops import table_from_json

    a, b = marks7
    v = interior_midpoints(disk7)[5]
    table = engine.observable_table_exact(disk7, a, b, v)
    rows = table_to_json(table, disk7)
    clone = table_from_json(rows, disk7, a.index, b.index, v.index)
    assert clone.entries == table.entries
    assert clone.n == table.n
    # the verifier consumes a loaded table just as well
    for z in disk7.interior_vertices():
        if v.index in (int(s) for s in disk7.vert_sides[z]):
            continue
        assert discrete_analyticity_residual(disk7, clone, z) == (0, 0)


def test_diagonal_entry_uses_point_side_counts(disk7, marks7):
    a, b = marks7
    v = interior_midpoints(disk7)[3]
    table = engine.observable_table_exact(disk7, a, b, v)
    nl, nr, _ = engine.point_side_counts_exhaustive(disk7, a, b, v)
    assert table.entries[v.index] == (0, nl - nr)


@settings(max_examples=15, deadline=None)
@given(value=st.integers(0, (1 << 7) - 1), pick=st.integers(0, 10_000))
def test_random_config_degrees(disk7, marks7, value, pick):
    a, b = marks7
    rng = np.random.default_rng(pick)
    sides = [s for s in range(disk7.tables.n_sides) if s not in (a.index, b.index)]
    su, sv = rng.choice(sides, size=2, replace=False)
    col = Coloring.from_packed(value, disk7.n_cells)
    cfg = loop_config_with_four_disorders(
        disk7, col, a, b, disk7.midpoint(int(su)), disk7.midpoint(int(sv)))
    cfg.degree_check(disk7)
