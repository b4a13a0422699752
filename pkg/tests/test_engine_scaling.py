"""Scaling smoke tests: the batched kernels on meshes beyond the enumerable range."""

import pytest

from hexperc import DiskDomain, build_lattice_approximation, observable_mc
from hexperc import engine


@pytest.fixture(scope="module")
def disk95():
    return build_lattice_approximation(DiskDomain(0j, 1.0), 0.1)


@pytest.fixture(scope="module")
def marks95(disk95):
    a = disk95.nearest_midpoint(1 + 0j, on_boundary=True)
    b = disk95.nearest_midpoint(-1 + 0j, on_boundary=True)
    return a, b


def test_pair_estimation_with_distinct_points_at_scale(disk95, marks95):
    a, b = marks95
    u = disk95.nearest_midpoint(0.45j)
    v = disk95.nearest_midpoint(-0.45j)
    rep = engine.pair_probabilities_mc(disk95, a, b, u, v, 20_000, seed=6)
    # opposite sides of the a-b diameter can rarely share a component side
    assert rep.p_left + rep.p_right < 0.5
    assert rep.p_left + rep.p_right + rep.p_neither == pytest.approx(1.0)
    # midpoints sharing a hexagon vertex end up together far more often than
    # points on opposite sides of the interface corridor
    t = disk95.tables
    w = int(t.side_vA[u.index])
    s2 = next(int(h) >> 1 for h in t.vert_hs[w]
              if h >= 0 and (int(h) >> 1) != u.index)
    v2 = disk95.midpoint(s2)
    rep2 = engine.pair_probabilities_mc(disk95, a, b, u, v2, 20_000, seed=6)
    assert rep2.p_left + rep2.p_right > 3.0 * (rep.p_left + rep.p_right)


def test_pattern_counts_sum_and_swap_at_scale(disk95, marks95):
    a, b = marks95
    u = disk95.nearest_midpoint(0.3 + 0.2j)
    v = disk95.nearest_midpoint(-0.25 + 0.1j)
    n = 20_000
    c_uv = engine.pattern_counts_mc(disk95, a, b, u, v, n, seed=8)
    assert sum(c_uv) == n
    c_vu = engine.pattern_counts_mc(disk95, a, b, v, u, n, seed=8)
    assert c_vu == (c_uv[1], c_uv[0], c_uv[2], c_uv[3])


def test_observable_mc_value_and_errors(disk13, marks13):
    a, b = marks13
    sides = [s for s in range(disk13.tables.n_sides) if not disk13.tables.side_boundary[s]]
    u, v = disk13.midpoint(sides[2]), disk13.midpoint(sides[9])
    est = observable_mc(disk13, a, b, u, v, 200_000, seed=3)
    exact = engine.pattern_counts_exhaustive(disk13, a, b, u, v).observable
    assert abs(est.re - exact.value.real) <= 4 * max(est.stderr_re, 1e-9)
    assert abs(est.value.imag - exact.value.imag) <= 4 * max(est.stderr_value[1], 1e-9)
    # the diagonal branch has no real part at all
    diag = observable_mc(disk13, a, b, u, u, 50_000, seed=3)
    assert diag.re == 0.0 and diag.stderr_re == 0.0
    assert abs(diag.value.real) == 0.0


def test_enumeration_chunking_matches_single_block(disk13, marks13):
    # 2^13 colorings split across two chunk sizes must give identical counts
    a, b = marks13
    u = disk13.nearest_midpoint(0.2 + 0.1j)
    v = disk13.nearest_midpoint(-0.3 + 0.2j)
    import hexperc.engine as eng

    old = eng.CHUNK
    try:
        eng.CHUNK = 1 << 10
        chunked = eng.pair_counts_exhaustive(disk13, a, b, u, v)
    finally:
        eng.CHUNK = old
    assert chunked == eng.pair_counts_exhaustive(disk13, a, b, u, v)
