import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hexperc import (
    BranchHint,
    OnBranchCut,
    boundary_segment,
    cardy_formula,
    disk_to_halfplane,
    hyp2f1,
    passage_difference_limit,
    rhombus_map,
    schramm_formula,
)
from hexperc.conformal import SQRT3, hyp2f1_quadrature

TRIPLES = ((1 / 3, 2 / 3, 4 / 3), (1 / 2, 2 / 3, 3 / 2))


def test_hyp2f1_at_zero_is_one():
    for p, q, r in TRIPLES:
        assert hyp2f1(p, q, r, 0.0) == 1.0 + 0j


def test_hyp2f1_at_one_matches_gauss_sum():
    p, q, r = 1 / 3, 2 / 3, 4 / 3
    g = math.gamma
    want = g(r) * g(r - p - q) / (g(r - p) * g(r - q))
    got = hyp2f1(p, q, r, 1.0)
    assert got == pytest.approx(want, rel=1e-14)
    # and the quadrature oracle agrees close to the endpoint
    near = hyp2f1_quadrature(p, q, r, 0.999)
    assert abs(hyp2f1(p, q, r, 0.999) - near) < 1e-11


def test_hyp2f1_quarter_point_against_oracle():
    got = hyp2f1(0.5, 2 / 3, 1.5, 0.25)
    want = hyp2f1_quadrature(0.5, 2 / 3, 1.5, 0.25)
    assert abs(got - want) <= 1e-12 * abs(want)


@pytest.mark.parametrize("pqr", TRIPLES)
def test_hyp2f1_matches_oracle_across_regimes(pqr):
    rng = np.random.default_rng(5)
    pts = [complex(x, y) for x, y in rng.uniform(-3.0, 3.0, size=(120, 2))
           if not (abs(y) < 1e-3 and x > 0.9)]
    pts += [0.99 + 0.2j, -8.0 + 0.01j, 0.55 + 0.75j, 0.5 - 0.85j,
            1.0001 * cmath.exp(1j * math.pi / 3)]
    for z in pts:
        got = hyp2f1(*pqr, z)
        want = hyp2f1_quadrature(*pqr, z)
        assert abs(got - want) <= 1e-12 * max(1.0, abs(want)), z


def test_hyp2f1_raises_on_cut():
    with pytest.raises(OnBranchCut):
        hyp2f1(1 / 3, 2 / 3, 4 / 3, 2.0)


def test_rhombus_fixed_points():
    for z in (0.0, 1.0, -1.0):
        for form in (1, 2):
            assert abs(rhombus_map(z, form=form) - z) <= 1e-12


def test_rhombus_forms_agree_on_grid():
    xs = np.linspace(-0.95, 0.95, 50)
    worst = 0.0
    for x in xs:
        for y in xs:
            z = complex(x, y)
            worst = max(worst, abs(rhombus_map(z, form=1) - rhombus_map(z, form=2)))
    assert worst <= 1e-10


def test_rhombus_containment():
    xs = np.linspace(-0.95, 0.95, 50)
    for x in xs:
        for y in xs:
            g = rhombus_map(complex(x, y))
            assert abs(g.real) + abs(g.imag) / SQRT3 <= 1.0 + 1e-9


def test_rhombus_symmetries_random_points():
    rng = np.random.default_rng(11)
    count = 0
    while count < 1000:
        z = complex(rng.uniform(-4, 4), rng.uniform(-4, 4))
        if abs(z.imag) < 1e-6 and abs(z.real) >= 1.0:
            continue
        g = rhombus_map(z)
        assert abs(g + rhombus_map(-z)) <= 1e-10
        assert abs(g.conjugate() - rhombus_map(z.conjugate())) <= 1e-10
        count += 1


def test_rhombus_vertex_approached_along_imaginary_axis():
    # the corner is algebraic of exponent 1/3, so the gap shrinks like y**(-1/3)
    gaps = [abs(rhombus_map(1j * y) - 1j * SQRT3) for y in (10.0, 100.0, 1000.0)]
    assert gaps[0] > gaps[1] > gaps[2]
    assert abs(rhombus_map(1e10j) - 1j * SQRT3) < 1e-3


def test_rhombus_needs_hint_on_slits():
    with pytest.raises(OnBranchCut):
        rhombus_map(1.5)
    upper = rhombus_map(1.5, hint=BranchHint.FROM_UPPER)
    lower = rhombus_map(1.5, hint=BranchHint.FROM_LOWER)
    assert abs(upper - lower.conjugate()) <= 1e-9
    assert upper.imag > 0
    # continuation values agree with high-precision references off the cut
    import mpmath

    mpmath.mp.dps = 30
    c2 = 2 * SQRT3 * math.gamma(2 / 3) / (math.sqrt(math.pi) * math.gamma(1 / 6))
    zz = mpmath.mpc(1.5, 1e-25)
    ref = complex(c2 * zz * mpmath.hyp2f1(0.5, mpmath.mpf(2) / 3, 1.5, zz * zz))
    assert abs(upper - ref) <= 1e-8


def test_halfplane_map_normalisation():
    rng = np.random.default_rng(2)
    for _ in range(25):
        ta, tb = rng.uniform(0, 2 * math.pi, size=2)
        if abs(cmath.exp(1j * ta) - cmath.exp(1j * tb)) < 1e-6:
            continue
        a, b = cmath.exp(1j * ta), cmath.exp(1j * tb)
        psi = lambda w: disk_to_halfplane(w, a, b)
        assert abs(psi(a)) <= 1e-9
        assert psi(0).imag > 0
        for _ in range(10):
            w = complex(rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7))
            assert psi(w).imag > 0
        # boundary points land on the real axis
        w = cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        if abs(w - b) > 1e-3:
            assert abs(psi(w).imag) <= 1e-9


def test_halfplane_cross_ratio_identity():
    # the centre maps so that the cross-ratio quantity equals -i*cot(theta/2)
    rng = np.random.default_rng(3)
    for _ in range(20):
        ta, tb = rng.uniform(0, 2 * math.pi, size=2)
        theta = (ta - tb) % (2 * math.pi)
        if theta < 0.2 or theta > 2 * math.pi - 0.2:
            continue
        a, b = cmath.exp(1j * ta), cmath.exp(1j * tb)
        p0 = disk_to_halfplane(0, a, b)
        got = (p0 + p0.conjugate()) / (p0 - p0.conjugate())
        want = -1j * (math.cos(theta / 2) / math.sin(theta / 2))
        assert abs(got - want) <= 1e-10


def test_halfplane_antipodal_centre_quantity_vanishes():
    p0 = disk_to_halfplane(0, 1, -1)
    assert abs((p0 + p0.conjugate()) / (p0 - p0.conjugate())) <= 1e-12


def test_passage_limit_symmetric_case_is_zero():
    assert passage_difference_limit(1, -1, 0, 0) == pytest.approx(0.0, abs=1e-12)


def test_passage_limit_boundary_case_in_unit_range():
    a, b = cmath.exp(0j), cmath.exp(1j * math.pi)
    u = cmath.exp(1j * math.radians(200))
    v = cmath.exp(1j * math.radians(300))
    # counterclockwise order a,b,u,v: both marks on the clockwise arc
    val = passage_difference_limit(a, b, u, v)
    assert 0.0 <= val <= 1.0


def test_passage_limit_scale_invariance():
    a, b = 1 + 0j, -1 + 0j
    base = lambda w: disk_to_halfplane(w, a, b)
    u, v = 0.3 + 0.2j, -0.1 + 0.4j
    ref = passage_difference_limit(a, b, u, v)
    for lam in (2.0, 10.0):
        scaled = passage_difference_limit(a, b, u, v, psi=lambda w: lam * base(w))
        assert abs(scaled - ref) <= 1e-14


def test_passage_limit_swap_invariance():
    rng = np.random.default_rng(9)
    a, b = 1 + 0j, -1 + 0j
    for _ in range(100):
        u = complex(*rng.uniform(-0.65, 0.65, 2))
        v = complex(*rng.uniform(-0.65, 0.65, 2))
        assert abs(passage_difference_limit(a, b, u, v)
                   - passage_difference_limit(a, b, v, u)) <= 1e-10


def test_cardy_endpoints_and_midpoint():
    assert cardy_formula(0.0) == 0.0
    assert cardy_formula(1.0) == pytest.approx(1.0, abs=1e-13)
    assert cardy_formula(0.5) == pytest.approx(0.5, abs=1e-12)


def test_cardy_complement_symmetry():
    for eta in np.linspace(0.02, 0.98, 25):
        assert cardy_formula(float(eta)) + cardy_formula(float(1 - eta)) == pytest.approx(
            1.0, abs=1e-12)


def test_cardy_equals_rhombus_route():
    for eta in np.linspace(0.03, 0.97, 21):
        lhs = cardy_formula(float(eta))
        z = (eta + 1.0) / (eta - 1.0)
        rhs = rhombus_map(z, hint=BranchHint.FROM_UPPER).imag / SQRT3
        assert abs(lhs - rhs) <= 1e-10


def test_cardy_domain_errors():
    for bad in (-0.1, 1.1):
        with pytest.raises(ValueError):
            cardy_formula(bad)


def test_schramm_midpoint_and_domain():
    assert abs(schramm_formula(math.pi) - 0.5) <= 1e-12
    for bad in (0.0, 2 * math.pi):
        with pytest.raises(ValueError):
            schramm_formula(bad)


def test_schramm_limits_are_approached_monotonically():
    thetas = (1e-6, 0.01, 0.5, 1.5)
    vals = [schramm_formula(t) for t in thetas]
    assert vals == sorted(vals)
    assert vals[0] <= 0.02           # the corner exponent 1/3 needs tiny angles
    assert schramm_formula(2 * math.pi - 1e-6) >= 0.98


def test_schramm_supplement_symmetry():
    for theta in (0.5, 1.0, 2.0):
        assert schramm_formula(theta) + schramm_formula(2 * math.pi - theta) == pytest.approx(
            1.0, abs=1e-12)


def test_schramm_equals_rhombus_route():
    for theta in np.linspace(0.2, 2 * math.pi - 0.2, 23):
        c = math.cos(theta / 2) / math.sin(theta / 2)
        rhs = 0.5 + rhombus_map(-1j * c).imag / (2 * SQRT3)
        assert abs(schramm_formula(float(theta)) - rhs) <= 1e-10


def test_schramm_consistent_with_passage_limit():
    for ta in (0.3, 1.2, 2.5):
        a, b = cmath.exp(1j * ta), 1 + 0j
        theta = ta % (2 * math.pi)
        pred = 0.5 * (1.0 + passage_difference_limit(a, b, 0, 0))
        assert abs(pred - schramm_formula(theta)) <= 1e-10


def test_boundary_segments_table():
    assert boundary_segment("a,b,u,v") == (1.0 + 0j, 1j * SQRT3)
    assert boundary_segment("a,u,v,b") == (-1.0 + 0j, -1j * SQRT3)
    assert boundary_segment("a,u,b,v") == (-1.0 + 0j, 1.0 + 0j)
    assert boundary_segment("a,v,b,u") == (-1.0 + 0j, 1.0 + 0j)
    with pytest.raises(ValueError):
        boundary_segment("b,a,u,v")


@settings(max_examples=60, deadline=None)
@given(x=st.floats(-3, 3), y=st.floats(-3, 3))
def test_hyp2f1_oracle_property(x, y):
    z = complex(x, y)
    if abs(z.imag) < 1e-3 and z.real > 0.9:
        return
    got = hyp2f1(1 / 3, 2 / 3, 4 / 3, z)
    want = hyp2f1_quadrature(1 / 3, 2 / 3, 4 / 3, z)
    assert abs(got - want) <= 1e-11 * max(1.0, abs(want))
