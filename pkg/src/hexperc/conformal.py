"""Hypergeometric conformal maps: the slit-plane-to-rhombus map and the
closed-form crossing and passage probabilities it encodes.

The Gauss function is evaluated on its principal branch in C - [1, inf) by a
power series after an argument transformation chosen from the standard
connection formulas (DLMF 15.8): z, z/(z-1), 1-z or 1/z, whichever falls
inside radius 0.8.  In the remaining annulus none of them converges fast, and
the Euler integral is integrated exactly against its Gauss-Jacobi weight
instead; an adaptive-quadrature form of the same integral doubles as an
independent oracle for the tests.  Values on the two branch cuts are defined
as limits from one half-plane and realised by a Richardson-refined evaluation
at z +- i*eps.
"""

from __future__ import annotations

import cmath
import enum
import math
from functools import lru_cache

import numpy as np

SQRT3 = math.sqrt(3.0)

# closed-form constants; both normalise the same map, see form_agreement tests
COEFF_CUBE = 6.0 * math.gamma(2.0 / 3.0) / math.gamma(1.0 / 3.0) ** 2
COEFF_SQUARE = 2.0 * SQRT3 * math.gamma(2.0 / 3.0) / (math.sqrt(math.pi) * math.gamma(1.0 / 6.0))
COEFF_CARDY = 3.0 * math.gamma(2.0 / 3.0) / math.gamma(1.0 / 3.0) ** 2
COEFF_SCHRAMM = math.gamma(2.0 / 3.0) / (math.sqrt(math.pi) * math.gamma(1.0 / 6.0))

_SERIES_RADIUS = 0.8
_MAX_TERMS = 800
_CUT_EPS = 1e-9


class OnBranchCut(Exception):
    """Evaluation on (-inf, -1] or [1, +inf) requires a continuation side."""


class BranchHint(enum.Enum):
    INTERIOR = "interior"
    FROM_UPPER = "from_upper"
    FROM_LOWER = "from_lower"


def _series(p: float, q: float, r: float, z: complex) -> complex:
    total = term = 1.0 + 0.0j
    for k in range(_MAX_TERMS):
        term *= (p + k) * (q + k) / ((r + k) * (1.0 + k)) * z
        total += term
        if abs(term) <= 1e-17 * abs(total):
            return total
    raise ArithmeticError(f"hypergeometric series did not converge at z={z}")


@lru_cache(maxsize=None)
def _gamma_coeffs(p: float, q: float, r: float):
    g = math.gamma
    one_minus = (
        g(r) * g(r - p - q) / (g(r - p) * g(r - q)),
        g(r) * g(p + q - r) / (g(p) * g(q)),
    )
    recip = (
        g(r) * g(q - p) / (g(q) * g(r - p)),
        g(r) * g(p - q) / (g(p) * g(r - q)),
    )
    return one_minus, recip


@lru_cache(maxsize=8)
def _jacobi_rule(q: float, r: float, n: int = 160):
    from scipy.special import roots_jacobi

    x, w = roots_jacobi(n, r - q - 1.0, q - 1.0)
    tnodes = 0.5 * (x + 1.0)
    prefac = 2.0 ** (1.0 - r) * math.gamma(r) / (math.gamma(q) * math.gamma(r - q))
    return tnodes, w, prefac


def _euler_jacobi(p: float, q: float, r: float, z: complex) -> complex:
    """Euler integral with the endpoint weights absorbed into Gauss-Jacobi nodes."""
    tnodes, w, prefac = _jacobi_rule(q, r)
    vals = (1.0 - tnodes * z) ** (-p)
    return prefac * complex(np.sum(w * vals))


def hyp2f1(p: float, q: float, r: float, z: complex) -> complex:
    """Principal branch of the Gauss hypergeometric function on C - [1, inf)."""
    z = complex(z)
    if z.imag == 0.0 and z.real > 1.0:
        raise OnBranchCut("argument on [1, inf); evaluate with a continuation side")
    if z == 1.0:
        if r - p - q <= 0:
            raise ArithmeticError("divergent at z = 1")
        g = math.gamma
        return complex(g(r) * g(r - p - q) / (g(r - p) * g(r - q)))

    if abs(z) <= _SERIES_RADIUS:
        return _series(p, q, r, z)
    w = z / (z - 1.0)
    if abs(w) <= _SERIES_RADIUS:
        return (1.0 - z) ** (-p) * _series(p, r - q, r, w)
    if abs(1.0 - z) <= _SERIES_RADIUS:
        (c1, c2), _ = _gamma_coeffs(p, q, r)
        w = 1.0 - z
        return c1 * _series(p, q, p + q - r + 1.0, w) + c2 * w ** (r - p - q) * _series(
            r - p, r - q, r - p - q + 1.0, w
        )
    if abs(z) >= 1.0 / _SERIES_RADIUS:
        _, (c3, c4) = _gamma_coeffs(p, q, r)
        w = 1.0 / z
        return c3 * (-z) ** (-p) * _series(p, p - r + 1.0, p - q + 1.0, w) + c4 * (
            -z
        ) ** (-q) * _series(q, q - r + 1.0, q - p + 1.0, w)
    return _euler_jacobi(p, q, r, z)


def hyp2f1_quadrature(p: float, q: float, r: float, z: complex) -> complex:
    """Adaptive Gauss quadrature of the Euler integral; the independent oracle.

    A smoothstep substitution removes the algebraic endpoint singularities so
    QUADPACK reaches full accuracy.
    """
    import warnings

    from scipy.integrate import IntegrationWarning, quad

    z = complex(z)
    coef = math.gamma(r) / (math.gamma(q) * math.gamma(r - q))

    def integrand(s: float) -> complex:
        t = s * s * (3.0 - 2.0 * s)
        dt = 6.0 * s * (1.0 - s)
        if t <= 0.0 or t >= 1.0:
            return 0.0j
        return (t ** (q - 1.0)) * ((1.0 - t) ** (r - q - 1.0)) * (1.0 - t * z) ** (-p) * dt

    with warnings.catch_warnings():
        # the requested tolerance sits at the roundoff floor by design
        warnings.simplefilter("ignore", IntegrationWarning)
        re = quad(lambda s: integrand(s).real, 0.0, 1.0, epsabs=1e-14, epsrel=1e-13, limit=300)[0]
        im = quad(lambda s: integrand(s).imag, 0.0, 1.0, epsabs=1e-14, epsrel=1e-13, limit=300)[0]
    return coef * complex(re, im)


def _rhombus_interior(z: complex) -> complex:
    return COEFF_SQUARE * z * hyp2f1(0.5, 2.0 / 3.0, 1.5, z * z)


def _rhombus_cube_form(z: complex) -> complex:
    w = 0.5 * (z + 1.0)
    return COEFF_CUBE * w ** (1.0 / 3.0) * hyp2f1(1.0 / 3.0, 2.0 / 3.0, 4.0 / 3.0, w) - 1.0


def rhombus_map(
    z: complex,
    hint: BranchHint = BranchHint.INTERIOR,
    check_forms: bool = False,
    form: int = 2,
) -> complex:
    """Conformal map of C - (-inf,-1] u [1,+inf) onto the rhombus with
    vertices +-1, +-i*sqrt(3), fixing 0 and +-1.

    On the slits the value is the limit from the half-plane named by ``hint``
    (Richardson-refined evaluation at z +- i*eps).  ``check_forms`` asserts
    that the cube-root and square-argument closed forms agree to 1e-10.
    """
    z = complex(z)
    f = _rhombus_cube_form if form == 1 else _rhombus_interior
    if z.imag == 0.0 and abs(z.real) > 1.0:
        if hint is BranchHint.INTERIOR:
            raise OnBranchCut("argument on a slit; pass a continuation side")
        sign = 1.0 if hint is BranchHint.FROM_UPPER else -1.0
        f1 = f(complex(z.real, sign * _CUT_EPS))
        f2 = f(complex(z.real, sign * _CUT_EPS / 2.0))
        val = 2.0 * f2 - f1
        if check_forms:
            g = _rhombus_interior if form == 1 else _rhombus_cube_form
            g1 = g(complex(z.real, sign * _CUT_EPS))
            g2 = g(complex(z.real, sign * _CUT_EPS / 2.0))
            other = 2.0 * g2 - g1
            if abs(val - other) > 1e-10:
                raise AssertionError(f"closed forms disagree at {z}: {val} vs {other}")
        return val
    val = f(z)
    if check_forms:
        other = (_rhombus_interior if form == 1 else _rhombus_cube_form)(z)
        if abs(val - other) > 1e-10:
            raise AssertionError(f"closed forms disagree at {z}: {val} vs {other}")
    return val


# -- uniformizer and the three closed-form limits ------------------------------


def disk_to_halfplane(w: complex, a: complex, b: complex) -> complex:
    """Moebius map of the unit disk onto the upper half-plane, a -> 0, b -> inf.

    The unimodular rotation is fixed so the open disk maps to Im > 0; the
    whole family differs from this one by a positive real factor, which the
    passage formulas cancel.
    """
    for x, name in ((a, "a"), (b, "b")):
        if abs(abs(x) - 1.0) > 1e-9:
            raise ValueError(f"{name} must lie on the unit circle")
    if abs(a - b) < 1e-12:
        raise ValueError("a and b must be distinct")
    kappa = cmath.sqrt(b / a)
    if (kappa * a / b).imag <= 0:
        kappa = -kappa
    if w == b:
        return complex(math.inf, math.inf)
    return kappa * (w - a) / (w - b)


def _arc_side(x: complex, a: complex, b: complex) -> bool:
    """True when boundary point x lies on the counterclockwise arc from a to b."""
    ta = cmath.phase(a)
    span = (cmath.phase(b) - ta) % (2.0 * math.pi)
    d = (cmath.phase(x) - ta) % (2.0 * math.pi)
    return 0.0 < d < span


def passage_difference_limit(
    a: complex,
    b: complex,
    u: complex,
    v: complex,
    psi=None,
    hint: BranchHint | None = None,
) -> float:
    """Scaling limit of P(interface leaves u, v on its left) minus the right
    counterpart: Im of the rhombus map at the half-plane cross-ratio, over
    sqrt(3).

    Built in for the unit disk; for another smooth domain pass ``psi``, its
    conformal map onto the upper half-plane with a -> 0, b -> inf, plus an
    explicit ``hint`` when u and v both lie on one boundary arc.
    """
    for name, w in (("u", u), ("v", v)):
        if abs(w - a) < 1e-12 or abs(w - b) < 1e-12:
            raise ValueError(f"{name} must differ from both interface endpoints")
    if psi is None:
        psi = lambda w: disk_to_halfplane(w, a, b)
        if hint is None:
            on_bnd_u = abs(abs(u) - 1.0) < 1e-9
            on_bnd_v = abs(abs(v) - 1.0) < 1e-9
            hint = BranchHint.INTERIOR
            if on_bnd_u and on_bnd_v:
                u_ccw, v_ccw = _arc_side(u, a, b), _arc_side(v, a, b)
                if u_ccw and v_ccw:
                    hint = BranchHint.FROM_LOWER
                elif not u_ccw and not v_ccw:
                    hint = BranchHint.FROM_UPPER
    elif hint is None:
        hint = BranchHint.INTERIOR
    pu = psi(u)
    pv = psi(v)
    zarg = (pu + pv.conjugate()) / (pu - pv.conjugate())
    if hint is not BranchHint.INTERIOR:
        # the cross-ratio of two same-arc boundary points is real; strip the
        # rounding residue so the requested one-sided limit is actually taken
        zarg = complex(zarg.real, 0.0)
    elif zarg.imag == 0.0 and abs(zarg.real) > 1.0:
        raise OnBranchCut("cross-ratio landed on a slit; boundary points need a hint")
    val = rhombus_map(zarg, hint=hint).imag / SQRT3
    return min(1.0, max(-1.0, val))


def cardy_formula(eta: float) -> float:
    """Limit crossing probability at boundary cross-ratio eta in [0, 1]."""
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta must lie in [0, 1]")
    if eta == 0.0:
        return 0.0
    return float(
        (COEFF_CARDY * eta ** (1.0 / 3.0) * hyp2f1(1.0 / 3.0, 2.0 / 3.0, 4.0 / 3.0, eta)).real
    )


def schramm_formula(theta: float) -> float:
    """Limit probability that the interface passes left of the disk centre,
    for endpoints at angular separation theta in (0, 2*pi)."""
    if not 0.0 < theta < 2.0 * math.pi:
        raise ValueError("theta must lie strictly between 0 and 2*pi")
    c = math.cos(0.5 * theta) / math.sin(0.5 * theta)
    val = 0.5 - COEFF_SCHRAMM * c * hyp2f1(0.5, 2.0 / 3.0, 1.5, -c * c).real
    return float(val)


_SEGMENTS = {
    "a,b,u,v": (1.0 + 0.0j, 1j * SQRT3),
    "a,b,v,u": (-1.0 + 0.0j, 1j * SQRT3),
    "a,u,v,b": (-1.0 + 0.0j, -1j * SQRT3),
    "a,v,u,b": (1.0 + 0.0j, -1j * SQRT3),
    "a,u,b,v": (-1.0 + 0.0j, 1.0 + 0.0j),
    "a,v,b,u": (-1.0 + 0.0j, 1.0 + 0.0j),
}


def boundary_segment(order_tag: str) -> tuple[complex, complex]:
    """Segment of the complex plane containing the observable for boundary
    midpoints in the given counterclockwise order."""
    try:
        return _SEGMENTS[order_tag]
    except KeyError:
        raise ValueError(f"unknown cyclic order {order_tag!r}") from None
