"""Exact verification suites for enumerable domains.

Each suite checks an integer identity of the exhaustively computed observable
tables: the three-midpoint analyticity relation at interior vertices,
vanishing discrete contour integrals, conjugate antisymmetry together with
the six boundary-order segment identities, and the link-pattern counting
identity.  Residuals are reported exactly; any nonzero residual fails.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .engine import pattern_counts_table, point_side_counts_exhaustive
from .hexgrid import HexDomain, Midpoint
from .loops import (
    ObservableTable,
    contour_family,
    contour_integral,
    discrete_analyticity_residual,
    midpoint_outside_contour,
)


@dataclass
class CheckResult:
    name: str
    status: str
    worst_residual: float
    detail: str = ""

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "worst_residual": self.worst_residual,
            "detail": self.detail,
        }


@dataclass
class VerifyResult:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.status == "pass" for c in self.checks)

    def as_body(self) -> dict:
        return {"checks": [c.as_dict() for c in self.checks], "passed": self.passed}


def build_all_tables(dom: HexDomain, a: Midpoint, b: Midpoint, cap: int, workers: int = 1):
    """Observable tables and raw pattern counts for every admissible v."""
    tables: dict[int, ObservableTable] = {}
    counts: dict[int, dict[int, tuple[int, int, int, int]]] = {}
    for s in range(dom.tables.n_sides):
        if s in (a.index, b.index):
            continue
        v = dom.midpoint(s)
        raw = pattern_counts_table(dom, a, b, v, cap=cap, workers=workers)
        entries = {side: (c[1] - c[0], c[2] - c[3]) for side, c in raw.items()}
        nl, nr, _ = point_side_counts_exhaustive(dom, a, b, v, workers=workers)
        entries[s] = (0, nl - nr)
        tables[s] = ObservableTable(a.index, b.index, s, dom.n_cells, entries)
        counts[s] = raw
    return tables, counts


def check_analyticity(dom: HexDomain, tables: dict[int, ObservableTable]) -> CheckResult:
    worst = 0
    n_checked = 0
    for v_side, table in tables.items():
        for z in dom.interior_vertices():
            if v_side in (int(s) for s in dom.vert_sides[z]):
                continue
            re, im = discrete_analyticity_residual(dom, table, z)
            worst = max(worst, abs(re), abs(im))
            n_checked += 1
    status = "pass" if worst == 0 else "fail"
    return CheckResult("discrete_analyticity", status, float(worst),
                       f"{n_checked} vertex/observable pairs")


def check_contours(dom: HexDomain, tables: dict[int, ObservableTable],
                   n_larger: int = 10) -> CheckResult:
    contours = contour_family(dom, n_larger=n_larger)
    worst = 0
    n_checked = 0
    for cells in contours:
        for v_side, table in tables.items():
            if not midpoint_outside_contour(dom, cells, v_side):
                continue
            re, im = contour_integral(dom, table, cells)
            worst = max(worst, abs(re), abs(im))
            n_checked += 1
    status = "pass" if worst == 0 and n_checked > 0 else "fail"
    return CheckResult("contour_vanishing", status, float(worst),
                       f"{len(contours)} contours, {n_checked} integrals")


def check_antisymmetry(dom: HexDomain, tables: dict[int, ObservableTable]) -> CheckResult:
    worst = 0
    n_checked = 0
    for v_side, table in tables.items():
        for u_side, (A, B) in table.entries.items():
            if u_side == v_side or u_side not in tables:
                continue
            A2, B2 = tables[u_side].entries[v_side]
            worst = max(worst, abs(A + A2), abs(B - B2))
            n_checked += 1
    status = "pass" if worst == 0 else "fail"
    return CheckResult("conjugate_antisymmetry", status, float(worst), f"{n_checked} ordered pairs")


# order tag -> signs making both observable components nonnegative; the signed
# components then sum to exactly 2^n (the segment between an endpoint +-1 and
# an endpoint +-i*sqrt(3) in barycentric form)
_SEGMENT_IDENTITY = {
    "a,b,u,v": (1, 1),
    "a,b,v,u": (-1, 1),
    "a,u,v,b": (-1, -1),
    "a,v,u,b": (1, -1),
}


def check_boundary_segments(dom: HexDomain, a: Midpoint, b: Midpoint,
                            tables: dict[int, ObservableTable]) -> CheckResult:
    total = 1 << dom.n_cells
    worst = 0
    n_checked = 0
    seen_orders = set()
    bnd = [s for s in dom.cycle_sides if s not in (a.index, b.index)]
    for u_side in bnd:
        for v_side in bnd:
            if u_side == v_side:
                continue
            u, v = dom.midpoint(u_side), dom.midpoint(v_side)
            tag = dom.boundary_order([a, b, u, v])
            seen_orders.add(tag)
            A, B = tables[v_side].entries[u_side]
            if tag in _SEGMENT_IDENTITY:
                sA, sB = _SEGMENT_IDENTITY[tag]
                bad = max(0, -sA * A) + max(0, -sB * B) + abs(sA * A + sB * B - total)
                worst = max(worst, bad)
            else:
                # orders a,u,b,v and a,v,b,u: the u-v line cannot avoid the a-b line
                worst = max(worst, abs(B))
            n_checked += 1
    status = "pass" if worst == 0 and len(seen_orders) == 6 else "fail"
    return CheckResult("boundary_segments", status, float(worst),
                       f"{n_checked} boundary pairs, {len(seen_orders)} cyclic orders")


def check_counting(dom: HexDomain, counts) -> CheckResult:
    total = 1 << dom.n_cells
    worst = 0
    n_checked = 0
    for v_side, per_u in counts.items():
        for u_side, c in per_u.items():
            worst = max(worst, abs(sum(c) - total))
            n_checked += 1
    status = "pass" if worst == 0 else "fail"
    return CheckResult("pattern_counting", status, float(worst), f"{n_checked} placements")


def run_verify(dom: HexDomain, a: Midpoint, b: Midpoint, cap: int = 24,
               workers: int = 1) -> VerifyResult:
    tables, counts = build_all_tables(dom, a, b, cap, workers=workers)
    result = VerifyResult()
    result.checks.append(check_analyticity(dom, tables))
    result.checks.append(check_contours(dom, tables))
    result.checks.append(check_antisymmetry(dom, tables))
    result.checks.append(check_boundary_segments(dom, a, b, tables))
    result.checks.append(check_counting(dom, counts))
    return result
