"""Experiment orchestration: one function per CLI mode.

Each runner resolves the configuration into lattice objects, drives the
engine, and returns (payload_dict_or_text, exit_code).  Delta sweeps run
largest mesh first so partial output stays useful.
"""

from __future__ import annotations

import math
import time

import numpy as np

from . import engine, loops, reports
from .config import ExperimentConfig
from .conformal import cardy_formula, disk_to_halfplane, passage_difference_limit, schramm_formula
from .hexgrid import HexDomain, build_lattice_approximation
from .percolation import sample_coloring, trace_interface
from .reports import ComparisonReport, ConvergenceRow
from .verify import run_verify


def _build(cfg: ExperimentConfig, delta: float) -> HexDomain:
    return build_lattice_approximation(cfg.domain_spec(), delta)


def _snap_marks(cfg: ExperimentConfig, dom: HexDomain):
    a = dom.nearest_midpoint(cfg.a, on_boundary=True)
    b = dom.nearest_midpoint(cfg.b, on_boundary=True)
    u = dom.nearest_midpoint(cfg.u)
    v = dom.nearest_midpoint(cfg.v)
    snapped = {"a": a, "b": b, "u": u, "v": v}
    for n1, n2 in (("a", "b"), ("a", "u"), ("a", "v"), ("b", "u"), ("b", "v")):
        if snapped[n1].index == snapped[n2].index:
            raise ValueError(
                f"marks {n1} and {n2} snapped to the same midpoint at this mesh")
    return a, b, u, v


def _maybe_svg(cfg: ExperimentConfig, dom: HexDomain, a, b):
    if not cfg.svg:
        return
    from .svgdump import write_svg

    rng = np.random.Generator(np.random.Philox(key=np.array([cfg.seed, 2**32], dtype=np.uint64)))
    col = sample_coloring(dom, rng)
    path = trace_interface(dom, col, a, b)
    write_svg(cfg.svg, dom, col, path)


def run_simulate(cfg: ExperimentConfig):
    delta = max(cfg.deltas)
    dom = _build(cfg, delta)
    a, b, u, v = _snap_marks(cfg, dom)
    t0 = time.time()
    rep = engine.pair_probabilities_mc(dom, a, b, u, v, cfg.samples, cfg.seed, cfg.workers)
    wall = time.time() - t0
    _maybe_svg(cfg, dom, a, b)
    body = {
        "delta": delta,
        "n_cells": dom.n_cells,
        "n_samples": rep.n_samples,
        "seed": rep.seed,
        "p_left": rep.p_left,
        "p_right": rep.p_right,
        "stderr_left": rep.stderr_left,
        "stderr_right": rep.stderr_right,
        "p_neither": rep.p_neither,
        "wall_time": wall,
    }
    return reports.json_payload("simulate", cfg.to_dict(), body), 0


def run_enumerate(cfg: ExperimentConfig):
    delta = max(cfg.deltas)
    dom = _build(cfg, delta)
    a, b, u, v = _snap_marks(cfg, dom)
    obs = loops.observable_exact(dom, a, b, u, v, cap=cfg.cap)
    body = {
        "delta": delta,
        "n_cells": dom.n_cells,
        "A": obs.A,
        "B": obs.B,
        "n": obs.n,
        "value_re": obs.value.real,
        "value_im": obs.value.imag,
    }
    if u.index != v.index:
        pc = engine.pattern_counts_exhaustive(dom, a, b, u, v)
        body["counts"] = {
            "au_bv": pc.c_au_bv, "av_bu": pc.c_av_bu,
            "ab_uv_left": pc.c_left, "ab_uv_right": pc.c_right,
        }
    table = engine.observable_table_exact(dom, a, b, v, cap=cfg.cap, workers=cfg.workers)
    body["observable_table"] = loops.table_to_json(table, dom)
    return reports.json_payload("enumerate", cfg.to_dict(), body), 0


def run_analytic(cfg: ExperimentConfig, function: str = "g", grid: int = 50):
    """Tabulate one closed form as CSV rows."""
    rows: list[list] = []
    if function == "g":
        from .conformal import rhombus_map

        header = ["z_re", "z_im", "g_re", "g_im"]
        xs = np.linspace(-0.95, 0.95, grid)
        for x in xs:
            for y in xs:
                gz = rhombus_map(complex(x, y))
                rows.append([x, y, gz.real, gz.imag])
    elif function == "cardy":
        header = ["eta", "cardy_value"]
        for eta in np.linspace(0.0, 1.0, grid):
            rows.append([eta, cardy_formula(float(eta))])
    elif function == "schramm":
        header = ["theta", "schramm_value"]
        for th in np.linspace(0.02, 2 * math.pi - 0.02, grid):
            rows.append([th, schramm_formula(float(th))])
    else:
        raise ValueError(f"unknown analytic function {function!r}")
    return reports.write_csv(cfg.out, cfg.to_dict(), header, rows), 0


def run_verify_mode(cfg: ExperimentConfig):
    delta = max(cfg.deltas)
    dom = _build(cfg, delta)
    a, b, _, _ = _snap_marks(cfg, dom)
    result = run_verify(dom, a, b, cap=cfg.cap, workers=cfg.workers)
    payload = reports.json_payload(
        "verify", cfg.to_dict(),
        {"delta": delta, "n_cells": dom.n_cells, **result.as_body()},
    )
    return payload, 0 if result.passed else 1


def run_convergence(cfg: ExperimentConfig):
    analytic = passage_difference_limit(cfg.a, cfg.b, cfg.u, cfg.v)
    report = ComparisonReport()
    schramm_value = None
    if cfg.domain_kind == "disk" and cfg.u == cfg.v and abs(cfg.u - cfg.center) < 1e-12:
        theta = (np.angle(complex(cfg.a - cfg.center)) - np.angle(complex(cfg.b - cfg.center))) % (
            2 * math.pi
        )
        schramm_value = schramm_formula(float(theta))
        predicted = 0.5 * (1.0 + analytic)
        if abs(predicted - schramm_value) > 1e-10:
            raise AssertionError(
                f"angular passage formula disagrees with the cross-ratio route: "
                f"{predicted} vs {schramm_value}"
            )
    for delta in sorted(cfg.deltas, reverse=True):
        dom = _build(cfg, delta)
        a, b, u, v = _snap_marks(cfg, dom)
        rep = engine.pair_probabilities_mc(dom, a, b, u, v, cfg.samples, cfg.seed, cfg.workers)
        exact_diff = None
        if dom.n_cells <= min(cfg.cap, 20):
            nl, nr, tot = engine.pair_counts_exhaustive(dom, a, b, u, v, workers=cfg.workers)
            exact_diff = (nl - nr) / tot
        report.rows.append(
            ConvergenceRow(
                delta=delta, n_cells=dom.n_cells, n_samples=cfg.samples, seed=cfg.seed,
                mc_diff=rep.diff, mc_stderr=rep.stderr_diff,
                analytic_rhs=analytic, exact_diff=exact_diff, schramm_rhs=schramm_value,
            )
        )
    if cfg.format == "csv":
        return reports.write_csv(cfg.out, cfg.to_dict(), ComparisonReport.CSV_HEADER,
                                 report.csv_rows()), 0
    return reports.json_payload("convergence", cfg.to_dict(), report.as_body()), 0


def run_cardy(cfg: ExperimentConfig):
    """Crossing probability against the closed form, per mesh size.

    Marks are interpreted in counterclockwise order a, b, v, u on the
    boundary; the u-v pair of the config file carries the other two arc ends.
    """
    if cfg.domain_kind != "disk":
        raise ValueError("the built-in uniformizer covers disks only")
    for name, w in (("a", cfg.a), ("b", cfg.b), ("u", cfg.u), ("v", cfg.v)):
        if abs(abs(w - cfg.center) - cfg.radius) > 1e-9 * cfg.radius:
            raise ValueError(f"cardy mode needs mark {name} on the boundary circle")
    unit = lambda w: (w - cfg.center) / cfg.radius
    pu = disk_to_halfplane(unit(cfg.u), unit(cfg.a), unit(cfg.b))
    pv = disk_to_halfplane(unit(cfg.v), unit(cfg.a), unit(cfg.b))
    eta = pu / pv
    if abs(eta.imag) > 1e-9:
        raise ValueError("cardy mode needs all four marks on the boundary")
    analytic = cardy_formula(min(1.0, max(0.0, eta.real)))
    rows = []
    for delta in sorted(cfg.deltas, reverse=True):
        dom = _build(cfg, delta)
        a, b, u, v = _snap_marks(cfg, dom)
        rep = engine.crossing_probability_mc(dom, a, b, v, u, cfg.samples, cfg.seed, cfg.workers)
        exact = None
        if dom.n_cells <= min(cfg.cap, 20):
            nx, tot = engine.crossing_counts_exhaustive(dom, a, b, v, u, workers=cfg.workers)
            exact = nx / tot
        rows.append({
            "delta": delta, "n_cells": dom.n_cells, "n_samples": cfg.samples, "seed": cfg.seed,
            "mc_crossing": rep.p_left, "mc_stderr": rep.stderr_left,
            "eta": eta.real, "cardy_value": analytic, "exact_crossing": exact,
            "gap": abs(rep.p_left - analytic),
        })
    if cfg.format == "csv":
        header = list(rows[0].keys())
        return reports.write_csv(cfg.out, cfg.to_dict(), header,
                                 [[r[k] for k in header] for r in rows]), 0
    return reports.json_payload("cardy", cfg.to_dict(), {"rows": rows}), 0
