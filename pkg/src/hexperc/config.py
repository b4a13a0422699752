"""Experiment configuration: plain-text key=value files with sections.

One experiment per file; command-line flags override file values.  Marked
points are written either as plane coordinates ``x,y`` or, on a disk, as
boundary angles ``angle:degrees``.
"""

from __future__ import annotations

import cmath
import configparser
import math
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np

from .hexgrid import DiskDomain, PolygonDomain

MODES = ("enumerate", "simulate", "analytic", "verify", "cardy", "convergence")


@dataclass(frozen=True)
class ExperimentConfig:
    domain_kind: str = "disk"
    center: complex = 0j
    radius: float = 1.0
    points_file: str | None = None
    mark_a: str = "angle:180"
    mark_b: str = "angle:0"
    mark_u: str = "0,0.5"
    mark_v: str = "0,0.5"
    mode: str = "simulate"
    deltas: tuple[float, ...] = (0.1,)
    samples: int = 100_000
    seed: int = 1
    workers: int = 1
    out: str | None = None
    format: str = "json"
    svg: str | None = None
    cap: int = 24

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if not self.deltas or any(d <= 0 for d in self.deltas):
            raise ValueError("deltas must be positive")
        if self.samples < 1:
            raise ValueError("samples must be at least 1")
        if self.format not in ("json", "csv"):
            raise ValueError("format must be json or csv")
        if self.domain_kind not in ("disk", "polygon"):
            raise ValueError("domain kind must be disk or polygon")

    # -- resolution --------------------------------------------------------

    def domain_spec(self):
        if self.domain_kind == "disk":
            return DiskDomain(self.center, self.radius)
        if not self.points_file:
            raise ValueError("polygon domains need points_file")
        pts = np.loadtxt(self.points_file, delimiter=",", dtype=float)
        return PolygonDomain(pts)

    def point(self, text: str) -> complex:
        text = text.strip()
        if text.startswith("angle:"):
            if self.domain_kind != "disk":
                raise ValueError("angle marks are only defined for disks")
            ang = math.radians(float(text[len("angle:"):]))
            return self.center + self.radius * cmath.exp(1j * ang)
        x, y = (float(t) for t in text.split(","))
        return complex(x, y)

    @property
    def a(self) -> complex:
        return self.point(self.mark_a)

    @property
    def b(self) -> complex:
        return self.point(self.mark_b)

    @property
    def u(self) -> complex:
        return self.point(self.mark_u)

    @property
    def v(self) -> complex:
        return self.point(self.mark_v)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["center"] = f"{self.center.real},{self.center.imag}"
        d["deltas"] = list(self.deltas)
        return d


def _parse_deltas(text: str) -> tuple[float, ...]:
    return tuple(float(t) for t in text.replace(";", ",").split(",") if t.strip())


def load_config(path: str | Path) -> ExperimentConfig:
    cp = configparser.ConfigParser()
    read = cp.read(path)
    if not read:
        raise FileNotFoundError(path)
    kw: dict = {}
    dom = cp["domain"] if cp.has_section("domain") else {}
    if "kind" in dom:
        kw["domain_kind"] = dom["kind"]
    if "center" in dom:
        x, y = (float(t) for t in dom["center"].split(","))
        kw["center"] = complex(x, y)
    if "radius" in dom:
        kw["radius"] = float(dom["radius"])
    if "points_file" in dom:
        kw["points_file"] = dom["points_file"]
    marks = cp["marks"] if cp.has_section("marks") else {}
    for name in ("a", "b", "u", "v"):
        if name in marks:
            kw[f"mark_{name}"] = marks[name]
    run = cp["run"] if cp.has_section("run") else {}
    if "mode" in run:
        kw["mode"] = run["mode"]
    if "delta" in run:
        kw["deltas"] = _parse_deltas(run["delta"])
    if "deltas" in run:
        kw["deltas"] = _parse_deltas(run["deltas"])
    for name, conv in (("samples", int), ("seed", int), ("workers", int), ("cap", int)):
        if name in run:
            kw[name] = conv(run[name])
    for name in ("out", "format", "svg"):
        if name in run:
            kw[name] = run[name]
    return ExperimentConfig(**kw)


def apply_overrides(cfg: ExperimentConfig, **overrides) -> ExperimentConfig:
    """Non-None overrides win over file values."""
    clean = {k: v for k, v in overrides.items() if v is not None}
    if "delta" in clean:
        clean["deltas"] = _parse_deltas(str(clean.pop("delta")))
    return replace(cfg, **clean)
