"""Machine-readable run artifacts.

Every JSON or CSV artifact embeds the full experiment configuration and a
format version, so a report is reproducible from its own header.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

FORMAT_VERSION = 1


def json_payload(kind: str, config: dict, body: dict) -> dict:
    return {"format_version": FORMAT_VERSION, "kind": kind, "config": config, **body}


def write_json(path: str | None, payload: dict) -> str:
    text = json.dumps(payload, indent=1, sort_keys=True)
    if path:
        with open(path, "w") as f:
            f.write(text + "\n")
    return text


def write_csv(path: str | None, config: dict, header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    buf.write(f"# format_version={FORMAT_VERSION}\n")
    for key, value in sorted(config.items()):
        buf.write(f"# config.{key}={value}\n")
    writer = csv.writer(buf)
    writer.writerow(header)
    writer.writerows(rows)
    text = buf.getvalue()
    if path:
        with open(path, "w") as f:
            f.write(text)
    return text


@dataclass(frozen=True)
class ConvergenceRow:
    delta: float
    n_cells: int
    n_samples: int
    seed: int
    mc_diff: float
    mc_stderr: float
    analytic_rhs: float
    exact_diff: float | None = None
    schramm_rhs: float | None = None

    @property
    def gap(self) -> float:
        return abs(self.mc_diff - self.analytic_rhs)

    def as_dict(self) -> dict:
        return {
            "delta": self.delta,
            "n_cells": self.n_cells,
            "n_samples": self.n_samples,
            "seed": self.seed,
            "mc_diff": self.mc_diff,
            "mc_stderr": self.mc_stderr,
            "analytic_rhs": self.analytic_rhs,
            "exact_diff": self.exact_diff,
            "schramm_rhs": self.schramm_rhs,
            "gap": self.gap,
        }


@dataclass
class ComparisonReport:
    """Per-delta comparison of the Monte Carlo, exact and analytic routes."""

    rows: list[ConvergenceRow] = field(default_factory=list)

    CSV_HEADER = [
        "delta", "n_cells", "n_samples", "seed", "mc_diff", "mc_stderr",
        "analytic_rhs", "exact_diff", "schramm_rhs", "gap",
    ]

    def csv_rows(self) -> list[list]:
        return [[r.as_dict()[k] for k in self.CSV_HEADER] for r in self.rows]

    def as_body(self) -> dict:
        return {"rows": [r.as_dict() for r in self.rows]}
