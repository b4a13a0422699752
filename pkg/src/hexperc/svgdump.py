"""Minimal SVG snapshot of one coloring and its interface, for documentation."""

from __future__ import annotations

import math

from .hexgrid import VERTEX_OFFSETS, HexDomain, cell_center_exact, exact_to_complex
from .percolation import Coloring, InterfacePath

_BLUE = "#4a90d9"
_YELLOW = "#f4d03f"
_IFACE = "#c0392b"


def render_svg(dom: HexDomain, coloring: Coloring, interface: InterfacePath | None = None,
               width: int = 640) -> str:
    pts = []
    for q, r in dom.cells:
        cx, cy = cell_center_exact(q, r)
        for k in range(6):
            pts.append(exact_to_complex(cx + VERTEX_OFFSETS[k][0], cy + VERTEX_OFFSETS[k][1], dom.delta))
    xs = [p.real for p in pts]
    ys = [p.imag for p in pts]
    pad = dom.delta
    x0, x1 = min(xs) - pad, max(xs) + pad
    y0, y1 = min(ys) - pad, max(ys) + pad
    scale = width / (x1 - x0)
    height = int(math.ceil((y1 - y0) * scale))

    def sx(z: complex) -> str:
        return f"{(z.real - x0) * scale:.2f},{(y1 - z.imag) * scale:.2f}"

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
    ]
    for i, (q, r) in enumerate(dom.cells):
        cx, cy = cell_center_exact(q, r)
        corners = " ".join(
            sx(exact_to_complex(cx + VERTEX_OFFSETS[k][0], cy + VERTEX_OFFSETS[k][1], dom.delta))
            for k in range(6)
        )
        fill = _BLUE if coloring.bits[i] else _YELLOW
        out.append(f'<polygon points="{corners}" fill="{fill}" stroke="#555" stroke-width="0.6"/>')
    if interface is not None:
        path = " ".join(sx(p) for p in interface.point_list())
        out.append(
            f'<polyline points="{path}" fill="none" stroke="{_IFACE}" '
            f'stroke-width="2.2" stroke-linejoin="round"/>'
        )
    out.append("</svg>")
    return "\n".join(out)


def write_svg(path, dom: HexDomain, coloring: Coloring, interface: InterfacePath | None = None):
    with open(path, "w") as f:
        f.write(render_svg(dom, coloring, interface))
