"""Static SVG drawings of frameworks.

Cables are dashed, struts solid and heavy, bars solid.  Output depends only
on the framework and the options, byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .model import Framework, MemberKind, UnsupportedRegimeError

# fixed orthographic view for 3D: rotate 30 degrees about z, then tilt 60 degrees about x
_C, _S = np.cos(np.pi / 6), np.sin(np.pi / 6)
_ROT_Z = np.array([[_C, -_S, 0.0], [_S, _C, 0.0], [0.0, 0.0, 1.0]])
_TILT = np.array([[1.0, 0.0, 0.0], [0.0, np.cos(np.pi / 3), -np.sin(np.pi / 3)], [0.0, np.sin(np.pi / 3), np.cos(np.pi / 3)]])
PROJECTION_3D = (_TILT @ _ROT_Z)[:2]

STYLES = {
    MemberKind.CABLE: 'stroke="#1f4e9c" stroke-width="1.5" stroke-dasharray="6,4"',
    MemberKind.STRUT: 'stroke="#000000" stroke-width="4"',
    MemberKind.BAR: 'stroke="#444444" stroke-width="2"',
}


@dataclass(frozen=True)
class SvgOptions:
    size: float = 400.0
    margin: float = 30.0
    radius: float = 6.0
    labels: bool = True


def _project(f: Framework) -> np.ndarray:
    if f.d == 2:
        return f.configuration.points.copy()
    if f.d == 3:
        return f.configuration.points @ PROJECTION_3D.T
    raise UnsupportedRegimeError(f"cannot draw a framework in dimension {f.d}")


def render_svg(f: Framework, options: SvgOptions = SvgOptions()) -> str:
    xy = _project(f)
    lo, hi = xy.min(axis=0), xy.max(axis=0)
    span = float(max(hi - lo)) or 1.0
    inner = options.size - 2 * options.margin
    scale = inner / span
    # y axis points down in SVG
    sx = options.margin + (xy[:, 0] - lo[0]) * scale
    sy = options.size - options.margin - (xy[:, 1] - lo[1]) * scale

    def fmt(v: float) -> str:
        return f"{v:.3f}"

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{fmt(options.size)}" '
        f'height="{fmt(options.size)}" viewBox="0 0 {fmt(options.size)} {fmt(options.size)}">',
        '<g class="members" fill="none" stroke-linecap="round">',
    ]
    for m in f.graph:
        lines.append(
            f'<line class="{m.kind.value}" x1="{fmt(sx[m.i])}" y1="{fmt(sy[m.i])}" '
            f'x2="{fmt(sx[m.j])}" y2="{fmt(sy[m.j])}" {STYLES[m.kind]}/>'
        )
    lines.append("</g>")
    lines.append('<g class="vertices" font-family="sans-serif" font-size="11" text-anchor="middle">')
    for v in range(f.n):
        lines.append(
            f'<circle cx="{fmt(sx[v])}" cy="{fmt(sy[v])}" r="{fmt(options.radius)}" fill="#ffffff" stroke="#000000"/>'
        )
        if options.labels:
            lines.append(f'<text x="{fmt(sx[v])}" y="{fmt(sy[v] + 4)}">{escape(str(v))}</text>')
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def export_svg(f: Framework, out: str | Path, options: SvgOptions = SvgOptions()) -> Path:
    path = Path(out)
    path.write_text(render_svg(f, options), encoding="utf-8")
    return path
