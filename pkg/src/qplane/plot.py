"""Static SVG pictures of regions on the union of the two axes.

Each axis is a complex line and gets its own panel; the origin is shared.
"""

from __future__ import annotations

import math
from typing import List, Sequence, Tuple

from .qtopology import (
    AnnulusFamily,
    AxisSet,
    BackwardOrbit,
    Disk,
    ForwardOrbit,
    Interval,
    Points,
    QRegion,
    X_AXIS,
    Y_AXIS,
)

PANEL = 320
MARGIN = 30
MAX_RINGS = 60
FILL = "#8fb3d9"
EDGE = "#2b5d8c"
DOT = "#b03a2e"
RESOLVENT = "#2e8b57"


def _fmt(v: float) -> str:
    return f"{v:.3f}".rstrip("0").rstrip(".")


def _view_radius(region: QRegion) -> float:
    """Large enough to show every bounded feature with some room."""
    r = 1.0
    for a in (region.x, region.y):
        for p in a.parts:
            if isinstance(p, Interval):
                r = max(r, math.sqrt(float(p.hi if p.hi is not None else p.lo)))
            elif isinstance(p, AnnulusFamily):
                r = max(r, math.sqrt(float(p.base.hi if p.base.hi is not None else p.base.lo)))
            elif isinstance(p, Points):
                r = max([r] + [abs(v) for v in p.values])
            elif isinstance(p, (BackwardOrbit, ForwardOrbit)):
                r = max(r, abs(p.base))
            elif isinstance(p, Disk):
                r = max(r, abs(p.center) + math.sqrt(float(p.s_radius)))
    return 1.6 * r


class _Panel:
    def __init__(self, x0: float, R: float):
        self.x0 = x0
        self.R = R
        self.scale = (PANEL / 2) / R
        self.cx = x0 + PANEL / 2
        self.cy = MARGIN + PANEL / 2
        self.out: List[str] = []

    def pt(self, z: complex):
        return self.cx + z.real * self.scale, self.cy - z.imag * self.scale

    def ring(self, s_lo: float, s_hi, closed_lo: bool, closed_hi: bool) -> None:
        r_out = self.R * 1.5 if s_hi is None else math.sqrt(s_hi)
        r_in = math.sqrt(s_lo)
        path = self._circle_path(r_out)
        if r_in > 0:
            path += " " + self._circle_path(r_in)
        self.out.append(f'<path d="{path}" fill="{FILL}" fill-rule="evenodd" stroke="none"/>')
        for r, closed in ((r_in, closed_lo), (None if s_hi is None else r_out, closed_hi)):
            if r:
                dash = "" if closed else ' stroke-dasharray="4 3"'
                self.out.append(f'<circle cx="{_fmt(self.cx)}" cy="{_fmt(self.cy)}" r="{_fmt(r * self.scale)}" '
                                f'fill="none" stroke="{EDGE}"{dash}/>')

    def _circle_path(self, r: float) -> str:
        rr = r * self.scale
        x, y = self.cx, self.cy
        return (f"M {_fmt(x - rr)} {_fmt(y)} A {_fmt(rr)} {_fmt(rr)} 0 1 0 {_fmt(x + rr)} {_fmt(y)} "
                f"A {_fmt(rr)} {_fmt(rr)} 0 1 0 {_fmt(x - rr)} {_fmt(y)} Z")

    def disk(self, center: complex, r: float) -> None:
        x, y = self.pt(center)
        self.out.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(r * self.scale)}" '
                        f'fill="{FILL}" stroke="{EDGE}" stroke-dasharray="4 3"/>')

    def dot(self, z: complex, color: str = DOT) -> None:
        if abs(z) > self.R:
            return
        x, y = self.pt(z)
        self.out.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="3" fill="{color}"/>')

    def marker(self, z: complex, resolvent: bool) -> None:
        """A scanned point: hollow green if resolvent, a red cross otherwise."""
        if abs(z) > self.R:
            return
        x, y = self.pt(z)
        if resolvent:
            self.out.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="5" fill="none" '
                            f'stroke="{RESOLVENT}" stroke-width="1.5"/>')
        else:
            self.out.append(f'<path d="M {_fmt(x - 5)} {_fmt(y - 5)} L {_fmt(x + 5)} {_fmt(y + 5)} '
                            f'M {_fmt(x - 5)} {_fmt(y + 5)} L {_fmt(x + 5)} {_fmt(y - 5)}" '
                            f'stroke="{DOT}" stroke-width="2"/>')

    def frame(self, title: str) -> List[str]:
        x0, y0 = self.x0, MARGIN
        head = [f'<g clip-path="url(#clip{int(x0)})">']
        tail = ["</g>",
                f'<rect x="{_fmt(x0)}" y="{y0}" width="{PANEL}" height="{PANEL}" fill="none" stroke="#444"/>',
                f'<line x1="{_fmt(x0)}" y1="{_fmt(self.cy)}" x2="{_fmt(x0 + PANEL)}" y2="{_fmt(self.cy)}" '
                f'stroke="#bbb" stroke-width="0.5"/>',
                f'<line x1="{_fmt(self.cx)}" y1="{y0}" x2="{_fmt(self.cx)}" y2="{y0 + PANEL}" '
                f'stroke="#bbb" stroke-width="0.5"/>',
                f'<text x="{_fmt(x0 + PANEL / 2)}" y="{y0 - 10}" text-anchor="middle" '
                f'font-family="sans-serif" font-size="13">{title}</text>']
        return head + self.out + tail


def _draw_axis(panel: _Panel, a: AxisSet, qc: complex) -> None:
    rho = abs(qc) ** 2
    for p in a.parts:
        if isinstance(p, Interval):
            panel.ring(float(p.lo), None if p.hi is None else float(p.hi), p.lo_closed, p.hi_closed)
        elif isinstance(p, AnnulusFamily):
            iv = p.base
            lo, hi = float(iv.lo), None if iv.hi is None else float(iv.hi)
            for k in range(MAX_RINGS):
                f = rho ** -k
                if math.sqrt(lo * f) > 1.5 * panel.R:
                    break
                panel.ring(lo * f, None if hi is None else hi * f, iv.lo_closed, iv.hi_closed)
                if hi is None:
                    break
        elif isinstance(p, Points):
            for v in p.values:
                panel.dot(complex(v))
        elif isinstance(p, BackwardOrbit):
            z = complex(p.base)
            for _ in range(MAX_RINGS):
                if abs(z) > panel.R:
                    break
                panel.dot(z)
                z /= qc
        elif isinstance(p, ForwardOrbit):
            z = complex(p.base)
            for _ in range(MAX_RINGS):
                if abs(z) * panel.scale < 0.5:
                    break
                panel.dot(z)
                z *= qc
        elif isinstance(p, Disk):
            panel.disk(complex(p.center), math.sqrt(float(p.s_radius)))


def region_svg(region: QRegion, title: str = "",
               samples: Sequence[Tuple[str, complex, bool]] = ()) -> str:
    """Two panels, the x-axis (lambda, 0) and the y-axis (0, mu).

    samples are scanned points (axis, value, resolvent) drawn on top.

    Dashed circles are open boundaries; orbits are cut off at the panel edge.
    """
    R = max([_view_radius(region)] + [1.6 * abs(z) for _, z, _ in samples])
    qc = complex(region.q.q)
    panels = []
    for k, (name, a) in enumerate(((X_AXIS, region.x), (Y_AXIS, region.y))):
        panel = _Panel(MARGIN + k * (PANEL + MARGIN), R)
        _draw_axis(panel, a, qc)
        if region.origin:
            panel.dot(0j)
        for axis, z, res in samples:
            if axis == name or z == 0:
                panel.marker(z, res)
        label = "lambda-plane, points (lambda, 0)" if name == X_AXIS else "mu-plane, points (0, mu)"
        panels.append((panel, label))
    width = 2 * PANEL + 3 * MARGIN
    height = PANEL + 2 * MARGIN + (20 if title else 0)
    lines = ['<?xml version="1.0" encoding="UTF-8"?>',
             f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
             f'viewBox="0 0 {width} {height}">',
             "<defs>"]
    for panel, _ in panels:
        lines.append(f'<clipPath id="clip{int(panel.x0)}"><rect x="{_fmt(panel.x0)}" y="{MARGIN}" '
                     f'width="{PANEL}" height="{PANEL}"/></clipPath>')
    lines.append("</defs>")
    lines.append(f'<rect width="{width}" height="{height}" fill="white"/>')
    for panel, label in panels:
        lines.extend(panel.frame(label))
    if title:
        lines.append(f'<text x="{width / 2}" y="{height - 12}" text-anchor="middle" '
                     f'font-family="sans-serif" font-size="13">{_escape(title)}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
