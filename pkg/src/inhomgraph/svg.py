"""Minimal standalone SVG scatter/line plots (byte-deterministic)."""

from __future__ import annotations

import math
from typing import Sequence

from .errors import ValidationError

WIDTH, HEIGHT, PAD = 480, 360, 56


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def emit_svg(
    points: Sequence[tuple[float, float]],
    x_label: str = "x",
    y_label: str = "y",
    loglog: bool = False,
    title: str | None = None,
    line: bool = False,
) -> str:
    """Render ``points`` as one ``<circle>`` mark per point (plus an optional polyline).

    With ``loglog`` both coordinates are mapped through ``log10`` and the axis
    labels become ``log10(<label>)``; non-positive values are rejected.
    """
    pts = [(float(x), float(y)) for x, y in points]
    if not pts:
        raise ValidationError("cannot plot an empty table")
    if loglog:
        if any(x <= 0 or y <= 0 for x, y in pts):
            raise ValidationError("log-log plot needs positive coordinates")
        pts = [(math.log10(x), math.log10(y)) for x, y in pts]
        x_label, y_label = f"log10({x_label})", f"log10({y_label})"
    if any(not (math.isfinite(x) and math.isfinite(y)) for x, y in pts):
        raise ValidationError("coordinates must be finite")

    xs, ys = [p[0] for p in pts], [p[1] for p in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5

    def sx(x: float) -> float:
        return PAD + (x - x0) / (x1 - x0) * (WIDTH - 2 * PAD)

    def sy(y: float) -> float:
        return HEIGHT - PAD - (y - y0) / (y1 - y0) * (HEIGHT - 2 * PAD)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<line x1="{PAD}" y1="{HEIGHT - PAD}" x2="{WIDTH - PAD}" y2="{HEIGHT - PAD}" stroke="black"/>',
        f'<line x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{HEIGHT - PAD}" stroke="black"/>',
        f'<text x="{WIDTH / 2:.1f}" y="{HEIGHT - 14}" text-anchor="middle" font-size="13">{_escape(x_label)}</text>',
        f'<text x="16" y="{HEIGHT / 2:.1f}" text-anchor="middle" font-size="13" '
        f'transform="rotate(-90 16 {HEIGHT / 2:.1f})">{_escape(y_label)}</text>',
    ]
    for value, pos in ((x0, PAD), (x1, WIDTH - PAD)):
        out.append(f'<text x="{pos}" y="{HEIGHT - PAD + 16}" text-anchor="middle" font-size="10">{value:.3g}</text>')
    for value, pos in ((y0, HEIGHT - PAD), (y1, PAD)):
        out.append(f'<text x="{PAD - 6}" y="{pos}" text-anchor="end" font-size="10">{value:.3g}</text>')
    if title:
        out.append(f'<text x="{WIDTH / 2:.1f}" y="24" text-anchor="middle" font-size="14">{_escape(title)}</text>')
    if line and len(pts) > 1:
        path = " ".join(f"{_fmt(sx(x))},{_fmt(sy(y))}" for x, y in pts)
        out.append(f'<polyline points="{path}" fill="none" stroke="steelblue"/>')
    for x, y in pts:
        out.append(f'<circle cx="{_fmt(sx(x))}" cy="{_fmt(sy(y))}" r="2.5" fill="steelblue"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
