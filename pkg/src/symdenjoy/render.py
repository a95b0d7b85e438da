"""Deterministic SVG pictures of the construction.

Three targets: nested stage covers as concentric annular arcs, the Cantor
function staircase, and a planar orbit spiraling toward the origin. Output is
plain SVG 1.1 text with coordinates formatted to a fixed number of digits, so
repeat runs with equal inputs produce identical bytes.
"""

from __future__ import annotations

import math
from typing import Optional

from .cantor import DEFAULT_EPS
from .config import System
from .errors import UnsupportedRender
from .planar import PlanarPoint

PALETTE = ("#1f6f8b", "#99413d", "#5a8f29", "#7a4a8b", "#b07d2b", "#306060")

RENDER_TARGETS = ("stages", "cantor-function", "planar-orbit")


def _fmt(x: float) -> str:
    out = f"{x:.10f}"
    # Normalize the signed zero so equal pictures are equal bytes.
    return "0.0000000000" if out == "-0.0000000000" else out


def _svg(body: list[str], view: str, size: int = 640) -> str:
    head = (
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{size}" height="{size}" viewBox="{view}">'
    )
    return "\n".join([head, *body, "</svg>", ""])


def _ring_arc(start_turns: float, end_turns: float, radius: float) -> str:
    a0 = 2 * math.pi * start_turns
    a1 = 2 * math.pi * end_turns
    span = (end_turns - start_turns) % 1.0
    x0, y0 = radius * math.cos(a0), -radius * math.sin(a0)
    x1, y1 = radius * math.cos(a1), -radius * math.sin(a1)
    large = 1 if span > 0.5 else 0
    return (
        f"M {_fmt(x0)} {_fmt(y0)} "
        f"A {_fmt(radius)} {_fmt(radius)} 0 {large} 0 {_fmt(x1)} {_fmt(y1)}"
    )


def render_stages(system: System, depth: int = 4, eps: float = DEFAULT_EPS) -> str:
    """Concentric rings, one per stage: stage j keeps m(2j - 1) arcs."""
    ca = system.cantor
    if depth < 0 or depth > ca.depth:
        raise UnsupportedRender(f"stage depth {depth} outside [0, {ca.depth}]")
    body = ['<g fill="none" stroke-linecap="butt">']
    for j in range(depth + 1):
        radius = 1.0 - 0.9 * j / (depth + 1)
        color = PALETTE[j % len(PALETTE)]
        width = 0.72 / (depth + 1)
        arcs = ca.stage(j, eps)
        if len(arcs) == 1 and arcs[0].full:
            body.append(
                f'<circle r="{_fmt(radius)}" stroke="{color}" '
                f'stroke-width="{_fmt(width)}"/>'
            )
            continue
        for arc in arcs:
            d = _ring_arc(arc.start.angle, arc.end.angle, radius)
            body.append(
                f'<path d="{d}" stroke="{color}" stroke-width="{_fmt(width)}"/>'
            )
    body.append("</g>")
    return _svg(body, "-1.15 -1.15 2.3 2.3")


def render_cantor_function(
    system: System, max_level: Optional[int] = None, eps: float = DEFAULT_EPS
) -> str:
    """Staircase graph of the collapse map on the unit square.

    Each resolvable gap draws the plateau it is collapsed along; plateaus are
    joined in graph order. Monotone and degree one by construction.
    """
    ca = system.cantor
    level = min(max_level if max_level is not None else 10, ca.depth)
    if level < 0:
        raise UnsupportedRender("max_level must be >= 0")
    segments = []
    for idx, arc in ca.gaps(level):
        x0 = arc.start.angle
        x1 = x0 + arc.length
        y = ca.base_point(idx).angle
        segments.append((x0, x1, y))
    segments.sort()
    parts = []
    prev = None
    for x0, x1, y in segments:
        sx0, sx1, sy = _fmt(x0), _fmt(x1), _fmt(1.0 - y)
        if prev is None:
            parts.append(f"M {sx0} {sy}")
        else:
            parts.append(f"L {sx0} {sy}")
        parts.append(f"L {sx1} {sy}")
        prev = (x1, y)
    path = " ".join(parts)
    body = [
        '<rect x="0" y="0" width="1" height="1" fill="none" stroke="#888888" '
        'stroke-width="0.003"/>',
        f'<path d="{path}" fill="none" stroke="{PALETTE[0]}" stroke-width="0.004"/>',
    ]
    return _svg(body, "-0.05 -0.05 1.1 1.1")


def render_planar_orbit(
    system: System,
    theta,
    rho,
    steps: int = 60,
    eps: float = DEFAULT_EPS,
) -> str:
    """A planar orbit spiraling in, with the unit and half-radius circles."""
    if steps < 0:
        raise UnsupportedRender("steps must be >= 0")
    pm = system.planar
    from .circle import CirclePoint, as_tick_count

    if isinstance(theta, CirclePoint):
        rho_t = rho if isinstance(rho, int) else as_tick_count(rho, pm.bits)
        start = PlanarPoint(theta, rho_t)
    else:
        start = PlanarPoint.from_values(theta, rho, pm.bits)
    orbit = pm.planar_orbit(start, steps, eps)
    pts = []
    for p in orbit.points:
        a = 2 * math.pi * p.theta.angle
        pts.append((p.rho * math.cos(a), -p.rho * math.sin(a)))
    body = [
        '<circle r="1" fill="none" stroke="#888888" stroke-width="0.006"/>',
        '<circle r="0.5" fill="none" stroke="#bbbbbb" stroke-width="0.004"/>',
        '<circle r="0.01" fill="#000000"/>',
    ]
    if len(pts) > 1:
        poly = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
        body.append(
            f'<polyline points="{poly}" fill="none" stroke="#cccccc" '
            'stroke-width="0.004"/>'
        )
    for x, y in pts:
        body.append(
            f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="0.012" fill="{PALETTE[1]}"/>'
        )
    extent = max(1.1, max((abs(x) for x, _ in pts), default=1.0) + 0.1,
                 max((abs(y) for _, y in pts), default=1.0) + 0.1)
    view = f"{_fmt(-extent)} {_fmt(-extent)} {_fmt(2 * extent)} {_fmt(2 * extent)}"
    return _svg(body, view)


def render(system: System, what: str, **params) -> str:
    if what == "stages":
        return render_stages(system, **params)
    if what == "cantor-function":
        return render_cantor_function(system, **params)
    if what == "planar-orbit":
        return render_planar_orbit(system, **params)
    raise UnsupportedRender(f"unknown render target {what!r}; "
                            f"expected one of {', '.join(RENDER_TARGETS)}")
