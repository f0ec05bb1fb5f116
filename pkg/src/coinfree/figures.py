"""Window diagrams: before/after pictures of a maneuver as standalone SVG.

The horizontal axis is the window parameter normalized to [0, 1]; the
vertical axis is position along the retreat ray: coordinates on the
value edge plot as themselves, side-dart dips continue past the edge
ends (below 0 or above 1), one unit per edge.  One polyline per map.
"""
from __future__ import annotations

from fractions import Fraction

from .homotopy import HomotopyStep, TrackFragment

_F_COLOR = "#1f77b4"
_G_COLOR = "#d62728"

_W, _H = 640, 380
_ML, _MR, _MT, _MB = 56, 24, 40, 32


def _polyline(frag: TrackFragment, rho: str) -> list[tuple[Fraction, Fraction]]:
    """Junction points (normalized t, ray position) of a fragment."""
    span = frag.hi - frag.lo
    frames: dict[str, tuple[int, Fraction, Fraction]] = {}  # edge -> (sign, offset, anchor)
    pts: list[tuple[Fraction, Fraction]] = []
    prev_y: Fraction | None = None
    for s in frag.segments:
        if s.edge == rho:
            y0, y1 = s.a0, s.a1
        else:
            if s.edge not in frames:
                # First visit starts at a vertex shared with the ray so
                # far; extend away from the window's home edge.
                base = prev_y if prev_y is not None else Fraction(0)
                sign = -1 if base <= 0 else 1
                anchor = s.a0
                frames[s.edge] = (sign, base, anchor)
            sign, base, anchor = frames[s.edge]
            y0 = base + sign * abs(s.a0 - anchor)
            y1 = base + sign * abs(s.a1 - anchor)
        t0 = (s.t0 - frag.lo) / span
        t1 = (s.t1 - frag.lo) / span
        if not pts:
            pts.append((t0, y0))
        pts.append((t1, y1))
        prev_y = y1
    return pts


def _value_edge(step: HomotopyStep) -> str:
    # Replaced fragments sit on the value edge the whole way.
    return step.replaced[0].segments[0].edge


def render_window(step: HomotopyStep, which: str) -> str:
    """SVG for one phase of a maneuver step; which is 'before' or 'after'."""
    frags = step.replaced if which == "before" else step.replacement
    rho = _value_edge(step)
    lines = []
    for frag in frags:
        color = _F_COLOR if frag.map_label == "f" else _G_COLOR
        lines.append((frag.map_label, color, _polyline(frag, rho)))

    ys = [y for _, _, pts in lines for _, y in pts] + [Fraction(0), Fraction(1)]
    y_min, y_max = min(ys), max(ys)
    pad = (y_max - y_min) / 10 or Fraction(1, 10)
    y_min, y_max = y_min - pad, y_max + pad

    def px(t: Fraction) -> float:
        return _ML + float(t) * (_W - _ML - _MR)

    def py(y: Fraction) -> float:
        return _MT + float((y_max - y) / (y_max - y_min)) * (_H - _MT - _MB)

    sigma, lo, hi = step.windows[0]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="13">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_ML}" y="24">{which} on {sigma} over [{lo}, {hi}]</text>',
    ]
    for level, label in ((Fraction(0), f"{rho} at 0"), (Fraction(1), f"{rho} at 1")):
        y = py(level)
        parts.append(
            f'<line x1="{px(Fraction(0))}" y1="{y}" x2="{px(Fraction(1))}" y2="{y}" '
            'stroke="#999" stroke-dasharray="4 3"/>'
        )
        parts.append(f'<text x="4" y="{y + 4}" fill="#666">{label}</text>')
    for t in (Fraction(0), Fraction(1)):
        x = px(t)
        parts.append(
            f'<line x1="{x}" y1="{_MT}" x2="{x}" y2="{_H - _MB}" '
            'stroke="#bbb" stroke-dasharray="2 4"/>'
        )
    for label, color, pts in lines:
        coords = " ".join(f"{px(t):.2f},{py(y):.2f}" for t, y in pts)
        parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="2"/>'
        )
        for t, y in pts:
            parts.append(
                f'<circle cx="{px(t):.2f}" cy="{py(y):.2f}" r="3" fill="{color}"/>'
            )
        xl, yl = pts[0]
        parts.append(
            f'<text x="{px(xl) - 16}" y="{py(yl) + 4}" fill="{color}">{label}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
