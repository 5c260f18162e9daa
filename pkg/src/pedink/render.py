"""SVG rendering of drawings and partial edge drawings."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional
from xml.sax.saxutils import quoteattr

from .drawing import ChoiceKind, Drawing, DrawingError, Solution


@dataclass(frozen=True)
class Style:
    stroke: str = "#1f4e79"
    stroke_width: float = 1.5
    omitted: str = "#9a9a9a"
    vertex_fill: str = "#202020"
    vertex_radius: float = 2.5
    margin: float = 10.0


def _num(x: float) -> str:
    # repr keeps full precision, so drawn lengths survive a parse-back
    return repr(float(x))


def render_svg(
    drawing: Drawing,
    solution: Optional[Solution] = None,
    dotted: bool = False,
    style: Style = Style(),
) -> str:
    """SVG text for ``drawing``; with a solution only the drawn pieces are solid.

    Full edges get class ``edge``, pieces of partially drawn edges class
    ``stub``, and (with ``dotted``) the omitted middle parts class ``omitted``.
    The y axis is flipped so the picture matches the coordinate system.
    """
    if solution is not None and len(solution.choices) != len(drawing.segments):
        raise DrawingError(
            f"solution covers {len(solution.choices)} segments, drawing has {len(drawing.segments)}"
        )
    pts = [p for _, p in drawing.vertices]
    if pts:
        x0, x1 = min(p.x for p in pts), max(p.x for p in pts)
        y0, y1 = min(p.y for p in pts), max(p.y for p in pts)
    else:
        x0 = x1 = y0 = y1 = 0.0
    m = style.margin
    w, h = (x1 - x0) + 2 * m, (y1 - y0) + 2 * m

    def xy(p):
        return p.x - x0 + m, y1 - p.y + m

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_num(w)} {_num(h)}" '
        f'width="{_num(w)}" height="{_num(h)}">',
        f"<style>line {{ stroke: {style.stroke}; stroke-width: {style.stroke_width}; stroke-linecap: butt }} "
        f"line.omitted {{ stroke: {style.omitted}; stroke-dasharray: 2 3 }} "
        f"circle {{ fill: {style.vertex_fill} }}</style>",
    ]

    def line(cls, seg_id, a, b):
        (ax, ay), (bx, by) = xy(a), xy(b)
        lines.append(
            f'<line class="{cls}" data-seg="{seg_id}" x1="{_num(ax)}" y1="{_num(ay)}" x2="{_num(bx)}" y2="{_num(by)}"/>'
        )

    for seg in drawing.segments:
        choice = solution.choices[seg.id] if solution is not None else None
        if choice is None or choice.kind in (ChoiceKind.FULL, ChoiceKind.NO_GAP):
            line("edge", seg.id, seg.a, seg.b)
            continue
        L = seg.length
        pieces = choice.drawn_pieces(L)
        for lo, hi in pieces:
            line("stub", seg.id, seg.point_at(lo), seg.point_at(hi))
        if dotted:
            lo, hi = choice.gap if choice.kind is ChoiceKind.GAP else (choice.stub, L - choice.stub)
            if hi > lo:
                line("omitted", seg.id, seg.point_at(lo), seg.point_at(hi))
    for vid, p in drawing.vertices:
        cx, cy = xy(p)
        lines.append(f'<circle data-id={quoteattr(str(vid))} cx="{_num(cx)}" cy="{_num(cy)}" r="{style.vertex_radius}"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
