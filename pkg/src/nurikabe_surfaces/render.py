"""Text and SVG drawings of fundamental domains."""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple
from xml.sax.saxutils import escape

from .rules import Clue, Coloring
from .surface import SIDE_ENDPOINTS, Gluing, SquareTiledSurface

_STEP = {"N": (-1, 0), "S": (1, 0), "E": (0, 1), "W": (0, -1)}
_OPPOSITE = {"N": "S", "S": "N", "E": "W", "W": "E"}


def _layout(surface: SquareTiledSurface) -> Tuple[Tuple[int, int], ...]:
    if surface.layout is not None:
        return surface.layout
    return tuple((1, c) for c in range(1, surface.n_squares + 1))


def boundary_gluings(surface: SquareTiledSurface) -> List[Gluing]:
    """Gluings other than plain adjacencies of neighbouring cells in the drawing."""
    lay = _layout(surface)
    out = []
    for g in surface.gluings:
        ra, ca = lay[g.a.square - 1]
        dr, dc = _STEP[g.a.side]
        internal = (
            not g.reversed
            and g.b.side == _OPPOSITE[g.a.side]
            and lay[g.b.square - 1] == (ra + dr, ca + dc)
        )
        if not internal:
            out.append(g)
    return out


def _clue_char(size: int) -> str:
    return "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ"[size] if size < 36 else "+"


def render_ascii(
    surface: SquareTiledSurface,
    coloring: Optional[Coloring] = None,
    clues: Sequence[Clue] = (),
    orbits: bool = False,
) -> str:
    if coloring is not None and coloring.n != surface.n_squares:
        raise ValueError(f"coloring has {coloring.n} squares, surface has {surface.n_squares}")
    lay = _layout(surface)
    rows = max(r for r, _ in lay)
    cols = max(c for _, c in lay)
    grid = [[" "] * cols for _ in range(rows)]
    clue_at = {c.square: c.size for c in clues}
    for sq, (r, c) in enumerate(lay, start=1):
        if sq in clue_at:
            ch = _clue_char(clue_at[sq])
        elif coloring is not None and coloring.is_water(sq):
            ch = "#"
        else:
            ch = "."
        grid[r - 1][c - 1] = ch
    lines = ["".join(row).rstrip() for row in grid]
    for g in boundary_gluings(surface):
        arrow = "<->" if not g.reversed else ">-<"
        lines.append(f"~ {g.a} {arrow} {g.b}{' (reversed)' if g.reversed else ''}")
    if orbits:
        for i, o in enumerate(surface.orbits, start=1):
            kind = "interior" if o.interior else "boundary"
            squares = ",".join(map(str, sorted(o.incident_squares)))
            lines.append(f"o v{i} {kind} degree {o.square_degree} squares {{{squares}}}")
    return "\n".join(lines) + "\n"


_CELL = 48
_PAD = 24
_PALETTE = ("#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")
_CORNER_OFFSET = {"NW": (0, 0), "NE": (1, 0), "SE": (1, 1), "SW": (0, 1)}


def render_svg(
    surface: SquareTiledSurface,
    coloring: Optional[Coloring] = None,
    clues: Sequence[Clue] = (),
    orbits: bool = False,
) -> str:
    """Standalone SVG of the domain with identification arrows and optional vertex markers."""
    if coloring is not None and coloring.n != surface.n_squares:
        raise ValueError(f"coloring has {coloring.n} squares, surface has {surface.n_squares}")
    lay = _layout(surface)
    rows = max(r for r, _ in lay)
    cols = max(c for _, c in lay)
    width, height = cols * _CELL + 2 * _PAD, rows * _CELL + 2 * _PAD
    clue_at = {c.square: c.size for c in clues}

    def origin(sq: int) -> Tuple[int, int]:
        r, c = lay[sq - 1]
        return _PAD + (c - 1) * _CELL, _PAD + (r - 1) * _CELL

    def corner_xy(sq: int, corner: str) -> Tuple[int, int]:
        x, y = origin(sq)
        dx, dy = _CORNER_OFFSET[corner]
        return x + dx * _CELL, y + dy * _CELL

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f"<title>{escape(surface.name)}</title>",
        '<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" '
        'markerHeight="6" orient="auto-start-reverse"><path d="M0,0 L10,5 L0,10 z"/></marker></defs>',
    ]
    for sq in range(1, surface.n_squares + 1):
        x, y = origin(sq)
        fill = "#000000" if coloring is not None and coloring.is_water(sq) else "#ffffff"
        out.append(
            f'<rect x="{x}" y="{y}" width="{_CELL}" height="{_CELL}" fill="{fill}" '
            'stroke="#000000" stroke-width="1"/>'
        )
        if sq in clue_at:
            out.append(
                f'<text x="{x + _CELL // 2}" y="{y + _CELL // 2 + 6}" text-anchor="middle" '
                f'font-size="18" font-family="sans-serif">{clue_at[sq]}</text>'
            )
        out.append(
            f'<text x="{x + 4}" y="{y + 12}" font-size="9" font-family="sans-serif" '
            f'fill="#888888">{sq}</text>'
        )
    for i, g in enumerate(boundary_gluings(surface)):
        color = _PALETTE[i % len(_PALETTE)]
        for ref, flip in ((g.a, False), (g.b, g.reversed)):
            p, q = (corner_xy(ref.square, c) for c in SIDE_ENDPOINTS[ref.side])
            if flip:
                p, q = q, p
            # shorten so arrows on shared corners do not overlap
            ax = p[0] + (q[0] - p[0]) * 0.2
            ay = p[1] + (q[1] - p[1]) * 0.2
            bx = p[0] + (q[0] - p[0]) * 0.8
            by = p[1] + (q[1] - p[1]) * 0.8
            out.append(
                f'<line x1="{ax:.1f}" y1="{ay:.1f}" x2="{bx:.1f}" y2="{by:.1f}" stroke="{color}" '
                'stroke-width="3" marker-end="url(#arrow)"/>'
            )
    if orbits:
        for i, o in enumerate(surface.orbits):
            color = _PALETTE[i % len(_PALETTE)]
            fill = color if o.interior else "#ffffff"
            for sq, corner in o.corners:
                cx, cy = corner_xy(sq, corner)
                out.append(
                    f'<circle cx="{cx}" cy="{cy}" r="5" fill="{fill}" stroke="{color}" stroke-width="2">'
                    f"<title>degree {o.square_degree}</title></circle>"
                )
    out.append("</svg>")
    return "\n".join(out) + "\n"
