"""Deterministic SVG 1.1 barcode plots with highlighted extensions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from html import escape

WIDTH = 640
MARGIN = 40
ROW = 9
COLORS = {"plain": "#8c8c8c", "source": "#d62728", "baseline": "#2ca02c", "offset": "#9467bd"}


@dataclass(frozen=True)
class PlotBar:
    birth: float
    death: float  # math.inf for infinite bars
    style: str = "plain"


@dataclass(frozen=True)
class Panel:
    title: str
    bars: tuple[PlotBar, ...]


def _f(x: float) -> str:
    return f"{x:.2f}"


def render(panels: list[Panel]) -> str:
    finite = [v for p in panels for b in p.bars for v in (b.birth, b.death) if math.isfinite(v)]
    hi = max(finite, default=1.0) * 1.05 or 1.0
    span = WIDTH - 2 * MARGIN

    def x(v: float) -> float:
        return MARGIN + span * (min(v, hi) / hi)

    parts: list[str] = []
    y = 10
    for panel in panels:
        parts.append(f'<text x="{MARGIN}" y="{y + 12}" font-family="sans-serif" font-size="12">{escape(panel.title)}</text>')
        y += 20
        top = y
        for b in sorted(panel.bars, key=lambda b: (b.birth, b.death)):
            x0, x1 = x(b.birth), x(b.death) if math.isfinite(b.death) else WIDTH - MARGIN
            fill = "url(#hatch)" if b.style == "offset" else COLORS.get(b.style, COLORS["plain"])
            stroke = f' stroke="{COLORS["offset"]}" stroke-width="0.8"' if b.style == "offset" else ""
            parts.append(
                f'<rect x="{_f(x0)}" y="{y}" width="{_f(max(x1 - x0, 0.5))}" height="{ROW - 3}" fill="{fill}"{stroke}/>'
            )
            y += ROW
        y = max(y, top + ROW)
        parts.append(
            f'<line x1="{MARGIN}" y1="{y + 2}" x2="{WIDTH - MARGIN}" y2="{y + 2}" stroke="#000" stroke-width="0.5"/>'
        )
        parts.append(f'<text x="{MARGIN}" y="{y + 14}" font-family="sans-serif" font-size="9">0</text>')
        parts.append(
            f'<text x="{WIDTH - MARGIN}" y="{y + 14}" font-family="sans-serif" font-size="9" '
            f'text-anchor="end">{hi:.4g}</text>'
        )
        y += 28
    height = y + 4
    head = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{height}" '
        f'viewBox="0 0 {WIDTH} {height}">\n'
        '<defs><pattern id="hatch" width="4" height="4" patternUnits="userSpaceOnUse" '
        'patternTransform="rotate(45)"><line x1="0" y1="0" x2="0" y2="4" '
        f'stroke="{COLORS["offset"]}" stroke-width="2"/></pattern></defs>\n'
        f'<rect width="{WIDTH}" height="{height}" fill="#fff"/>\n'
    )
    return head + "\n".join(parts) + "\n</svg>\n"
