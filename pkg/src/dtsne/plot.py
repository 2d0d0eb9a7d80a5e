"""Standalone SVG scatter plots of 2-d embeddings."""

from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from .core import DtsneError

PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)
DEFAULT_FILL = "#000000"
MARGIN = 0.05


@dataclass(frozen=True)
class PlotSpec:
    width_px: int = 400
    height_px: int = 400
    point_radius_px: float = 2.0
    opacity: float = 0.5
    color_by_label: bool = True

    def __post_init__(self):
        if self.width_px < 100 or self.height_px < 100:
            raise DtsneError("plot dimensions must be at least 100 px")
        if not self.point_radius_px > 0:
            raise DtsneError("point radius must be positive")
        if not 0 < self.opacity <= 1:
            raise DtsneError("opacity must lie in (0, 1]")


def _axis(lo, hi):
    span = hi - lo
    if span == 0:
        span = 1.0
    return lo - MARGIN * span, hi + MARGIN * span


def render_svg(coords, labels=None, spec: PlotSpec | None = None, title=None) -> str:
    spec = spec or PlotSpec()
    Y = np.asarray(coords, dtype=np.float64)
    if Y.ndim != 2 or Y.shape[1] != 2:
        raise DtsneError(f"can only plot 2-d embeddings, got shape {Y.shape}")
    if labels is not None and len(labels) != Y.shape[0]:
        raise DtsneError("label count does not match the number of points")
    x0, x1 = _axis(Y[:, 0].min(), Y[:, 0].max())
    y0, y1 = _axis(Y[:, 1].min(), Y[:, 1].max())
    w, h = spec.width_px, spec.height_px
    px = (Y[:, 0] - x0) / (x1 - x0) * w
    py = h - (Y[:, 1] - y0) / (y1 - y0) * h

    colored = labels is not None and spec.color_by_label
    if colored:
        codes = {lab: i for i, lab in enumerate(sorted(set(int(v) for v in labels)))}

    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
    ]
    if title:
        out.append(f"<title>{escape(str(title))}</title>")
    out.append(f'<rect x="0" y="0" width="{w}" height="{h}" fill="white" stroke="#444444" stroke-width="1"/>')
    out.append(f'<g fill-opacity="{spec.opacity:g}" stroke="none">')
    r = f"{spec.point_radius_px:g}"
    for i in range(Y.shape[0]):
        fill = PALETTE[codes[int(labels[i])] % len(PALETTE)] if colored else DEFAULT_FILL
        out.append(f'<circle cx="{px[i]:.2f}" cy="{py[i]:.2f}" r="{r}" fill="{fill}"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(path, coords, labels=None, spec=None, title=None):
    text = render_svg(coords, labels, spec, title)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
