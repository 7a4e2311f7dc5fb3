"""Minimal SVG heatmap of a cone sweep (no plotting dependency)."""
from __future__ import annotations

import numpy as np
from scipy.spatial import ConvexHull

# viridis anchors, linearly interpolated
_ANCHORS = np.array(
    [
        [68, 1, 84],
        [59, 82, 139],
        [33, 145, 140],
        [94, 201, 98],
        [253, 231, 37],
    ],
    dtype=float,
)


def colour(t: float) -> str:
    t = min(max(t, 0.0), 1.0) * (len(_ANCHORS) - 1)
    lo = int(np.floor(t))
    hi = min(lo + 1, len(_ANCHORS) - 1)
    rgb = _ANCHORS[lo] + (t - lo) * (_ANCHORS[hi] - _ANCHORS[lo])
    return "#{:02x}{:02x}{:02x}".format(*(int(round(c)) for c in rgb))


def cone_svg(records, size: int = 600, margin: int = 60) -> str:
    """Cells coloured by ``rho10_max`` over the feasible lattice, plus the hull outline."""
    feas = [r for r in records if r.feasible]
    grid = int(round(np.sqrt(len(records))))
    cell = size / grid
    values = np.array([r.rho10_max for r in feas]) if feas else np.array([0.0])
    vmin, vmax = float(values.min()), float(values.max())
    span = vmax - vmin if vmax > vmin else 1.0

    def xy(p0, p1):
        return margin + p0 * (size - cell) + cell / 2, margin + size - (p1 * (size - cell) + cell / 2)

    width, height = size + 2 * margin + 120, size + 2 * margin
    q = records[0].q if records else float("nan")
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
        f'<text x="{margin}" y="{margin - 25}" font-size="16" font-family="sans-serif">'
        f"max |rho10| over the cone, q = {q:.6g}</text>",
        f'<rect x="{margin}" y="{margin}" width="{size}" height="{size}" fill="none" stroke="#000000"/>',
    ]
    for r in feas:
        cx, cy = xy(r.p0, r.p1)
        out.append(
            f'<rect x="{cx - cell / 2:.3f}" y="{cy - cell / 2:.3f}" width="{cell:.3f}" height="{cell:.3f}" '
            f'fill="{colour((r.rho10_max - vmin) / span)}"/>'
        )
    if len(feas) >= 3:
        pts = np.array([[r.p0, r.p1] for r in feas])
        try:
            hull = ConvexHull(pts)
            ring = list(hull.vertices) + [hull.vertices[0]]
            poly = " ".join("{:.3f},{:.3f}".format(*xy(*pts[i])) for i in ring)
            out.append(f'<polyline points="{poly}" fill="none" stroke="#d62728" stroke-width="2"/>')
        except Exception:  # degenerate (collinear) feasible set
            pass
    # axes
    for t in np.linspace(0, 1, 6):
        x, _ = xy(t, 0)
        _, y = xy(0, t)
        out.append(f'<text x="{x:.3f}" y="{margin + size + 20}" font-size="12" text-anchor="middle" '
                   f'font-family="sans-serif">{t:.1f}</text>')
        out.append(f'<text x="{margin - 8}" y="{y + 4:.3f}" font-size="12" text-anchor="end" '
                   f'font-family="sans-serif">{t:.1f}</text>')
    out.append(f'<text x="{margin + size / 2}" y="{margin + size + 45}" font-size="14" text-anchor="middle" '
               f'font-family="sans-serif">p0</text>')
    out.append(f'<text x="{margin - 40}" y="{margin + size / 2}" font-size="14" font-family="sans-serif">p1</text>')
    # colour bar
    bx, bh = margin + size + 30, size / 2
    steps = 50
    for s in range(steps):
        y = margin + bh - (s + 1) * bh / steps
        out.append(f'<rect x="{bx}" y="{y:.3f}" width="20" height="{bh / steps + 0.5:.3f}" '
                   f'fill="{colour(s / (steps - 1))}"/>')
    out.append(f'<text x="{bx + 25}" y="{margin + 10}" font-size="12" font-family="sans-serif">'
               f"max {vmax:.6f}</text>")
    out.append(f'<text x="{bx + 25}" y="{margin + bh}" font-size="12" font-family="sans-serif">'
               f"min {vmin:.6f}</text>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
