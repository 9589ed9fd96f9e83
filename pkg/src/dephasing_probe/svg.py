"""Minimal self-contained SVG line charts.

Figures are for eyeballing sweep output; the CSVs are the ground truth.
No plotting dependency, deterministic output for identical input.
"""

import math

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")

_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 64, 16, 28, 46


def _nice_ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = math.ceil(lo / step) * step
    ticks = []
    v = first
    while v <= hi + 1e-12 * step:
        ticks.append(0.0 if abs(v) < 1e-12 * step else v)
        v += step
    return ticks


def _log_ticks(lo: float, hi: float) -> list[float]:
    ticks = []
    d = math.floor(math.log10(lo))
    while 10.0 ** d <= hi * (1 + 1e-12):
        if 10.0 ** d >= lo * (1 - 1e-12):
            ticks.append(10.0 ** d)
        d += 1
    return ticks or [lo, hi]


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def line_chart(series, path, title: str = "", xlabel: str = "", ylabel: str = "",
               logx: bool = False, logy: bool = False,
               width: int = 720, height: int = 480) -> None:
    """Write a line chart to `path`.

    series: iterable of (label, xs, ys).  Log axes drop nonpositive points.
    """
    plot_w = width - _MARGIN_L - _MARGIN_R
    plot_h = height - _MARGIN_T - _MARGIN_B

    cleaned = []
    for label, xs, ys in series:
        pts = [(float(x), float(y)) for x, y in zip(xs, ys)
               if math.isfinite(x) and math.isfinite(y)
               and (not logx or x > 0) and (not logy or y > 0)]
        if pts:
            cleaned.append((label, pts))
    if not cleaned:
        raise ValueError("no plottable points")

    all_x = [p[0] for _, pts in cleaned for p in pts]
    all_y = [p[1] for _, pts in cleaned for p in pts]
    x_lo, x_hi = min(all_x), max(all_x)
    y_lo, y_hi = min(all_y), max(all_y)
    if x_hi == x_lo:
        x_hi = x_lo + (abs(x_lo) or 1.0)
    if y_hi == y_lo:
        y_hi = y_lo + (abs(y_lo) or 1.0)
    if not logy:
        pad = 0.05 * (y_hi - y_lo)
        y_lo, y_hi = y_lo - pad, y_hi + pad

    def sx(x):
        f = ((math.log10(x) - math.log10(x_lo)) / (math.log10(x_hi) - math.log10(x_lo))
             if logx else (x - x_lo) / (x_hi - x_lo))
        return _MARGIN_L + f * plot_w

    def sy(y):
        f = ((math.log10(y) - math.log10(y_lo)) / (math.log10(y_hi) - math.log10(y_lo))
             if logy else (y - y_lo) / (y_hi - y_lo))
        return _MARGIN_T + (1.0 - f) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{_MARGIN_L}" y="{_MARGIN_T}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#333" stroke-width="1"/>',
    ]
    if title:
        parts.append(f'<text x="{width / 2:.1f}" y="18" text-anchor="middle" '
                     f'font-size="13">{title}</text>')

    x_ticks = _log_ticks(x_lo, x_hi) if logx else _nice_ticks(x_lo, x_hi)
    y_ticks = _log_ticks(y_lo, y_hi) if logy else _nice_ticks(y_lo, y_hi)
    for xt in x_ticks:
        px = sx(xt)
        parts.append(f'<line x1="{px:.2f}" y1="{_MARGIN_T + plot_h}" x2="{px:.2f}" '
                     f'y2="{_MARGIN_T + plot_h + 4}" stroke="#333"/>')
        parts.append(f'<text x="{px:.2f}" y="{_MARGIN_T + plot_h + 16}" '
                     f'text-anchor="middle">{_fmt(xt)}</text>')
    for yt in y_ticks:
        py = sy(yt)
        parts.append(f'<line x1="{_MARGIN_L - 4}" y1="{py:.2f}" x2="{_MARGIN_L}" '
                     f'y2="{py:.2f}" stroke="#333"/>')
        parts.append(f'<text x="{_MARGIN_L - 7}" y="{py + 3.5:.2f}" '
                     f'text-anchor="end">{_fmt(yt)}</text>')
    if xlabel:
        parts.append(f'<text x="{_MARGIN_L + plot_w / 2:.1f}" y="{height - 10}" '
                     f'text-anchor="middle">{xlabel}</text>')
    if ylabel:
        cx, cy = 14, _MARGIN_T + plot_h / 2
        parts.append(f'<text x="{cx}" y="{cy:.1f}" text-anchor="middle" '
                     f'transform="rotate(-90 {cx} {cy:.1f})">{ylabel}</text>')

    for i, (label, pts) in enumerate(cleaned):
        color = PALETTE[i % len(PALETTE)]
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)
        parts.append(f'<polyline points="{coords}" fill="none" stroke="{color}" '
                     'stroke-width="1.6"/>')
        ly = _MARGIN_T + 14 + 15 * i
        lx = _MARGIN_L + plot_w - 150
        parts.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" y2="{ly - 4}" '
                     f'stroke="{color}" stroke-width="1.6"/>')
        parts.append(f'<text x="{lx + 28}" y="{ly}">{label}</text>')

    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")
