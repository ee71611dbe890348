"""Minimal deterministic SVG line plots from CSV artifacts.

The writer is self-contained so that identical inputs yield byte-identical
SVG 1.1 documents: no timestamps, no generated ids, fixed float formatting.
"""

from __future__ import annotations

import math

from .errors import ConfigError

__all__ = ["read_csv_columns", "render_svg", "plot_csv"]

_W, _H = 720, 480
_ML, _MR, _MT, _MB = 76, 24, 28, 56
_COLORS = ("#1f6fb2", "#d95f02", "#2a9d4e", "#9467bd", "#8c564b", "#555555")


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def read_csv_columns(path: str) -> dict:
    """Read a CSV with '#' comment headers into named float columns."""
    with open(path, "r", encoding="utf-8") as fh:
        rows = [line.rstrip("\n") for line in fh]
    rows = [r for r in rows if r and not r.startswith("#")]
    if not rows:
        raise ConfigError(f"{path}: no data rows")
    names = rows[0].split(",")
    cols = {name: [] for name in names}
    for row in rows[1:]:
        parts = row.split(",")
        for name, cell in zip(names, parts):
            try:
                cols[name].append(float(cell))
            except ValueError:
                cols[name].append(math.nan)
    return cols


def _ticks(lo: float, hi: float, log: bool):
    if log:
        lo_e = math.floor(math.log10(lo))
        hi_e = math.ceil(math.log10(hi))
        step = max(1, (hi_e - lo_e) // 6)
        return [10.0**e for e in range(lo_e, hi_e + 1, step)]
    span = hi - lo
    if span <= 0:
        return [lo]
    raw = span / 6.0
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = math.ceil(lo / step) * step
    out = []
    t = first
    while t <= hi + 1e-12 * span:
        out.append(0.0 if abs(t) < 1e-12 * span else t)
        t += step
    return out


def render_svg(
    series: list,
    x_label: str,
    y_label: str,
    title: str = "",
    log_x: bool = False,
    log_y: bool = False,
) -> str:
    """Render ``[(name, xs, ys), ...]`` into a standalone SVG document."""
    pts = [
        (x, y)
        for _, xs, ys in series
        for x, y in zip(xs, ys)
        if math.isfinite(x) and math.isfinite(y)
        and (not log_x or x > 0) and (not log_y or y > 0)
    ]
    if not pts:
        raise ConfigError("nothing to plot: no finite data points")
    xs_all = [p[0] for p in pts]
    ys_all = [p[1] for p in pts]
    x_lo, x_hi = min(xs_all), max(xs_all)
    y_lo, y_hi = min(ys_all), max(ys_all)
    if x_lo == x_hi:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    if y_lo == y_hi:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
    if not log_y:
        pad = 0.05 * (y_hi - y_lo)
        y_lo, y_hi = y_lo - pad, y_hi + pad

    def sx(x):
        if log_x:
            t = (math.log10(x) - math.log10(x_lo)) / (
                math.log10(x_hi) - math.log10(x_lo)
            )
        else:
            t = (x - x_lo) / (x_hi - x_lo)
        return _ML + t * (_W - _ML - _MR)

    def sy(y):
        if log_y:
            t = (math.log10(y) - math.log10(y_lo)) / (
                math.log10(y_hi) - math.log10(y_lo)
            )
        else:
            t = (y - y_lo) / (y_hi - y_lo)
        return _H - _MB - t * (_H - _MT - _MB)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_W}" height="{_H}" viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<rect x="{_ML}" y="{_MT}" width="{_W - _ML - _MR}" '
        f'height="{_H - _MT - _MB}" fill="none" stroke="#333" stroke-width="1"/>',
    ]
    for t in _ticks(x_lo, x_hi, log_x):
        if not x_lo <= t <= x_hi:
            continue
        px = sx(t)
        out.append(
            f'<line x1="{_fmt(px)}" y1="{_H - _MB}" x2="{_fmt(px)}" '
            f'y2="{_H - _MB + 5}" stroke="#333" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{_fmt(px)}" y="{_H - _MB + 18}" font-size="11" '
            f'text-anchor="middle" font-family="sans-serif">{_fmt(t)}</text>'
        )
    for t in _ticks(y_lo, y_hi, log_y):
        if not y_lo <= t <= y_hi:
            continue
        py = sy(t)
        out.append(
            f'<line x1="{_ML - 5}" y1="{_fmt(py)}" x2="{_ML}" '
            f'y2="{_fmt(py)}" stroke="#333" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{_ML - 8}" y="{_fmt(py + 4)}" font-size="11" '
            f'text-anchor="end" font-family="sans-serif">{_fmt(t)}</text>'
        )
    for i, (name, xs, ys) in enumerate(series):
        color = _COLORS[i % len(_COLORS)]
        coords = [
            f"{_fmt(sx(x))},{_fmt(sy(y))}"
            for x, y in zip(xs, ys)
            if math.isfinite(x) and math.isfinite(y)
            and (not log_x or x > 0) and (not log_y or y > 0)
        ]
        if coords:
            out.append(
                f'<polyline points="{" ".join(coords)}" fill="none" '
                f'stroke="{color}" stroke-width="1.6"/>'
            )
        ly = _MT + 16 + 16 * i
        out.append(
            f'<line x1="{_W - _MR - 150}" y1="{ly - 4}" x2="{_W - _MR - 122}" '
            f'y2="{ly - 4}" stroke="{color}" stroke-width="1.6"/>'
        )
        out.append(
            f'<text x="{_W - _MR - 116}" y="{ly}" font-size="11" '
            f'font-family="sans-serif">{name}</text>'
        )
    out.append(
        f'<text x="{(_ML + _W - _MR) // 2}" y="{_H - 14}" font-size="13" '
        f'text-anchor="middle" font-family="sans-serif">{x_label}</text>'
    )
    out.append(
        f'<text x="18" y="{(_MT + _H - _MB) // 2}" font-size="13" '
        f'text-anchor="middle" font-family="sans-serif" '
        f'transform="rotate(-90 18 {(_MT + _H - _MB) // 2})">{y_label}</text>'
    )
    if title:
        out.append(
            f'<text x="{(_ML + _W - _MR) // 2}" y="18" font-size="14" '
            f'text-anchor="middle" font-family="sans-serif">{title}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def plot_csv(
    csv_path: str,
    x: str,
    ys: list,
    out_path: str,
    group_by: str | None = None,
    log_y: bool = False,
    log_x: bool = False,
    title: str = "",
):
    """Plot columns of a CSV artifact into an SVG file.

    ``group_by`` splits rows on the distinct values of a column, one curve
    per value (used for multi-curve artifacts).  A missing column raises a
    ConfigError naming it.
    """
    cols = read_csv_columns(csv_path)
    for name in [x, *ys] + ([group_by] if group_by else []):
        if name not in cols:
            raise ConfigError(f"{csv_path}: column {name!r} not present")
    series = []
    if group_by:
        keys = sorted(set(cols[group_by]))
        for y in ys:
            for key in keys:
                xs = [xv for xv, g in zip(cols[x], cols[group_by]) if g == key]
                yv = [yv for yv, g in zip(cols[y], cols[group_by]) if g == key]
                label = f"{y} ({group_by}={_fmt(key)})"
                series.append((label, xs, yv))
    else:
        for y in ys:
            series.append((y, cols[x], cols[y]))
    svg = render_svg(series, x, ", ".join(ys), title, log_x, log_y)
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(svg)
