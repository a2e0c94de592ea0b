"""Constant sweeps: closed forms against the maximization oracle.

Emits one CSV row per (window, p, q) cell and constant, plus hand-rolled
SVG line charts of the two-exponent ratio constant against q for each
fixed p (no plotting dependency).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .constants import (
    alpha_ratio,
    beta_generic,
    kantorovich_C,
    kantorovich_C2,
    kantorovich_K,
    kantorovich_K2,
    power_fun,
)
from .hermitian import SpectralWindow

CSV_COLUMNS = ["m", "M", "p", "q", "constant_name", "closed_form", "oracle", "abs_diff"]

_PALETTE = ["#1f6fb2", "#c44e52", "#55a868", "#8172b2", "#ccb974", "#64b5cd"]


@dataclass
class SweepResult:
    rows: list
    max_abs_diff: float
    csv_path: str
    svg_paths: list


def _chart_series(window: SpectralWindow, p_grid, n_points: int = 40):
    qs = np.linspace(-1.0, -0.05, n_points)
    series = []
    for p in p_grid:
        ys = [kantorovich_K2(window, p, float(q)) for q in qs]
        series.append((f"p={p:g}", list(map(float, qs)), ys))
    return series


def svg_line_chart(path, title: str, x_label: str, y_label: str, series,
                   width: int = 640, height: int = 420) -> None:
    """Minimal SVG line chart: axes, ticks, one polyline per series."""
    left, right, top, bottom = 64, 150, 40, 48
    plot_w = width - left - right
    plot_h = height - top - bottom
    xs_all = [x for _, xs, _ in series for x in xs]
    ys_all = [y for _, _, ys in series for y in ys]
    x_lo, x_hi = min(xs_all), max(xs_all)
    y_lo, y_hi = min(ys_all), max(ys_all)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo -= pad
    y_hi += pad

    def px(x):
        return left + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y):
        return top + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{left + plot_w / 2:.1f}" y="20" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{title}</text>',
        f'<line x1="{left}" y1="{top + plot_h}" x2="{left + plot_w}" y2="{top + plot_h}" '
        f'stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + plot_h}" stroke="black"/>',
        f'<text x="{left + plot_w / 2:.1f}" y="{height - 10}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">{x_label}</text>',
        f'<text x="16" y="{top + plot_h / 2:.1f}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="12" transform="rotate(-90 16 {top + plot_h / 2:.1f})">{y_label}</text>',
    ]
    for i in range(5):
        frac = i / 4.0
        x_val = x_lo + frac * (x_hi - x_lo)
        y_val = y_lo + frac * (y_hi - y_lo)
        x_pix = px(x_val)
        y_pix = py(y_val)
        parts.append(f'<line x1="{x_pix:.1f}" y1="{top + plot_h}" x2="{x_pix:.1f}" '
                     f'y2="{top + plot_h + 4}" stroke="black"/>')
        parts.append(f'<text x="{x_pix:.1f}" y="{top + plot_h + 18}" text-anchor="middle" '
                     f'font-family="sans-serif" font-size="10">{x_val:.3g}</text>')
        parts.append(f'<line x1="{left - 4}" y1="{y_pix:.1f}" x2="{left}" y2="{y_pix:.1f}" '
                     f'stroke="black"/>')
        parts.append(f'<text x="{left - 8}" y="{y_pix + 3:.1f}" text-anchor="end" '
                     f'font-family="sans-serif" font-size="10">{y_val:.4g}</text>')
    for idx, (label, xs, ys) in enumerate(series):
        color = _PALETTE[idx % len(_PALETTE)]
        points = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
                     f'points="{points}"/>')
        y_leg = top + 14 + 16 * idx
        x_leg = left + plot_w + 12
        parts.append(f'<line x1="{x_leg}" y1="{y_leg - 4}" x2="{x_leg + 18}" y2="{y_leg - 4}" '
                     f'stroke="{color}" stroke-width="1.5"/>')
        parts.append(f'<text x="{x_leg + 24}" y="{y_leg}" font-family="sans-serif" '
                     f'font-size="11">{label}</text>')
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(parts) + "\n")


def sweep_constants(windows, p_grid, q_grid, out_dir) -> SweepResult:
    """Evaluate K, K2, C2, C per cell against their oracles; write CSV + SVGs."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    max_diff = 0.0
    cache_k: dict = {}
    cache_c: dict = {}
    for window in windows:
        w = SpectralWindow(*window)
        for p in p_grid:
            p = float(p)
            if (window, p) not in cache_k:
                cache_k[(window, p)] = alpha_ratio(power_fun(p), power_fun(p), w).value
                cache_c[(window, p)] = beta_generic(power_fun(p), power_fun(p), 1.0, w).value
            for q in q_grid:
                q = float(q)
                values = [
                    ("K", kantorovich_K(w, p), cache_k[(window, p)]),
                    ("K2", kantorovich_K2(w, p, q),
                     alpha_ratio(power_fun(p), power_fun(q), w).value),
                    ("C2", kantorovich_C2(w, p, q),
                     beta_generic(power_fun(p), power_fun(q), 1.0, w).value),
                    ("C", kantorovich_C(w, p), cache_c[(window, p)]),
                ]
                for name, closed, oracle in values:
                    diff = abs(closed - oracle)
                    max_diff = max(max_diff, diff)
                    rows.append({
                        "m": w.m, "M": w.M, "p": p, "q": q,
                        "constant_name": name, "closed_form": closed,
                        "oracle": oracle, "abs_diff": diff,
                    })
    csv_path = out / "constants.csv"
    with open(csv_path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow([repr(row["m"]), repr(row["M"]), repr(row["p"]), repr(row["q"]),
                             row["constant_name"], repr(row["closed_form"]),
                             repr(row["oracle"]), repr(row["abs_diff"])])
    svg_paths = []
    for idx, window in enumerate(windows):
        w = SpectralWindow(*window)
        path = out / f"k2_vs_q_window_{idx}.svg"
        svg_line_chart(path, f"K2(m={w.m:g}, M={w.M:g}, p, q) against q",
                       "q", "K2", _chart_series(w, p_grid))
        svg_paths.append(str(path))
    return SweepResult(rows=rows, max_abs_diff=max_diff, csv_path=str(csv_path),
                       svg_paths=svg_paths)
