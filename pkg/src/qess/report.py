"""CSV, JSON and SVG emitters."""
from __future__ import annotations

import csv
import io
import json
import math
from html import escape

from .game import ClassificationReport, MixedStrategy
from .quantum import QuantumStrategy

SWEEP_HEADER = ["gamma", "min_ne_gap", "strict_margin", "is_ne", "is_strict",
                "is_ess", "witness_theta", "witness_phi"]
TRACE_HEADER = ["step", "time", "epsilon"]


def fmt_real(x: float) -> str:
    """Shortest round-tripping decimal form (repr of a double)."""
    return repr(float(x))


def fmt_bool(b: bool) -> str:
    return "true" if b else "false"


def _witness_dict(w):
    if isinstance(w, QuantumStrategy):
        return {"theta": w.theta, "phi": w.phi}
    if isinstance(w, MixedStrategy):
        return {"p": w.p}
    return None


def _json_real(x):
    if x is None:
        return None
    return x if math.isfinite(x) else repr(x)


def report_to_dict(report: ClassificationReport, **context) -> dict:
    out = dict(context)
    out.update({
        "is_ne": report.is_ne,
        "is_strict_ne": report.is_strict_ne,
        "is_ess": report.is_ess,
        "min_ne_gap": _json_real(report.min_ne_gap),
        "strict_margin": _json_real(report.strict_margin),
        "ess_second_condition_margin": _json_real(report.ess_second_condition_margin),
        "witness": _witness_dict(report.witness),
        "probes_evaluated": report.probes_evaluated,
        "alternative_best_responses": report.alternative_best_responses,
    })
    return out


def dumps_json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def sweep_csv(results) -> str:
    """CSV text for ``[(gamma, report), ...]`` from a gamma sweep."""
    rows = []
    for gamma, rep in results:
        w = rep.witness
        rows.append([fmt_real(gamma), fmt_real(rep.min_ne_gap), fmt_real(rep.strict_margin),
                     fmt_bool(rep.is_ne), fmt_bool(rep.is_strict_ne), fmt_bool(rep.is_ess),
                     fmt_real(w.theta), fmt_real(w.phi)])
    return _csv_text(SWEEP_HEADER, rows)


def trace_csv(trace) -> str:
    times = trace.times
    rows = [[str(i), fmt_real(times[i]), fmt_real(e)]
            for i, e in enumerate(trace.epsilon_series)]
    return _csv_text(TRACE_HEADER, rows)


def _nice(v):
    return f"{v:.4g}"


def line_chart_svg(xs, ys, title="", xlabel="", ylabel="", width=800, height=600,
                   ticks=10) -> str:
    """A static SVG 1.1 line chart with linear axes."""
    xs = [float(x) for x in xs]
    ys = [float(y) for y in ys]
    left, right, top, bottom = 90, 30, 50, 70
    pw, ph = width - left - right, height - top - bottom

    def span(vals):
        lo, hi = min(vals), max(vals)
        if hi == lo:
            pad = abs(lo) * 0.5 or 1.0
            lo, hi = lo - pad, hi + pad
        return lo, hi

    x0, x1 = span(xs)
    y0, y1 = span(ys)

    def sx(x):
        return left + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return top + ph - (y - y0) / (y1 - y0) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="28" text-anchor="middle" font-family="sans-serif" '
        f'font-size="18">{escape(title)}</text>',
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>',
    ]
    for i in range(ticks):
        fx = x0 + (x1 - x0) * i / (ticks - 1)
        fy = y0 + (y1 - y0) * i / (ticks - 1)
        px, py = sx(fx), sy(fy)
        out.append(f'<line x1="{px:.2f}" y1="{top + ph}" x2="{px:.2f}" y2="{top + ph + 6}" '
                   'stroke="black"/>')
        out.append(f'<text x="{px:.2f}" y="{top + ph + 22}" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="11">{_nice(fx)}</text>')
        out.append(f'<line x1="{left - 6}" y1="{py:.2f}" x2="{left}" y2="{py:.2f}" '
                   'stroke="black"/>')
        out.append(f'<text x="{left - 10}" y="{py + 4:.2f}" text-anchor="end" '
                   f'font-family="sans-serif" font-size="11">{_nice(fy)}</text>')
    out.append(f'<text x="{left + pw / 2:.1f}" y="{height - 20}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="14">{escape(xlabel)}</text>')
    out.append(f'<text x="20" y="{top + ph / 2:.1f}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="14" '
               f'transform="rotate(-90 20 {top + ph / 2:.1f})">{escape(ylabel)}</text>')
    pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(xs, ys))
    out.append(f'<polyline fill="none" stroke="#1f77b4" stroke-width="2" points="{pts}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
