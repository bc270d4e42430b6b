"""Static outputs: deterministic SVG scenes and JSON verification reports.

SVG only, assembled from exact rational coordinates with fixed decimal
formatting, so repeated runs are byte-identical and golden-file tests
can diff the text.  The drawn primitives are counted by the same
statistics function the tests use against the encoding.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import __version__
from .lattice import WeightAction, Window, indices_of, m_basis, mu_lift, mu_unit
from .skeleton import JumpReport, SkeletonEncoding, slice_encoding


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str  # pass | fail | truncated
    details: dict

    def __post_init__(self):
        if self.status not in ("pass", "fail", "truncated"):
            raise ValueError(f"bad status {self.status!r}")


def write_report(results: Sequence[CheckResult], action: WeightAction | None = None,
                 window: Window | None = None) -> str:
    """Render the verification report as stable, indented JSON text."""
    doc = {
        "tool_version": __version__,
        "action": action.to_json_obj() if action else None,
        "window": window.to_json_obj() if window else None,
        "checks": [
            {"name": r.name, "status": r.status, "details": r.details}
            for r in results
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def report_exit_code(results: Sequence[CheckResult]) -> int:
    return 1 if any(r.status == "fail" for r in results) else 0


def _dec(x: Fraction | int, places: int = 3) -> str:
    """Exact fixed-point decimal for a rational, no floats involved."""
    f = Fraction(x)
    scaled = f * 10 ** places
    n = scaled.numerator // scaled.denominator
    if 2 * (scaled - n) >= 1:
        n += 1
    sign = "-" if n < 0 else ""
    n = abs(n)
    whole, frac = divmod(n, 10 ** places)
    s = f"{sign}{whole}.{frac:0{places}d}".rstrip("0").rstrip(".")
    return s if s not in ("", "-") else "0"


def _strip_coords(action: WeightAction):
    """Linear chart on the plane: x = mu, y = kernel-basis coefficient.

    Accepts integer or rational points; the second coordinate is the
    coefficient along the kernel basis vector, so lattice periodicity
    is vertical translation by 1.
    """
    u = mu_unit(action)
    m = m_basis(action).basis[0]
    j = next(i for i, x in enumerate(m) if x != 0)

    def chart(v: Sequence[int | Fraction]) -> tuple[Fraction, Fraction]:
        s = sum(Fraction(x) * a for x, a in zip(v, action.weights))
        t = Fraction(Fraction(v[j]) - s * u[j], m[j])
        return s, t

    return chart


def scene_stats(enc: SkeletonEncoding, jumps: JumpReport,
                band: tuple[int, int]) -> dict:
    """Primitive counts the rendered scene must realize exactly."""
    lo, hi = band
    vertices = [k for k in enc.vertex_classes() if lo <= k <= hi]
    hairs = [(k, d, c) for (k, d, c) in enc.hair_items() if lo <= k <= hi]
    if jumps.jump_mu:
        ts = (Fraction(min(jumps.jump_mu)) - Fraction(1, 2),
              Fraction(min(jumps.jump_mu)) + Fraction(1, 2),
              Fraction(max(jumps.jump_mu)) + Fraction(1, 2))
    else:
        ts = (Fraction(enc.window.hi) + Fraction(1, 2),) if enc.window else ()
    slice_counts = tuple(slice_encoding(enc, t).ray_family_count() for t in ts)
    return {
        "vertices": len(vertices),
        "jump_lines": len(jumps.jump_mu),
        "hair_entries": len(hairs),
        "hair_segments": sum(c.bit_count() for (_, _, c) in hairs),
        "slice_ts": ts,
        "slice_counts": slice_counts,
    }


def default_band(enc: SkeletonEncoding) -> tuple[int, int]:
    w = enc.window
    if w is None:
        return (enc.mu_lo + enc.action.eta_plus, enc.mu_hi - enc.action.eta_minus)
    pad = max(2, enc.action.eta_plus)
    return (w.lo - pad, w.hi + pad)


_SCALE = 48
_STRIP_H = 96


def render_svg(enc: SkeletonEncoding, jumps: JumpReport,
               band: tuple[int, int] | None = None) -> str:
    """Deterministic SVG scene for a window skeleton.

    Two-dimensional actions get the full strip scene (sheared lattice
    strip, vertex marks, hair segments, dashed jump lines, shaded
    window band, slice strips); higher dimensions fall back to a bar
    chart of slice ray counts with a warning in the document.
    """
    if enc.action.n != 2:
        return _render_summary_chart(enc, jumps)
    band = band or default_band(enc)
    stats = scene_stats(enc, jumps, band)
    action = enc.action
    chart = _strip_coords(action)
    lo, hi = band
    x0 = lo * _SCALE
    width = (hi - lo) * _SCALE

    def px(v) -> str:
        return _dec(Fraction(v) * _SCALE - x0)

    def py(t) -> str:
        return _dec(_STRIP_H - Fraction(t) * _STRIP_H + 40)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{_STRIP_H + 200}">',
        f"<desc>window skeleton strip, weights={list(action.weights)}, "
        f"band=[{lo},{hi}]</desc>",
    ]
    # strip frame (top and bottom edges are identified)
    parts.append('<g id="strip">')
    for yy in (40, 40 + _STRIP_H):
        parts.append(
            f'<line x1="0" y1="{yy}" x2="{width}" y2="{yy}" '
            f'stroke="#888" stroke-dasharray="6,4" stroke-width="1"/>')
    parts.append("</g>")
    if enc.window is not None:
        wx1 = _dec(Fraction(enc.window.lo) * _SCALE - x0)
        wwidth = _dec(Fraction(enc.window.hi - enc.window.lo) * _SCALE)
        parts.append(
            f'<rect id="window-band" x="{wx1}" y="40" width="{wwidth}" '
            f'height="{_STRIP_H}" fill="#99bbee" fill-opacity="0.25"/>')
    parts.append('<g id="jump-lines">')
    for k in jumps.jump_mu:
        x = _dec(Fraction(k) * _SCALE - x0)
        parts.append(
            f'<line x1="{x}" y1="40" x2="{x}" y2="{40 + _STRIP_H}" '
            f'stroke="#cc2222" stroke-width="2" stroke-dasharray="4,3"/>')
    parts.append("</g>")
    parts.append('<g id="hairs">')
    third = Fraction(1, 3)
    for (level, dirs_mask, imask) in enc.hair_items():
        if not (lo <= level <= hi):
            continue
        anchor = mu_lift(action, level)
        mid = [Fraction(a) for a in anchor]
        for i in indices_of(dirs_mask):
            mid[i] += Fraction(1, 2)
        mx, mt = chart(mid)
        for i in indices_of(imask):
            tip = list(mid)
            tip[i] -= third
            hx, ht = chart(tip)
            wrap = mt % 1 - mt
            parts.append(
                f'<line x1="{_dec(mx * _SCALE - x0)}" y1="{py(mt % 1)}" '
                f'x2="{_dec(hx * _SCALE - x0)}" y2="{py(ht + wrap)}" '
                f'stroke="#222" stroke-width="1"/>')
    parts.append("</g>")
    parts.append('<g id="vertices">')
    for k in enc.vertex_classes():
        if not (lo <= k <= hi):
            continue
        anchor = mu_lift(action, k)
        cx, ct = chart(anchor)
        parts.append(
            f'<circle cx="{_dec(cx * _SCALE - x0)}" cy="{py(ct % 1)}" '
            f'r="4" fill="#000"/>')
    parts.append("</g>")
    # slice strips: tick per ray family at each sample level
    labels = ("slice-left", "slice-mid", "slice-right")[: len(stats["slice_ts"])]
    for row, (label, t, count) in enumerate(
            zip(labels, stats["slice_ts"], stats["slice_counts"])):
        y = 40 + _STRIP_H + 30 + row * 26
        parts.append(f'<g id="{label}" data-t="{_dec(t)}" data-count="{count}">')
        parts.append(
            f'<line x1="0" y1="{y}" x2="{width}" y2="{y}" '
            f'stroke="#aaa" stroke-width="1"/>')
        for k in range(count):
            x = 20 + k * 14
            parts.append(
                f'<line x1="{x}" y1="{y - 8}" x2="{x}" y2="{y}" '
                f'stroke="#222" stroke-width="2" class="hair-tick"/>')
        parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _render_summary_chart(enc: SkeletonEncoding, jumps: JumpReport) -> str:
    """Fallback for ambient dimension > 2: slice ray counts per gap."""
    action = enc.action
    w = enc.window
    lo = (w.lo if w else enc.mu_lo + action.eta_plus) - 2
    hi = (w.hi if w else enc.mu_hi - action.eta_minus) + 2
    counts = []
    for k in range(lo, hi + 1):
        t = Fraction(k) + Fraction(1, 2)
        counts.append((k, slice_encoding(enc, t).ray_family_count()))
    bar_w = 28
    height = 160
    width = bar_w * len(counts) + 40
    peak = max((c for _, c in counts), default=1) or 1
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height + 40}">',
        "<desc>warning: ambient dimension exceeds 2; rendering slice "
        "ray-count summary instead of a strip scene</desc>",
        '<g id="slice-bars">',
    ]
    for idx, (k, c) in enumerate(counts):
        h = 0 if peak == 0 else (c * height) // peak
        x = 20 + idx * bar_w
        parts.append(
            f'<rect x="{x}" y="{20 + height - h}" width="{bar_w - 6}" '
            f'height="{h}" fill="#6688cc" data-gap="{k}" data-count="{c}"/>')
    parts.append("</g>")
    parts.append('<g id="jump-lines">')
    for j in jumps.jump_mu:
        idx = j - lo
        x = 20 + idx * bar_w - 3
        parts.append(
            f'<line x1="{x}" y1="20" x2="{x}" y2="{20 + height}" '
            f'stroke="#cc2222" stroke-width="2" stroke-dasharray="4,3"/>')
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
