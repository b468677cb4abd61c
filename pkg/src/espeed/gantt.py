"""Static SVG Gantt charts. Output is byte-deterministic for a given schedule."""

from __future__ import annotations

from pathlib import Path
from xml.sax.saxutils import escape

from .model import Instance, Schedule, energy_of, total_completion

PALETTE = (
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
)

LANE_H = 28
LEFT = 60
WIDTH = 800
TOP = 10


def _fmt(x: float) -> str:
    return f"{x:.3f}".rstrip("0").rstrip(".")


def render_gantt(sched: Schedule, inst: Instance) -> str:
    horizon = sched.makespan() or 1.0
    scale = (WIDTH - LEFT - 10) / horizon
    top_speed = max((p.speed for p in sched.pieces), default=1.0)
    height = TOP + inst.m * LANE_H + 40
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" '
        f'viewBox="0 0 {WIDTH} {height}" font-family="monospace" font-size="11">'
    ]
    for q in range(inst.m):
        y = TOP + q * LANE_H
        out.append(f'<text x="4" y="{_fmt(y + LANE_H / 2 + 4)}">P{q}</text>')
        out.append(
            f'<line x1="{LEFT}" y1="{_fmt(y + LANE_H)}" x2="{WIDTH - 10}" y2="{_fmt(y + LANE_H)}" stroke="#ddd"/>'
        )
    pieces = sorted(sched.pieces, key=lambda p: (p.start, p.procs, p.job))
    for p in pieces:
        color = PALETTE[p.job % len(PALETTE)]
        opacity = 0.25 + 0.75 * p.speed / top_speed
        x, w = LEFT + p.start * scale, max(p.length * scale, 0.5)
        for q in p.procs:
            y = TOP + q * LANE_H + 2
            out.append(
                f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(w)}" height="{LANE_H - 4}" '
                f'fill="{color}" fill-opacity="{opacity:.3f}" stroke="#333" stroke-width="0.5">'
                f"<title>job {p.job} [{p.start:.6g}, {p.end:.6g}) speed {p.speed:.6g}</title></rect>"
            )
            out.append(f'<text x="{_fmt(x + 2)}" y="{_fmt(y + LANE_H / 2 + 2)}">{p.job}</text>')
    caption = f"energy {energy_of(sched, inst):.6g} / {inst.energy:.6g}   sum C {total_completion(sched):.6g}"
    out.append(f'<text x="{LEFT}" y="{TOP + inst.m * LANE_H + 25}">{escape(caption)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_gantt(sched: Schedule, inst: Instance, path: str | Path) -> None:
    Path(path).write_text(render_gantt(sched, inst), encoding="utf-8")
