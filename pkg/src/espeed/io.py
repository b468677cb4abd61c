"""JSON instance and schedule files.

Files keep full double precision so that a round trip is field-exact; only
human-facing output is trimmed to 9 significant digits (see ``sig9``).
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

from .model import Instance, InstanceError, Job, Piece, Schedule


def instance_to_dict(inst: Instance) -> dict:
    jobs = []
    for j in inst.jobs:
        row: dict[str, Any] = {"id": j.id, "work": j.work}
        if j.size is not None:
            row["size"] = j.size
        if j.delta is not None:
            row["delta"] = j.delta
        if j.fix is not None:
            row["fix"] = list(j.fix)
        jobs.append(row)
    out: dict[str, Any] = {"kind": inst.kind, "m": inst.m, "energy": inst.energy, "alpha": inst.alpha, "jobs": jobs}
    if inst.meta:
        out["meta"] = inst.meta
    return out


def instance_from_dict(data: dict) -> Instance:
    try:
        jobs = tuple(
            Job(
                id=int(row["id"]),
                work=float(row["work"]),
                size=int(row["size"]) if "size" in row else None,
                delta=int(row["delta"]) if "delta" in row else None,
                fix=tuple(int(p) for p in row["fix"]) if "fix" in row else None,
            )
            for row in data["jobs"]
        )
        return Instance(
            m=int(data["m"]),
            energy=float(data["energy"]),
            alpha=float(data["alpha"]),
            kind=str(data["kind"]),
            jobs=jobs,
            meta=dict(data.get("meta", {})),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceError([f"format: malformed instance file ({exc})"]) from exc


def schedule_to_dict(sched: Schedule) -> dict:
    return {
        "pieces": [
            {"job": p.job, "procs": list(p.procs), "start": p.start, "end": p.end, "speed": p.speed}
            for p in sched.pieces
        ]
    }


def schedule_from_dict(data: dict) -> Schedule:
    try:
        return Schedule(
            tuple(
                Piece(int(r["job"]), tuple(int(q) for q in r["procs"]), float(r["start"]), float(r["end"]), float(r["speed"]))
                for r in data["pieces"]
            )
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceError([f"format: malformed schedule file ({exc})"]) from exc


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, ensure_ascii=False) + "\n"


def write_json(path: str | Path, obj: Any) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")


def read_json(path: str | Path) -> Any:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def load_instance(path: str | Path) -> Instance:
    return instance_from_dict(read_json(path))


def load_schedule(path: str | Path) -> Schedule:
    return schedule_from_dict(read_json(path))


def sig9(obj: Any) -> Any:
    """Round every float in a JSON-like tree to 9 significant digits."""
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, float):
        if math.isfinite(obj):
            return float(f"{obj:.9g}")
        return None
    if isinstance(obj, dict):
        return {k: sig9(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [sig9(v) for v in obj]
    return obj
