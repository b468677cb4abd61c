"""List scheduling for rigid and moldable jobs, and the schedule verifier."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from .model import (
    ENERGY_RTOL,
    TIME_EPS,
    Instance,
    Piece,
    Schedule,
    ScheduleError,
    energy_of,
    ensure_valid,
    total_completion,
)
from .sequencing import LBReport, lb_moldable, lb_rigid, order_moldable, order_rigid


@dataclass(frozen=True)
class ScheduleRequest:
    """Jobs to place in list order.

    ``durations`` are wall-clock execution times and ``works`` total work
    ``V_j``; speed is derived as ``V_j / (widths[j] * durations[j])``.
    """

    order: tuple[int, ...]
    durations: Mapping[int, float]
    widths: Mapping[int, int]
    works: Mapping[int, float]
    m: int


def assign_moldable_width(delta: int, m: int) -> int:
    half = math.ceil(m / 2)
    return delta if delta < half else half


def list_schedule(req: ScheduleRequest) -> Schedule:
    busy: list[list[tuple[float, float]]] = [[] for _ in range(req.m)]
    events = {0.0}
    pieces = []
    for jid in req.order:
        width, dur = req.widths[jid], req.durations[jid]
        if width > req.m:
            raise ScheduleError(f"job {jid} needs {width} processors but only {req.m} exist")
        if not dur > 0 or width < 1:
            raise ScheduleError(f"job {jid} has non-positive duration or width")
        for t in sorted(events):
            end = t + dur
            free = [
                p for p in range(req.m)
                if all(e <= t or s >= end for s, e in busy[p])
            ]
            if len(free) >= width:
                break
        procs = tuple(free[:width])
        for p in procs:
            busy[p].append((t, end))
        events.add(end)
        pieces.append(Piece(jid, procs, t, end, req.works[jid] / (width * dur)))
    return Schedule(tuple(pieces))


@dataclass(frozen=True)
class PipelineResult:
    schedule: Schedule
    lb: LBReport
    widths: dict[int, int]


def schedule_rigid(inst: Instance) -> PipelineResult:
    """Size-ordered list schedule with lower-bound durations."""
    ensure_valid(inst)
    order = order_rigid(inst)
    lb = lb_rigid(order, inst)
    jobs = inst.by_id
    widths = {j: jobs[j].size for j in order}
    req = ScheduleRequest(order, lb.durations, widths, {j: jobs[j].work for j in order}, inst.m)
    return PipelineResult(list_schedule(req), lb, widths)


def schedule_moldable(inst: Instance) -> PipelineResult:
    """Delta-ordered list schedule; each job runs on its clamped width for p_j / m_j."""
    ensure_valid(inst)
    order = order_moldable(inst)
    lb = lb_moldable(order, inst)
    jobs = inst.by_id
    widths = {j: assign_moldable_width(jobs[j].delta, inst.m) for j in order}
    walls = {j: lb.durations[j] / widths[j] for j in order}
    req = ScheduleRequest(order, walls, widths, {j: jobs[j].work for j in order}, inst.m)
    return PipelineResult(list_schedule(req), lb, widths)


def rigid_hypothesis_holds(inst: Instance) -> bool:
    return all(2 * j.size <= inst.m for j in inst.jobs)


# -- verification ------------------------------------------------------------


@dataclass
class VerifyReport:
    capacity_ok: bool = True
    demand_ok: bool = True
    complete: bool = True
    work_ok: bool = True
    energy_ok: bool = True
    nonpreemptive: bool = True
    preemption_ok: bool = True
    energy_used: float = math.nan
    energy_budget: float = math.nan
    sumc: float = math.nan
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.capacity_ok and self.demand_ok and self.complete and self.work_ok and self.energy_ok and self.preemption_ok

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "capacity_ok": self.capacity_ok,
            "demand_ok": self.demand_ok,
            "complete": self.complete,
            "work_ok": self.work_ok,
            "energy_ok": self.energy_ok,
            "nonpreemptive": self.nonpreemptive,
            "preemption_ok": self.preemption_ok,
            "energy_used": self.energy_used,
            "energy_budget": self.energy_budget,
            "sumc": self.sumc,
            "violations": list(self.violations),
        }


def verify_schedule(
    sched: Schedule,
    inst: Instance,
    require_nonpreemptive: bool = False,
    time_eps: float = TIME_EPS,
    energy_rtol: float = ENERGY_RTOL,
) -> VerifyReport:
    rep = VerifyReport(energy_budget=inst.energy)
    jobs = inst.by_id

    for p in sched.pieces:
        if not p.start < p.end or not p.procs or not p.speed > 0:
            rep.demand_ok = False
            rep.violations.append(f"piece: degenerate piece (job {p.job})")
        if any(q < 0 or q >= inst.m for q in p.procs) or len(set(p.procs)) != len(p.procs):
            rep.capacity_ok = False
            rep.violations.append(f"capacity: bad processor set {list(p.procs)} (job {p.job})")

    lanes: dict[int, list[Piece]] = {}
    for p in sched.pieces:
        for q in p.procs:
            lanes.setdefault(q, []).append(p)
    for q in sorted(lanes):
        lane = sorted(lanes[q], key=lambda p: (p.start, p.end))
        for prev, cur in zip(lane, lane[1:]):
            if cur.start < prev.end - time_eps:
                rep.capacity_ok = False
                rep.violations.append(
                    f"capacity: processor {q} over-committed at t={cur.start:.9g} (jobs {prev.job}, {cur.job})"
                )

    groups = sched.by_job()
    for jid in groups:
        if jid not in jobs:
            rep.complete = False
            rep.violations.append(f"completeness: unknown job {jid}")
    for jid, job in jobs.items():
        ps = groups.get(jid)
        if not ps:
            rep.complete = False
            rep.violations.append(f"completeness: job {jid} not placed")
            continue
        if len(ps) > 1:
            rep.nonpreemptive = False
        procs = ps[0].procs
        if any(set(p.procs) != set(procs) for p in ps):
            rep.demand_ok = False
            rep.violations.append(f"demand: pieces of job {jid} use different processor sets")
        width = len(procs)
        if inst.kind == "rigid" and width != job.size:
            rep.demand_ok = False
            rep.violations.append(f"demand: job {jid} uses {width} processors, size is {job.size}")
        elif inst.kind == "moldable" and width > job.delta:
            rep.demand_ok = False
            rep.violations.append(f"demand: job {jid} uses {width} processors, cap is {job.delta}")
        elif inst.kind == "dedicated" and set(procs) != set(job.fix):
            rep.demand_ok = False
            rep.violations.append(f"demand: job {jid} runs on {sorted(procs)}, fix is {sorted(job.fix)}")
        speed = ps[0].speed
        if any(not math.isclose(p.speed, speed, rel_tol=1e-9) for p in ps):
            rep.work_ok = False
            rep.violations.append(f"work: pieces of job {jid} run at different speeds")
        done = math.fsum(p.length * p.speed for p in ps)
        if not math.isclose(done, job.work / width, rel_tol=1e-9):
            rep.work_ok = False
            rep.violations.append(f"work: job {jid} processes {done:.9g} per processor, needs {job.work / width:.9g}")

    if require_nonpreemptive and not rep.nonpreemptive:
        rep.preemption_ok = False
        rep.violations.append("preemption: schedule claimed non-preemptive has split jobs")

    if rep.complete:
        rep.energy_used = energy_of(sched, inst)
        rep.sumc = total_completion(sched)
        if rep.energy_used > inst.energy * (1 + energy_rtol):
            rep.energy_ok = False
            rep.violations.append(f"energy: used {rep.energy_used:.9g} exceeds budget {inst.energy:.9g}")
    return rep


def waiting_violations(sched: Schedule, m: int) -> list[float]:
    """Event times at which some not-yet-started job waits while at most m/2 processors are busy."""
    starts = sched.starts
    events = sorted({p.start for p in sched.pieces} | {p.end for p in sched.pieces})
    bad = []
    for t in events:
        if not any(s > t + TIME_EPS for s in starts.values()):
            continue
        busy = sum(len(p.procs) for p in sched.pieces if p.start <= t + TIME_EPS and p.end > t + TIME_EPS)
        if not 2 * busy > m:
            bad.append(t)
    return bad

