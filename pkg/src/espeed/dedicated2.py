"""Two-processor dedicated pipeline.

Stages: optimal chains for each processor at half the budget, a preemptive
merge in which two-processor jobs sit at fixed intervals and single-processor
jobs fill the remaining time, normalization so that every block of
two-processor jobs interrupts at most one single-processor job, and finally
idle insertion that removes the remaining preemptions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .model import TIME_EPS, Instance, Piece, Schedule, ScheduleError, ensure_valid, total_completion
from .sequencing import LBReport, lb_dedicated2, split_sets

BOTH = (0, 1)


@dataclass(frozen=True)
class SubSchedule:
    order: tuple[int, ...]
    durations: dict[int, float]
    completions: dict[int, float]

    @classmethod
    def from_report(cls, rep: LBReport) -> SubSchedule:
        t, comps = 0.0, {}
        for j in rep.permutation:
            t += rep.durations[j]
            comps[j] = t
        return cls(rep.permutation, dict(rep.durations), comps)

    @property
    def sumc(self) -> float:
        return sum(self.completions.values())

    def to_dict(self) -> dict:
        return {
            "order": list(self.order),
            "durations": [self.durations[j] for j in self.order],
            "completions": [self.completions[j] for j in self.order],
        }


@dataclass(frozen=True)
class PreemptionInfo:
    preempted_job: int
    blocker: int
    g: float
    h: int
    start: float
    blocker_end: float


@dataclass(frozen=True)
class _Block:
    start: float
    end: float
    jobs: tuple[int, ...]


@dataclass
class _Layout:
    # two-processor job -> [start, end, speed]; per-processor chains of (job, duration, speed)
    twos: dict[int, list[float]]
    chains: tuple[list[tuple[int, float, float]], list[tuple[int, float, float]]]

    def blocks(self) -> list[_Block]:
        out: list[_Block] = []
        for jid, (s, e, _) in sorted(self.twos.items(), key=lambda kv: (kv[1][0], kv[0])):
            if out and s <= out[-1].end + TIME_EPS:
                last = out.pop()
                out.append(_Block(last.start, max(last.end, e), last.jobs + (jid,)))
            else:
                out.append(_Block(s, e, (jid,)))
        return out

    def fill(self) -> Schedule:
        blocks = self.blocks()
        pieces = [Piece(j, BOTH, s, e, v) for j, (s, e, v) in self.twos.items()]
        for proc, chain in enumerate(self.chains):
            t, bi = 0.0, 0
            for jid, dur, speed in chain:
                remaining = dur
                while remaining > 0:
                    while bi < len(blocks) and blocks[bi].end <= t + TIME_EPS:
                        bi += 1
                    if bi < len(blocks) and blocks[bi].start <= t + TIME_EPS:
                        t = blocks[bi].end
                        bi += 1
                        continue
                    limit = blocks[bi].start if bi < len(blocks) else math.inf
                    if remaining <= limit - t + TIME_EPS:
                        pieces.append(Piece(jid, (proc,), t, t + remaining, speed))
                        t += remaining
                        remaining = 0.0
                    else:
                        pieces.append(Piece(jid, (proc,), t, limit, speed))
                        remaining -= limit - t
                        t = blocks[bi].end
                        bi += 1
        pieces.sort(key=lambda p: (p.start, p.procs, p.job))
        return Schedule(tuple(pieces))


def _layout_of(sched: Schedule) -> _Layout:
    twos: dict[int, list[float]] = {}
    singles: tuple[list, list] = ([], [])
    for jid, ps in sched.by_job().items():
        procs = tuple(sorted(ps[0].procs))
        if procs == BOTH:
            if len(ps) != 1:
                raise ScheduleError(f"two-processor job {jid} is split")
            twos[jid] = [ps[0].start, ps[0].end, ps[0].speed]
        elif procs in ((0,), (1,)):
            singles[procs[0]].append((ps[0].start, jid, sum(p.length for p in ps), ps[0].speed))
        else:
            raise ScheduleError(f"job {jid} uses processors {list(procs)}; expected a two-processor schedule")
    chains = tuple([(j, d, v) for _, j, d, v in sorted(lane)] for lane in singles)
    return _Layout(twos, chains)


def solve_subproblems(inst: Instance, budget: float | None = None) -> tuple[SubSchedule, SubSchedule]:
    """Per-processor chains; the default budget is half of E."""
    budget = inst.energy / 2 if budget is None else budget
    r1, r2, _ = lb_dedicated2(inst, budget)
    return SubSchedule.from_report(r1), SubSchedule.from_report(r2)


def build_preemptive(first: SubSchedule, second: SubSchedule, inst: Instance) -> Schedule:
    jobs = inst.by_id
    shared = [j for j in first.order if j in second.durations]
    if shared != [j for j in second.order if j in first.durations]:
        raise ScheduleError("two-processor jobs appear in different orders in the two chains")
    twos: dict[int, list[float]] = {}
    prev_end = -math.inf
    for j in shared:
        end = max(first.completions[j], second.completions[j])
        dur = min(first.durations[j], second.durations[j])
        start = end - dur
        if start < prev_end - TIME_EPS:
            raise ScheduleError(f"two-processor intervals overlap at job {j}")
        prev_end = end
        twos[j] = [start, end, jobs[j].work / 2 / dur]
    chains = tuple(
        [(j, sub.durations[j], jobs[j].work / sub.durations[j]) for j in sub.order if j not in twos]
        for sub in (first, second)
    )
    return _Layout(twos, chains).fill()


def _victim_piece(sched_by_job: dict[int, list[Piece]], proc: int, t: float) -> Piece | None:
    """Piece on ``proc`` ending at ``t`` whose job continues later (the job is interrupted at t)."""
    for ps in sched_by_job.values():
        if ps[0].procs != (proc,):
            continue
        for a, b in zip(ps, ps[1:]):
            if abs(a.end - t) <= TIME_EPS:
                return a
    return None


def normalize_preemptions(sched: Schedule) -> Schedule:
    """Shift blocks of two-processor jobs earlier until none interrupts two jobs.

    A block interrupting one job on each processor moves earlier by the
    shorter of the two interrupted pieces that precede it. The interrupted
    jobs keep their completion times; the block finishes earlier.
    """
    layout = _layout_of(sched)
    cap = 4 * (len(layout.twos) + 1) ** 2
    for _ in range(cap):
        current = layout.fill()
        groups = current.by_job()
        target = None
        for block in layout.blocks():
            victims = [_victim_piece(groups, p, block.start) for p in BOTH]
            if all(victims):
                target = (block, min(v.length for v in victims))
                break
        if target is None:
            return current
        block, delta = target
        anchor = block.start - delta
        for j in block.jobs:
            s, e, v = layout.twos[j]
            layout.twos[j] = [anchor + (s - block.start), anchor + (e - block.start), v]
    raise ScheduleError("preemption normalization did not terminate")


def preemption_infos(sched: Schedule) -> list[PreemptionInfo]:
    """Interrupted single-processor jobs with their last blocker F, prefix g and tail count h."""
    groups = sched.by_job()
    comps = sched.completions
    twos = [ps[0] for ps in groups.values() if len(ps[0].procs) == 2]
    infos = []
    for jid, ps in groups.items():
        if len(ps[0].procs) != 1 or len(ps) < 2:
            continue
        last = ps[-1]
        blockers = [p for p in twos if abs(p.end - last.start) <= TIME_EPS]
        if not blockers:
            raise ScheduleError(f"job {jid} is split but no two-processor job ends where it resumes")
        f = max(blockers, key=lambda p: p.end)
        g = math.fsum(p.length for p in ps[:-1])
        h = sum(1 for c in comps.values() if c > f.end + TIME_EPS)
        infos.append(PreemptionInfo(jid, f.job, g, h, ps[0].start, f.end))
    infos.sort(key=lambda i: i.start)
    return infos


def check_windows(infos: list[PreemptionInfo]) -> None:
    for a, b in zip(infos, infos[1:]):
        if b.start < a.blocker_end - TIME_EPS:
            raise ScheduleError(
                f"preemption windows of jobs {a.preempted_job} and {b.preempted_job} overlap"
            )


def to_nonpreemptive(sched: Schedule) -> Schedule:
    """Insert idle time of length g after each last blocker and restart the interrupted job there."""
    infos = preemption_infos(sched)
    check_windows(infos)
    points = [(i.blocker_end, i.g) for i in infos]

    def shift(t: float, strict: bool = False) -> float:
        if strict:
            return math.fsum(g for c, g in points if c < t - TIME_EPS)
        return math.fsum(g for c, g in points if c <= t + TIME_EPS)

    victims = {i.preempted_job: i for i in infos}
    pieces = []
    for p in sched.pieces:
        if p.job in victims:
            continue
        for c, _ in points:
            if p.start < c - TIME_EPS and p.end > c + TIME_EPS:
                raise ScheduleError(f"job {p.job} straddles an idle insertion point")
        s = shift(p.start)
        pieces.append(Piece(p.job, p.procs, p.start + s, p.end + s, p.speed))
    groups = sched.by_job()
    for jid, info in victims.items():
        ps = groups[jid]
        dur = math.fsum(p.length for p in ps)
        start = info.blocker_end + shift(info.blocker_end, strict=True)
        pieces.append(Piece(jid, ps[0].procs, start, start + dur, ps[0].speed))
    pieces.sort(key=lambda p: (p.start, p.procs, p.job))
    return Schedule(tuple(pieces))


@dataclass
class DedicatedResult:
    first: SubSchedule
    second: SubSchedule
    merged: Schedule
    normalized: Schedule
    final: Schedule
    lb: float
    lb_reports: tuple[LBReport, LBReport]
    preemptive: bool
    infos: list[PreemptionInfo] = field(default_factory=list)

    @property
    def schedule(self) -> Schedule:
        return self.normalized if self.preemptive else self.final

    def trace(self) -> dict:
        from .io import schedule_to_dict

        return {
            "first": self.first.to_dict(),
            "second": self.second.to_dict(),
            "merged": schedule_to_dict(self.merged),
            "normalized": schedule_to_dict(self.normalized),
            "final": schedule_to_dict(self.final),
            "preemptions": [
                {"job": i.preempted_job, "blocker": i.blocker, "g": i.g, "h": i.h} for i in self.infos
            ],
        }


def schedule_dedicated2(inst: Instance, preemptive: bool = False) -> DedicatedResult:
    ensure_valid(inst)
    split_sets(inst)
    r1, r2, lb = lb_dedicated2(inst, inst.energy)
    first, second = solve_subproblems(inst)
    merged = build_preemptive(first, second, inst)
    normalized = normalize_preemptions(merged)
    infos = preemption_infos(normalized)
    final = to_nonpreemptive(normalized)
    if total_completion(normalized) > total_completion(merged) * (1 + 1e-12) + TIME_EPS:
        raise ScheduleError("normalization increased the total completion time")
    return DedicatedResult(first, second, merged, normalized, final, lb, (r1, r2), preemptive, infos)
