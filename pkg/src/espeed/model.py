"""Domain types and energy/objective accounting.

Jobs store their *total* work ``V_j``. The per-processor share
``W_j = V_j / m_j`` is always derived from the processor count a schedule
actually uses, so the two can never disagree.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable

KINDS = ("rigid", "moldable", "dedicated")

TIME_EPS = 1e-9
ENERGY_RTOL = 1e-9


class EspeedError(Exception):
    """Base class for domain errors (bad instances, unmet preconditions)."""


class InstanceError(EspeedError):
    """Instance fails validation."""

    def __init__(self, violations: list[str]) -> None:
        self.violations = violations
        super().__init__("; ".join(violations))


class PreconditionError(EspeedError):
    pass


class ScheduleError(EspeedError):
    pass


@dataclass(frozen=True)
class Job:
    id: int
    work: float
    size: int | None = None
    delta: int | None = None
    fix: tuple[int, ...] | None = None

    @property
    def demand(self) -> str:
        if self.fix is not None:
            return "dedicated"
        if self.delta is not None:
            return "moldable"
        return "rigid"

    def per_processor_work(self, width: int) -> float:
        return self.work / width


@dataclass(frozen=True)
class Instance:
    m: int
    energy: float
    alpha: float
    kind: str
    jobs: tuple[Job, ...]
    meta: dict = field(default_factory=dict, compare=True)

    @property
    def n(self) -> int:
        return len(self.jobs)

    def job(self, job_id: int) -> Job:
        for j in self.jobs:
            if j.id == job_id:
                return j
        raise KeyError(job_id)

    @property
    def by_id(self) -> dict[int, Job]:
        return {j.id: j for j in self.jobs}

    def with_jobs(self, jobs: Iterable[Job]) -> Instance:
        return Instance(self.m, self.energy, self.alpha, self.kind, tuple(jobs), dict(self.meta))

    def with_alpha(self, alpha: float) -> Instance:
        return Instance(self.m, self.energy, alpha, self.kind, self.jobs, dict(self.meta))


@dataclass(frozen=True)
class Piece:
    job: int
    procs: tuple[int, ...]
    start: float
    end: float
    speed: float

    @property
    def length(self) -> float:
        return self.end - self.start


@dataclass(frozen=True)
class Schedule:
    pieces: tuple[Piece, ...]

    def by_job(self) -> dict[int, list[Piece]]:
        out: dict[int, list[Piece]] = defaultdict(list)
        for p in self.pieces:
            out[p.job].append(p)
        for ps in out.values():
            ps.sort(key=lambda p: p.start)
        return dict(out)

    @property
    def completions(self) -> dict[int, float]:
        return {j: max(p.end for p in ps) for j, ps in self.by_job().items()}

    @property
    def starts(self) -> dict[int, float]:
        return {j: min(p.start for p in ps) for j, ps in self.by_job().items()}

    @property
    def durations(self) -> dict[int, float]:
        return {j: sum(p.length for p in ps) for j, ps in self.by_job().items()}

    @property
    def widths(self) -> dict[int, int]:
        return {j: len(ps[0].procs) for j, ps in self.by_job().items()}

    def is_nonpreemptive(self) -> bool:
        return all(len(ps) == 1 for ps in self.by_job().values())

    def makespan(self) -> float:
        return max((p.end for p in self.pieces), default=0.0)


def validate_instance(inst: Instance) -> list[str]:
    """Return every invariant violation; an empty list means the instance is valid."""
    errs: list[str] = []
    if inst.kind not in KINDS:
        errs.append(f"kind: unknown kind {inst.kind!r}")
    if inst.m < 1:
        errs.append("m: must be at least 1")
    if not inst.energy > 0:
        errs.append("energy: must be positive")
    if not inst.alpha > 1:
        errs.append("alpha: alpha must exceed 1")
    if not inst.jobs:
        errs.append("jobs: instance has no jobs")
    seen: set[int] = set()
    for j in inst.jobs:
        if j.id in seen:
            errs.append(f"id: duplicate job id (job {j.id})")
        seen.add(j.id)
        if not j.work > 0:
            errs.append(f"work: must be positive (job {j.id})")
        given = [name for name in ("size", "delta", "fix") if getattr(j, name) is not None]
        expected = {"rigid": "size", "moldable": "delta", "dedicated": "fix"}.get(inst.kind)
        if given != [expected]:
            errs.append(f"demand: job must carry exactly {expected!r} for a {inst.kind} instance (job {j.id})")
            continue
        if inst.kind == "rigid":
            if j.size < 1:
                errs.append(f"size: must be at least 1 (job {j.id})")
            elif j.size > inst.m:
                errs.append(f"size: size exceeds m (job {j.id})")
        elif inst.kind == "moldable":
            if j.delta < 1:
                errs.append(f"delta: must be at least 1 (job {j.id})")
            elif j.delta > inst.m:
                errs.append(f"delta: delta exceeds m (job {j.id})")
        else:
            if not j.fix:
                errs.append(f"fix: processor set is empty (job {j.id})")
            elif len(set(j.fix)) != len(j.fix):
                errs.append(f"fix: repeated processor id (job {j.id})")
            elif any(p < 0 or p >= inst.m for p in j.fix):
                errs.append(f"fix: processor id outside [0, m) (job {j.id})")
    return errs


def ensure_valid(inst: Instance) -> Instance:
    errs = validate_instance(inst)
    if errs:
        raise InstanceError(errs)
    return inst


def energy_of(sched: Schedule, inst: Instance) -> float:
    """Total energy ``sum_j m_j W_j^alpha p_j^(1-alpha)`` of a schedule."""
    groups = sched.by_job()
    a = inst.alpha
    total = 0.0
    for job in inst.jobs:
        ps = groups.get(job.id)
        if not ps:
            raise ScheduleError(f"job {job.id} has no pieces")
        width = len(ps[0].procs)
        dur = sum(p.length for p in ps)
        w = job.work / width
        total += width * w**a * dur ** (1 - a)
    return total


def energy_integral(sched: Schedule, alpha: float) -> float:
    """Energy as the time integral of summed processor power, piece by piece."""
    return sum(p.length * len(p.procs) * p.speed**alpha for p in sched.pieces)


def total_completion(sched: Schedule) -> float:
    return sum(sched.completions.values())
