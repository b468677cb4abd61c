"""Job ordering rules and per-permutation lower bounds for all three job kinds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .duropt import WeightedProgram, solve_weighted
from .model import Instance, Job, PreconditionError

Permutation = tuple[int, ...]

_REL = 1e-9


@dataclass(frozen=True)
class LBReport:
    permutation: Permutation
    durations: dict[int, float]
    value: float

    def to_dict(self) -> dict:
        return {
            "permutation": list(self.permutation),
            "durations": [self.durations[j] for j in self.permutation],
            "value": self.value,
        }


def _check_permutation(perm: Sequence[int], jobs: Sequence[Job]) -> Permutation:
    perm = tuple(perm)
    if sorted(perm) != sorted(j.id for j in jobs):
        raise PreconditionError("permutation is not a bijection on the instance's job ids")
    return perm


def _require_kind(inst: Instance, kind: str) -> None:
    if inst.kind != kind:
        raise PreconditionError(f"expected a {kind} instance, got {inst.kind}")


def _report(perm: Permutation, prog: WeightedProgram) -> LBReport:
    sol = solve_weighted(prog)
    return LBReport(perm, dict(zip(perm, sol.durations)), sol.objective)


# -- rigid -------------------------------------------------------------------


def _identical_works(jobs: Sequence[Job], width) -> bool:
    ws = [j.work / width(j) for j in jobs]
    return all(math.isclose(w, ws[0], rel_tol=_REL) for w in ws)


def order_rigid(inst: Instance) -> Permutation:
    """Non-decreasing size, ties by id. Only defined when all W_j coincide."""
    _require_kind(inst, "rigid")
    if not _identical_works(inst.jobs, lambda j: j.size):
        raise PreconditionError("non-identical works: size ordering requires V_j/size_j equal for all jobs")
    return tuple(j.id for j in sorted(inst.jobs, key=lambda j: (j.size, j.id)))


def rigid_program(perm: Sequence[int], inst: Instance, budget: float | None = None) -> WeightedProgram:
    _require_kind(inst, "rigid")
    perm = _check_permutation(perm, inst.jobs)
    jobs, n, m, a = inst.by_id, inst.n, inst.m, inst.alpha
    weights, coeffs = [], []
    for i, jid in enumerate(perm, start=1):
        size = jobs[jid].size
        weights.append((size * (n - i + 0.5) + 0.5 * m) / m)
        coeffs.append((jobs[jid].work / size) ** a * size)
    return WeightedProgram(tuple(weights), tuple(coeffs), inst.energy if budget is None else budget, a)


def lb_rigid(perm: Sequence[int], inst: Instance) -> LBReport:
    return _report(tuple(perm), rigid_program(perm, inst))


# -- moldable ----------------------------------------------------------------


def check_agreeable(jobs: Sequence[Job]) -> bool:
    """True iff V_i < V_j implies delta_i <= delta_j for every pair."""
    ordered = sorted(jobs, key=lambda j: j.work)
    prev_max = -math.inf  # largest delta among strictly smaller works
    i = 0
    while i < len(ordered):
        k = i
        while k + 1 < len(ordered) and math.isclose(ordered[k + 1].work, ordered[i].work, rel_tol=_REL):
            k += 1
        group = ordered[i : k + 1]
        if min(j.delta for j in group) < prev_max:
            return False
        prev_max = max(prev_max, max(j.delta for j in group))
        i = k + 1
    return True


def order_moldable(inst: Instance) -> Permutation:
    _require_kind(inst, "moldable")
    if not check_agreeable(inst.jobs):
        raise PreconditionError("non-agreeable instance: some V_i < V_j has delta_i > delta_j")
    return tuple(j.id for j in sorted(inst.jobs, key=lambda j: (j.delta, j.work, j.id)))


def moldable_program(perm: Sequence[int], inst: Instance) -> WeightedProgram:
    """Durations here are one-processor times; energy does not depend on the width."""
    _require_kind(inst, "moldable")
    perm = _check_permutation(perm, inst.jobs)
    jobs, n, m, a = inst.by_id, inst.n, inst.m, inst.alpha
    weights = tuple((n - i + 0.5 + 0.5 * m / jobs[jid].delta) / m for i, jid in enumerate(perm, start=1))
    coeffs = tuple(jobs[jid].work ** a for jid in perm)
    return WeightedProgram(weights, coeffs, inst.energy, a)


def lb_moldable(perm: Sequence[int], inst: Instance) -> LBReport:
    return _report(tuple(perm), moldable_program(perm, inst))


# -- dedicated, two processors -------------------------------------------------


def dedicated_key(job: Job, alpha: float) -> float:
    k = len(job.fix)
    return job.work / k * k ** (1 / alpha)


def order_dedicated(jobs: Sequence[Job], alpha: float) -> Permutation:
    return tuple(j.id for j in sorted(jobs, key=lambda j: (dedicated_key(j, alpha), j.id)))


def chain_program(perm: Sequence[int], jobs: Sequence[Job], budget: float, alpha: float) -> WeightedProgram:
    """Single-processor chain: the i-th of n' jobs delays n'-i+1 completions."""
    perm = _check_permutation(perm, jobs)
    by_id = {j.id: j for j in jobs}
    n = len(perm)
    weights = tuple(float(n - i) for i in range(n))
    coeffs = []
    for jid in perm:
        k = len(by_id[jid].fix)
        coeffs.append(k * (by_id[jid].work / k) ** alpha)
    return WeightedProgram(weights, tuple(coeffs), budget, alpha)


def split_sets(inst: Instance) -> tuple[list[Job], list[Job], list[Job]]:
    """Partition a two-processor dedicated instance into (J1, J2, J12)."""
    _require_kind(inst, "dedicated")
    if inst.m != 2:
        raise PreconditionError("two-processor algorithm requires m = 2")
    first, second, both = [], [], []
    for j in inst.jobs:
        s = frozenset(j.fix)
        if s == {0}:
            first.append(j)
        elif s == {1}:
            second.append(j)
        elif s == {0, 1}:
            both.append(j)
        else:
            raise PreconditionError(f"fix of job {j.id} is not a subset of {{0, 1}}")
    return first, second, both


def lb_chain(jobs: Sequence[Job], budget: float, alpha: float) -> LBReport:
    if not jobs:
        return LBReport((), {}, 0.0)
    perm = order_dedicated(jobs, alpha)
    return _report(perm, chain_program(perm, jobs, budget, alpha))


def lb_dedicated2(inst: Instance, budget: float | None = None) -> tuple[LBReport, LBReport, float]:
    """Optimal chains on each processor; the larger total is a lower bound on sum C_j."""
    first, second, both = split_sets(inst)
    budget = inst.energy if budget is None else budget
    r1 = lb_chain(first + both, budget, inst.alpha)
    r2 = lb_chain(second + both, budget, inst.alpha)
    return r1, r2, max(r1.value, r2.value)


def lower_bound(inst: Instance, perm: Sequence[int] | None = None) -> LBReport:
    """Rule-ordered (or given-order) lower bound for a rigid or moldable instance."""
    if inst.kind == "rigid":
        return lb_rigid(order_rigid(inst) if perm is None else perm, inst)
    if inst.kind == "moldable":
        return lb_moldable(order_moldable(inst) if perm is None else perm, inst)
    raise PreconditionError("use lb_dedicated2 for dedicated instances")
