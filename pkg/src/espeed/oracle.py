"""Brute-force and numerical cross-checks for the closed forms, ordering rules and ratios.

Ratios are measured against the lower bound rather than the true optimum,
which only makes each certified ratio a stronger statement.
"""

from __future__ import annotations

import itertools
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, Iterable, Sequence

from .dedicated2 import schedule_dedicated2
from .duropt import WeightedProgram, solve_weighted, solve_weighted_numeric
from .gadgets import gen_random
from .listsched import schedule_moldable, schedule_rigid
from .model import Instance, PreconditionError, Schedule, total_completion
from .sequencing import lb_rigid

MAX_EXHAUSTIVE = 8

ALGOS = ("rigid", "moldable", "dedicated2", "dedicated2-preemptive")


def proven_bound(algo: str, alpha: float) -> float:
    if algo in ("rigid", "moldable"):
        return 2.0
    if algo == "dedicated2-preemptive":
        return 2 ** (alpha / (alpha - 1))
    if algo == "dedicated2":
        return 2 ** ((2 * alpha - 1) / (alpha - 1))
    raise PreconditionError(f"unknown algorithm {algo!r}")


def min_lb_over_permutations(
    ids: Sequence[int], build: Callable[[tuple[int, ...]], WeightedProgram]
) -> tuple[tuple[int, ...], float]:
    """Exact minimum of the bound over all orders of ``ids``.

    ``itertools.permutations`` walks the orders lexicographically and keeps
    only the current one in memory.
    """
    if len(ids) > MAX_EXHAUSTIVE:
        raise PreconditionError(f"instance too large for exhaustive search (n={len(ids)} > {MAX_EXHAUSTIVE})")
    best, best_perm = math.inf, tuple(ids)
    for perm in itertools.permutations(sorted(ids)):
        value = solve_weighted(build(perm)).objective
        if value < best:
            best, best_perm = value, perm
    return best_perm, best


def lb_rigid_direct(perm: Sequence[int], inst: Instance) -> float:
    """The rigid bound for a fixed order, evaluated straight from its closed form."""
    a, n, m, E = inst.alpha, inst.n, inst.m, inst.energy
    jobs = inst.by_id
    total = 0.0
    for i, jid in enumerate(perm, start=1):
        size = jobs[jid].size
        w = jobs[jid].work / size
        total += w * size ** (1 / a) * (size * (n - i + 0.5) + 0.5 * m) ** ((a - 1) / a)
    return E ** (1 / (1 - a)) / m * total ** (a / (a - 1))


@dataclass(frozen=True)
class RatioRecord:
    id: int
    algo: str
    n: int
    m: int
    alpha: float
    lb: float
    sumc: float
    ratio: float
    bound: float
    passed: bool

    def row(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


def run_algo(inst: Instance, algo: str) -> tuple[Schedule, float]:
    """Schedule an instance and return it with the full-budget lower bound."""
    if algo == "rigid":
        res = schedule_rigid(inst)
        return res.schedule, res.lb.value
    if algo == "moldable":
        res = schedule_moldable(inst)
        return res.schedule, res.lb.value
    if algo in ("dedicated2", "dedicated2-preemptive"):
        res = schedule_dedicated2(inst, preemptive=algo.endswith("preemptive"))
        return res.schedule, res.lb
    raise PreconditionError(f"unknown algorithm {algo!r}")


def check_ratio(inst: Instance, algo: str, instance_id: int = 0) -> RatioRecord:
    sched, lb = run_algo(inst, algo)
    sumc = total_completion(sched)
    ratio = sumc / lb
    bound = proven_bound(algo, inst.alpha)
    return RatioRecord(instance_id, algo, inst.n, inst.m, inst.alpha, lb, sumc, ratio, bound, ratio <= bound * (1 + 1e-9))


SWEEP_ALPHAS = (1.5, 2.0, 3.0)


def sweep_instance(kind: str, seed: int, index: int, alpha: float | None = None, max_n: int = 12) -> Instance:
    """The ``index``-th instance of a seeded sweep; alpha cycles through 1.5, 2, 3 unless fixed."""
    rng = random.Random(seed * 1_000_003 + index)
    n = rng.randint(1, max_n)
    if kind == "rigid":
        m = rng.randint(2, 16)
    elif kind == "moldable":
        m = rng.randint(1, 16)
    else:
        m = 2
    a = SWEEP_ALPHAS[index % len(SWEEP_ALPHAS)] if alpha is None else alpha
    return gen_random("dedicated" if kind.startswith("dedicated") else kind, n, m, rng.getrandbits(32), a, "identical")


def _sweep_one(args: tuple[str, str, int, int, float | None]) -> RatioRecord:
    kind, algo, seed, index, alpha = args
    return check_ratio(sweep_instance(kind, seed, index, alpha), algo, index)


def ratio_sweep(
    algo: str, count: int, seed: int = 42, alpha: float | None = None, workers: int = 1
) -> list[RatioRecord]:
    kind = "dedicated" if algo.startswith("dedicated") else algo
    tasks = [(kind, algo, seed, i, alpha) for i in range(count)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_sweep_one, tasks, chunksize=16))
    else:
        records = [_sweep_one(t) for t in tasks]
    return sorted(records, key=lambda r: r.id)


@dataclass
class CrosscheckReport:
    checked: int
    failures: list[str]
    max_rel_objective: float
    max_rel_duration: float
    max_rel_lb: float

    @property
    def ok(self) -> bool:
        return not self.failures


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def random_program(rng: random.Random, alpha: float | None = None, max_n: int = 50) -> WeightedProgram:
    n = rng.randint(1, max_n)
    a = alpha if alpha is not None else rng.choice(SWEEP_ALPHAS)
    weights = tuple(math.exp(rng.uniform(math.log(0.05), math.log(20))) for _ in range(n))
    coeffs = tuple(math.exp(rng.uniform(math.log(0.05), math.log(20))) for _ in range(n))
    budget = math.exp(rng.uniform(math.log(0.1), math.log(100)))
    return WeightedProgram(weights, coeffs, budget, a)


def crosscheck_closed_forms(seeds: Iterable[int] | int = 42, count: int = 1000) -> CrosscheckReport:
    """Closed form vs bisection on random programs; rigid bound vs its direct formula."""
    seeds = [seeds] if isinstance(seeds, int) else list(seeds)
    failures: list[str] = []
    worst_obj = worst_dur = worst_lb = 0.0
    checked = 0
    for seed in seeds:
        rng = random.Random(seed)
        for k in range(count):
            prog = random_program(rng)
            closed = solve_weighted(prog)
            numeric = solve_weighted_numeric(prog)
            ro = _rel(closed.objective, numeric.objective)
            rd = max(_rel(x, y) for x, y in zip(closed.durations, numeric.durations))
            worst_obj, worst_dur = max(worst_obj, ro), max(worst_dur, rd)
            if ro > 1e-8 or rd > 1e-8:
                failures.append(f"seed {seed} program {k}: objective rel {ro:.3g}, durations rel {rd:.3g}")

            inst = gen_random("rigid", rng.randint(1, 12), rng.randint(1, 16), rng.getrandbits(32), prog.alpha, "free")
            perm = [j.id for j in inst.jobs]
            rng.shuffle(perm)
            rl = _rel(lb_rigid(perm, inst).value, lb_rigid_direct(perm, inst))
            worst_lb = max(worst_lb, rl)
            if rl > 1e-12:
                failures.append(f"seed {seed} rigid {k}: bound rel {rl:.3g}")
            checked += 1
    return CrosscheckReport(checked, failures, worst_obj, worst_dur, worst_lb)
