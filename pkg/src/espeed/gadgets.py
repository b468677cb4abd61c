"""Instance generators: the two hardness reductions and seeded random instances.

The reductions never decide the underlying hard problem. A witness schedule
is built only from a certificate the caller supplies (a partition into
triples, or a proper 3-edge-coloring).
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .duropt import WeightedProgram, solve_weighted
from .model import Instance, Job, Piece, PreconditionError, Schedule, total_completion


@dataclass(frozen=True)
class GadgetOutput:
    instance: Instance
    threshold: float
    witness_sumc: float | None = None
    witness: Schedule | None = None


def _round_durations(rounds: int, budget: float, alpha: float) -> tuple[float, ...]:
    # one processor running `rounds` unit jobs: the r-th delays rounds-r+1 completions
    prog = WeightedProgram(tuple(float(rounds - r) for r in range(rounds)), (1.0,) * rounds, budget, alpha)
    return solve_weighted(prog).durations


def partition_sumc(q: int, alpha: float) -> float:
    """Optimal sum of completion times of q unit jobs on one processor with budget q."""
    a = alpha
    s = sum((q - j + 1) ** ((a - 1) / a) for j in range(1, q + 1))
    return s ** (a / (a - 1)) * q ** (1 / (1 - a))


def chromatic_sumc(alpha: float) -> float:
    """Optimal sum of completion times of three unit jobs on one processor with budget 3."""
    a = alpha
    s = 3 ** ((a - 1) / a) + 2 ** ((a - 1) / a) + 1
    return (s**a / 3) ** (1 / (a - 1))


def gen_3partition(
    a: Sequence[int], B: int, q: int, alpha: float, partition: Sequence[Sequence[int]] | None = None
) -> GadgetOutput:
    """Rigid instance with one job of size and work a_j per element, m = B and E = Bq."""
    a = [int(x) for x in a]
    if q < 1 or len(a) != 3 * q:
        raise PreconditionError(f"need exactly 3q = {3 * q} elements, got {len(a)}")
    if sum(a) != B * q:
        raise PreconditionError(f"elements sum to {sum(a)}, expected Bq = {B * q}")
    if any(not (B <= 4 * x and 2 * x <= B) for x in a):
        raise PreconditionError("every element must lie in [B/4, B/2]")
    if not alpha > 1:
        raise PreconditionError("alpha must exceed 1")
    jobs = tuple(Job(id=i, work=float(x), size=x) for i, x in enumerate(a))
    inst = Instance(B, float(B * q), float(alpha), "rigid", jobs, {"reduction": "3partition", "B": B, "q": q})
    threshold = 3 * partition_sumc(q, alpha)
    if partition is None:
        return GadgetOutput(inst, threshold)

    groups = [list(g) for g in partition]
    flat = sorted(i for g in groups for i in g)
    if len(groups) != q or flat != list(range(3 * q)) or any(len(g) != 3 for g in groups):
        raise PreconditionError("partition must split the element indices into q triples")
    if any(sum(a[i] for i in g) != B for g in groups):
        raise PreconditionError("every triple of the partition must sum to B")
    durations = _round_durations(q, float(q), alpha)
    pieces, t = [], 0.0
    for g, p in zip(groups, durations):
        proc = 0
        for i in g:
            procs = tuple(range(proc, proc + a[i]))
            proc += a[i]
            pieces.append(Piece(i, procs, t, t + p, 1.0 / p))
        t += p
    witness = Schedule(tuple(pieces))
    return GadgetOutput(inst, threshold, total_completion(witness), witness)


def parse_edges(text: str) -> list[tuple[int, int]]:
    edges = []
    for tok in text.replace(" ", "").split(","):
        if not tok:
            continue
        u, v = tok.split("-")
        edges.append((int(u), int(v)))
    return edges


def gen_chromatic(
    edges: Sequence[tuple[int, int]],
    vertex_count: int | None = None,
    alpha: float = 3.0,
    coloring: Sequence[int] | None = None,
) -> GadgetOutput:
    """Dedicated instance with one job per edge of a cubic graph, V_j = 2 on its two endpoints."""
    edges = [(int(u), int(v)) for u, v in edges]
    if vertex_count is None:
        vertex_count = 1 + max(max(e) for e in edges)
    if any(u == v or not (0 <= u < vertex_count and 0 <= v < vertex_count) for u, v in edges):
        raise PreconditionError("edges must join two distinct vertices in [0, vertex_count)")
    if len({frozenset(e) for e in edges}) != len(edges):
        raise PreconditionError("graph has parallel edges")
    deg = Counter(x for e in edges for x in e)
    if any(deg[v] != 3 for v in range(vertex_count)):
        raise PreconditionError("graph not cubic")
    if vertex_count % 2:
        raise PreconditionError("odd vertex count")
    if not alpha > 1:
        raise PreconditionError("alpha must exceed 1")
    m = vertex_count
    jobs = tuple(Job(id=i, work=2.0, fix=tuple(sorted(e))) for i, e in enumerate(edges))
    inst = Instance(m, float(2 * len(edges)), float(alpha), "dedicated", jobs, {"reduction": "chromatic-index"})
    threshold = m / 2 * chromatic_sumc(alpha)
    if coloring is None:
        return GadgetOutput(inst, threshold)

    coloring = [int(c) for c in coloring]
    colors = sorted(set(coloring))
    if len(coloring) != len(edges) or len(colors) != 3:
        raise PreconditionError("coloring must assign one of exactly three colors to every edge")
    for c in colors:
        ends = [x for e, k in zip(edges, coloring) if k == c for x in e]
        if len(ends) != len(set(ends)):
            raise PreconditionError(f"color {c} is not a matching")
    durations = _round_durations(3, 3.0, alpha)
    pieces, t = [], 0.0
    for c, p in zip(colors, durations):
        for i, (e, k) in enumerate(zip(edges, coloring)):
            if k == c:
                pieces.append(Piece(i, tuple(sorted(e)), t, t + p, 1.0 / p))
        t += p
    witness = Schedule(tuple(sorted(pieces, key=lambda x: (x.start, x.job))))
    return GadgetOutput(inst, threshold, total_completion(witness), witness)


def _log_uniform(rng: random.Random, lo: float, hi: float) -> float:
    return math.exp(rng.uniform(math.log(lo), math.log(hi)))


def gen_random(
    kind: str,
    n: int,
    m: int,
    seed: int = 42,
    alpha: float = 3.0,
    work_mode: str = "identical",
) -> Instance:
    """Seeded random instance.

    Rigid sizes are uniform in [1, floor(m/2)] (or 1 when m < 2), per-processor
    works and moldable works log-uniform in [0.1, 10], and E log-uniform in
    [0.5 n, 5 n]. Moldable instances are always agreeable. With
    ``work_mode="identical"`` all per-processor works (rigid) or total works
    (moldable) coincide.
    """
    if n < 1 or m < 1:
        raise PreconditionError("need n >= 1 and m >= 1")
    if work_mode not in ("identical", "free"):
        raise PreconditionError(f"unknown work mode {work_mode!r}")
    rng = random.Random(seed)
    energy = _log_uniform(rng, 0.5 * n, 5 * n)
    same = work_mode == "identical"
    jobs: list[Job] = []
    if kind == "rigid":
        top = max(1, m // 2)
        w = _log_uniform(rng, 0.1, 10)
        for i in range(n):
            size = rng.randint(1, top)
            wi = w if same else _log_uniform(rng, 0.1, 10)
            jobs.append(Job(i, wi * size, size=size))
    elif kind == "moldable":
        v = _log_uniform(rng, 0.1, 10)
        works = sorted(v if same else _log_uniform(rng, 0.1, 10) for _ in range(n))
        deltas = sorted(rng.randint(1, m) for _ in range(n))
        ids = list(range(n))
        rng.shuffle(ids)
        jobs = sorted((Job(ids[k], works[k], delta=deltas[k]) for k in range(n)), key=lambda j: j.id)
    elif kind == "dedicated":
        for i in range(n):
            if m == 2:
                fix = rng.choice([(0,), (1,), (0, 1)])
            else:
                fix = tuple(sorted(rng.sample(range(m), rng.randint(1, min(m, 3)))))
            jobs.append(Job(i, _log_uniform(rng, 0.1, 10), fix=fix))
    else:
        raise PreconditionError(f"unknown kind {kind!r}")
    return Instance(m, energy, float(alpha), kind, tuple(jobs), {"seed": seed, "work_mode": work_mode})


K4_EDGES = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
K4_COLORING = [0, 1, 2, 2, 1, 0]
