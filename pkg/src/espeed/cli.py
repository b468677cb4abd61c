"""``espeed`` command line.

Exit status is 0 on success, 1 on domain or I/O errors (one JSON line on
stderr), 2 on usage errors. Numbers written to stdout carry 9 significant
digits; instance and schedule files keep full precision.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import os
import sys
from typing import Sequence

from . import io
from .dedicated2 import schedule_dedicated2
from .duropt import WeightedProgram, solve_weighted, solve_weighted_numeric
from .gadgets import gen_3partition, gen_chromatic, gen_random, parse_edges
from .gantt import emit_gantt
from .listsched import schedule_moldable, schedule_rigid, verify_schedule
from .model import EspeedError, Instance, PreconditionError, energy_of, ensure_valid, total_completion
from .oracle import crosscheck_closed_forms, ratio_sweep
from .sequencing import lb_dedicated2, lower_bound

CSV_COLUMNS = ("id", "n", "m", "alpha", "lb", "sumc", "ratio", "bound", "pass")


def _default_seed() -> int:
    return int(os.environ.get("ESPEED_SEED", "42"))


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _print_json(obj) -> None:
    sys.stdout.write(json.dumps(io.sig9(obj)) + "\n")


def _load(args) -> Instance:
    inst = io.load_instance(args.instance)
    if getattr(args, "alpha", None) is not None:
        inst = inst.with_alpha(args.alpha)
        inst.meta["alpha_override"] = args.alpha
    return ensure_valid(inst)


def cmd_gen(args) -> int:
    if args.random:
        inst = gen_random(args.kind, args.n, args.m, args.seed, args.alpha or 3.0, args.work_mode)
        if args.output:
            io.write_json(args.output, io.instance_to_dict(inst))
        else:
            sys.stdout.write(io.dumps(io.instance_to_dict(inst)))
        return 0
    if args.gadget == "3partition":
        if args.a is None or args.B is None or args.q is None:
            raise PreconditionError("3partition needs --a, --B and --q")
        partition = [_ints(g) for g in args.partition.split(";")] if args.partition else None
        out = gen_3partition(_ints(args.a), args.B, args.q, args.alpha or 3.0, partition)
    elif args.gadget == "chromatic":
        if not args.edges:
            raise PreconditionError("chromatic needs --edges")
        coloring = _ints(args.coloring) if args.coloring else None
        out = gen_chromatic(parse_edges(args.edges), args.vertices, args.alpha or 3.0, coloring)
    else:
        raise PreconditionError("choose --gadget 3partition|chromatic or --random")
    doc = io.instance_to_dict(out.instance)
    doc["meta"] = dict(doc.get("meta", {}), threshold=out.threshold)
    if args.output:
        io.write_json(args.output, doc)
    if args.witness and out.witness is not None:
        io.write_json(args.witness, io.schedule_to_dict(out.witness))
    summary = {"reduction": out.instance.meta["reduction"], "n": out.instance.n, "m": out.instance.m,
               "energy": out.instance.energy, "threshold": out.threshold, "witness_sumc": out.witness_sumc}
    if args.output:
        _print_json(summary)
    else:
        sys.stdout.write(io.dumps(doc))
    return 0


def cmd_lb(args) -> int:
    inst = _load(args)
    if inst.kind == "dedicated":
        if args.permutation:
            raise PreconditionError("--permutation is not supported for dedicated instances")
        r1, r2, value = lb_dedicated2(inst)
        doc = {"kind": inst.kind, "value": value, "first": r1.to_dict(), "second": r2.to_dict()}
    else:
        perm = _ints(args.permutation) if args.permutation else None
        doc = {"kind": inst.kind, **lower_bound(inst, perm).to_dict()}
    if "alpha_override" in inst.meta:
        doc["alpha_override"] = inst.meta["alpha_override"]
    _print_json(doc)
    return 0


def _run_pipeline(inst: Instance, algo: str, preemptive: bool):
    if algo == "rigid":
        res = schedule_rigid(inst)
        return res.schedule, res.lb.value, None
    if algo == "moldable":
        res = schedule_moldable(inst)
        return res.schedule, res.lb.value, None
    res = schedule_dedicated2(inst, preemptive)
    return res.schedule, res.lb, res


def cmd_schedule(args) -> int:
    inst = _load(args)
    algo = args.algo or {"rigid": "rigid", "moldable": "moldable", "dedicated": "dedicated2"}[inst.kind]
    expected = {"rigid": "rigid", "moldable": "moldable", "dedicated2": "dedicated"}[algo]
    if inst.kind != expected:
        raise PreconditionError(f"algorithm {algo} needs a {expected} instance, got {inst.kind}")
    sched, lb, res = _run_pipeline(inst, algo, args.preemptive)
    doc = io.schedule_to_dict(sched)
    doc["meta"] = {"algo": algo + ("-preemptive" if args.preemptive and algo == "dedicated2" else "")}
    if "alpha_override" in inst.meta:
        doc["meta"]["alpha_override"] = inst.meta["alpha_override"]
    if args.trace and res is not None:
        doc["trace"] = res.trace()
    sumc, energy = total_completion(sched), energy_of(sched, inst)
    summary = (
        f"sumc={sumc:.9g} lb={lb:.9g} ratio={sumc / lb:.9g} "
        f"energy={energy:.9g} slack={inst.energy - energy:.9g}"
    )
    if args.output:
        io.write_json(args.output, doc)
        print(summary)
    else:
        sys.stdout.write(json.dumps(io.sig9(doc)) + "\n")
        print(summary, file=sys.stderr)
    if args.gantt:
        emit_gantt(sched, inst, args.gantt)
    return 0


def cmd_verify(args) -> int:
    inst = _load(args)
    sched = io.load_schedule(args.schedule)
    rep = verify_schedule(sched, inst, require_nonpreemptive=args.nonpreemptive)
    _print_json(rep.to_dict())
    if args.gantt:
        emit_gantt(sched, inst, args.gantt)
    return 0 if rep.ok else 1


def cmd_oracle(args) -> int:
    algo = args.kind + ("-preemptive" if args.preemptive and args.kind == "dedicated2" else "")
    records = ratio_sweep(algo, args.count, args.seed, args.alpha, args.jobs)
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow([r.id, r.n, r.m, f"{r.alpha:.9g}", f"{r.lb:.9g}", f"{r.sumc:.9g}",
                         f"{r.ratio:.9g}", f"{r.bound:.9g}", "true" if r.passed else "false"])
    worst = max(records, key=lambda r: r.ratio / r.bound) if records else None
    passed = sum(r.passed for r in records)
    summary = f"algo={algo} count={len(records)} passed={passed}"
    if worst is not None:
        summary += f" max_ratio={max(r.ratio for r in records):.9g} worst_id={worst.id}"
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
        print(summary)
    else:
        sys.stdout.write(buf.getvalue())
        print(summary, file=sys.stderr)
    return 0 if passed == len(records) else 1


def cmd_crosscheck(args) -> int:
    rep = crosscheck_closed_forms(args.seed, args.count)
    _print_json({"checked": rep.checked, "ok": rep.ok, "max_rel_objective": rep.max_rel_objective,
                 "max_rel_duration": rep.max_rel_duration, "max_rel_lb": rep.max_rel_lb,
                 "failures": rep.failures})
    return 0 if rep.ok else 1


def cmd_duropt(args) -> int:
    prog = WeightedProgram(tuple(_floats(args.weights)), tuple(_floats(args.coeffs)), args.energy, args.alpha)
    sol = (solve_weighted_numeric if args.numeric else solve_weighted)(prog)
    _print_json({"durations": list(sol.durations), "multiplier": sol.multiplier, "objective": sol.objective})
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="espeed", description="Energy-budgeted speed-scaling schedules for multiprocessor jobs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a gadget or random instance")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--gadget", choices=("3partition", "chromatic"))
    src.add_argument("--random", action="store_true")
    p.add_argument("--a", help="comma-separated 3-PARTITION elements")
    p.add_argument("--B", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--partition", help="certificate: index triples separated by ';', e.g. 0,1,2;3,4,5")
    p.add_argument("--edges", help='cubic graph edges, e.g. "0-1,0-2,..."')
    p.add_argument("--vertices", type=int)
    p.add_argument("--coloring", help="certificate: one color per edge, comma-separated")
    p.add_argument("--kind", choices=("rigid", "moldable", "dedicated"), default="rigid")
    p.add_argument("-n", type=int, default=10)
    p.add_argument("-m", type=int, default=8)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--work-mode", choices=("identical", "free"), default="identical")
    p.add_argument("--alpha", type=float)
    p.add_argument("-o", "--output")
    p.add_argument("--witness", help="write the certificate schedule here")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("lb", help="lower bound of an instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--permutation")
    p.add_argument("--alpha", type=float)
    p.set_defaults(func=cmd_lb)

    p = sub.add_parser("schedule", help="build a schedule")
    p.add_argument("--instance", required=True)
    p.add_argument("--algo", choices=("rigid", "moldable", "dedicated2"))
    p.add_argument("--preemptive", action="store_true")
    p.add_argument("--trace", action="store_true")
    p.add_argument("--alpha", type=float)
    p.add_argument("-o", "--output")
    p.add_argument("--gantt")
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("verify", help="check a schedule against an instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--schedule", required=True)
    p.add_argument("--nonpreemptive", action="store_true")
    p.add_argument("--gantt")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="seeded ratio sweep")
    p.add_argument("--kind", choices=("rigid", "moldable", "dedicated2"), required=True)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--alpha", type=float)
    p.add_argument("--preemptive", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("crosscheck", help="closed forms vs numeric oracle")
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.set_defaults(func=cmd_crosscheck)

    p = sub.add_parser("duropt", help="solve one weighted duration program")
    p.add_argument("--weights", required=True)
    p.add_argument("--coeffs", required=True)
    p.add_argument("-E", "--energy", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--numeric", action="store_true")
    p.set_defaults(func=cmd_duropt)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EspeedError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
