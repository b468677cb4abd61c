import math

import pytest

from conftest import rigid
from espeed.duropt import WeightedProgram
from espeed.model import Instance, Job, PreconditionError
from espeed.oracle import (
    check_ratio,
    crosscheck_closed_forms,
    min_lb_over_permutations,
    proven_bound,
    ratio_sweep,
    sweep_instance,
)
from espeed.sequencing import rigid_program


def test_single_permutation():
    inst = rigid(1, 1.0, 2.0, [1])
    perm, value = min_lb_over_permutations([0], lambda p: rigid_program(p, inst))
    assert perm == (0,) and value == pytest.approx(1.0, rel=1e-15)


def test_guard():
    inst = rigid(20, 1.0, 2.0, [1] * 9)
    with pytest.raises(PreconditionError, match="too large"):
        min_lb_over_permutations(list(range(9)), lambda p: rigid_program(p, inst))


def test_argmin_is_a_minimum():
    inst = rigid(6, 3.0, 2.0, [3, 1, 2])
    perm, value = min_lb_over_permutations([0, 1, 2], lambda p: rigid_program(p, inst))
    assert perm == (1, 2, 0)


@pytest.mark.parametrize("alpha,expected", [(2.0, (2.0, 4.0, 8.0)), (3.0, (2.0, 2 ** 1.5, 2 ** 2.5))])
def test_proven_bounds(alpha, expected):
    assert proven_bound("rigid", alpha) == proven_bound("moldable", alpha) == expected[0]
    assert proven_bound("dedicated2-preemptive", alpha) == pytest.approx(expected[1])
    assert proven_bound("dedicated2", alpha) == pytest.approx(expected[2])
    with pytest.raises(PreconditionError):
        proven_bound("greedy", alpha)


def test_all_fit_sandwich():
    inst = rigid(8, 4.0, 2.0, [1, 1, 2])
    rec = check_ratio(inst, "rigid")
    assert 1 - 1e-9 <= rec.ratio <= 2 and rec.passed


@pytest.mark.parametrize(
    "algo,inst",
    [
        ("rigid", rigid(1, 2.0, 3.0, [1])),
        ("moldable", Instance(1, 2.0, 3.0, "moldable", (Job(0, 5.0, delta=1),))),
    ],
)
def test_single_job_on_one_processor_is_tight(algo, inst):
    assert check_ratio(inst, algo).ratio == pytest.approx(1.0, rel=1e-12)


@pytest.mark.parametrize("m,size", [(2, 1), (4, 2), (8, 1)])
def test_single_rigid_job_ratio_when_bound_is_loose(m, size):
    # the bound charges half of the job's own time, so one job alone sits at 2m/(size+m)
    rec = check_ratio(rigid(m, 1.0, 2.0, [size]), "rigid")
    assert rec.ratio == pytest.approx(2 * m / (size + m), rel=1e-12)


@pytest.mark.parametrize("algo", ["rigid", "moldable", "dedicated2", "dedicated2-preemptive"])
def test_small_sweep_passes(algo):
    records = ratio_sweep(algo, 60, seed=3)
    assert [r.id for r in records] == list(range(60))
    assert all(r.passed and r.ratio >= 1 - 1e-9 for r in records)
    assert {r.alpha for r in records} == {1.5, 2.0, 3.0}


def test_sweep_fixed_alpha_and_workers_agree():
    serial = ratio_sweep("dedicated2", 24, seed=9, alpha=2.5)
    parallel = ratio_sweep("dedicated2", 24, seed=9, alpha=2.5, workers=2)
    assert serial == parallel
    assert {r.alpha for r in serial} == {2.5}


def test_sweep_instances_are_reproducible():
    assert sweep_instance("moldable", 1, 5) == sweep_instance("moldable", 1, 5)
    assert sweep_instance("dedicated", 1, 5).m == 2


def test_record_row():
    row = check_ratio(rigid(1, 1.0, 2.0, [1]), "rigid", 7).row()
    assert row["id"] == 7 and row["pass"] is True and "passed" not in row


def test_crosscheck_clean():
    rep = crosscheck_closed_forms(42, 200)
    assert rep.ok and rep.checked == 200
    assert rep.max_rel_objective < 1e-8 and rep.max_rel_lb < 1e-12


def test_crosscheck_several_seeds():
    rep = crosscheck_closed_forms([1, 2], 30)
    assert rep.checked == 60 and rep.ok


def test_two_job_program_value():
    from espeed.duropt import solve_weighted, solve_weighted_numeric

    prog = WeightedProgram((2.0, 1.0), (1.0, 1.0), 2.0, 2.0)
    assert solve_weighted(prog).objective == pytest.approx((3 + 2 * math.sqrt(2)) / 2, rel=1e-14)
    assert solve_weighted_numeric(prog).objective == pytest.approx((3 + 2 * math.sqrt(2)) / 2, rel=1e-9)
