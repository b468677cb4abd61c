import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from espeed.gadgets import (
    K4_COLORING,
    K4_EDGES,
    chromatic_sumc,
    gen_3partition,
    gen_chromatic,
    gen_random,
    parse_edges,
    partition_sumc,
)
from espeed.listsched import verify_schedule
from espeed.model import PreconditionError, validate_instance

# (sqrt3 + sqrt2 + 1)^2 / 3, evaluated to 30 digits
K4_UNIT_SUMC = 5.73050274181676696

PETERSEN = [(i, (i + 1) % 5) for i in range(5)] + [(i, i + 5) for i in range(5)] + [
    (5 + i, 5 + (i + 2) % 5) for i in range(5)
]


def three_edge_colorings(edges):
    """Backtracking search for proper 3-edge-colorings (the witness certificates)."""
    colors = [None] * len(edges)

    def ok(k, c):
        return all(colors[i] != c or not set(edges[i]) & set(edges[k]) for i in range(k))

    def go(k):
        if k == len(edges):
            yield list(colors)
            return
        for c in range(3):
            if ok(k, c):
                colors[k] = c
                yield from go(k + 1)
        colors[k] = None

    return go(0)


class TestThreePartition:
    def test_smallest(self):
        out = gen_3partition([1, 1, 2], 4, 1, 2.0, [[0, 1, 2]])
        inst = out.instance
        assert (inst.m, inst.energy, inst.n, inst.kind) == (4, 4.0, 3, "rigid")
        assert [j.size for j in inst.jobs] == [1, 1, 2] and [j.work for j in inst.jobs] == [1.0, 1.0, 2.0]
        assert out.threshold == pytest.approx(3.0, rel=1e-15)
        assert out.witness_sumc == pytest.approx(3.0, rel=1e-12)
        assert all(p.start == 0.0 and p.end == pytest.approx(1.0) for p in out.witness.pieces)
        assert inst.meta["reduction"] == "3partition"
        assert validate_instance(inst) == []

    def test_two_rounds(self):
        out = gen_3partition([2] * 6, 6, 2, 3.0, [[0, 1, 2], [3, 4, 5]])
        assert (out.instance.m, out.instance.energy) == (6, 12.0)
        rep = verify_schedule(out.witness, out.instance, require_nonpreemptive=True)
        assert rep.ok
        assert rep.energy_used == pytest.approx(12.0, rel=1e-12)
        assert out.witness_sumc == pytest.approx(out.threshold, rel=1e-9)

    @pytest.mark.parametrize("alpha", [1.5, 2.0, 3.0])
    @pytest.mark.parametrize("q", [1, 2, 3, 5])
    def test_witness_meets_threshold(self, q, alpha):
        a = [3, 4, 5] * q
        out = gen_3partition(a, 12, q, alpha, [[3 * r, 3 * r + 1, 3 * r + 2] for r in range(q)])
        rep = verify_schedule(out.witness, out.instance, require_nonpreemptive=True)
        assert rep.ok
        assert rep.energy_used == pytest.approx(out.instance.energy, rel=1e-9)
        assert out.witness_sumc == pytest.approx(out.threshold, rel=1e-9)

    def test_threshold_formula_q2(self):
        # q=2, alpha=2: (sqrt2 + 1)^2 / 2
        assert partition_sumc(2, 2.0) == pytest.approx((math.sqrt(2) + 1) ** 2 / 2, rel=1e-14)

    def test_without_certificate(self):
        out = gen_3partition([1, 1, 2], 4, 1, 2.0)
        assert out.witness is None and out.witness_sumc is None

    @pytest.mark.parametrize(
        "a,B,q,partition",
        [
            ([1, 1, 1], 4, 1, None),  # sum mismatch
            ([1, 1, 2, 2], 4, 1, None),  # wrong count
            ([1, 1, 4], 6, 1, None),  # element above B/2
            ([2, 2, 2, 1, 2, 3], 6, 2, [[0, 1, 3], [2, 4, 5]]),  # triple sums wrong
            ([2] * 6, 6, 2, [[0, 1, 2], [0, 4, 5]]),  # not a partition
        ],
    )
    def test_errors(self, a, B, q, partition):
        with pytest.raises(PreconditionError):
            gen_3partition(a, B, q, 2.0, partition)


class TestChromatic:
    def test_k4(self):
        out = gen_chromatic(K4_EDGES, 4, 2.0, K4_COLORING)
        inst = out.instance
        assert (inst.m, inst.energy, inst.n) == (4, 12.0, 6)
        assert all(j.work == 2.0 and len(j.fix) == 2 for j in inst.jobs)
        assert chromatic_sumc(2.0) == pytest.approx((math.sqrt(3) + math.sqrt(2) + 1) ** 2 / 3, rel=1e-14)
        assert chromatic_sumc(2.0) == pytest.approx(K4_UNIT_SUMC, rel=1e-14)
        assert out.threshold == pytest.approx(2 * K4_UNIT_SUMC, rel=1e-14)
        rep = verify_schedule(out.witness, inst, require_nonpreemptive=True)
        assert rep.ok
        assert rep.energy_used == pytest.approx(12.0, rel=1e-12)
        assert out.witness_sumc == pytest.approx(out.threshold, rel=1e-9)

    @pytest.mark.parametrize("alpha", [1.5, 3.0])
    def test_k33(self, alpha):
        edges = [(u, v) for u in range(3) for v in range(3, 6)]
        coloring = next(three_edge_colorings(edges))
        out = gen_chromatic(edges, 6, alpha, coloring)
        assert out.witness_sumc == pytest.approx(out.threshold, rel=1e-9)
        assert verify_schedule(out.witness, out.instance, require_nonpreemptive=True).ok

    def test_not_cubic(self):
        with pytest.raises(PreconditionError, match="graph not cubic"):
            gen_chromatic([(0, 1), (1, 2), (2, 3), (3, 0)], 4)

    def test_odd_vertex_count(self):
        # cubic graphs always have an even vertex count, so only a stray isolated-vertex count trips this
        with pytest.raises(PreconditionError, match="graph not cubic|odd vertex count"):
            gen_chromatic(K4_EDGES, 5)

    def test_bad_coloring(self):
        with pytest.raises(PreconditionError, match="not a matching"):
            gen_chromatic(K4_EDGES, 4, 2.0, [0, 0, 1, 1, 2, 2])

    def test_petersen_has_no_witness(self):
        # chromatic index 4: no certificate exists, so the generator reports T only
        assert next(three_edge_colorings(PETERSEN), None) is None
        out = gen_chromatic(PETERSEN, 10, 2.0)
        assert out.witness is None
        assert out.threshold == pytest.approx(5 * K4_UNIT_SUMC, rel=1e-14)
        with pytest.raises(PreconditionError):
            gen_chromatic(PETERSEN, 10, 2.0, [i % 3 for i in range(15)])

    def test_parse_edges(self):
        assert parse_edges("0-1, 0-2,1-2") == [(0, 1), (0, 2), (1, 2)]


class TestRandom:
    @pytest.mark.parametrize("kind", ["rigid", "moldable", "dedicated"])
    def test_deterministic(self, kind):
        assert gen_random(kind, 9, 6, 11, 2.0) == gen_random(kind, 9, 6, 11, 2.0)
        assert gen_random(kind, 9, 6, 11, 2.0) != gen_random(kind, 9, 6, 12, 2.0)

    def test_rigid_identical(self):
        inst = gen_random("rigid", 20, 10, 1, 3.0, "identical")
        ratios = {round(j.work / j.size, 12) for j in inst.jobs}
        assert len(ratios) == 1
        assert all(1 <= j.size <= 5 for j in inst.jobs)

    def test_dedicated_two_processors(self):
        inst = gen_random("dedicated", 60, 2, 4)
        assert {j.fix for j in inst.jobs} == {(0,), (1,), (0, 1)}

    @settings(max_examples=100, deadline=None)
    @given(st.sampled_from(["rigid", "moldable", "dedicated"]), st.integers(1, 20), st.integers(1, 16),
           st.integers(0, 2**32), st.sampled_from(["identical", "free"]))
    def test_always_valid(self, kind, n, m, seed, mode):
        inst = gen_random(kind, n, m, seed, 2.0, mode)
        assert validate_instance(inst) == []
        assert 0.5 * n <= inst.energy <= 5 * n
        if kind == "moldable":
            jobs = sorted(inst.jobs, key=lambda j: (j.delta, j.work))
            assert all(a.work <= b.work for a, b in itertools.pairwise(jobs))

    def test_bad_args(self):
        with pytest.raises(PreconditionError):
            gen_random("rigid", 0, 4)
        with pytest.raises(PreconditionError):
            gen_random("shapes", 3, 4)
