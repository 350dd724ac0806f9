from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hgpreduce.codes import QC_PROTO, from_rows, named_code, parse_exponent_table, qc_lift
from hgpreduce.coloring import CheckColoring, ProductColoring, color_code, lifted_coloring, product_coloring
from hgpreduce.hgp import build_hgp
from hgpreduce.planner import (
    CombinationSchedule,
    all_feasible_schedules,
    build_matching_graph,
    choose_schedule,
    diagonal_schedule,
    fold_symmetric_schedule,
    hungarian_max,
    max_weight_matching,
    verify_equivariance,
)
from hgpreduce.reducer import build_reduction

from oracles import brute_assignment_max, tanner_automorphisms


def coloring_with_sizes(sizes) -> CheckColoring:
    return CheckColoring(tuple(c for c, s in enumerate(sizes) for _ in range(s)))


def product_of_sizes(s1, s2) -> ProductColoring:
    # coloring bookkeeping only; no code needed for schedule arithmetic
    return ProductColoring(coloring_with_sizes(s1), coloring_with_sizes(s2))


def brute_best(pc: ProductColoring) -> int:
    return max(s.removed(pc) for s in all_feasible_schedules(pc.chi1, pc.chi2))


@pytest.fixture(scope="module")
def three_color():
    c1, c2 = named_code("k4"), named_code("seven-check")
    q = build_hgp(c1, c2)
    return product_coloring(color_code(c1), color_code(c2), q)


class TestSchedule:
    def test_feasibility_rules(self):
        assert CombinationSchedule.of([(0, 0), (1, 1)], [(0, 1), (1, 0)]).is_feasible()
        assert not CombinationSchedule.of([(0, 0), (0, 1)]).is_feasible()
        assert not CombinationSchedule.of([], [(0, 1), (1, 1)]).is_feasible()
        assert not CombinationSchedule.of([(0, 0)], [(0, 0)]).is_feasible()

    def test_json_round_trip(self):
        s = CombinationSchedule.of([(0, 2), (1, 0)], [(2, 2)])
        assert CombinationSchedule.from_json(s.to_json()) == s

    def test_enumeration_counts(self):
        # chi1 = chi2 = 1: empty, X, Z
        assert len(list(all_feasible_schedules(1, 1))) == 3
        assert all(s.is_feasible() for s in all_feasible_schedules(2, 2))


class TestMatchingGraph:
    def test_counts(self):
        g = build_matching_graph(product_of_sizes([1, 1, 1], [2, 2, 2]))
        assert len(g.left) == 6 and len(g.right) == 9 and len(g.edges) == 18
        assert all(w == 2 for *_, w in g.edges)

    def test_empty_groups_have_no_edges(self):
        pc = ProductColoring(CheckColoring(()), CheckColoring(()))
        assert build_matching_graph(pc).edges == ()
        assert choose_schedule(pc) == CombinationSchedule.of()


class TestHungarian:
    def test_single_edge(self):
        assert hungarian_max([[7]]) == [0]

    @given(st.integers(1, 6), st.integers(0, 10**6))
    def test_against_permutations(self, n, seed):
        w = np.random.default_rng(seed).integers(0, 20, size=(n, n)).tolist()
        perm = hungarian_max(w)
        assert sorted(perm) == list(range(n))
        assert sum(w[i][perm[i]] for i in range(n)) == brute_assignment_max(w)

    def test_three_by_three_matching_against_enumeration(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            s1 = rng.integers(1, 5, size=3).tolist()
            s2 = rng.integers(1, 5, size=3).tolist()
            pc = product_of_sizes(s1, s2)
            g = build_matching_graph(pc)
            m = max_weight_matching(g)
            assert g.weight_of(m) == brute_best(pc)


class TestChooseSchedule:
    def test_fixture_optimum(self, three_color):
        s = choose_schedule(three_color)
        assert s.is_feasible()
        assert s.removed(three_color) == 18
        assert diagonal_schedule(3).removed(three_color) == 13
        assert brute_best(three_color) == 18
        assert build_matching_graph(three_color).weight_of(max_weight_matching(build_matching_graph(three_color))) == 18

    def test_two_colorings_remove_everything(self):
        c = named_code("heawood")
        col = color_code(c)
        pc = product_coloring(col, col, build_hgp(c, c))
        s = choose_schedule(pc)
        assert len(s.x_groups) + len(s.z_groups) == 4
        assert s.removed(pc) == c.m * c.m

    @given(
        st.lists(st.integers(0, 6), min_size=1, max_size=3),
        st.lists(st.integers(0, 6), min_size=1, max_size=3),
    )
    def test_optimal_and_feasible(self, s1, s2):
        pc = product_of_sizes(s1, s2)
        s = choose_schedule(pc)
        assert s.is_feasible()
        assert s.removed(pc) == brute_best(pc)

    def test_deterministic(self, three_color):
        assert choose_schedule(three_color) == choose_schedule(three_color)


class TestFoldSymmetric:
    @staticmethod
    def mirror(groups):
        return {(j, i) for i, j in groups}

    def test_two_colors(self):
        pc = product_of_sizes([3, 2], [3, 2])
        s = fold_symmetric_schedule(pc)
        assert s.is_feasible()
        assert set(s.x_groups) | set(s.z_groups) == {(0, 1), (1, 0)}
        assert self.mirror(s.x_groups) == set(s.z_groups)

    def test_one_color(self):
        assert fold_symmetric_schedule(product_of_sizes([4], [4])) == CombinationSchedule.of()

    @pytest.mark.parametrize("sizes", [[1, 1, 1, 1, 1], [3, 1, 4, 1, 5], [2, 2, 2], [5, 1, 1]])
    def test_off_diagonal_mirror_pairs(self, sizes):
        pc = product_of_sizes(sizes, sizes)
        s = fold_symmetric_schedule(pc)
        assert s.is_feasible()
        assert not any(i == j for i, j in s.x_groups | s.z_groups)
        assert self.mirror(s.x_groups) == set(s.z_groups)
        # best among mirror-closed, diagonal-free feasible schedules
        best = 0
        for cand in all_feasible_schedules(len(sizes), len(sizes)) if len(sizes) <= 3 else ():
            if any(i == j for i, j in cand.x_groups | cand.z_groups):
                continue
            if self.mirror(cand.x_groups) == set(cand.z_groups):
                best = max(best, cand.removed(pc))
        if len(sizes) <= 3:
            assert s.removed(pc) == best

    def test_asymmetric_rejected(self):
        with pytest.raises(ValueError):
            fold_symmetric_schedule(product_of_sizes([1, 2], [2, 1]))


LIFT = 3


def shift(size: int) -> list[int]:
    return [(j // LIFT) * LIFT + (j % LIFT + 1) % LIFT for j in range(size)]


@pytest.fixture(scope="module")
def setup():
    proto, exps = parse_exponent_table([[1, "-", 2, 0], ["-", 1, 2, 1], [0, 1, "-", 2]])
    c = qc_lift(proto, exps, LIFT)
    q = build_hgp(c, c)
    col = lifted_coloring(color_code(from_rows(QC_PROTO)), LIFT, c)
    pc = product_coloring(col, col, q)
    plan = build_reduction(q, pc, choose_schedule(pc))
    auts = tanner_automorphisms(c.h.to_dense().tolist())
    return c, q, pc, plan, auts


class TestEquivariance:
    def test_oracle_finds_shift(self, setup):
        c, *_, auts = setup
        assert (tuple(shift(c.n)), tuple(shift(c.m))) in set(auts)

    def test_identity(self, setup):
        c, _, _, plan, _ = setup
        ib, ic = list(range(c.n)), list(range(c.m))
        assert verify_equivariance(plan, ib, ic, ib, ic)

    def test_cyclic_shift_descends(self, setup):
        c, q, _, plan, _ = setup
        sb, sc = shift(c.n), shift(c.m)
        assert verify_equivariance(plan, sb, sc, sb, sc)
        # removed check-type qubits form whole orbits of the diagonal shift
        lay = q.layout
        removed = {lay.coords(r)[1:] for r in plan.removed}
        assert {(sc[a], sc[b]) for a, b in removed} == removed

    def test_half_orbit_fails(self, setup):
        c, q, pc, plan, _ = setup
        sb, sc = shift(c.n), shift(c.m)
        lay = q.layout
        scheduled = sorted(lay.original(r) for r in plan.removed)
        # keep only lift copy 0 of each scheduled row: breaks orbit closure
        partial = [o for o in scheduled if ((o - lay.num_bit_type) // lay.m2) % LIFT == 0]
        half = build_reduction(q, pc, plan.schedule, only=partial)
        assert 0 < len(half.removed) < len(plan.removed)
        assert not verify_equivariance(half, sb, sc, sb, sc)

    def test_automorphism_precondition(self, setup):
        c, _, _, plan, _ = setup
        bad = list(range(c.n))
        bad[0], bad[1] = bad[1], bad[0]
        with pytest.raises(ValueError):
            verify_equivariance(plan, bad, list(range(c.m)), list(range(c.n)), list(range(c.m)))

    def test_all_oracle_automorphism_pairs(self, setup):
        _, _, _, plan, auts = setup
        results = [verify_equivariance(plan, *a, *b) for a, b in itertools.product(auts, repeat=2)]
        # at least the powers of the diagonal shift are accepted
        assert sum(results) >= LIFT
