from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hgpreduce.codes import QC_PROTO, ClassicalCode, SimpleGraph, complete_graph, from_rows, named_code, random_ldpc
from hgpreduce.coloring import (
    CheckColoring,
    check_adjacency_graph,
    color_code,
    coloring_from_groups,
    greedy_color,
    is_valid_coloring,
    lifted_coloring,
    product_coloring,
)
from hgpreduce.gf2 import BitMatrix
from hgpreduce.hgp import build_hgp


def overlap_edges(dense) -> set[tuple[int, int]]:
    supports = [set(np.flatnonzero(r).tolist()) for r in np.asarray(dense)]
    return {(a, b) for a, b in itertools.combinations(range(len(supports)), 2) if supports[a] & supports[b]}


class TestAdjacency:
    def test_disjoint_checks(self):
        g = check_adjacency_graph(ClassicalCode(BitMatrix.identity(4)))
        assert g.edges == ()

    def test_shared_bit(self):
        g = check_adjacency_graph(from_rows(["110", "011"]))
        assert g.edges == ((0, 1),)

    @given(st.integers(0, 10**6))
    def test_matches_pairwise_oracle(self, seed):
        rng = np.random.default_rng(seed)
        dense = rng.integers(0, 2, size=(int(rng.integers(1, 9)), int(rng.integers(1, 12))))
        g = check_adjacency_graph(ClassicalCode(BitMatrix.from_dense(dense)))
        assert set(g.edges) == overlap_edges(dense)

    def test_listed_groups_are_independent(self):
        c = named_code("random-35")
        groups = [{4, 6, 12}, {5, 7, 9}, {1, 2, 8}, {3, 10}, {11}]
        col = coloring_from_groups([[x - 1 for x in sorted(g)] for g in groups], c.m)
        assert col.is_valid_for(c)
        assert col.num_colors == 5


class TestGreedy:
    def test_edgeless(self):
        assert greedy_color(SimpleGraph.from_edges(5, [])).num_colors == 1

    def test_complete(self):
        assert greedy_color(complete_graph(4)).num_colors == 4

    def test_random_example_five_colors(self):
        assert color_code(named_code("random-35")).num_colors <= 5

    @given(st.integers(0, 10**6), st.one_of(st.none(), st.integers(0, 100)))
    def test_valid_and_deterministic(self, seed, order_seed):
        c = random_ldpc(20, 3, 5, seed)
        a = color_code(c, order_seed)
        assert a.is_valid_for(c)
        assert a == color_code(c, order_seed)
        for grp in a.groups:
            rows = c.h.to_dense()[list(grp)]
            assert rows.sum(axis=0).max() <= 1

    def test_invalid_coloring_detected(self):
        g = complete_graph(3)
        assert not is_valid_coloring(g, CheckColoring((0, 0, 1)))
        assert not is_valid_coloring(g, CheckColoring((0, 1)))


class TestProduct:
    def test_three_by_three(self):
        c = named_code("qc5")
        col = lifted_coloring(color_code(from_rows(QC_PROTO)), 5, c)
        pc = product_coloring(col, col, build_hgp(c, c))
        assert (pc.chi1, pc.chi2) == (3, 3)
        assert len(pc.groups) == 9
        assert int(pc.sizes.sum()) == c.m * c.m

    def test_single_group(self):
        c = ClassicalCode(BitMatrix.identity(3))
        one = CheckColoring((0, 0, 0))
        pc = product_coloring(one, one, build_hgp(c, c))
        assert list(pc.groups) == [(0, 0)]
        assert len(pc.groups[(0, 0)]) == 9

    def test_two_colorings_give_quadrants(self):
        c = named_code("heawood")
        col = color_code(c)
        assert col.num_colors == 2
        pc = product_coloring(col, col, build_hgp(c, c))
        assert sorted(pc.groups) == [(0, 0), (0, 1), (1, 0), (1, 1)]
        assert int(pc.sizes.sum()) == 13 * 13

    def test_group_membership(self):
        c = named_code("k33")
        col = color_code(c)
        pc = product_coloring(col, col, build_hgp(c, c))
        for key, members in pc.groups.items():
            for a, b in members:
                assert pc.group_of(a, b) == key

    def test_invalid_input_rejected(self):
        c = named_code("k33")
        q = build_hgp(c, c)
        with pytest.raises(ValueError):
            product_coloring(CheckColoring((0,) * 5), CheckColoring((0,) * 5), q)
        with pytest.raises(ValueError):
            product_coloring(CheckColoring((0,) * 4), color_code(c), q)


class TestLifted:
    @pytest.mark.parametrize("lift", [5, 6, 7])
    def test_reference_lifts(self, lift):
        proto = color_code(from_rows(QC_PROTO))
        assert proto.num_colors == 3
        c = named_code(f"qc{lift}")
        col = lifted_coloring(proto, lift, c)
        assert col.num_colors <= proto.num_colors
        assert is_valid_coloring(check_adjacency_graph(c), col)
        # independent check: a fresh greedy coloring of the full matrix is also valid
        assert color_code(c).is_valid_for(c)

    def test_trivial_lift(self):
        proto = color_code(from_rows(QC_PROTO))
        assert lifted_coloring(proto, 1) == proto

    def test_non_type_one_rejected(self):
        # two circulants in one cell break the copy structure
        h = from_rows(["1100", "0110"])
        with pytest.raises(ValueError):
            lifted_coloring(CheckColoring((0,)), 2, h)

    def test_groups_helper(self):
        assert coloring_from_groups([[1], [0, 2]], 3).color_of == (1, 0, 1)
        with pytest.raises(ValueError):
            coloring_from_groups([[0], [0]], 1)
        with pytest.raises(ValueError):
            coloring_from_groups([[0]], 2)
