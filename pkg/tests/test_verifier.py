from __future__ import annotations

import itertools
import json
from types import SimpleNamespace

import numpy as np
import pytest

from hgpreduce import gf2
from hgpreduce.codes import named_code, repetition_code
from hgpreduce.coloring import color_code, product_coloring
from hgpreduce.gf2 import BitMatrix
from hgpreduce.hgp import build_hgp
from hgpreduce.planner import CombinationSchedule, choose_schedule, fold_symmetric_schedule
from hgpreduce.reducer import apply_reduction, build_reduction, reduce_code
from hgpreduce.verifier import (
    certify_distance,
    diagonal_mirror,
    random_deformations,
    verify_all,
    verify_css,
    verify_deformation_weights,
    verify_k,
    verify_logical_basis,
    verify_rowspace_containment,
    verify_sector_bounds,
    verify_zx_fold,
)

from oracles import in_span, rows_to_ints


def small_pipeline():
    c1, c2 = named_code("tiny-d2"), named_code("rep3")
    q = build_hgp(c1, c2)
    pc = product_coloring(color_code(c1), color_code(c2), q)
    r, plan = reduce_code(q, pc, choose_schedule(pc))
    return q, r


def lightest_logical_oracle(hz_dense, hx_dense, cap: int) -> int | None:
    """Weight of the lightest X logical up to ``cap`` by plain combinations."""
    n = hz_dense.shape[1]
    cols = [int("".join(map(str, hz_dense[:, j][::-1])) or "0", 2) for j in range(n)]
    stabs = rows_to_ints(hx_dense)
    for w in range(1, cap + 1):
        for support in itertools.combinations(range(n), w):
            acc = 0
            for j in support:
                acc ^= cols[j]
            if acc:
                continue
            if not in_span(stabs, sum(1 << j for j in support)):
                return w
    return None


class TestCss:
    def test_pass(self, k33):
        assert verify_css(k33.code).ok and verify_css(k33.reduced).ok

    def test_located_violation(self, k33):
        hx = k33.code.hx.to_dense().copy()
        q = int(np.flatnonzero(hx[0])[0])
        hx[0, q] ^= 1
        broken = SimpleNamespace(hx=BitMatrix.from_dense(hx), hz=k33.code.hz)
        rep = verify_css(broken)
        assert not rep.ok
        expected = {(0, int(z)) for z in np.flatnonzero(k33.code.hz.to_dense()[:, q])}
        assert set(map(tuple, rep.details["violations"])) == expected


class TestK:
    @pytest.mark.parametrize("fixture", ["k33", "heawood", "rep3"])
    def test_reference_codes(self, fixture, request):
        p = request.getfixturevalue(fixture)
        assert verify_k(p.code, p.reduced).ok

    def test_empty_plan(self, k33):
        r = apply_reduction(k33.code, build_reduction(k33.code, k33.pc, CombinationSchedule.of()))
        assert verify_k(k33.code, r).ok


class TestLogicalBasis:
    def test_small_pipeline(self):
        _, r = small_pipeline()
        assert verify_logical_basis(r).ok

    def test_identity_plan(self, k33):
        assert verify_logical_basis(k33.code).ok

    def test_stabilizer_row_injected(self, k33):
        r = k33.reduced
        lx = r.logical_x.to_dense().copy()
        lx[0] = r.hx.row(0)
        rep = verify_logical_basis(r, BitMatrix.from_dense(lx), r.logical_z)
        assert not rep.ok
        assert rep.details["x_rows_in_stabilizers"] == [0]
        assert not rep.details["pairing_identity"]

    def test_missing_basis(self):
        c = named_code("k33")
        q = build_hgp(c, c, with_logicals=False)
        assert not verify_logical_basis(q).ok


class TestDistance:
    def test_reduced_k33_matches_oracle(self, k33):
        r = k33.reduced
        assert lightest_logical_oracle(r.hz.to_dense(), r.hx.to_dense(), 3) is None
        for side in ("X", "Z"):
            rep = certify_distance(r, 4, cap=3, side=side)
            assert rep.details["status"] == "confirmed-min" and rep.ok
            assert rep.details["upper_bound"] == 4

    def test_surface_code(self):
        c = repetition_code(3)
        q = build_hgp(c, c)
        rep = certify_distance(q, 3, cap=2)
        assert rep.details["status"] == "confirmed-min"

    def test_counterexample(self, k33):
        rep = certify_distance(k33.reduced, 5, cap=4)
        assert rep.details["status"] == "counterexample" and not rep.ok
        support = rep.details["counterexample"]
        assert len(support) == 4
        v = np.zeros(k33.reduced.n, dtype=np.uint8)
        v[support] = 1
        assert not gf2.mul_vec(k33.reduced.hz, v).any()
        assert not gf2.in_rowspace(k33.reduced.hx, v)

    def test_cap_is_clamped(self, heawood):
        rep = certify_distance(heawood.reduced, 6, cap=5)
        assert rep.details["partial"] and rep.details["cap"] == 3
        assert rep.details["status"] == "no-logical-below-cap"
        assert rep.details["upper_bound"] == 6 and rep.ok

    def test_sides_agree_on_symmetric_input(self, rep3):
        x = certify_distance(rep3.reduced, 3, side="X").details
        z = certify_distance(rep3.reduced, 3, side="Z").details
        assert x["status"] == z["status"] == "confirmed-min"

    @pytest.mark.parametrize("fixture, d", [("k33", 4), ("heawood", 6)])
    def test_canonical_upper_bound_is_tight(self, fixture, d, request):
        r = request.getfixturevalue(fixture).reduced
        assert int(r.logical_x.row_weights().min()) == d
        assert int(r.logical_z.row_weights().min()) == d


class TestFold:
    def test_unreduced_symmetric(self, k33):
        assert verify_zx_fold(k33.code)

    def test_fold_schedule(self, k33):
        s = fold_symmetric_schedule(k33.pc)
        r, _ = reduce_code(k33.code, k33.pc, s)
        assert verify_zx_fold(r)

    def test_diagonal_group_breaks_fold(self, k33):
        s = CombinationSchedule.of([(0, 0)], [])
        r, _ = reduce_code(k33.code, k33.pc, s)
        assert not verify_zx_fold(r)

    def test_mirror_needs_square_layout(self):
        q = build_hgp(named_code("k33"), named_code("rep3"))
        assert diagonal_mirror(q) is None
        assert not verify_zx_fold(q)


class TestSectorBounds:
    @pytest.mark.parametrize("fixture", ["k33", "heawood"])
    def test_canonical_rows(self, fixture, request):
        r = request.getfixturevalue(fixture).reduced
        assert verify_sector_bounds(r, r.logical_x, "X").ok
        assert verify_sector_bounds(r, r.logical_z, "Z").ok

    def test_zero_deformations(self, k33):
        rep = verify_sector_bounds(k33.reduced, k33.reduced.logical_x, "X", deformations=0)
        assert rep.ok and rep.details["variants_per_row"] == 1

    def test_too_high_bound_fails(self, k33):
        assert not verify_sector_bounds(k33.reduced, k33.reduced.logical_x, "X", bound=5).ok

    def test_deformations_are_stabilizers(self, k33):
        stab = k33.reduced.hx
        d = random_deformations(stab, 50, np.random.default_rng(0))
        assert gf2.RowSpace(stab).contains_many(d).all()


class TestRowspaceAndDeformation:
    @pytest.mark.parametrize("fixture", ["k33", "heawood"])
    def test_containment(self, fixture, request):
        p = request.getfixturevalue(fixture)
        assert verify_rowspace_containment(p.code, p.reduced).ok

    def test_containment_detects_foreign_row(self, k33):
        r = k33.reduced
        nb = k33.code.layout.num_bit_type
        hx = r.hx.to_dense().copy()
        extra = np.zeros((1, r.n), dtype=np.uint8)
        extra[0, 0] = 1  # a single bit-type qubit is not a combination of X-checks there
        fake = SimpleNamespace(hx=BitMatrix.from_dense(np.vstack([hx, extra])), hz=r.hz, layout=r.layout, n=r.n)
        assert nb > 0
        assert not verify_rowspace_containment(k33.code, fake).ok

    def test_deformation_weights(self, k33):
        rep = verify_deformation_weights(k33.reduced, 4, samples=2000)
        assert rep.ok and rep.details["min_weight"] >= 4


class TestVerifyAll:
    def test_all_pass_and_serialise(self, k33):
        reports = verify_all(k33.code, k33.reduced)
        assert all(r.ok for r in reports)
        json.dumps([r.to_json() for r in reports])
        names = {r.check for r in reports}
        assert {"css_before", "css_after", "k", "logical_basis", "rowspace_containment", "distance_X", "distance_Z"} <= names
