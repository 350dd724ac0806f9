"""Augmentation and puncturing of input codes, and chain maps between the induced HGP codes.

A chain map ``source -> target`` is a triple ``(gamma_x, gamma_q, gamma_z)``
with ``gamma_q hx_src^T = hx_tgt^T gamma_x`` and ``gamma_z hz_src = hz_tgt gamma_q``.

For an augmented second input the map runs from the augmented code to the
original one, with ``gamma_x`` the identity. For a punctured second input it
runs from the punctured code to the original, with ``gamma_z`` the identity.
For a punctured first input it runs from the original to the punctured code,
with ``gamma_x`` the identity.
After reduction, the nontrivial check map is assembled from per-star solves:
each row of the shorter chain of pair sums is written in the rowspace of the
longer chain.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from . import gf2
from .codes import ClassicalCode, canonical_generator, informational_bits
from .coloring import CheckColoring, product_coloring
from .gf2 import BitMatrix, RowSpace
from .hgp import CssCode, build_hgp
from .planner import CombinationSchedule
from .reducer import ReductionPlan, build_reduction, apply_reduction, local_repetition_transform

IndexMap = Sequence[int | None]


# classical modifications ------------------------------------------------------------------


def augment(code: ClassicalCode, new_rows: BitMatrix | np.ndarray) -> ClassicalCode:
    """Append checks supported only on informational bits."""
    rows = gf2.as_bitmatrix(new_rows)
    if rows.rows == 0:
        return code
    if rows.cols != code.n:
        raise ValueError(f"new checks have {rows.cols} columns, code has {code.n}")
    info = set(informational_bits(code))
    outside = {q for s in rows.supports() for q in s} - info
    if outside:
        raise ValueError(f"augmented checks touch non-informational bits {sorted(outside)}")
    return ClassicalCode(gf2.vstack([code.h, rows]), name=f"{code.name}+aug")


def augmented_generator(code: ClassicalCode, new_rows: BitMatrix | np.ndarray) -> BitMatrix:
    """Generator of the augmented code built by fusing canonical logical rows."""
    g, _ = canonical_generator(code)
    info = informational_bits(code)
    restricted = gf2.col_select(gf2.as_bitmatrix(new_rows), info)
    fuse = gf2.kernel_basis(restricted)
    return fuse @ g


def puncture(code: ClassicalCode, bits: Sequence[int]) -> ClassicalCode:
    """Delete informational bits; the parity-check rank is unchanged."""
    bits = sorted(set(bits))
    if not bits:
        return code
    info = set(informational_bits(code))
    bad = [b for b in bits if b not in info]
    if bad:
        raise ValueError(f"bits {bad} are not informational")
    keep = [b for b in range(code.n) if b not in bits]
    out = ClassicalCode(gf2.col_select(code.h, keep), name=f"{code.name}-punc")
    if out.rank != code.rank:
        raise AssertionError("puncturing informational bits changed the rank")
    return out


def punctured_generator(code: ClassicalCode, bits: Sequence[int]) -> BitMatrix:
    """Canonical generator with the punctured bits' rows and columns removed."""
    g, _ = canonical_generator(code)
    info = informational_bits(code)
    drop = set(bits)
    rows = [t for t, b in enumerate(info) if b not in drop]
    return gf2.col_select(gf2.row_select(g, rows), [b for b in range(code.n) if b not in drop])


# chain maps -------------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ChainMap:
    gamma_x: BitMatrix
    gamma_q: BitMatrix
    gamma_z: BitMatrix
    source: CssCode
    target: CssCode

    def squares(self) -> tuple[BitMatrix, BitMatrix]:
        """Both commuting-square defects; zero matrices for a chain map."""
        first = self.gamma_q @ self.source.hx.T + self.target.hx.T @ self.gamma_x
        second = self.gamma_z @ self.source.hz + self.target.hz @ self.gamma_q
        return first, second


def verify_chain_map(cm: ChainMap) -> bool:
    shapes = (
        cm.gamma_q.shape == (cm.target.n, cm.source.n)
        and cm.gamma_x.shape == (cm.target.hx.rows, cm.source.hx.rows)
        and cm.gamma_z.shape == (cm.target.hz.rows, cm.source.hz.rows)
    )
    if not shapes:
        return False
    a, b = cm.squares()
    return a.is_zero() and b.is_zero()


@dataclass(frozen=True)
class CoordinateMap:
    """Where each index of the source inputs lands in the target inputs (``None``: dropped)."""

    bits1: tuple[int | None, ...]
    checks1: tuple[int | None, ...]
    bits2: tuple[int | None, ...]
    checks2: tuple[int | None, ...]

    @staticmethod
    def identity(n: int) -> tuple[int, ...]:
        return tuple(range(n))

    @staticmethod
    def dropping(n: int, dropped: Sequence[int]) -> tuple[int | None, ...]:
        """``range(n)`` onto the survivors, in order."""
        out: list[int | None] = []
        nxt = 0
        drop = set(dropped)
        for i in range(n):
            if i in drop:
                out.append(None)
            else:
                out.append(nxt)
                nxt += 1
        return tuple(out)

    @staticmethod
    def including(n_small: int, dropped: Sequence[int]) -> tuple[int, ...]:
        """Survivor indices back into the longer range."""
        drop = set(dropped)
        return tuple(i for i in range(n_small + len(drop)) if i not in drop)


def _pair(a: IndexMap, b: IndexMap, x: int, y: int) -> tuple[int, int] | None:
    ax, by = a[x], b[y]
    return None if ax is None or by is None else (ax, by)


def _original_maps(src: CssCode, tgt: CssCode, cmap: CoordinateMap):
    """Maps of original qubit, X-check and Z-check indices, source to target."""
    s, t = src.layout, tgt.layout

    def qubit(o: int) -> int | None:
        if o < s.num_bit_type:
            p = _pair(cmap.bits1, cmap.bits2, *divmod(o, s.n2))
            return None if p is None else t.bit_index(*p)
        p = _pair(cmap.checks1, cmap.checks2, *divmod(o - s.num_bit_type, s.m2))
        return None if p is None else t.check_index(*p)

    def x_check(r: int) -> int | None:
        p = _pair(cmap.checks1, cmap.bits2, *divmod(r, s.n2))
        return None if p is None else p[0] * t.n2 + p[1]

    def z_check(r: int) -> int | None:
        p = _pair(cmap.bits1, cmap.checks2, *divmod(r, s.m2))
        return None if p is None else p[0] * t.m2 + p[1]

    return qubit, x_check, z_check


def _chains(labels: Sequence[tuple[int, ...]]):
    """Group reduced rows into star chains via shared original checks."""
    parent: dict[int, int] = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for lab in labels:
        for o in lab:
            find(o)
        for a, b in zip(lab, lab[1:]):
            parent[find(a)] = find(b)
    star_of = {o: find(o) for lab in labels for o in lab}
    rows_of: dict[int, list[int]] = {}
    for r, lab in enumerate(labels):
        rows_of.setdefault(star_of[lab[0]], []).append(r)
    return star_of, rows_of


def _express(vector_support: set[int], labels: Sequence[tuple[int, ...]], num_rows: int) -> np.ndarray:
    """Coefficients writing a sum of original checks in the reduced rows, one star at a time."""
    star_of, rows_of = _chains(labels)
    coeff = np.zeros(num_rows, dtype=np.uint8)
    by_star: dict[int, set[int]] = {}
    for o in vector_support:
        if o not in star_of:
            raise ValueError(f"original check {o} is not carried by any reduced row")
        by_star.setdefault(star_of[o], set()).add(o)
    for star, part in by_star.items():
        rows = rows_of[star]
        local_checks = sorted({o for r in rows for o in labels[r]})
        pos = {o: t for t, o in enumerate(local_checks)}
        block = np.zeros((len(rows), len(local_checks)), dtype=np.uint8)
        for t, r in enumerate(rows):
            block[t, [pos[o] for o in labels[r]]] = 1
        target = np.zeros(len(local_checks), dtype=np.uint8)
        target[[pos[o] for o in part]] = 1
        sol = RowSpace(BitMatrix.from_dense(block)).solve(target)
        if sol is None:
            raise ValueError("row is outside the local rowspace; the reductions do not match")
        coeff[rows] ^= sol
    return coeff


def build_chain_map(source: CssCode, target: CssCode, cmap: CoordinateMap) -> ChainMap:
    """Chain map induced by an index map between input codes, reduced or not.

    The X map pushes each source row forward into the target rows; the Z map
    pulls each target row back into the source rows.
    """
    qubit, x_check, z_check = _original_maps(source, target, cmap)
    gq = np.zeros((target.n, source.n), dtype=np.uint8)
    for s in range(source.n):
        o = qubit(source.layout.original(s))
        if o is not None:
            t = target.layout.index_of(o)
            if t is None:
                raise ValueError("a kept source qubit maps onto a removed target qubit")
            gq[t, s] = 1
    gx = np.zeros((target.hx.rows, source.hx.rows), dtype=np.uint8)
    for s, lab in enumerate(source.x_labels):
        image = {x_check(o) for o in lab} - {None}
        if image:
            gx[:, s] = _express(image, target.x_labels, target.hx.rows)
    pullback: dict[int, set[int]] = {}
    for o in {o for lab in source.z_labels for o in lab}:
        img = z_check(o)
        if img is not None:
            pullback.setdefault(img, set()).add(o)
    gz = np.zeros((target.hz.rows, source.hz.rows), dtype=np.uint8)
    for t, lab in enumerate(target.z_labels):
        pre: set[int] = set()
        for o in lab:
            pre ^= pullback.get(o, set())
        if pre:
            gz[t] = _express(pre, source.z_labels, source.hz.rows)
    return ChainMap(BitMatrix.from_dense(gx), BitMatrix.from_dense(gq), BitMatrix.from_dense(gz), source, target)


def verify_selection_relation(cm: ChainMap, cmap: CoordinateMap) -> bool:
    """Full-length qubit map composed with the source selection equals target selection after ``gamma_q``."""
    src, tgt = cm.source, cm.target
    qubit, _, _ = _original_maps(src, tgt, cmap)
    full = np.zeros((tgt.layout.full_size, src.layout.full_size), dtype=np.uint8)
    for o in range(src.layout.full_size):
        img = qubit(o)
        if img is not None:
            full[img, o] = 1
    v_src = np.zeros((src.layout.full_size, src.n), dtype=np.uint8)
    v_src[src.layout.originals, np.arange(src.n)] = 1
    v_tgt = np.zeros((tgt.layout.full_size, tgt.n), dtype=np.uint8)
    v_tgt[tgt.layout.originals, np.arange(tgt.n)] = 1
    lhs = full.astype(np.int64) @ v_src % 2
    rhs = v_tgt.astype(np.int64) @ cm.gamma_q.to_dense() % 2
    return bool(np.array_equal(lhs, rhs))


def local_chain_map(delta: int, dropped: Sequence[int]) -> BitMatrix:
    """``g`` with ``g w = w' p`` for one star losing the checks at ``dropped``.

    ``w`` is the length-``delta`` pair-sum transform, ``w'`` the one on the
    survivors and ``p`` re-inserts the dropped checks as zero columns.
    """
    keep = [t for t in range(delta) if t not in set(dropped)]
    w = local_repetition_transform(delta)
    short = local_repetition_transform(len(keep)).to_dense() if keep else np.zeros((0, 0), dtype=np.uint8)
    padded = np.zeros((short.shape[0], delta), dtype=np.uint8)
    padded[:, keep] = short
    rs = RowSpace(w)
    rows = []
    for vec in padded:
        sol = rs.solve(vec)
        if sol is None:
            raise ValueError("shortened chain is not inside the original chain's rowspace")
        rows.append(sol)
    return BitMatrix.from_dense(np.array(rows, dtype=np.uint8).reshape(len(rows), delta - 1))


# end-to-end instances ---------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class HomomorphismInstance:
    original: CssCode
    modified: CssCode
    reduced_original: CssCode
    reduced_modified: CssCode
    plan_original: ReductionPlan
    plan_modified: ReductionPlan
    chain_map: ChainMap
    reduced_chain_map: ChainMap
    coordinates: CoordinateMap


def _reduce_both(q, q_mod, col1, col2, col1_mod, col2_mod, schedule):
    plan = build_reduction(q, product_coloring(col1, col2, q), schedule)
    plan_mod = build_reduction(q_mod, product_coloring(col1_mod, col2_mod, q_mod), schedule)
    return plan, apply_reduction(q, plan), plan_mod, apply_reduction(q_mod, plan_mod)


def augmentation_instance(
    c1: ClassicalCode,
    c2: ClassicalCode,
    new_rows,
    col1: CheckColoring,
    col2: CheckColoring,
    schedule: CombinationSchedule,
) -> HomomorphismInstance:
    """Augment the second input; the new checks get fresh colors so the schedule carries over."""
    c2_aug = augment(c2, new_rows)
    extra = c2_aug.m - c2.m
    col2_aug = CheckColoring(col2.color_of + tuple(range(col2.num_colors, col2.num_colors + extra)))
    q = build_hgp(c1, c2)
    q_aug = build_hgp(c1, c2_aug)
    plan, red, plan_aug, red_aug = _reduce_both(q, q_aug, col1, col2, col1, col2_aug, schedule)
    cmap = CoordinateMap(
        CoordinateMap.identity(c1.n),
        CoordinateMap.identity(c1.m),
        CoordinateMap.identity(c2.n),
        CoordinateMap.dropping(c2_aug.m, range(c2.m, c2_aug.m)),
    )
    return HomomorphismInstance(
        q, q_aug, red, red_aug, plan, plan_aug,
        build_chain_map(q_aug, q, cmap), build_chain_map(red_aug, red, cmap), cmap,
    )


def puncture_instance(
    c1: ClassicalCode,
    c2: ClassicalCode,
    bits: Sequence[int],
    col1: CheckColoring,
    col2: CheckColoring,
    schedule: CombinationSchedule,
    which: int = 2,
) -> HomomorphismInstance:
    """Puncture informational bits of input ``which``; colorings stay valid since checks only lose bits."""
    if which == 2:
        c2p = puncture(c2, bits)
        q, q_p = build_hgp(c1, c2), build_hgp(c1, c2p)
        plan, red, plan_p, red_p = _reduce_both(q, q_p, col1, col2, col1, col2, schedule)
        cmap = CoordinateMap(
            CoordinateMap.identity(c1.n),
            CoordinateMap.identity(c1.m),
            CoordinateMap.including(c2p.n, bits),
            CoordinateMap.identity(c2.m),
        )
        return HomomorphismInstance(
            q, q_p, red, red_p, plan, plan_p,
            build_chain_map(q_p, q, cmap), build_chain_map(red_p, red, cmap), cmap,
        )
    if which == 1:
        c1p = puncture(c1, bits)
        q, q_p = build_hgp(c1, c2), build_hgp(c1p, c2)
        plan, red, plan_p, red_p = _reduce_both(q, q_p, col1, col2, col1, col2, schedule)
        cmap = CoordinateMap(
            CoordinateMap.dropping(c1.n, bits),
            CoordinateMap.identity(c1.m),
            CoordinateMap.identity(c2.n),
            CoordinateMap.identity(c2.m),
        )
        return HomomorphismInstance(
            q, q_p, red, red_p, plan, plan_p,
            build_chain_map(q, q_p, cmap), build_chain_map(red, red_p, cmap), cmap,
        )
    raise ValueError("which must be 1 or 2")
