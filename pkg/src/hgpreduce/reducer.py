"""Check combination and check-type qubit removal.

For every scheduled qubit, the checks adjacent to it (its star) are replaced by
the sums of consecutive pairs. Each sum cancels on that qubit, which can then be
dropped. ``W_X``, ``W_Z`` record the row combinations and ``V`` the kept qubits.
"""

from __future__ import annotations

import hashlib
from collections.abc import Iterable
from dataclasses import dataclass, replace

import numpy as np

from . import gf2
from .coloring import ProductColoring
from .gf2 import BitMatrix
from .hgp import CssCode, check_weights, count_two_qubit_gates
from .planner import CombinationSchedule

Star = tuple[int, tuple[int, ...]]  # (qubit index, ascending check indices)


def local_repetition_transform(delta: int) -> BitMatrix:
    """Parity checks of the length-``delta`` repetition code: rows ``e_t + e_(t+1)``."""
    if delta < 1:
        raise ValueError("a star needs at least one check")
    dense = np.zeros((delta - 1, delta), dtype=np.uint8)
    for t in range(delta - 1):
        dense[t, t] = dense[t, t + 1] = 1
    return BitMatrix.from_dense(dense.reshape(delta - 1, delta))


@dataclass(frozen=True, eq=False)
class ReductionPlan:
    code: CssCode
    schedule: CombinationSchedule
    wx: BitMatrix
    wz: BitMatrix
    v: BitMatrix
    removed: frozenset[int]
    kept: tuple[int, ...]
    x_stars: tuple[Star, ...]
    z_stars: tuple[Star, ...]
    x_labels: tuple[tuple[int, ...], ...]
    z_labels: tuple[tuple[int, ...], ...]

    def digest(self) -> str:
        h = hashlib.sha256()
        for m in (self.wx, self.wz, self.v):
            h.update(np.asarray(m.shape, dtype=np.int64).tobytes())
            h.update(m.words.tobytes())
        return h.hexdigest()


def _stars(check_matrix: np.ndarray, qubits: Iterable[int]) -> list[Star]:
    return [(q, tuple(int(r) for r in np.flatnonzero(check_matrix[:, q]))) for q in qubits]


def _combination(num_checks: int, stars: list[Star], labels_in, kind: str):
    """Rows of W and the original-check labels they carry."""
    owner: dict[int, int] = {}
    for s, (_, checks) in enumerate(stars):
        for r in checks:
            if r in owner:
                raise ValueError(f"{kind}-check {r} lies in two scheduled stars (schedule infeasible)")
            owner[r] = s
    supports: list[tuple[int, ...]] = []
    labels: list[tuple[int, ...]] = []
    for r in range(num_checks):
        if r not in owner:
            supports.append((r,))
            labels.append(labels_in[r])
            continue
        checks = stars[owner[r]][1]
        if r != checks[0]:
            continue
        for a, b in zip(checks, checks[1:]):
            supports.append((a, b))
            labels.append(tuple(sorted(labels_in[a] + labels_in[b])))
    return BitMatrix.from_supports(supports, num_checks), tuple(labels)


def build_reduction(
    code: CssCode,
    pc: ProductColoring,
    schedule: CombinationSchedule,
    only: Iterable[int] | None = None,
) -> ReductionPlan:
    """Assemble ``(W_X, W_Z, V)`` for ``schedule``.

    ``only`` optionally restricts removal to a subset of the scheduled qubits
    (given as original check-type indices), for building partial plans.
    """
    if not schedule.is_feasible():
        raise ValueError("schedule violates the one-group-per-row/column rule")
    layout = code.layout
    allowed = None if only is None else set(only)

    def members(groups):
        out = []
        for g in sorted(groups):
            for a, b in pc.groups.get(g, ()):
                orig = layout.check_index(a, b)
                q = layout.index_of(orig)
                if q is not None and (allowed is None or orig in allowed):
                    out.append(q)
        return out

    x_qubits = members(schedule.x_groups)
    z_qubits = members(schedule.z_groups)
    hx = code.hx.to_dense()
    hz = code.hz.to_dense()
    x_stars = _stars(hx, x_qubits)
    z_stars = _stars(hz, z_qubits)
    for kind, stars in (("X", x_stars), ("Z", z_stars)):
        for q, checks in stars:
            if not checks:
                raise ValueError(f"qubit {q} has no {kind}-checks to combine")
    wx, x_labels = _combination(code.hx.rows, x_stars, code.x_labels, "X")
    wz, z_labels = _combination(code.hz.rows, z_stars, code.z_labels, "Z")
    removed = frozenset(x_qubits) | frozenset(z_qubits)
    kept = tuple(q for q in range(code.n) if q not in removed)
    v = BitMatrix.from_dense(np.eye(code.n, dtype=np.uint8)[:, list(kept)].reshape(code.n, len(kept)))
    return ReductionPlan(
        code=code,
        schedule=schedule,
        wx=wx,
        wz=wz,
        v=v,
        removed=removed,
        kept=kept,
        x_stars=tuple(x_stars),
        z_stars=tuple(z_stars),
        x_labels=x_labels,
        z_labels=z_labels,
    )


def apply_reduction(code: CssCode, plan: ReductionPlan) -> CssCode:
    """Reduced code ``(W_X H_X V, W_Z H_Z V)`` with logicals restricted to kept qubits."""
    if plan.code is not code and plan.wx.cols != code.hx.rows:
        raise ValueError("plan was built for a different code")
    kept = list(plan.kept)
    combined_x = plan.wx @ code.hx
    combined_z = plan.wz @ code.hz
    removed = sorted(plan.removed)
    if removed:
        x_on_removed = gf2.col_select(combined_x, [q for q, _ in plan.x_stars])
        z_on_removed = gf2.col_select(combined_z, [q for q, _ in plan.z_stars])
        if not (x_on_removed.is_zero() and z_on_removed.is_zero()):
            raise AssertionError("combined checks still touch a removed qubit")
    hx = gf2.col_select(combined_x, kept)
    hz = gf2.col_select(combined_z, kept)
    lx = lz = None
    if code.logical_x is not None:
        lx = gf2.col_select(code.logical_x, kept)
        lz = gf2.col_select(code.logical_z, kept)
    return replace(
        code,
        hx=hx,
        hz=hz,
        layout=code.layout.restrict(kept),
        logical_x=lx,
        logical_z=lz,
        name=f"{code.name}~",
        x_labels=plan.x_labels,
        z_labels=plan.z_labels,
    )


def reduce_code(code: CssCode, pc: ProductColoring, schedule: CombinationSchedule) -> tuple[CssCode, ReductionPlan]:
    plan = build_reduction(code, pc, schedule)
    return apply_reduction(code, plan), plan


@dataclass(frozen=True)
class WeightReport:
    w_q: int
    w_c: int
    reduced_w_q: int
    reduced_w_c: int
    n2q: int
    reduced_n2q: int

    @property
    def within_bounds(self) -> bool:
        return self.reduced_w_q <= 2 * self.w_q and self.reduced_w_c <= 2 * (self.w_c - 1)

    def as_tuple(self) -> tuple[int, int, int, int, int, int]:
        return (self.w_q, self.w_c, self.reduced_w_q, self.reduced_w_c, self.n2q, self.reduced_n2q)


def weight_report(before: CssCode, after: CssCode, *, check: bool = True) -> WeightReport:
    """Degree maxima and two-qubit gate counts; raises if the LDPC bounds fail."""
    wq, wc = check_weights(before)
    rq, rc = check_weights(after)
    report = WeightReport(wq, wc, rq, rc, count_two_qubit_gates(before), count_two_qubit_gates(after))
    if check and not report.within_bounds:
        raise AssertionError(f"reduced weights ({rq},{rc}) exceed bounds from ({wq},{wc})")
    return report


def cycle_savings_formula(v: int, delta: int) -> int:
    """Gate savings of full removal on a bipartite (v, delta)-biregular cycle code."""
    return delta * (4 - delta) * (2 * v - 1) ** 2
