"""Choosing which color groups combine X-checks and which combine Z-checks.

Each group can be claimed by the X vertex of its row color or by the Z vertex of
its column color, and each vertex claims at most one group. Picking groups to
maximise removed qubits is therefore a maximum-weight bipartite matching, solved
here with a Hungarian algorithm on exact integers.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import TYPE_CHECKING, Literal

import numpy as np

from .coloring import ProductColoring

if TYPE_CHECKING:
    from .reducer import ReductionPlan

Group = tuple[int, int]
LeftVertex = tuple[Literal["X", "Z"], int]


@dataclass(frozen=True)
class CombinationSchedule:
    x_groups: frozenset[Group]
    z_groups: frozenset[Group]

    @classmethod
    def of(cls, x_groups: Iterable[Group] = (), z_groups: Iterable[Group] = ()) -> CombinationSchedule:
        return cls(frozenset(map(tuple, x_groups)), frozenset(map(tuple, z_groups)))

    def is_feasible(self) -> bool:
        if self.x_groups & self.z_groups:
            return False
        rows = [i for i, _ in self.x_groups]
        cols = [j for _, j in self.z_groups]
        return len(rows) == len(set(rows)) and len(cols) == len(set(cols))

    def removed(self, pc: ProductColoring) -> int:
        return int(sum(pc.sizes[g] for g in self.x_groups | self.z_groups))

    def to_json(self) -> dict:
        return {
            "x_groups": sorted([list(g) for g in self.x_groups]),
            "z_groups": sorted([list(g) for g in self.z_groups]),
        }

    @classmethod
    def from_json(cls, data: dict) -> CombinationSchedule:
        return cls.of(map(tuple, data["x_groups"]), map(tuple, data["z_groups"]))


@dataclass(frozen=True)
class MatchingGraph:
    """Left: ``("X", i)`` and ``("Z", j)``; right: groups ``(i, j)`` with nonzero size."""

    left: tuple[LeftVertex, ...]
    right: tuple[Group, ...]
    edges: tuple[tuple[LeftVertex, Group, int], ...]

    def weight_of(self, matching: Iterable[tuple[LeftVertex, Group]]) -> int:
        table = {(u, v): w for u, v, w in self.edges}
        return sum(table[e] for e in matching)


def build_matching_graph(pc: ProductColoring) -> MatchingGraph:
    left: list[LeftVertex] = [("X", i) for i in range(pc.chi1)] + [("Z", j) for j in range(pc.chi2)]
    right = [(i, j) for i in range(pc.chi1) for j in range(pc.chi2)]
    edges = []
    for i, j in right:
        w = int(pc.sizes[i, j])
        if w > 0:
            edges.append((("X", i), (i, j), w))
            edges.append((("Z", j), (i, j), w))
    return MatchingGraph(tuple(left), tuple(right), tuple(edges))


def hungarian_max(weights: Sequence[Sequence[int]]) -> list[int]:
    """Maximum-weight perfect assignment on a square integer matrix.

    Returns ``assign`` with ``assign[row] = col``. Shortest augmenting paths with
    vertex potentials, O(n^3); works on Python integers so arbitrarily large
    tie-break weights stay exact.
    """
    n = len(weights)
    if n == 0:
        return []
    top = max(max(r) for r in weights)
    cost = [[top - w for w in row] for row in weights]
    inf = float("inf")
    u = [0] * (n + 1)
    v = [0] * (n + 1)
    owner = [0] * (n + 1)  # owner[col] = row (1-based), 0 = free
    way = [0] * (n + 1)
    for row in range(1, n + 1):
        owner[0] = row
        col0 = 0
        minv = [inf] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[col0] = True
            r0 = owner[col0]
            delta = inf
            col1 = 0
            for col in range(1, n + 1):
                if not used[col]:
                    cur = cost[r0 - 1][col - 1] - u[r0] - v[col]
                    if cur < minv[col]:
                        minv[col] = cur
                        way[col] = col0
                    if minv[col] < delta:
                        delta = minv[col]
                        col1 = col
            for col in range(n + 1):
                if used[col]:
                    u[owner[col]] += delta
                    v[col] -= delta
                else:
                    minv[col] -= delta
            col0 = col1
            if owner[col0] == 0:
                break
        while col0:
            col1 = way[col0]
            owner[col0] = owner[col1]
            col0 = col1
    assign = [0] * n
    for col in range(1, n + 1):
        assign[owner[col] - 1] = col - 1
    return assign


def _tie_broken_matching(left: Sequence, right: Sequence, edges: Sequence[tuple[object, object, int]]):
    """Max-weight matching; among optima, prefer edges earlier in ``edges`` order.

    Edge ``t`` of ``E`` gets bonus ``2^(E-1-t)``; true weights are scaled above the
    total bonus, so weight dominates and the bonus picks the lexicographically
    first optimum.
    """
    size = max(len(left), len(right))
    num = len(edges)
    scale = 1 << (num + 1)
    li = {x: t for t, x in enumerate(left)}
    ri = {x: t for t, x in enumerate(right)}
    mat = [[0] * size for _ in range(size)]
    is_edge = [[False] * size for _ in range(size)]
    for t, (a, b, w) in enumerate(edges):
        mat[li[a]][ri[b]] = w * scale + (1 << (num - 1 - t))
        is_edge[li[a]][ri[b]] = True
    assign = hungarian_max(mat)
    out = []
    for r, c in enumerate(assign):
        if r < len(left) and c < len(right) and is_edge[r][c]:
            out.append((left[r], right[c]))
    return out


def max_weight_matching(g: MatchingGraph) -> list[tuple[LeftVertex, Group]]:
    edges = sorted(g.edges, key=lambda e: (e[0][0], e[1], e[0][1]))
    return _tie_broken_matching(g.left, g.right, edges)


def choose_schedule(pc: ProductColoring) -> CombinationSchedule:
    """Schedule removing the most check-type qubits (one matching solve)."""
    matching = max_weight_matching(build_matching_graph(pc))
    x_groups = [grp for (kind, _), grp in matching if kind == "X"]
    z_groups = [grp for (kind, _), grp in matching if kind == "Z"]
    return CombinationSchedule.of(x_groups, z_groups)


def diagonal_schedule(chi: int) -> CombinationSchedule:
    """Hand-made baseline: X on the diagonal, Z on adjacent off-diagonal pairs."""
    x = [(i, i) for i in range(chi)]
    z = []
    for i in range(0, chi - 1, 2):
        z += [(i, i + 1), (i + 1, i)]
    return CombinationSchedule.of(x, z)


def all_feasible_schedules(chi1: int, chi2: int) -> Iterable[CombinationSchedule]:
    """Every feasible schedule by exhaustive assignment (small chi only)."""
    cells = [(i, j) for i in range(chi1) for j in range(chi2)]
    for assign in itertools.product((0, 1, 2), repeat=len(cells)):
        x = [c for c, a in zip(cells, assign) if a == 1]
        z = [c for c, a in zip(cells, assign) if a == 2]
        s = CombinationSchedule.of(x, z)
        if s.is_feasible():
            yield s


def fold_symmetric_schedule(pc: ProductColoring) -> CombinationSchedule:
    """Mirror-closed schedule that never touches a diagonal group.

    An upper group ``(i, j)``, ``i < j``, is used either as X on ``(i, j)`` with Z
    on ``(j, i)``, charging color ``i``, or as Z on ``(i, j)`` with X on ``(j, i)``,
    charging color ``j``. Both the row rule for X and the column rule for Z
    reduce to: each color is charged at most once. That is a matching between
    colors and upper groups.
    """
    if not pc.is_symmetric() or pc.chi1 != pc.chi2:
        raise ValueError("fold-symmetric planning needs identical colorings on both axes")
    chi = pc.chi1
    upper = [(i, j) for i in range(chi) for j in range(i + 1, chi) if pc.sizes[i, j] > 0]
    edges = []
    for i, j in upper:
        w = int(2 * pc.sizes[i, j])
        edges.append((i, (i, j), w))
        edges.append((j, (i, j), w))
    edges.sort(key=lambda e: (e[1], e[0]))
    matching = _tie_broken_matching(list(range(chi)), upper, edges)
    x, z = [], []
    for color, (i, j) in matching:
        if color == i:
            x.append((i, j))
            z.append((j, i))
        else:
            z.append((i, j))
            x.append((j, i))
    return CombinationSchedule.of(x, z)


# equivariance ------------------------------------------------------------------------


def _perm_matrix(perm: Sequence[int]) -> np.ndarray:
    n = len(perm)
    out = np.zeros((n, n), dtype=np.uint8)
    out[np.asarray(perm), np.arange(n)] = 1
    return out


def _is_automorphism(h: np.ndarray, sigma: Sequence[int], tau: Sequence[int]) -> bool:
    # tau H = H sigma with permutation matrices sending e_x to e_{perm[x]}
    return np.array_equal(_perm_matrix(tau) @ h % 2, h @ _perm_matrix(sigma) % 2)


def _row_permutation(w: np.ndarray, permuted: np.ndarray) -> list[int] | None:
    """``p`` with ``permuted[r] = w[p[r]]`` for all rows, if one exists."""
    index: dict[bytes, list[int]] = {}
    for r, row in enumerate(w):
        index.setdefault(row.tobytes(), []).append(r)
    out = []
    for row in permuted:
        slots = index.get(row.tobytes())
        if not slots:
            return None
        out.append(slots.pop())
    return out


def verify_equivariance(plan: ReductionPlan, sigma1, tau1, sigma2, tau2) -> bool:
    """Does the classical automorphism pair descend to the reduced code?

    ``sigma`` permutes bits and ``tau`` permutes checks, with ``tau H = H sigma``.
    True when permutations exist with ``V S' = S V``, ``T'_X W_X = W_X T_X`` and
    ``T'_Z W_Z = W_Z T_Z``.
    """
    code = plan.code
    if code.inputs is None:
        raise ValueError("plan's code carries no classical inputs")
    c1, c2 = code.inputs
    h1, h2 = c1.h.to_dense(), c2.h.to_dense()
    if not (_is_automorphism(h1, sigma1, tau1) and _is_automorphism(h2, sigma2, tau2)):
        raise ValueError("permutations are not Tanner-graph automorphisms of the inputs")
    lay = code.layout
    n1, n2, m1, m2 = lay.n1, lay.n2, lay.m1, lay.m2
    qubit_perm = np.empty(n1 * n2 + m1 * m2, dtype=np.int64)
    for i in range(n1):
        for j in range(n2):
            qubit_perm[i * n2 + j] = sigma1[i] * n2 + sigma2[j]
    for a in range(m1):
        for b in range(m2):
            qubit_perm[n1 * n2 + a * m2 + b] = n1 * n2 + tau1[a] * m2 + tau2[b]
    x_perm = [tau1[a] * n2 + sigma2[j] for a in range(m1) for j in range(n2)]
    z_perm = [sigma1[i] * m2 + tau2[b] for i in range(n1) for b in range(m2)]

    # removed set must be a union of orbits
    removed = set(plan.removed)
    if {int(qubit_perm[q]) for q in removed} != removed:
        return False
    # combined rows must map onto combined rows
    for w, perm in ((plan.wx.to_dense(), x_perm), (plan.wz.to_dense(), z_perm)):
        if w.shape[0] == 0:
            continue
        permuted = w @ _perm_matrix(perm) % 2
        if _row_permutation(w, permuted) is None:
            return False
    return True
