"""Check colorings: check-adjacency graphs, greedy colorings, product and lifted colorings."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .codes import ClassicalCode, SimpleGraph
from .hgp import CssCode


@dataclass(frozen=True)
class CheckColoring:
    """Vertex coloring of a code's checks; ``color_of[c]`` is in ``range(num_colors)``."""

    color_of: tuple[int, ...]

    @property
    def num_colors(self) -> int:
        return max(self.color_of, default=-1) + 1

    @cached_property
    def groups(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.num_colors)]
        for c, col in enumerate(self.color_of):
            out[col].append(c)
        return tuple(tuple(g) for g in out)

    def is_valid_for(self, code: ClassicalCode) -> bool:
        return is_valid_coloring(check_adjacency_graph(code), self)


def check_adjacency_graph(code: ClassicalCode) -> SimpleGraph:
    """One vertex per check; two checks are adjacent when they share a bit."""
    dense = code.h.to_dense().astype(np.int64)
    overlap = dense @ dense.T
    rows, cols = np.nonzero(np.triu(overlap, k=1))
    return SimpleGraph.from_edges(code.m, zip(rows.tolist(), cols.tolist()))


def is_valid_coloring(g: SimpleGraph, coloring: CheckColoring) -> bool:
    if len(coloring.color_of) != g.num_vertices:
        return False
    return all(coloring.color_of[u] != coloring.color_of[v] for u, v in g.edges)


def greedy_color(g: SimpleGraph, order_seed: int | None = None) -> CheckColoring:
    """Color by peeling off maximal independent sets, one color per set.

    Each set is grown by repeatedly taking the remaining candidate with the
    fewest candidate neighbours, which favours large sets. Ties go to the lowest
    vertex index, or to a seeded random ranking when ``order_seed`` is given.
    """
    n = g.num_vertices
    if order_seed is None:
        rank = list(range(n))
    else:
        rank = np.random.default_rng(order_seed).permutation(n).tolist()
    nbrs = g.neighbors
    color = [-1] * n
    uncolored = set(range(n))
    current = 0
    while uncolored:
        candidates = set(uncolored)
        while candidates:
            v = min(candidates, key=lambda u: (len(nbrs[u] & candidates), rank[u]))
            color[v] = current
            candidates.discard(v)
            candidates -= nbrs[v]
            uncolored.discard(v)
        current += 1
    return CheckColoring(tuple(color))


def color_code(code: ClassicalCode, order_seed: int | None = None) -> CheckColoring:
    return greedy_color(check_adjacency_graph(code), order_seed)


@dataclass(frozen=True)
class ProductColoring:
    """Groups of check-type qubits ``(a, b)`` keyed by ``(color1(a), color2(b))``."""

    col1: CheckColoring
    col2: CheckColoring

    @property
    def chi1(self) -> int:
        return self.col1.num_colors

    @property
    def chi2(self) -> int:
        return self.col2.num_colors

    @cached_property
    def groups(self) -> dict[tuple[int, int], tuple[tuple[int, int], ...]]:
        return {
            (i, j): tuple((a, b) for a in self.col1.groups[i] for b in self.col2.groups[j])
            for i in range(self.chi1)
            for j in range(self.chi2)
        }

    @cached_property
    def sizes(self) -> np.ndarray:
        return np.array(
            [[len(self.col1.groups[i]) * len(self.col2.groups[j]) for j in range(self.chi2)] for i in range(self.chi1)],
            dtype=np.int64,
        ).reshape(self.chi1, self.chi2)

    def group_of(self, a: int, b: int) -> tuple[int, int]:
        return (self.col1.color_of[a], self.col2.color_of[b])

    def is_symmetric(self) -> bool:
        return self.col1 == self.col2


def product_coloring(col1: CheckColoring, col2: CheckColoring, code: CssCode) -> ProductColoring:
    """Product of two check colorings, verified against the HGP code's checks.

    Within every group, no X-check and no Z-check may touch two qubits.
    """
    layout = code.layout
    if len(col1.color_of) != layout.m1 or len(col2.color_of) != layout.m2:
        raise ValueError("colorings do not match the HGP input check counts")
    pc = ProductColoring(col1, col2)
    hx = code.hx.to_dense()
    hz = code.hz.to_dense()
    for key, members in pc.groups.items():
        cols = [layout.index_of(layout.check_index(a, b)) for a, b in members]
        cols = [q for q in cols if q is not None]
        if not cols:
            continue
        if hx[:, cols].sum(axis=1).max() > 1 or hz[:, cols].sum(axis=1).max() > 1:
            raise ValueError(f"group {key} has two qubits sharing a check")
    return pc


def lifted_coloring(proto_coloring: CheckColoring, lift: int, lifted: ClassicalCode | None = None) -> CheckColoring:
    """Every lifted copy ``c*lift + t`` of proto check ``c`` keeps the proto color."""
    colors = tuple(col for col in proto_coloring.color_of for _ in range(lift))
    out = CheckColoring(colors)
    if lifted is not None and not out.is_valid_for(lifted):
        raise ValueError("lifted coloring is invalid; the lift is probably not type-I")
    return out


def coloring_from_groups(groups: Sequence[Sequence[int]], m: int) -> CheckColoring:
    color = [-1] * m
    for col, members in enumerate(groups):
        for c in members:
            if color[c] != -1:
                raise ValueError(f"check {c} appears in two groups")
            color[c] = col
    if -1 in color:
        raise ValueError("some checks are uncolored")
    return CheckColoring(tuple(color))
