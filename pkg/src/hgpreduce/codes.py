"""Classical binary linear codes, their Tanner graphs, and input-code generators."""

from __future__ import annotations

import itertools
from collections import deque
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import gf2
from .gf2 import BitMatrix

ENUMERATION_LIMIT = 24


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected graph without loops or parallel edges."""

    num_vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        norm = []
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise ValueError(f"edge ({u},{v}) out of range")
            e = (min(u, v), max(u, v))
            if e in seen:
                raise ValueError(f"parallel edge {e}")
            seen.add(e)
            norm.append(e)
        object.__setattr__(self, "edges", tuple(norm))

    @classmethod
    def from_edges(cls, num_vertices: int, edges: Iterable[tuple[int, int]]) -> SimpleGraph:
        return cls(num_vertices, tuple(sorted((min(u, v), max(u, v)) for u, v in edges)))

    @cached_property
    def neighbors(self) -> tuple[frozenset[int], ...]:
        adj: list[set[int]] = [set() for _ in range(self.num_vertices)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(frozenset(a) for a in adj)

    def degrees(self) -> list[int]:
        return [len(a) for a in self.neighbors]

    def is_connected(self) -> bool:
        if self.num_vertices == 0:
            return True
        seen = {0}
        queue = deque([0])
        while queue:
            u = queue.popleft()
            for w in self.neighbors[u]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == self.num_vertices

    def is_bipartite(self) -> bool:
        side = [-1] * self.num_vertices
        for start in range(self.num_vertices):
            if side[start] >= 0:
                continue
            side[start] = 0
            queue = deque([start])
            while queue:
                u = queue.popleft()
                for w in self.neighbors[u]:
                    if side[w] < 0:
                        side[w] = 1 - side[u]
                        queue.append(w)
                    elif side[w] == side[u]:
                        return False
        return True

    def girth(self) -> int | None:
        """Length of a shortest cycle, or ``None`` for a forest."""
        best = None
        for root in range(self.num_vertices):
            dist = {root: 0}
            parent = {root: -1}
            queue = deque([root])
            while queue:
                u = queue.popleft()
                for w in self.neighbors[u]:
                    if w not in dist:
                        dist[w] = dist[u] + 1
                        parent[w] = u
                        queue.append(w)
                    elif parent[u] != w:
                        cyc = dist[u] + dist[w] + 1
                        if best is None or cyc < best:
                            best = cyc
        return best


@dataclass(frozen=True)
class TannerGraph:
    num_bits: int
    num_checks: int
    check_supports: tuple[tuple[int, ...], ...]

    def edges(self) -> list[tuple[int, int]]:
        return [(c, b) for c, sup in enumerate(self.check_supports) for b in sup]


@dataclass(frozen=True, eq=False)
class ClassicalCode:
    """A binary linear code given by its parity-check matrix ``h`` (m x n)."""

    h: BitMatrix
    name: str = ""
    known_distance: int | None = field(default=None, compare=False)

    @property
    def n(self) -> int:
        return self.h.cols

    @property
    def m(self) -> int:
        return self.h.rows

    @cached_property
    def rank(self) -> int:
        return gf2.rank(self.h)

    @property
    def k(self) -> int:
        return self.n - self.rank

    @property
    def full_rank(self) -> bool:
        return self.rank == self.m

    @property
    def k_transpose(self) -> int:
        """Dimension of the transpose code ``ker h^T``."""
        return self.m - self.rank

    @cached_property
    def distance(self) -> int:
        if self.known_distance is not None:
            return self.known_distance
        d = min_distance(self)
        assert d is not None
        return d

    def tanner_graph(self) -> TannerGraph:
        return TannerGraph(self.n, self.m, tuple(self.h.supports()))

    def transpose(self) -> ClassicalCode:
        return ClassicalCode(self.h.T, name=f"{self.name}^T" if self.name else "")

    def __repr__(self) -> str:
        label = f"{self.name} " if self.name else ""
        return f"ClassicalCode({label}[{self.n},{self.k}], m={self.m})"


# generator matrices ----------------------------------------------------------------


def informational_bits(code: ClassicalCode) -> list[int]:
    """Information set chosen as far left as possible.

    Pivots are taken from the right so that the parity part sits at the end,
    matching the ``(A | I)`` convention.
    """
    n = code.n
    flipped = gf2.col_select(code.h, range(n - 1, -1, -1))
    _, pivots = gf2.rref(flipped)
    parity = {n - 1 - p for p in pivots}
    return [b for b in range(n) if b not in parity]


def canonical_generator(code: ClassicalCode) -> tuple[BitMatrix, list[int]]:
    """Generator ``G`` that is the identity on the informational bits.

    Returns ``(G, perm)``; ``perm`` lists informational bits first, then the
    parity bits, so ``G[:, perm] = (I_k | A^T)``.
    """
    if code.k == 0:
        raise ValueError("code has no codewords (k = 0)")
    n = code.n
    flipped = gf2.col_select(code.h, range(n - 1, -1, -1))
    reduced, pivots = gf2.rref(flipped)
    dense = reduced.to_dense()[: len(pivots)]
    parity_bits = [n - 1 - p for p in pivots]
    info = sorted(set(range(n)) - set(parity_bits))
    g = np.zeros((len(info), n), dtype=np.uint8)
    for t, f in enumerate(info):
        g[t, f] = 1
        g[t, parity_bits] = dense[:, n - 1 - f]
    perm = info + sorted(parity_bits)
    return BitMatrix.from_dense(g), perm


def min_distance(code: ClassicalCode, weight_cap: int | None = None) -> int | None:
    """Minimum nonzero codeword weight.

    Exhaustive over the ``2^k - 1`` nonzero messages when ``k <= 24``; above that,
    a support search up to ``weight_cap``. ``None`` means no nonzero codeword of
    weight ``<= weight_cap`` exists.
    """
    k = code.k
    if k == 0:
        raise ValueError("distance undefined for k = 0")
    if k <= ENUMERATION_LIMIT:
        g, _ = canonical_generator(code)
        d = _enumerate_min_weight(g)
        if weight_cap is not None and d > weight_cap:
            return None
        return d
    if weight_cap is None:
        raise ValueError(f"k = {k} too large for enumeration; pass weight_cap")
    for support in gf2.low_weight_kernel_vectors(code.h, weight_cap):
        return len(support)
    return None


def _enumerate_min_weight(g: BitMatrix) -> int:
    words = g.words
    k = g.rows
    low = min(k, 16)
    table = np.zeros((1, words.shape[1]), dtype=words.dtype)
    for t in range(low):
        table = np.vstack([table, table ^ words[t]])
    weights = np.bitwise_count(table).sum(axis=1)
    weights[0] = np.iinfo(np.int64).max
    best = int(weights.min())
    for high in range(1, 1 << (k - low)):
        offset = np.zeros(words.shape[1], dtype=words.dtype)
        for t in range(k - low):
            if high >> t & 1:
                offset ^= words[low + t]
        best = min(best, int(np.bitwise_count(table ^ offset).sum(axis=1).min()))
    return best


def check_degrees(code: ClassicalCode) -> tuple[int, int]:
    """(max column weight, max row weight)."""
    cw = code.h.col_weights()
    rw = code.h.row_weights()
    return (int(cw.max()) if cw.size else 0, int(rw.max()) if rw.size else 0)


# generators ------------------------------------------------------------------------------


def random_ldpc(n: int, d_v: int, d_c: int, seed: int, max_tries: int = 200_000) -> ClassicalCode:
    """(d_v, d_c)-regular code from the bipartite configuration model.

    A pairing with a repeated (bit, check) pair is discarded and redrawn whole.
    """
    if n <= 0 or d_v <= 0 or d_c <= 0 or (n * d_v) % d_c:
        raise ValueError("need d_v * n divisible by d_c")
    m = n * d_v // d_c
    if d_v > m:
        raise ValueError("column weight exceeds the number of checks")
    rng = np.random.default_rng(seed)
    bit_stubs = np.repeat(np.arange(n), d_v)
    check_stubs = np.repeat(np.arange(m), d_c)
    for _ in range(max_tries):
        perm = rng.permutation(check_stubs)
        keys = perm * n + bit_stubs
        if np.unique(keys).size == keys.size:
            dense = np.zeros((m, n), dtype=np.uint8)
            dense[perm, bit_stubs] = 1
            return ClassicalCode(BitMatrix.from_dense(dense), name=f"random({d_v},{d_c})n{n}s{seed}")
    raise RuntimeError("configuration model kept producing parallel edges")


def random_full_rank_ldpc(n: int, d_v: int, d_c: int, seed: int, attempts: int = 1000) -> ClassicalCode:
    """First full-rank draw of :func:`random_ldpc` over seeds ``seed, seed+1, ...``."""
    for s in range(seed, seed + attempts):
        code = random_ldpc(n, d_v, d_c, s)
        if code.full_rank:
            return code
    raise RuntimeError("no full-rank draw found")


def circulant_shift(power: int, lift: int) -> BitMatrix:
    """Identity with columns shifted right: entry ``(i, i + power mod lift)`` set."""
    dense = np.zeros((lift, lift), dtype=np.uint8)
    dense[np.arange(lift), (np.arange(lift) + power) % lift] = 1
    return BitMatrix.from_dense(dense)


def parse_exponent_table(rows: Sequence[Sequence[int | str | None]]) -> tuple[BitMatrix, dict[tuple[int, int], int]]:
    """Split a table like ``[[4, '-', 4], ...]`` into proto matrix and exponent map."""
    proto = []
    exps: dict[tuple[int, int], int] = {}
    for r, row in enumerate(rows):
        line = []
        for c, entry in enumerate(row):
            if entry is None or entry == "-" or (isinstance(entry, int) and entry < 0):
                line.append(0)
            else:
                line.append(1)
                exps[(r, c)] = int(entry)
        proto.append(line)
    return BitMatrix.from_dense(proto), exps


def qc_lift(proto: BitMatrix, exponents: Mapping[tuple[int, int], int], lift: int) -> ClassicalCode:
    """Type-I quasi-cyclic lift: each nonzero proto cell becomes one circulant."""
    if lift < 1:
        raise ValueError("lift must be positive")
    pd = proto.to_dense()
    for (r, c), power in exponents.items():
        if not pd[r, c]:
            raise ValueError(f"exponent given on zero proto cell ({r},{c})")
        if not 0 <= power < lift:
            raise ValueError(f"power {power} outside [0, {lift})")
    mp, np_ = pd.shape
    dense = np.zeros((mp * lift, np_ * lift), dtype=np.uint8)
    for r in range(mp):
        for c in range(np_):
            if pd[r, c]:
                if (r, c) not in exponents:
                    raise ValueError(f"missing exponent for proto cell ({r},{c})")
                dense[r * lift : (r + 1) * lift, c * lift : (c + 1) * lift] = circulant_shift(
                    exponents[(r, c)], lift
                ).to_dense()
    return ClassicalCode(BitMatrix.from_dense(dense), name=f"qc-lift{lift}")


def cycle_code(g: SimpleGraph, drop_vertex: int | None = None) -> ClassicalCode:
    """Bits on edges, one parity check per vertex, one vertex check removed."""
    if not g.is_connected():
        raise ValueError("cycle codes need a connected graph")
    drop = g.num_vertices - 1 if drop_vertex is None else drop_vertex
    dense = np.zeros((g.num_vertices, len(g.edges)), dtype=np.uint8)
    for e, (u, v) in enumerate(g.edges):
        dense[u, e] = 1
        dense[v, e] = 1
    dense = np.delete(dense, drop, axis=0)
    return ClassicalCode(BitMatrix.from_dense(dense), name="cycle")


def bipartite_double_cover(g: SimpleGraph) -> SimpleGraph:
    """Vertices ``u`` and ``u + |V|`` are the two lifts of ``u``."""
    n = g.num_vertices
    edges = []
    for u, v in g.edges:
        edges.append((u, v + n))
        edges.append((v, u + n))
    return SimpleGraph.from_edges(2 * n, edges)


# named graphs and codes ------------------------------------------------------------------


def complete_bipartite_graph(a: int, b: int) -> SimpleGraph:
    return SimpleGraph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def complete_graph(n: int) -> SimpleGraph:
    return SimpleGraph.from_edges(n, itertools.combinations(range(n), 2))


def cycle_graph(n: int) -> SimpleGraph:
    return SimpleGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def heawood_graph() -> SimpleGraph:
    """Point-line incidence graph of the Fano plane (points 0-6, lines 7-13)."""
    lines = [{i % 7, (i + 1) % 7, (i + 3) % 7} for i in range(7)]
    return SimpleGraph.from_edges(14, [(p, 7 + li) for li, line in enumerate(lines) for p in line])


def tutte_coxeter_graph() -> SimpleGraph:
    """Incidence graph of the 15 duads and 15 synthemes on six symbols."""
    duads = list(itertools.combinations(range(6), 2))
    synthemes = []
    for trio in itertools.combinations(duads, 3):
        if len({x for d in trio for x in d}) == 6:
            synthemes.append(trio)
    index = {d: i for i, d in enumerate(duads)}
    edges = [(index[d], 15 + s) for s, trio in enumerate(synthemes) for d in trio]
    return SimpleGraph.from_edges(30, edges)


def repetition_code(n: int) -> ClassicalCode:
    dense = np.zeros((n - 1, n), dtype=np.uint8)
    for i in range(n - 1):
        dense[i, i] = dense[i, i + 1] = 1
    return ClassicalCode(BitMatrix.from_dense(dense), name=f"rep{n}")


def from_rows(rows: Sequence[str | Sequence[int]], name: str = "") -> ClassicalCode:
    """Build a code from bit strings such as ``"1101"`` or 0/1 lists."""
    dense = [[int(ch) for ch in r] if isinstance(r, str) else list(r) for r in rows]
    return ClassicalCode(BitMatrix.from_dense(dense), name=name)


def direct_sum(codes: Sequence[ClassicalCode], name: str = "") -> ClassicalCode:
    return ClassicalCode(gf2.direct_sum([c.h for c in codes]), name=name)


QC_PROTO = [[1, 0, 1, 1], [0, 1, 1, 1], [1, 1, 0, 1]]

QC_TABLE = {
    5: [[4, "-", 4, 3], ["-", 3, 3, 4], [3, 4, "-", 3]],
    6: [[5, "-", 3, 3], ["-", 4, 2, 1], [2, 1, "-", 1]],
    7: [[1, "-", 2, 3], ["-", 5, 6, 1], [4, 5, "-", 5]],
}


def qc_table_code(lift: int) -> ClassicalCode:
    proto, exps = parse_exponent_table(QC_TABLE[lift])
    code = qc_lift(proto, exps, lift)
    return ClassicalCode(code.h, name=f"qc-l{lift}")


RANDOM_35_EXAMPLE = [
    "00010000110001000100",
    "00100100001100000010",
    "00000000100000011011",
    "10000001000000010010",
    "00100011000001000000",
    "01001000000111000000",
    "01010000010100001000",
    "00000001000010110001",
    "10000100101010000000",
    "00001010010000100000",
    "01011000001000000001",
    "00000100000000101100",
]


def named_code(name: str) -> ClassicalCode:
    """Small catalogue of the codes used by the examples and tests."""
    graphs = {
        "k33": lambda: complete_bipartite_graph(3, 3),
        "heawood": heawood_graph,
        "tutte-coxeter": tutte_coxeter_graph,
        "k4": lambda: complete_graph(4),
    }
    if name in graphs:
        return ClassicalCode(cycle_code(graphs[name]()).h, name=name)
    if name.startswith("qc") and name[2:].isdigit():
        return qc_table_code(int(name[2:]))
    if name.startswith("rep") and name[3:].isdigit():
        return repetition_code(int(name[3:]))
    fixed = {
        # [3,1,2]: a weight-3 check plus a single-bit check
        "tiny-d2": ["111", "001"],
        "random-35": RANDOM_35_EXAMPLE,
        # seven checks: five pairwise disjoint, two overlapping the rest
        "seven-check": [
            "11000000000",
            "00110000000",
            "00001100000",
            "00000011000",
            "00000000110",
            "10100000001",
            "01010100001",
        ],
    }
    if name in fixed:
        return from_rows(fixed[name], name=name)
    if name == "tiny-d2-x3":
        base = from_rows(fixed["tiny-d2"])
        return direct_sum([base] * 3, name=name)
    if name == "rep3-x3":
        return direct_sum([repetition_code(3)] * 3, name=name)
    raise KeyError(f"unknown code {name!r}")


NAMED_CODES = (
    "k33",
    "heawood",
    "tutte-coxeter",
    "k4",
    "qc5",
    "qc6",
    "qc7",
    "rep3",
    "tiny-d2",
    "tiny-d2-x3",
    "rep3-x3",
    "random-35",
    "seven-check",
)
