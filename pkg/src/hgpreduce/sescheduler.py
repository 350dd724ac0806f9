"""CNOT orderings for single-ancilla syndrome extraction, and the hook errors they allow.

A schedule is a list of rounds; each round is a set of (check, qubit) couplings
in which no check and no qubit appears twice. A check's coupling order is the
round order of its edges. An ancilla fault after the ``t``-th coupling spreads
to the data qubits coupled afterwards: the hook residual.
"""

from __future__ import annotations

import hashlib
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import gf2
from .gf2 import BitMatrix, RowSpace
from .hgp import CssCode

Basis = Literal["X", "Z"]
Edge = tuple[int, int]  # (check, qubit)


def code_hash(code: CssCode) -> str:
    h = hashlib.sha256()
    for m in (code.hx, code.hz):
        h.update(np.asarray(m.shape, dtype=np.int64).tobytes())
        h.update(m.words.tobytes())
    return h.hexdigest()[:16]


@dataclass(frozen=True)
class CnotSchedule:
    x_rounds: tuple[tuple[Edge, ...], ...]
    z_rounds: tuple[tuple[Edge, ...], ...]
    x_phase_bounds: tuple[int, ...] = ()
    z_phase_bounds: tuple[int, ...] = ()

    def rounds(self, basis: Basis) -> tuple[tuple[Edge, ...], ...]:
        return self.x_rounds if basis == "X" else self.z_rounds

    def order(self, basis: Basis, num_checks: int) -> list[list[int]]:
        """Per-check list of qubits in coupling order."""
        out: list[list[int]] = [[] for _ in range(num_checks)]
        for rnd in self.rounds(basis):
            for c, q in sorted(rnd):
                out[c].append(q)
        return out

    def is_valid_for(self, code: CssCode) -> bool:
        for basis, h in (("X", code.hx), ("Z", code.hz)):
            seen: set[Edge] = set()
            for rnd in self.rounds(basis):
                checks = [c for c, _ in rnd]
                qubits = [q for _, q in rnd]
                if len(set(checks)) != len(checks) or len(set(qubits)) != len(qubits):
                    return False
                if seen & set(rnd):
                    return False
                seen |= set(rnd)
            support = {(c, q) for c, row in enumerate(h.supports()) for q in row}
            if seen != support:
                return False
        return True

    def to_json(self, code: CssCode | None = None) -> dict:
        out = {
            "x": [[list(e) for e in sorted(r)] for r in self.x_rounds],
            "z": [[list(e) for e in sorted(r)] for r in self.z_rounds],
            "x_phase_bounds": list(self.x_phase_bounds),
            "z_phase_bounds": list(self.z_phase_bounds),
        }
        if code is not None:
            out["code_hash"] = code_hash(code)
        return out

    @classmethod
    def from_json(cls, data: dict) -> CnotSchedule:
        def rounds(key):
            return tuple(tuple((int(c), int(q)) for c, q in r) for r in data[key])

        return cls(
            rounds("x"),
            rounds("z"),
            tuple(data.get("x_phase_bounds", ())),
            tuple(data.get("z_phase_bounds", ())),
        )


def edge_color(edges: Sequence[Edge]) -> list[list[Edge]]:
    """Proper edge coloring of a bipartite check/qubit graph with max-degree colors.

    Edges are inserted in the given order; a conflict is resolved by swapping
    the two colors along an alternating path, which in a bipartite graph never
    returns to the inserting check.
    """
    if not edges:
        return []
    deg_c: dict[int, int] = {}
    deg_q: dict[int, int] = {}
    for c, q in edges:
        deg_c[c] = deg_c.get(c, 0) + 1
        deg_q[q] = deg_q.get(q, 0) + 1
    palette = max(max(deg_c.values()), max(deg_q.values()))
    at_c: dict[int, dict[int, int]] = {c: {} for c in deg_c}  # check -> color -> qubit
    at_q: dict[int, dict[int, int]] = {q: {} for q in deg_q}  # qubit -> color -> check
    for c, q in edges:
        a = next(col for col in range(palette) if col not in at_c[c])
        if a in at_q[q]:
            b = next(col for col in range(palette) if col not in at_q[q])
            # walk the a/b path from q and swap its colors
            path = []  # (qubit, check, color)
            node, on_qubit, col = q, True, a
            while True:
                nxt = (at_q if on_qubit else at_c)[node].get(col)
                if nxt is None:
                    break
                path.append((node, nxt, col) if on_qubit else (nxt, node, col))
                node, on_qubit, col = nxt, not on_qubit, b if col == a else a
            for qq, cc, col in path:
                del at_q[qq][col]
                del at_c[cc][col]
            for qq, cc, col in path:
                new = b if col == a else a
                at_q[qq][new] = cc
                at_c[cc][new] = qq
        at_c[c][a] = q
        at_q[q][a] = c
    classes: list[list[Edge]] = [[] for _ in range(palette)]
    for c, table in at_c.items():
        for col, q in table.items():
            classes[col].append((c, q))
    return [sorted(cls) for cls in classes if cls]


def _edges(h: BitMatrix) -> list[Edge]:
    return [(c, q) for c, row in enumerate(h.supports()) for q in row]


def _colored_rounds(edges: list[Edge]) -> tuple[tuple[Edge, ...], ...]:
    return tuple(tuple(r) for r in edge_color(edges))


def random_schedule(code: CssCode, seed: int = 0) -> CnotSchedule:
    """Edge coloring of each Tanner graph with a seeded insertion order and shuffled rounds."""
    rng = np.random.default_rng(seed)
    parts = []
    for h in (code.hx, code.hz):
        edges = _edges(h)
        order = rng.permutation(len(edges))
        rounds = list(_colored_rounds([edges[i] for i in order]))
        rng.shuffle(rounds)
        parts.append(tuple(rounds))
    return CnotSchedule(parts[0], parts[1])


def _split(code: CssCode, basis: Basis, labels) -> tuple[tuple[tuple[Edge, ...], ...], tuple[int, ...]]:
    h = code.hx if basis == "X" else code.hz
    is_bit, row, col = code.layout.sector_arrays
    line = col if basis == "X" else row
    phases: list[list[Edge]] = [[], [], []]
    for c, support in enumerate(h.supports()):
        bit_lines = sorted({int(line[q]) for q in support if is_bit[q]})
        combined = labels is not None and len(labels[c]) > 1
        if not combined:
            phases[0].extend((c, q) for q in support)
            continue
        if len(bit_lines) != 2:
            raise ValueError(f"combined {basis}-check {c} spans {len(bit_lines)} bit-type lines, expected 2")
        first, _ = bit_lines
        for q in support:
            if not is_bit[q]:
                phases[1].append((c, q))
            elif line[q] == first:
                phases[0].append((c, q))
            else:
                phases[2].append((c, q))
    rounds: list[tuple[Edge, ...]] = []
    bounds = []
    for edges in phases:
        rounds.extend(_colored_rounds(edges))
        bounds.append(len(rounds))
    return tuple(rounds), tuple(bounds)


def split_schedule(code: CssCode) -> CnotSchedule:
    """Three-phase schedule for both check types.

    Phase one couples the first bit-type line of every combined check together
    with all edges of uncombined checks; phase two the check-type qubits; phase
    three the second bit-type line. Lines are columns for X-checks, rows for
    Z-checks. Combined checks are read from the code's check labels.
    """
    x_rounds, xb = _split(code, "X", code.x_labels)
    z_rounds, zb = _split(code, "Z", code.z_labels)
    return CnotSchedule(x_rounds, z_rounds, xb, zb)


def split_x_schedule(code: CssCode) -> CnotSchedule:
    rounds, bounds = _split(code, "X", code.x_labels)
    return CnotSchedule(rounds, _colored_rounds(_edges(code.hz)), bounds, ())


def split_z_schedule(code: CssCode) -> CnotSchedule:
    rounds, bounds = _split(code, "Z", code.z_labels)
    return CnotSchedule(_colored_rounds(_edges(code.hx)), rounds, (), bounds)


# hooks ---------------------------------------------------------------------------------


@dataclass(frozen=True)
class HookFault:
    check: int
    cut: int
    residual: tuple[int, ...]
    reduced: tuple[int, ...]


def line_count(code: CssCode, support: Sequence[int], basis: Basis) -> int:
    """Bit-type columns (X) or rows (Z) touched by ``support``."""
    is_bit, row, col = code.layout.sector_arrays
    idx = np.asarray(list(support), dtype=np.int64)
    if idx.size == 0:
        return 0
    idx = idx[is_bit[idx]]
    return len(np.unique((col if basis == "X" else row)[idx]))


def reduce_residual(
    code: CssCode, residual: Sequence[int], check: int | None = None, basis: Basis = "X", stab: np.ndarray | None = None
) -> tuple[int, ...]:
    """Lower-weight stabilizer-equivalent representative of a hook residual.

    Starts from the residual and, if ``check`` is given, its complement in that
    check; each start is improved by greedy weight descent over stabilizer rows.
    The lightest result wins, ties broken by fewer lines.
    """
    h = code.hx if basis == "X" else code.hz
    if stab is None:
        stab = h.to_dense().astype(np.int64)
    n = code.n
    start = np.zeros(n, dtype=np.int64)
    start[list(residual)] = 1
    starts = [start]
    if check is not None:
        starts.append((start + stab[check]) % 2)
    row_w = stab.sum(axis=1)
    best = None
    for v in starts:
        v = v.copy()
        while True:
            gain = 2 * (stab @ v) - row_w
            r = int(np.argmax(gain)) if gain.size else 0
            if not gain.size or gain[r] <= 0:
                break
            v = (v + stab[r]) % 2
        support = tuple(int(q) for q in np.flatnonzero(v))
        key = (len(support), line_count(code, support, basis))
        if best is None or key < best[0]:
            best = (key, support)
    return best[1]


def enumerate_hooks(code: CssCode, schedule: CnotSchedule, basis: Basis = "X") -> list[HookFault]:
    """Every (check, cut) ancilla fault, ``cut`` from 0 to the check weight."""
    h = code.hx if basis == "X" else code.hz
    stab = h.to_dense().astype(np.int64)
    out = []
    for c, order in enumerate(schedule.order(basis, h.rows)):
        for t in range(len(order) + 1):
            residual = tuple(sorted(order[t:]))
            reduced = reduce_residual(code, residual, c, basis, stab) if residual else ()
            out.append(HookFault(c, t, residual, reduced))
    return out


def max_hook_lines(code: CssCode, schedule: CnotSchedule, basis: Basis = "X") -> int:
    return max((line_count(code, f.reduced, basis) for f in enumerate_hooks(code, schedule, basis)), default=0)


@dataclass(frozen=True)
class ProbeResult:
    status: Literal["no-violation", "counterexample"]
    cap: int
    faults: tuple[tuple[str, int, int], ...] = ()  # (kind, check-or-qubit, cut)
    residual: tuple[int, ...] = ()


def effective_distance_probe(code: CssCode, schedule: CnotSchedule, cap: int, basis: Basis = "X") -> ProbeResult:
    """Search for at most ``cap`` data or hook faults that combine into an undetected logical.

    Faults are single-qubit errors plus every proper hook residual. Fault sets
    whose syndromes cancel are found by meet-in-the-middle; a set is a violation
    when the combined error lies outside the stabilizer span.
    """
    if cap <= 0:
        return ProbeResult("no-violation", cap)
    h = code.hx if basis == "X" else code.hz
    detector = code.hz if basis == "X" else code.hx
    faults: list[tuple[tuple[str, int, int], tuple[int, ...]]] = [(("data", q, 0), (q,)) for q in range(code.n)]
    seen = {(q,) for q in range(code.n)}
    for c, order in enumerate(schedule.order(basis, h.rows)):
        for t in range(1, len(order) - 1):
            residual = tuple(sorted(order[t:]))
            if residual not in seen:
                seen.add(residual)
                faults.append((("hook", c, t), residual))
    det_cols = gf2.column_syndromes(detector)
    syndromes = []
    for _, support in faults:
        s = 0
        for q in support:
            s ^= det_cols[q]
        syndromes.append(s)
    rs = RowSpace(h)
    for w in range(1, cap + 1):
        for subset in gf2.zero_sum_subsets(syndromes, w):
            v = np.zeros(code.n, dtype=np.uint8)
            for i in subset:
                v[list(faults[i][1])] ^= 1
            if v.any() and not rs.contains(v):
                return ProbeResult(
                    "counterexample",
                    cap,
                    tuple(faults[i][0] for i in subset),
                    tuple(int(q) for q in np.flatnonzero(v)),
                )
    return ProbeResult("no-violation", cap)
