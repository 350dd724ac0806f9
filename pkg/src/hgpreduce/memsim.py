"""Z-memory Monte Carlo under phenomenological noise with a min-sum BP decoder.

Data qubits take independent X flips each round and each Z-syndrome bit is
misread independently, except in the last round, which stands for a noiseless
transversal readout. Detectors compare consecutive syndrome rounds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.stats import binomtest

from .coloring import greedy_color
from .codes import SimpleGraph
from .hgp import CssCode

CHUNK = 2048  # shots per RNG stream; fixed so results depend only on (seed, shots)


@dataclass(frozen=True)
class NoiseModel:
    p_data: float
    p_meas: float
    rounds: int

    def __post_init__(self):
        for p in (self.p_data, self.p_meas):
            if not 0.0 <= p <= 0.5:
                raise ValueError(f"probability {p} outside [0, 0.5]")
        if self.rounds < 1:
            raise ValueError("need at least one round")

    @classmethod
    def uniform(cls, p: float, rounds: int) -> NoiseModel:
        return cls(p, p, rounds)


@dataclass(frozen=True, eq=False)
class DecodingGraph:
    """Spacetime detector matrix.

    Variables are ordered as data flips ``(round, qubit)`` followed by
    measurement flips ``(round, check)`` for all but the last round.
    """

    checks: sp.csr_matrix  # detectors x variables
    logical: sp.csr_matrix  # logicals x variables
    num_data: int
    rounds: int
    n: int
    m: int

    @property
    def num_variables(self) -> int:
        return self.checks.shape[1]

    @property
    def num_detectors(self) -> int:
        return self.checks.shape[0]

    def is_data(self) -> np.ndarray:
        out = np.zeros(self.num_variables, dtype=bool)
        out[: self.num_data] = True
        return out

    def priors(self, noise: NoiseModel) -> np.ndarray:
        """Per-variable error probabilities scaled by degree, each type averaging its rate."""
        deg = np.asarray(self.checks.sum(axis=0)).ravel().astype(float)
        out = np.empty(self.num_variables)
        for mask, p in ((self.is_data(), noise.p_data), (~self.is_data(), noise.p_meas)):
            if not mask.any():
                continue
            d = deg[mask]
            out[mask] = p * d / d.mean() if d.mean() > 0 else p
        return np.clip(out, 1e-9, 0.49)


def _z_logicals(code: CssCode) -> sp.csr_matrix:
    if code.logical_z is None:
        raise ValueError("memory experiments need a logical basis")
    return sp.csr_matrix(code.logical_z.to_dense().astype(np.uint8))


def build_decoding_graph(code: CssCode, rounds: int) -> DecodingGraph:
    """Detector ``t`` sees round-``t`` data flips and the misreads of rounds ``t`` and ``t-1``."""
    if rounds < 1:
        raise ValueError("need at least one round")
    hz = sp.csr_matrix(code.hz.to_dense().astype(np.uint8))
    m, n = hz.shape
    data = sp.kron(sp.identity(rounds, dtype=np.uint8, format="csr"), hz, format="csr")
    blocks = [data]
    if rounds > 1:
        # measurement flip in round t hits detectors t and t+1
        link = sp.lil_matrix((rounds, rounds - 1), dtype=np.uint8)
        for t in range(rounds - 1):
            link[t, t] = 1
            link[t + 1, t] = 1
        blocks.append(sp.kron(link.tocsr(), sp.identity(m, dtype=np.uint8), format="csr"))
    checks = sp.hstack(blocks, format="csr").astype(np.uint8)
    lz = _z_logicals(code)
    logical = sp.hstack(
        [sp.hstack([lz] * rounds, format="csr"), sp.csr_matrix((lz.shape[0], m * (rounds - 1)), dtype=np.uint8)],
        format="csr",
    )
    return DecodingGraph(checks, logical.astype(np.uint8), n * rounds, rounds, n, m)


def _mod2(a: sp.csr_matrix, x: np.ndarray) -> np.ndarray:
    """``x @ a^T mod 2`` for a batch of 0/1 rows."""
    return (sp.csr_matrix(x) @ a.T).toarray().astype(np.int64) & 1


def _sample_chunk(graph: DecodingGraph, noise: NoiseModel, shots: int, rng: np.random.Generator) -> np.ndarray:
    rates = np.where(graph.is_data(), noise.p_data, noise.p_meas)
    return (rng.random((shots, graph.num_variables)) < rates).astype(np.uint8)


def sample(code: CssCode, noise: NoiseModel, shots: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """(detectors ``shots x rounds x m``, true logical flips ``shots x k``)."""
    graph = build_decoding_graph(code, noise.rounds)
    dets, flips = [], []
    for rng, count in _streams(seed, shots):
        x = _sample_chunk(graph, noise, count, rng)
        dets.append(_mod2(graph.checks, x))
        flips.append(_mod2(graph.logical, x))
    det = np.vstack(dets) if dets else np.zeros((0, graph.num_detectors), dtype=np.int64)
    flip = np.vstack(flips) if flips else np.zeros((0, graph.logical.shape[0]), dtype=np.int64)
    return det.reshape(shots, noise.rounds, graph.m), flip


def syndrome_history(detectors: np.ndarray) -> np.ndarray:
    """Raw per-round syndromes from detector differences (shots x rounds x m)."""
    return np.bitwise_xor.accumulate(detectors, axis=1)


def _streams(seed: int, shots: int):
    chunks = -(-shots // CHUNK)
    for t, child in enumerate(np.random.SeedSequence(seed).spawn(chunks)):
        yield np.random.default_rng(child), min(CHUNK, shots - t * CHUNK)


# decoder ---------------------------------------------------------------------------


class MinSumDecoder:
    """Normalized min-sum BP with a layered (serial-among-checks) schedule.

    Checks are split into layers of pairwise variable-disjoint checks; the
    checks of one layer update in parallel, which is exactly a serial sweep over
    them. Messages for a batch of syndromes are kept as ``shots x edges`` arrays.
    """

    def __init__(self, h: sp.csr_matrix, priors: np.ndarray, max_iters: int = 60, alpha: float = 0.8):
        self.h = sp.csr_matrix(h).astype(np.uint8)
        self.m, self.n = self.h.shape
        self.max_iters = max_iters
        self.alpha = np.float32(alpha)
        p = np.asarray(priors, dtype=float)
        self.llr0 = np.log((1 - p) / p).astype(np.float32)
        indptr, indices = self.h.indptr, self.h.indices
        self.num_edges = len(indices)
        supports = [indices[indptr[c] : indptr[c + 1]] for c in range(self.m)]
        edge_ids = [np.arange(indptr[c], indptr[c + 1]) for c in range(self.m)]
        var_to_checks: dict[int, list[int]] = {}
        for c, s in enumerate(supports):
            for v in s:
                var_to_checks.setdefault(int(v), []).append(c)
        adjacency = set()
        for cs in var_to_checks.values():
            for a in cs:
                for b in cs:
                    if a < b:
                        adjacency.add((a, b))
        coloring = greedy_color(SimpleGraph.from_edges(self.m, adjacency))
        self.layers = []
        for group in coloring.groups:
            width = max(len(supports[c]) for c in group)
            var = np.full((len(group), width), self.n, dtype=np.int64)  # dummy variable n
            edge = np.full((len(group), width), self.num_edges, dtype=np.int64)  # dummy edge
            for row, c in enumerate(group):
                var[row, : len(supports[c])] = supports[c]
                edge[row, : len(supports[c])] = edge_ids[c]
            self.layers.append((np.asarray(group), var, edge))

    def decode(self, syndromes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Batch decode. Returns (corrections ``shots x n``, converged flags)."""
        syn = np.asarray(syndromes, dtype=np.uint8).reshape(-1, self.m)
        shots = syn.shape[0]
        out = np.zeros((shots, self.n), dtype=np.uint8)
        done = ~syn.any(axis=1)
        converged = done.copy()
        active = np.flatnonzero(~done)
        if active.size == 0 or self.max_iters == 0:
            return out, converged
        big = np.float32(1e30)
        post = np.tile(np.append(self.llr0, big), (active.size, 1))
        msg = np.zeros((active.size, self.num_edges + 1), dtype=np.float32)
        s = syn[active]
        sign_syn = [(1 - 2 * s[:, group].astype(np.float32))[:, :, None] for group, _, _ in self.layers]
        hard = np.zeros((active.size, self.n), dtype=np.uint8)
        for _ in range(self.max_iters):
            for (group, var, edge), ssign in zip(self.layers, sign_syn):
                old = msg[:, edge]
                q = post[:, var] - old
                mag = np.abs(q)
                sgn = np.where(q < 0, np.float32(-1), np.float32(1))
                order = np.argsort(mag, axis=2)
                min1 = np.take_along_axis(mag, order[:, :, :1], axis=2)
                min2 = np.take_along_axis(mag, order[:, :, 1:2], axis=2) if mag.shape[2] > 1 else np.full_like(min1, big)
                is_min = np.arange(mag.shape[2])[None, None, :] == order[:, :, :1]
                excl = np.where(is_min, min2, min1)
                new = self.alpha * ssign * np.prod(sgn, axis=2, keepdims=True) * sgn * excl
                post[:, var] += new - old
                msg[:, edge] = new
                post[:, self.n] = big
                msg[:, self.num_edges] = 0
            hard = (post[:, : self.n] < 0).astype(np.uint8)
            ok = ~(_mod2(self.h, hard) != s).any(axis=1)
            if ok.any():
                idx = active[ok]
                out[idx] = hard[ok]
                converged[idx] = True
                keep = ~ok
                active, post, msg, s, hard = active[keep], post[keep], msg[keep], s[keep], hard[keep]
                sign_syn = [x[keep] for x in sign_syn]
                if active.size == 0:
                    break
        out[active] = hard
        return out, converged


def bp_decode(
    graph: DecodingGraph, syndrome: np.ndarray, noise: NoiseModel, max_iters: int = 60, normalization: float = 0.8
) -> tuple[np.ndarray, np.ndarray]:
    dec = MinSumDecoder(graph.checks, graph.priors(noise), max_iters, normalization)
    return dec.decode(np.asarray(syndrome).reshape(-1, graph.num_detectors))


# memory experiment -----------------------------------------------------------------


@dataclass(frozen=True)
class TrialResult:
    shots: int
    failures: int
    non_converged: int
    ci_low: float
    ci_high: float

    @property
    def bler(self) -> float:
        return self.failures / self.shots if self.shots else 0.0

    def as_row(self) -> dict:
        return {
            "shots": self.shots,
            "failures": self.failures,
            "bler": self.bler,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
        }


def wilson_interval(failures: int, shots: int) -> tuple[float, float]:
    if shots == 0:
        return (0.0, 1.0)
    ci = binomtest(failures, shots).proportion_ci(confidence_level=0.95, method="wilson")
    return float(ci.low), float(ci.high)


def logical_failures(graph: DecodingGraph, errors: np.ndarray, corrections: np.ndarray) -> np.ndarray:
    """Per shot: does the residual ``error + correction`` flip any logical Z?"""
    residual = (np.asarray(errors, dtype=np.uint8) ^ np.asarray(corrections, dtype=np.uint8)).astype(np.uint8)
    return _mod2(graph.logical, residual).any(axis=1)


def run_memory(
    code: CssCode,
    noise: NoiseModel,
    shots: int,
    seed: int,
    *,
    max_iters: int = 60,
    normalization: float = 0.8,
) -> TrialResult:
    """Failure when the decoder's logical prediction differs from the truth or BP does not converge."""
    graph = build_decoding_graph(code, noise.rounds)
    decoder = MinSumDecoder(graph.checks, graph.priors(noise), max_iters, normalization)
    failures = unconverged = 0
    for rng, count in _streams(seed, shots):
        x = _sample_chunk(graph, noise, count, rng)
        det = _mod2(graph.checks, x)
        corr, conv = decoder.decode(det)
        fail = logical_failures(graph, x, corr) | ~conv
        failures += int(fail.sum())
        unconverged += int((~conv).sum())
    lo, hi = wilson_interval(failures, shots)
    return TrialResult(shots, failures, unconverged, lo, hi)
