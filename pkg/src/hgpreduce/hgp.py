"""Hypergraph-product CSS codes with their 2D qubit layout and canonical logicals."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Literal

import numpy as np

from . import gf2
from .codes import ClassicalCode, canonical_generator, informational_bits
from .gf2 import BitMatrix

Sector = Literal["bit", "check"]


@dataclass(frozen=True)
class QubitLayout:
    """Grid coordinates of the data qubits of a (possibly reduced) HGP code.

    Original indexing: bit-type ``(i, j)`` is ``i*n2 + j``; check-type ``(a, b)``
    is ``n1*n2 + a*m2 + b``. ``kept`` lists the original index of each present
    qubit, in order; ``None`` means all qubits are present.
    """

    n1: int
    n2: int
    m1: int
    m2: int
    kept: tuple[int, ...] | None = None

    @property
    def full_size(self) -> int:
        return self.n1 * self.n2 + self.m1 * self.m2

    @property
    def num_bit_type(self) -> int:
        return self.n1 * self.n2

    def __len__(self) -> int:
        return self.full_size if self.kept is None else len(self.kept)

    @cached_property
    def originals(self) -> np.ndarray:
        return np.arange(self.full_size) if self.kept is None else np.asarray(self.kept)

    @cached_property
    def _position(self) -> dict[int, int]:
        return {int(o): q for q, o in enumerate(self.originals)}

    def original(self, q: int) -> int:
        return int(self.originals[q])

    def index_of(self, original: int) -> int | None:
        return self._position.get(original)

    def sector(self, q: int) -> Sector:
        return "bit" if self.original(q) < self.num_bit_type else "check"

    def coords(self, q: int) -> tuple[Sector, int, int]:
        o = self.original(q)
        if o < self.num_bit_type:
            i, j = divmod(o, self.n2)
            return ("bit", i, j)
        a, b = divmod(o - self.num_bit_type, self.m2)
        return ("check", a, b)

    def bit_index(self, i: int, j: int) -> int:
        return i * self.n2 + j

    def check_index(self, a: int, b: int) -> int:
        return self.num_bit_type + a * self.m2 + b

    @cached_property
    def sector_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(is_bit_type, row, col) per present qubit."""
        o = self.originals
        is_bit = o < self.num_bit_type
        row = np.where(is_bit, o // max(self.n2, 1), (o - self.num_bit_type) // max(self.m2, 1))
        col = np.where(is_bit, o % max(self.n2, 1), (o - self.num_bit_type) % max(self.m2, 1))
        return is_bit, row, col

    def restrict(self, kept_positions: list[int]) -> QubitLayout:
        return replace(self, kept=tuple(int(self.originals[q]) for q in kept_positions))

    def x_check_coords(self, r: int) -> tuple[int, int]:
        """Original X-check index to (check of code 1, bit of code 2)."""
        return divmod(r, self.n2)

    def z_check_coords(self, r: int) -> tuple[int, int]:
        """Original Z-check index to (bit of code 1, check of code 2)."""
        return divmod(r, self.m2)


@dataclass(frozen=True, eq=False)
class CssCode:
    """CSS code with optional logical bases and HGP provenance.

    ``x_labels[r]`` names the original X-checks summed into row ``r`` (a single
    index for an untouched check); ``z_labels`` likewise.
    """

    hx: BitMatrix
    hz: BitMatrix
    layout: QubitLayout
    logical_x: BitMatrix | None = None
    logical_z: BitMatrix | None = None
    name: str = ""
    d_x: float | None = None
    d_z: float | None = None
    inputs: tuple[ClassicalCode, ClassicalCode] | None = field(default=None, repr=False)
    x_labels: tuple[tuple[int, ...], ...] | None = field(default=None, repr=False)
    z_labels: tuple[tuple[int, ...], ...] | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.hx.cols != self.hz.cols or self.hx.cols != len(self.layout):
            raise ValueError("hx, hz and layout disagree on the qubit count")
        if not (self.hx @ self.hz.T).is_zero():
            raise ValueError("X and Z checks do not commute")
        if self.x_labels is None:
            object.__setattr__(self, "x_labels", tuple((r,) for r in range(self.hx.rows)))
        if self.z_labels is None:
            object.__setattr__(self, "z_labels", tuple((r,) for r in range(self.hz.rows)))
        if (self.logical_x is None) != (self.logical_z is None):
            raise ValueError("give both logical bases or neither")
        if self.logical_x is not None:
            pairing = self.logical_x @ self.logical_z.T
            if pairing != BitMatrix.identity(self.logical_x.rows):
                raise ValueError("logical bases are not paired")
            if not (self.hz @ self.logical_x.T).is_zero() or not (self.hx @ self.logical_z.T).is_zero():
                raise ValueError("logical operators are not in the right kernels")

    @property
    def n(self) -> int:
        return self.hx.cols

    @cached_property
    def k(self) -> int:
        return self.n - gf2.rank(self.hx) - gf2.rank(self.hz)

    @property
    def d(self) -> float | None:
        if self.d_x is None or self.d_z is None:
            return None
        return min(self.d_x, self.d_z)

    def with_logicals(self, lx: BitMatrix, lz: BitMatrix) -> CssCode:
        return replace(self, logical_x=lx, logical_z=lz)

    def __repr__(self) -> str:
        d = "?" if self.d is None else (int(self.d) if math.isfinite(self.d) else "inf")
        return f"CssCode({self.name + ' ' if self.name else ''}[[{self.n},{self.k},{d}]])"


def build_hgp(c1: ClassicalCode, c2: ClassicalCode, *, with_logicals: bool = True, name: str = "") -> CssCode:
    """Hypergraph product; ``c1`` indexes rows of the grid and ``c2`` columns."""
    h1, h2 = c1.h, c2.h
    n1, m1, n2, m2 = c1.n, c1.m, c2.n, c2.m
    hx = gf2.hstack([gf2.kron(h1, BitMatrix.identity(n2)), gf2.kron(BitMatrix.identity(m1), h2.T)])
    hz = gf2.hstack([gf2.kron(BitMatrix.identity(n1), h2), gf2.kron(h1.T, BitMatrix.identity(m2))])
    d_x, d_z = hgp_distances(c1, c2)
    code = CssCode(
        hx,
        hz,
        QubitLayout(n1, n2, m1, m2),
        name=name or f"hgp({c1.name},{c2.name})",
        d_x=d_x,
        d_z=d_z,
        inputs=(c1, c2),
    )
    if with_logicals and c1.full_rank and c2.full_rank and c1.k and c2.k:
        lx, lz = canonical_logicals(code, c1, c2)
        code = code.with_logicals(lx, lz)
    return code


def hgp_k(c1: ClassicalCode, c2: ClassicalCode) -> int:
    return c1.k * c2.k + c1.k_transpose * c2.k_transpose


def _distance_or_inf(code: ClassicalCode) -> float:
    return float(code.distance) if code.k else math.inf


def hgp_distances(c1: ClassicalCode, c2: ClassicalCode) -> tuple[float, float]:
    """(d_X, d_Z) from the classical distances; empty codes contribute infinity."""
    d1, d2 = _distance_or_inf(c1), _distance_or_inf(c2)
    d1t = _distance_or_inf(c1.transpose()) if c1.k_transpose else math.inf
    d2t = _distance_or_inf(c2.transpose()) if c2.k_transpose else math.inf
    return min(d1t, d2), min(d1, d2t)


def unit_rows(positions: list[int], n: int) -> BitMatrix:
    return BitMatrix.from_supports([[p] for p in positions], n)


def canonical_logicals(code: CssCode, c1: ClassicalCode, c2: ClassicalCode) -> tuple[BitMatrix, BitMatrix]:
    """Bit-type logical bases ``(E1 (x) G2 | 0)`` and ``(G1 (x) E2 | 0)``."""
    if not (c1.full_rank and c2.full_rank):
        raise ValueError("canonical logicals need full-rank inputs")
    g1, _ = canonical_generator(c1)
    g2, _ = canonical_generator(c2)
    e1 = unit_rows(informational_bits(c1), c1.n)
    e2 = unit_rows(informational_bits(c2), c2.n)
    pad = c1.m * c2.m
    lx = gf2.hstack([gf2.kron(e1, g2), BitMatrix.zeros(e1.rows * g2.rows, pad)])
    lz = gf2.hstack([gf2.kron(g1, e2), BitMatrix.zeros(g1.rows * e2.rows, pad)])
    return lx, lz


def count_two_qubit_gates(code: CssCode) -> int:
    return code.hx.nnz + code.hz.nnz


def check_weights(code: CssCode) -> tuple[int, int]:
    """(max qubit degree within one sector, max check weight) over X and Z."""
    wq = max(int(code.hx.col_weights().max(initial=0)), int(code.hz.col_weights().max(initial=0)))
    wc = max(int(code.hx.row_weights().max(initial=0)), int(code.hz.row_weights().max(initial=0)))
    return wq, wc


def sector_weights(code: CssCode, support) -> tuple[int, int, int, int]:
    """Distinct (bit rows, bit cols, check rows, check cols) touched by ``support``."""
    v = np.asarray(support).astype(bool)
    if v.shape != (code.n,):
        raise ValueError(f"support length {v.shape} != ({code.n},)")
    is_bit, row, col = code.layout.sector_arrays
    b = v & is_bit
    c = v & ~is_bit
    return (
        len(np.unique(row[b])),
        len(np.unique(col[b])),
        len(np.unique(row[c])),
        len(np.unique(col[c])),
    )
