"""Dense, bit-packed linear algebra over GF(2).

Rows are packed little-endian into 64-bit words: bit ``j`` of a row lives in
word ``j // 64`` at position ``j % 64``. Padding bits past the last column are
always zero, so word-wise equality is matrix equality.
"""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterable, Iterator, Sequence

import numpy as np
import numpy.typing as npt

WORD = 64
_WORD_DTYPE = np.dtype("<u8")

ArrayLike = npt.ArrayLike


def _num_words(cols: int) -> int:
    return max(1, -(-cols // WORD))


def _pack(dense: np.ndarray, cols: int) -> np.ndarray:
    rows = dense.shape[0]
    words = _num_words(cols)
    padded = np.zeros((rows, words * WORD), dtype=np.uint8)
    padded[:, :cols] = dense
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view(_WORD_DTYPE).reshape(rows, words)


def _unpack(words: np.ndarray, cols: int) -> np.ndarray:
    rows = words.shape[0]
    if rows == 0:
        return np.zeros((0, cols), dtype=np.uint8)
    raw = np.ascontiguousarray(words).view(np.uint8).reshape(rows, -1)
    return np.unpackbits(raw, axis=1, bitorder="little", count=cols).astype(np.uint8)


class BitMatrix:
    """Immutable binary matrix with packed row storage.

    Construct with :meth:`from_dense`, :meth:`zeros`, :meth:`identity` or
    :meth:`from_supports`. Arithmetic operators follow GF(2): ``a + b`` is XOR
    and ``a @ b`` is the matrix product mod 2.
    """

    __slots__ = ("_rows", "_cols", "_words")

    def __init__(self, words: np.ndarray, cols: int):
        if words.ndim != 2 or words.shape[1] != _num_words(cols):
            raise ValueError("packed storage does not match the column count")
        self._rows = int(words.shape[0])
        self._cols = int(cols)
        tail = cols % WORD
        if tail and self._rows:
            mask = np.uint64((1 << tail) - 1)
            if np.any(words[:, -1] & ~mask):
                raise ValueError("nonzero padding bits")
        words = np.array(words, dtype=_WORD_DTYPE, copy=True)
        words.setflags(write=False)
        self._words = words

    # construction -------------------------------------------------------

    @classmethod
    def from_dense(cls, array: ArrayLike) -> BitMatrix:
        dense = np.asarray(array)
        if dense.ndim == 1:
            dense = dense.reshape(1, -1)
        if dense.ndim != 2:
            raise ValueError("expected a 2D array")
        dense = (dense.astype(np.int64) % 2).astype(np.uint8)
        return cls(_pack(dense, dense.shape[1]), dense.shape[1])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BitMatrix:
        return cls(np.zeros((rows, _num_words(cols)), dtype=_WORD_DTYPE), cols)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    @classmethod
    def from_supports(cls, supports: Iterable[Iterable[int]], cols: int) -> BitMatrix:
        supports = [list(s) for s in supports]
        dense = np.zeros((len(supports), cols), dtype=np.uint8)
        for r, support in enumerate(supports):
            for c in support:
                if not 0 <= c < cols:
                    raise IndexError(f"column {c} out of range for {cols} columns")
                dense[r, c] ^= 1
        return cls(_pack(dense, cols), cols)

    @classmethod
    def _wrap(cls, words: np.ndarray, cols: int) -> BitMatrix:
        out = object.__new__(cls)
        out._rows = int(words.shape[0])
        out._cols = int(cols)
        words = np.ascontiguousarray(words, dtype=_WORD_DTYPE)
        words.setflags(write=False)
        out._words = words
        return out

    # accessors ----------------------------------------------------------

    @property
    def rows(self) -> int:
        return self._rows

    @property
    def cols(self) -> int:
        return self._cols

    @property
    def shape(self) -> tuple[int, int]:
        return (self._rows, self._cols)

    @property
    def words(self) -> np.ndarray:
        """Read-only packed storage, shape ``(rows, ceil(cols/64))``."""
        return self._words

    def to_dense(self) -> np.ndarray:
        return _unpack(self._words, self._cols)

    def row(self, i: int) -> np.ndarray:
        return _unpack(self._words[i : i + 1], self._cols)[0]

    def row_support(self, i: int) -> tuple[int, ...]:
        return tuple(int(c) for c in np.flatnonzero(self.row(i)))

    def supports(self) -> list[tuple[int, ...]]:
        dense = self.to_dense()
        return [tuple(int(c) for c in np.flatnonzero(r)) for r in dense]

    def col_supports(self) -> list[tuple[int, ...]]:
        return self.T.supports()

    def row_weights(self) -> np.ndarray:
        return np.bitwise_count(self._words).sum(axis=1, dtype=np.int64)

    def col_weights(self) -> np.ndarray:
        return self.to_dense().sum(axis=0, dtype=np.int64)

    @property
    def nnz(self) -> int:
        return int(np.bitwise_count(self._words).sum(dtype=np.int64))

    def is_zero(self) -> bool:
        return not self._words.any()

    def __getitem__(self, key: tuple[int, int]) -> int:
        r, c = key
        if not (0 <= c < self._cols):
            raise IndexError("column out of range")
        word = self._words[r, c // WORD]
        return int((int(word) >> (c % WORD)) & 1)

    # algebra ------------------------------------------------------------

    @property
    def T(self) -> BitMatrix:
        return transpose(self)

    def __add__(self, other: BitMatrix) -> BitMatrix:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return BitMatrix._wrap(self._words ^ other._words, self._cols)

    __xor__ = __add__

    def __matmul__(self, other: BitMatrix) -> BitMatrix:
        return matmul(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self._words, other._words)

    def __hash__(self) -> int:
        return hash((self._rows, self._cols, self._words.tobytes()))

    def __repr__(self) -> str:
        if self._rows * self._cols <= 400:
            body = "\n".join("".join(map(str, r)) for r in self.to_dense())
            return f"BitMatrix({self._rows}x{self._cols})\n{body}"
        return f"BitMatrix({self._rows}x{self._cols}, nnz={self.nnz})"


def as_bitmatrix(m: BitMatrix | ArrayLike) -> BitMatrix:
    return m if isinstance(m, BitMatrix) else BitMatrix.from_dense(m)


def pack_vector(v: ArrayLike, cols: int | None = None) -> np.ndarray:
    """Pack a 0/1 vector into a 1D word array."""
    arr = np.asarray(v, dtype=np.uint8).reshape(1, -1) % 2
    if cols is not None and arr.shape[1] != cols:
        raise ValueError(f"vector length {arr.shape[1]} != {cols}")
    return _pack(arr, arr.shape[1])[0]


# structural operations ----------------------------------------------------


def transpose(m: BitMatrix) -> BitMatrix:
    return BitMatrix(_pack(np.ascontiguousarray(m.to_dense().T), m.rows), m.rows)


def hstack(blocks: Sequence[BitMatrix]) -> BitMatrix:
    rows = {b.rows for b in blocks}
    if len(rows) != 1:
        raise ValueError("hstack needs equal row counts")
    return BitMatrix.from_dense(np.hstack([b.to_dense() for b in blocks]))


def vstack(blocks: Sequence[BitMatrix]) -> BitMatrix:
    cols = {b.cols for b in blocks}
    if len(cols) != 1:
        raise ValueError("vstack needs equal column counts")
    words = np.vstack([b.words for b in blocks])
    return BitMatrix._wrap(words, blocks[0].cols)


def row_select(m: BitMatrix, rows: Sequence[int]) -> BitMatrix:
    idx = np.asarray(list(rows), dtype=np.int64)
    return BitMatrix._wrap(m.words[idx].reshape(len(idx), -1), m.cols)


def col_select(m: BitMatrix, cols: Sequence[int]) -> BitMatrix:
    idx = np.asarray(list(cols), dtype=np.int64)
    return BitMatrix.from_dense(m.to_dense()[:, idx].reshape(m.rows, len(idx)))


def kron(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """Kronecker product; ``a`` indexes the outer (row-block) coordinate."""
    return BitMatrix.from_dense(np.kron(a.to_dense(), b.to_dense()))


def matmul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    if a.cols != b.rows:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    out = np.zeros((a.rows, b.words.shape[1]), dtype=_WORD_DTYPE)
    if a.rows == 0 or a.cols == 0 or b.cols == 0:
        return BitMatrix._wrap(out, b.cols)
    dense = a.to_dense().astype(bool)
    bw = b.words
    if a.rows <= a.cols:
        for i in range(a.rows):
            support = np.flatnonzero(dense[i])
            if support.size:
                out[i] = np.bitwise_xor.reduce(bw[support], axis=0)
    else:
        for j in range(a.cols):
            hit = dense[:, j]
            if hit.any():
                out[hit] ^= bw[j]
    return BitMatrix._wrap(out, b.cols)


def mul_vec(m: BitMatrix, v: ArrayLike) -> np.ndarray:
    """Return ``m @ v`` for a single 0/1 vector as a 0/1 array."""
    packed = pack_vector(v, m.cols)
    return (np.bitwise_count(m.words & packed).sum(axis=1) & 1).astype(np.uint8)


def direct_sum(blocks: Sequence[BitMatrix]) -> BitMatrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    dense = np.zeros((rows, cols), dtype=np.uint8)
    r = c = 0
    for b in blocks:
        dense[r : r + b.rows, c : c + b.cols] = b.to_dense()
        r += b.rows
        c += b.cols
    return BitMatrix.from_dense(dense)


# elimination ----------------------------------------------------------------


def _eliminate(words: np.ndarray, cols: int, *, reduced: bool, limit: int | None = None):
    """In-place Gauss-Jordan on packed rows; lowest-index pivot first.

    Pivots are searched only in columns ``< limit`` (default: all columns).
    """
    rows = words.shape[0]
    limit = cols if limit is None else limit
    pivots: list[int] = []
    r = 0
    for c in range(limit):
        if r == rows:
            break
        wi, bi = divmod(c, WORD)
        shift = np.uint64(bi)
        col = (words[r:, wi] >> shift) & np.uint64(1)
        hits = np.flatnonzero(col)
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            words[[r, p]] = words[[p, r]]
        mask = ((words[:, wi] >> shift) & np.uint64(1)).astype(bool)
        mask[r] = False
        if not reduced:
            mask[:r] = False
        if mask.any():
            words[mask] ^= words[r]
        pivots.append(c)
        r += 1
    return pivots


def rank(m: BitMatrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    # eliminate along the shorter side
    target = m if m.rows <= m.cols else m.T
    words = np.array(target.words, copy=True)
    return len(_eliminate(words, target.cols, reduced=False))


def rref(m: BitMatrix) -> tuple[BitMatrix, list[int]]:
    words = np.array(m.words, copy=True)
    pivots = _eliminate(words, m.cols, reduced=True)
    return BitMatrix._wrap(words, m.cols), pivots


def kernel_basis(m: BitMatrix) -> BitMatrix:
    """Rows spanning ``{x : m x^T = 0}``, one per free column."""
    n = m.cols
    if n == 0:
        return BitMatrix.zeros(0, 0)
    reduced, pivots = rref(m)
    dense = reduced.to_dense()[: len(pivots)]
    free = [c for c in range(n) if c not in set(pivots)]
    basis = np.zeros((len(free), n), dtype=np.uint8)
    for t, f in enumerate(free):
        basis[t, f] = 1
        basis[t, pivots] = dense[:, f]
    return BitMatrix.from_dense(basis.reshape(len(free), n))


def row_basis(m: BitMatrix) -> BitMatrix:
    reduced, pivots = rref(m)
    return row_select(reduced, range(len(pivots)))


class RowSpace:
    """Precomputed echelon basis for repeated membership and solve queries."""

    def __init__(self, m: BitMatrix):
        self.cols = m.cols
        aug = hstack([m, BitMatrix.identity(m.rows)]) if m.rows else m
        words = np.array(aug.words, copy=True)
        pivots = _eliminate(words, aug.cols, reduced=True, limit=m.cols)
        self.pivots = pivots
        self.rank = len(pivots)
        full = BitMatrix._wrap(words[: self.rank], aug.cols).to_dense()
        self._basis = _pack(full[:, : m.cols], m.cols) if self.rank else np.zeros(
            (0, _num_words(m.cols)), dtype=_WORD_DTYPE
        )
        self._coeffs = full[:, m.cols :].astype(np.uint8)
        self._pivot_word = np.array([p // WORD for p in pivots], dtype=np.int64)
        self._pivot_bit = np.array([p % WORD for p in pivots], dtype=np.uint64)

    def reduce(self, vectors: ArrayLike) -> np.ndarray:
        """Reduce a batch of 0/1 row vectors against the basis; returns packed words."""
        arr = np.asarray(vectors, dtype=np.uint8)
        single = arr.ndim == 1
        arr = arr.reshape(1 if single else arr.shape[0], self.cols)
        packed = _pack(arr % 2, self.cols)
        for t in range(self.rank):
            hit = ((packed[:, self._pivot_word[t]] >> self._pivot_bit[t]) & np.uint64(1)).astype(bool)
            if hit.any():
                packed[hit] ^= self._basis[t]
        return packed[0] if single else packed

    def contains(self, v: ArrayLike) -> bool:
        arr = np.asarray(v)
        if arr.shape[-1] != self.cols:
            raise ValueError(f"vector length {arr.shape[-1]} != {self.cols}")
        return not self.reduce(arr).any()

    def contains_many(self, vectors: ArrayLike) -> np.ndarray:
        return ~self.reduce(vectors).any(axis=1)

    def solve(self, v: ArrayLike) -> np.ndarray | None:
        """Coefficients ``x`` with ``x @ m = v``, or ``None`` if ``v`` is outside."""
        v = np.asarray(v, dtype=np.uint8) % 2
        if v.shape != (self.cols,):
            raise ValueError(f"vector length {v.shape} != ({self.cols},)")
        residual = v.copy()
        x = np.zeros(self._coeffs.shape[1], dtype=np.uint8)
        dense_basis = _unpack(self._basis, self.cols) if self.rank else None
        for t, p in enumerate(self.pivots):
            if residual[p]:
                residual ^= dense_basis[t]
                x ^= self._coeffs[t]
        return None if residual.any() else x


def in_rowspace(m: BitMatrix, v: ArrayLike) -> bool:
    return RowSpace(m).contains(v)


# low-weight search --------------------------------------------------------------


def column_syndromes(m: BitMatrix) -> list[int]:
    """Each column of ``m`` as a Python integer bitmask over rows."""
    out = []
    for support in m.col_supports():
        s = 0
        for r in support:
            s |= 1 << r
        out.append(s)
    return out


def _tuples_with_syndrome(syn: Sequence[int], size: int) -> Iterator[tuple[tuple[int, ...], int]]:
    n = len(syn)
    if size == 1:
        for i in range(n):
            yield (i,), syn[i]
        return
    if size == 2:
        for i in range(n):
            si = syn[i]
            for j in range(i + 1, n):
                yield (i, j), si ^ syn[j]
        return

    def rec(start: int, prefix: tuple[int, ...], acc: int):
        if len(prefix) == size:
            yield prefix, acc
            return
        for i in range(start, n - (size - len(prefix)) + 1):
            yield from rec(i + 1, prefix + (i,), acc ^ syn[i])

    yield from rec(0, (), 0)


def zero_sum_subsets(syndromes: Sequence[int], weight: int) -> Iterator[tuple[int, ...]]:
    """All index sets of exactly ``weight`` items whose syndromes XOR to zero.

    Meet-in-the-middle: the larger half is enumerated, the smaller half is
    looked up in a table keyed by syndrome. Each set is produced once, as a
    sorted tuple.
    """
    if weight <= 0:
        return
    if weight == 1:
        for i, s in enumerate(syndromes):
            if s == 0:
                yield (i,)
        return
    low = weight - weight // 2
    high = weight // 2
    table: dict[int, list[tuple[int, ...]]] = defaultdict(list)
    for tup, s in _tuples_with_syndrome(syndromes, high):
        table[s].append(tup)
    for head, s in _tuples_with_syndrome(syndromes, low):
        for tail in table.get(s, ()):
            if tail[0] > head[-1]:
                yield head + tail


def low_weight_kernel_vectors(m: BitMatrix, max_weight: int) -> Iterator[tuple[int, ...]]:
    """Supports of nonzero kernel vectors of ``m`` with weight ``<= max_weight``,
    in increasing weight order."""
    syn = column_syndromes(m)
    for w in range(1, max_weight + 1):
        yield from zero_sum_subsets(syn, w)
