"""Independent checks of what a reduction must preserve.

Every check returns a :class:`Report` instead of raising, so a pipeline can
collect them all into one JSON document.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Literal

import numpy as np

from . import gf2
from .gf2 import BitMatrix, RowSpace
from .hgp import CssCode

Side = Literal["X", "Z"]


@dataclass
class Report:
    check: str
    ok: bool
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return _jsonable(asdict(self))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def verify_css(code: CssCode) -> Report:
    """``hx hz^T = 0``; lists the offending (X row, Z row) pairs."""
    product = (code.hx @ code.hz.T).to_dense()
    pairs = [(int(r), int(c)) for r, c in zip(*np.nonzero(product))]
    return Report("css", not pairs, {"violations": pairs[:50], "num_violations": len(pairs)})


def verify_k(code: CssCode, reduced: CssCode) -> Report:
    return Report("k", code.k == reduced.k, {"k_before": code.k, "k_after": reduced.k})


def verify_logical_basis(
    code: CssCode, logical_x: BitMatrix | None = None, logical_z: BitMatrix | None = None
) -> Report:
    """Kernel membership, no row inside the stabilizer space, pairing equal to ``I``.

    The bases default to the ones stored on ``code``; passing them explicitly
    lets callers test corrupted bases without constructing an invalid code.
    """
    lx = code.logical_x if logical_x is None else logical_x
    lz = code.logical_z if logical_z is None else logical_z
    if lx is None or lz is None:
        return Report("logical_basis", False, {"error": "no logical basis"})
    in_kernel = (code.hz @ lx.T).is_zero() and (code.hx @ lz.T).is_zero()
    sx, sz = RowSpace(code.hx), RowSpace(code.hz)
    x_trivial = [int(r) for r in np.flatnonzero(sx.contains_many(lx.to_dense()))] if lx.rows else []
    z_trivial = [int(r) for r in np.flatnonzero(sz.contains_many(lz.to_dense()))] if lz.rows else []
    paired = lx.rows == lz.rows and (lx @ lz.T) == BitMatrix.identity(lx.rows)
    ok = in_kernel and not x_trivial and not z_trivial and paired and lx.rows == code.k
    return Report(
        "logical_basis",
        bool(ok),
        {
            "in_kernel": in_kernel,
            "x_rows_in_stabilizers": x_trivial,
            "z_rows_in_stabilizers": z_trivial,
            "pairing_identity": bool(paired),
            "rows": lx.rows,
            "k": code.k,
        },
    )


def default_cap(n: int) -> int:
    """Largest exhaustive weight cap allowed for ``n`` qubits."""
    if n <= 120:
        return 5
    if n <= 700:
        return 3
    return 2


def _side_matrices(code: CssCode, side: Side):
    if side == "X":
        return code.hz, code.hx, code.logical_x
    return code.hx, code.hz, code.logical_z


def certify_distance(code: CssCode, d_claim: int, cap: int | None = None, side: Side = "X") -> Report:
    """Exhaustive low-weight logical search plus the canonical upper bound.

    Searches ``ker(check) \\ rs(stabilizers)`` for supports of weight
    ``<= cap`` (``cap`` defaults to ``d_claim - 1``). Status is
    ``counterexample`` if one is found, ``confirmed-min`` if none is and a
    canonical logical of weight ``d_claim`` exists, else ``no-logical-below-cap``.
    A cap above the size guard is clamped and the report marked partial.
    """
    cap = d_claim - 1 if cap is None else cap
    limit = default_cap(code.n)
    partial = cap > limit
    cap = min(cap, limit)
    check, stab, logicals = _side_matrices(code, side)
    rs = RowSpace(stab)
    found: tuple[int, ...] | None = None
    examined = 0
    for support in gf2.low_weight_kernel_vectors(check, cap):
        examined += 1
        v = np.zeros(code.n, dtype=np.uint8)
        v[list(support)] = 1
        if not rs.contains(v):
            found = support
            break
    upper = None
    if logicals is not None and logicals.rows:
        upper = int(logicals.row_weights().min())
    if found is not None:
        status = "counterexample"
    elif not partial and cap >= d_claim - 1 and upper == d_claim:
        status = "confirmed-min"
    else:
        status = "no-logical-below-cap"
    ok = status == "confirmed-min" or (status == "no-logical-below-cap" and upper == d_claim)
    return Report(
        f"distance_{side}",
        ok,
        {
            "status": status,
            "side": side,
            "d_claim": d_claim,
            "cap": cap,
            "partial": partial,
            "upper_bound": upper,
            "kernel_vectors_examined": examined,
            "counterexample": list(found) if found is not None else None,
        },
    )


def diagonal_mirror(code: CssCode) -> list[int] | None:
    """Qubit permutation reflecting the grid: ``(r, c) -> (c, r)`` in both sectors.

    ``None`` if the layout is not square or a kept qubit's mirror image was removed.
    """
    lay = code.layout
    if lay.n1 != lay.n2 or lay.m1 != lay.m2:
        return None
    out = []
    for q in range(code.n):
        sector, r, c = lay.coords(q)
        orig = lay.bit_index(c, r) if sector == "bit" else lay.check_index(c, r)
        image = lay.index_of(orig)
        if image is None:
            return None
        out.append(image)
    return out


def verify_zx_fold(code: CssCode, mirror: list[int] | None = None) -> bool:
    """Does ``mirror`` carry the set of X-check supports onto the set of Z-check supports?"""
    if mirror is None:
        mirror = diagonal_mirror(code)
    if mirror is None or sorted(mirror) != list(range(code.n)):
        return False
    x_sets = sorted(tuple(sorted(mirror[q] for q in s)) for s in code.hx.supports())
    z_sets = sorted(tuple(sorted(s)) for s in code.hz.supports())
    return x_sets == z_sets


def _lines(code: CssCode, support: np.ndarray, side: Side) -> int:
    """Distinct bit-type columns (X side) or rows (Z side) touched."""
    is_bit, row, col = code.layout.sector_arrays
    mask = support.astype(bool) & is_bit
    return len(np.unique(col[mask] if side == "X" else row[mask]))


def random_deformations(stab: BitMatrix, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` random stabilizer elements: half sparse (1 to 4 generators), half dense."""
    dense = stab.to_dense().astype(np.float32)
    m = dense.shape[0]
    coeffs = np.zeros((count, m), dtype=np.float32)
    if m == 0:
        return np.zeros((count, stab.cols), dtype=np.uint8)
    half = count // 2
    for t in range(half):
        picks = rng.choice(m, size=min(m, int(rng.integers(1, 5))), replace=False)
        coeffs[t, picks] = 1
    coeffs[half:] = rng.integers(0, 2, size=(count - half, m))
    return (coeffs @ dense).astype(np.int64) % 2


def verify_sector_bounds(
    code: CssCode,
    logical_rows: BitMatrix | np.ndarray,
    side: Side = "X",
    bound: int | None = None,
    deformations: int = 200,
    seed: int = 0,
) -> Report:
    """Each logical, and stabilizer-deformed copies, spans at least ``bound`` lines.

    Lines are bit-type columns for X logicals and bit-type rows for Z logicals;
    ``bound`` defaults to the distance of the input code running along them.
    """
    if bound is None:
        if code.inputs is None:
            raise ValueError("pass bound explicitly for codes without classical inputs")
        c1, c2 = code.inputs
        bound = c2.distance if side == "X" else c1.distance
    rows = gf2.as_bitmatrix(logical_rows).to_dense()
    stab = code.hx if side == "X" else code.hz
    rng = np.random.default_rng(seed)
    worst = math.inf
    violations = []
    for r, row in enumerate(rows):
        variants = np.vstack([row[None, :], (random_deformations(stab, deformations, rng) + row) % 2])
        for v in variants:
            lines = _lines(code, v, side)
            worst = min(worst, lines)
            if lines < bound:
                violations.append(r)
                break
    return Report(
        f"sector_bounds_{side}",
        not violations,
        {"bound": bound, "min_lines": worst, "violating_rows": violations, "variants_per_row": deformations + 1},
    )


def verify_rowspace_containment(code: CssCode, reduced: CssCode) -> Report:
    """Reduced checks restricted to bit-type qubits lie in the original checks' span there."""
    out = {}
    ok = True
    nb = code.layout.num_bit_type
    orig_bits = [q for q in range(code.n) if code.layout.original(q) < nb]
    red_pos = {reduced.layout.original(q): q for q in range(reduced.n)}
    for side, big, small in (("X", code.hx, reduced.hx), ("Z", code.hz, reduced.hz)):
        cols = [code.layout.original(q) for q in orig_bits]
        if any(c not in red_pos for c in cols):
            return Report("rowspace_containment", False, {"error": "reduction removed a bit-type qubit"})
        rs = RowSpace(gf2.col_select(big, orig_bits))
        restricted = gf2.col_select(small, [red_pos[c] for c in cols])
        outside = [int(r) for r in np.flatnonzero(~rs.contains_many(restricted.to_dense()))] if restricted.rows else []
        out[side] = outside
        ok &= not outside
    return Report("rowspace_containment", bool(ok), {"rows_outside_X": out["X"], "rows_outside_Z": out["Z"]})


def verify_deformation_weights(
    code: CssCode, d: int, samples: int = 10_000, seed: int = 0, side: Side = "X"
) -> Report:
    """Random stabilizer deformations of canonical logicals never weigh less than ``d``."""
    _, stab, logicals = _side_matrices(code, side)
    if logicals is None:
        return Report(f"deformation_{side}", False, {"error": "no logical basis"})
    rng = np.random.default_rng(seed)
    rows = logicals.to_dense().astype(np.int64)
    picks = rng.integers(0, rows.shape[0], size=samples)
    deformed = (random_deformations(stab, samples, rng) + rows[picks]) % 2
    weights = deformed.sum(axis=1)
    lowest = int(weights.min())
    return Report(f"deformation_{side}", lowest >= d, {"samples": samples, "min_weight": lowest, "d": d})


def verify_all(code: CssCode, reduced: CssCode, *, cap: int | None = None) -> list[Report]:
    """Every check for a (code, reduced code) pair, distance search within the size guard."""
    before, after = verify_css(code), verify_css(reduced)
    before.check, after.check = "css_before", "css_after"
    reports = [before, after, verify_k(code, reduced)]
    if reduced.logical_x is not None:
        reports.append(verify_logical_basis(reduced))
    if code.layout.num_bit_type and len(reduced.layout) == reduced.n:
        reports.append(verify_rowspace_containment(code, reduced))
    for side, d in (("X", reduced.d_x), ("Z", reduced.d_z)):
        if d is None or not math.isfinite(d) or reduced.logical_x is None:
            continue
        use_cap = cap if cap is not None else min(int(d) - 1, default_cap(reduced.n))
        reports.append(certify_distance(reduced, int(d), use_cap, side))
        if code.inputs is not None:
            lx = reduced.logical_x if side == "X" else reduced.logical_z
            reports.append(verify_sector_bounds(reduced, lx, side))
    return reports
