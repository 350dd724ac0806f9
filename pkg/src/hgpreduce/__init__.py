"""Qubit reduction for hypergraph-product codes.

Build a hypergraph-product code from two classical codes, color the checks,
choose which color groups to combine and drop the check-type qubits they free.
The rest of the package verifies what the reduction preserves: dimension,
logical bases, distances and hook-error containment. It also builds chain maps
for modified input codes and runs phenomenological memory simulations.
"""

from __future__ import annotations

from .codes import ClassicalCode, named_code
from .coloring import ProductColoring, color_code, product_coloring
from .gf2 import BitMatrix
from .hgp import CssCode, QubitLayout, build_hgp
from .planner import CombinationSchedule, choose_schedule, fold_symmetric_schedule
from .reducer import ReductionPlan, apply_reduction, build_reduction, reduce_code, weight_report

__all__ = [
    "BitMatrix",
    "ClassicalCode",
    "CombinationSchedule",
    "CssCode",
    "ProductColoring",
    "QubitLayout",
    "ReductionPlan",
    "apply_reduction",
    "build_hgp",
    "build_reduction",
    "choose_schedule",
    "color_code",
    "fold_symmetric_schedule",
    "named_code",
    "product_coloring",
    "reduce_code",
    "weight_report",
]
