from __future__ import annotations

import sys
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

from hgpreduce.codes import ClassicalCode, QC_PROTO, from_rows, named_code  # noqa: E402
from hgpreduce.coloring import ProductColoring, color_code, lifted_coloring, product_coloring  # noqa: E402
from hgpreduce.hgp import CssCode, build_hgp  # noqa: E402
from hgpreduce.planner import CombinationSchedule, choose_schedule  # noqa: E402
from hgpreduce.reducer import ReductionPlan, reduce_code  # noqa: E402

settings.register_profile("repo", deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True)
settings.load_profile("repo")


@dataclass(frozen=True, eq=False)
class Pipeline:
    classical: ClassicalCode
    code: CssCode
    pc: ProductColoring
    schedule: CombinationSchedule
    reduced: CssCode
    plan: ReductionPlan


@lru_cache(maxsize=None)
def pipeline(name: str) -> Pipeline:
    """Square HGP of a named code, reduced with the optimal schedule."""
    c = named_code(name)
    q = build_hgp(c, c)
    if name.startswith("qc"):
        col = lifted_coloring(color_code(from_rows(QC_PROTO)), int(name[2:]), c)
    else:
        col = color_code(c)
    pc = product_coloring(col, col, q)
    s = choose_schedule(pc)
    r, plan = reduce_code(q, pc, s)
    return Pipeline(c, q, pc, s, r, plan)


@pytest.fixture(scope="session")
def k33():
    return pipeline("k33")


@pytest.fixture(scope="session")
def heawood():
    return pipeline("heawood")


@pytest.fixture(scope="session")
def rep3():
    return pipeline("rep3")


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
