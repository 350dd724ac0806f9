"""Phenomenological Z-memory on the original and reduced K3,3 products."""

from __future__ import annotations

from hgpreduce import build_hgp, choose_schedule, color_code, named_code, product_coloring, reduce_code
from hgpreduce.memsim import NoiseModel, run_memory

SHOTS = 2000

c = named_code("k33")
q = build_hgp(c, c)
col = color_code(c)
pc = product_coloring(col, col, q)
reduced, _ = reduce_code(q, pc, choose_schedule(pc))

for label, code in (("[[106,16,4]]", q), ("[[81,16,4]]", reduced)):
    for p in (1e-2, 3e-3, 1e-3):
        res = run_memory(code, NoiseModel.uniform(p, 5), SHOTS, seed=1)
        print(f"{label} p={p:g}: BLER {res.bler:.4f} [{res.ci_low:.4f}, {res.ci_high:.4f}]")
