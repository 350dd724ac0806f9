"""Why the CNOT order matters after reduction.

Random orders on the reduced [[81,16,4]] code let a single ancilla fault spread
across two bit-type columns; the split order keeps every hook in one column.
"""

from __future__ import annotations

from hgpreduce import build_hgp, choose_schedule, color_code, named_code, product_coloring, reduce_code
from hgpreduce.sescheduler import effective_distance_probe, max_hook_lines, random_schedule, split_schedule

c = named_code("k33")
q = build_hgp(c, c)
col = color_code(c)
reduced, _ = reduce_code(q, product_coloring(col, col, q), choose_schedule(product_coloring(col, col, q)))

split = split_schedule(reduced)
print(f"split: {len(split.x_rounds)} X rounds, max columns per hook {max_hook_lines(reduced, split, 'X')}")
print(f"       probe (<= 3 faults): {effective_distance_probe(reduced, split, 3).status}")
for seed in range(3):
    s = random_schedule(reduced, seed)
    probe = effective_distance_probe(reduced, s, 3)
    print(f"random seed {seed}: max columns per hook {max_hook_lines(reduced, s, 'X')}, probe {probe.status}"
          + (f" with faults {list(probe.faults)}" if probe.faults else ""))
