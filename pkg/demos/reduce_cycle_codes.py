"""Reduce the square products of three cycle codes and compare gate counts."""

from __future__ import annotations

from hgpreduce import build_hgp, choose_schedule, color_code, named_code, product_coloring, reduce_code, weight_report
from hgpreduce.reducer import cycle_savings_formula
from hgpreduce.verifier import verify_all

for name, v in (("k33", 3), ("heawood", 7), ("tutte-coxeter", 15)):
    c = named_code(name)
    q = build_hgp(c, c)
    col = color_code(c)
    pc = product_coloring(col, col, q)
    schedule = choose_schedule(pc)
    reduced, plan = reduce_code(q, pc, schedule)
    rep = weight_report(q, reduced)
    print(f"{name}: [{c.n},{c.k}] -> [[{q.n},{q.k}]] -> [[{reduced.n},{reduced.k}]]")
    print(f"  {c.m} checks in {col.num_colors} colors, groups X {sorted(schedule.x_groups)} Z {sorted(schedule.z_groups)}")
    print(f"  check weights ({rep.w_q},{rep.w_c}) -> ({rep.reduced_w_q},{rep.reduced_w_c})")
    print(f"  two-qubit gates {rep.n2q} -> {rep.reduced_n2q}, saving {rep.n2q - rep.reduced_n2q} "
          f"(formula {cycle_savings_formula(v, 3)})")
    if name == "k33":
        for r in verify_all(q, reduced):
            print(f"  {'PASS' if r.ok else 'FAIL'} {r.check}")
