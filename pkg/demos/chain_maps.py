"""Chain maps between a reduced product code and its modified versions.

Adding a check that fuses two logical bits of the second input, or deleting an
informational bit, changes the product code. The induced maps still commute
with the checks, before and after reduction.
"""

from __future__ import annotations

import numpy as np

from hgpreduce import build_hgp, choose_schedule, color_code, named_code, product_coloring
from hgpreduce.codes import informational_bits
from hgpreduce.homomorphism import augmentation_instance, puncture_instance, verify_chain_map

c1, c2 = named_code("tiny-d2-x3"), named_code("rep3-x3")
col1, col2 = color_code(c1), color_code(c2)
schedule = choose_schedule(product_coloring(col1, col2, build_hgp(c1, c2)))

row = np.zeros((1, c2.n), dtype=np.uint8)
row[0, informational_bits(c2)[:2]] = 1
aug = augmentation_instance(c1, c2, row, col1, col2, schedule)
print(f"augment: k {aug.original.k} -> {aug.modified.k}, reduced n {aug.reduced_original.n} / {aug.reduced_modified.n}, "
      f"maps commute {verify_chain_map(aug.chain_map)} / {verify_chain_map(aug.reduced_chain_map)}")

for which, code in ((2, c2), (1, c1)):
    inst = puncture_instance(c1, c2, informational_bits(code)[:1], col1, col2, schedule, which=which)
    print(f"puncture input {which}: n {inst.reduced_original.n} -> {inst.reduced_modified.n}, "
          f"k {inst.original.k} -> {inst.modified.k}, maps commute {verify_chain_map(inst.reduced_chain_map)}")
