#!/usr/bin/env python3
"""Why the driving must be invertible.

With an invertible two-sided shift underneath, the top space of a matrix
cocycle is a function of the full symbol sequence.  Truncating to a one-sided
(non-invertible) shift would force it to depend on the future alone.  For two
non-commuting generators that is impossible, and the computation shows it:
estimates across windows sharing one future but differing in the past land on
visibly different lines.
"""

import numpy as np

from oseledets import DrivingSystem, noncommuting_base_demo

driving = DrivingSystem.iid([0.5, 0.5], seed=42)

print("=== commuting generators: the top space ignores the past ===")
pasts = driving.sample_past_variants(12, 100, 20)
demo = noncommuting_base_demo(np.diag([2.0, 0.5]), np.diag([3.0, 1 / 3]), pasts)
print(f"max pairwise gap across pasts: {demo.max_gap:.2e} "
      f"(common eigenvectors -> one constant answer)")

print()
print("=== non-commuting generators: the past decides ===")
pasts50 = driving.sample_past_variants(50, 100, 20)
a0 = np.diag([3.0, 1 / 3])
a1 = np.array([[0.0, 1 / 3], [3.0, 0.0]])
demo = noncommuting_base_demo(a0, a1, pasts50)
print(f"commutator norm: {demo.commutator_norm:.3f}")
print(f"estimated exponent separation: {demo.exponent_gap_estimate:.4f}")
print(f"max pairwise gap across {len(pasts50)} pasts: {demo.max_gap:.3f}")
large = sum(1 for _, g in demo.gaps if g > 0.5)
print(f"{large} of {len(demo.gaps)} pairs disagree by gap > 0.5: no splitting "
      f"can exist for the one-sided system")
