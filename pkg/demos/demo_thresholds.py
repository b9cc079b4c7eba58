"""
Epidemic thresholds
===================

Closed-form reproduction numbers for both weighting schemes, the pairwise
growth-rate thresholds for both closures, and the two structural facts about
them: random assignment dominates matched fixed assignment, and both peak
when all weights are equal.
"""

from epinet import (check_theorem1, check_theorem2, r0_fixed, r0_random,
                    r_pairwise_classic, r_pairwise_modified)

k, tau, gamma = 6, 1.0, 1.0
w1, w2 = 1.4, 0.8

rand = r0_random(k, [w1, w2], [1 / 3, 2 / 3], tau, gamma)
fixed = r0_fixed(2, 4, w1, w2, tau, gamma)
print(f"R0 random  = {rand.value:.6f}  (edge probabilities r = "
      f"{rand.r[0]:.4f}, {rand.r[1]:.4f})")
print(f"R0 fixed   = {fixed.value:.6f}  <= random, as it must be")

classic = r_pairwise_classic(5, 0.2, 5.0, 1.25, 1.0, 1.0)
modified = r_pairwise_modified(2, 8, 10.0, 1.25, 0.5, 1.0)
print(f"pairwise R (classic closure)  = {classic.value:.5f}  "
      f"lambda = ({classic.lambda1:.4f}, {classic.lambda2:.4f})")
print(f"pairwise R (per-class closure) = {modified.value:.5f}")
print(f"equal weights collapse: R = tau*W*(k-2)/gamma = "
      f"{r_pairwise_classic(6, 0.4, 1.0, 1.0, 1.0, 1.0).value:.1f}")

t1 = check_theorem1(10_000, seed=7)
print(f"dominance property: {t1.samples} random draws, "
      f"{t1.violations} violations")

t2 = check_theorem2(101)
print(f"equal-weight maximum: argmax w1 = {t2.random_argmax_w1:.2f} "
      f"(random), {t2.fixed_argmax_w1:.2f} (fixed), "
      f"peak value {t2.random_max:.4f} vs theoretical "
      f"{t2.theoretical_max:.4f}")
