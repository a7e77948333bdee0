"""
Matching solvers
================

Exhaustive search, the Hungarian algorithm, Sinkhorn and winner-takes-all
on the same cost matrix.
"""
import numpy as np

from sepmatch import exhaustive_best_permutation, hungarian, plan_entropy, plan_to_permutation, sinkhorn, winners

rng = np.random.default_rng(3)
C = rng.uniform(size=(6, 6))

# Exhaustive search and Hungarian agree on the optimal total cost.
print("exhaustive", exhaustive_best_permutation(C))
print("hungarian ", hungarian(C))

# Sinkhorn returns a soft plan. As epsilon shrinks the plan concentrates on
# the optimal permutation and its entropy drops toward 0.
for eps in (1.0, 0.1, 0.01):
    plan = sinkhorn(C, eps, max_iters=5000)
    print(f"eps={eps:<5} <pi,C>={np.sum(plan.entries * C):.4f} H={plan_entropy(plan):.3f} "
          f"rounded={plan_to_permutation(plan)} iters={plan.iterations_used}")

# Winner-takes-all lets each target pick its cheapest prediction, so two
# targets may pick the same one.
print("winners   ", winners(C))
