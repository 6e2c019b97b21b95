"""Why small perturbations are hard to detect.

The most powerful test between coins with bias p and p + eps succeeds with
probability at most (1 + TV)/2, and Pinsker's inequality caps TV by
sqrt(m eps^2 / p). The Monte-Carlo success rate stays under that ceiling.
"""

from __future__ import annotations

import numpy as np

from logistic_oco.info_theory import (coin, coin_sample_complexity, likelihood_ratio_rule,
                                      run_distinguisher, success_ceiling)

p, eps, reps = 0.25, 0.05, 50_000
print(f"tosses needed for 3/4 success: at least {coin_sample_complexity(p, eps):.2f}")
pair = (coin(p), coin(p + eps))
rule = likelihood_ratio_rule(pair)
rng = np.random.default_rng(0)
for m in (1, 5, 25, 100, 400):
    rate = run_distinguisher(pair, rule, m, reps, rng)
    print(f"m={m:>4}  success={rate:.4f}  ceiling={min(success_ceiling(m, p, eps, reps), 1.0):.4f}")
