"""Surrogate minorants of the logistic loss.

At each played point the learner replaces log(1 + exp(x w)) by a function
that touches it there and stays below it on [-D, D]. Depending on where the
play point and instance sit, the surrogate is a quadratic or a tangent line
with a one-sided quadratic correction.
"""

from __future__ import annotations

import numpy as np

from logistic_oco import build_surrogate, logistic_loss, verify_minorant

D = 4.0
ws = np.linspace(-D, D, 9)

for w_t, x_t in [(0.0, 1.0), (2.0, 0.8), (-3.0, -0.5), (1.5, 0.1)]:
    params, f = build_surrogate(w_t, x_t, D)
    gap = np.array([logistic_loss([w], [x_t]) for w in ws]) - f(ws)
    print(f"w_t={w_t:+.1f} x_t={x_t:+.2f}  case={params.case.value:<10} "
          f"tangency={f(w_t) - logistic_loss([w_t], [x_t]):+.1e}  min gap on grid={gap.min():.2e}")

# The same property, swept over many random (D, x_t, w_t) triples.
print()
print(verify_minorant(samples=5000, seed=1).to_text())
