"""Hard distributions and their separation properties.

Two distributions that differ by a small perturbation have expected losses
whose near-minimizers lie in disjoint regions. Any learner ending in the
wrong region pays an excess loss of at least eps/20; telling the two apart
takes many samples.
"""

from __future__ import annotations

import numpy as np

from logistic_oco import Domain, build_1d, build_2d, excess_loss, expected_loss_min, verify_lemma2, verify_lemma3

D, eps = 16.0, 0.04
plus, minus = build_1d(eps, D, +1), build_1d(eps, D, -1)
for name, dist in [("plus", plus), ("minus", minus)]:
    w, v = expected_loss_min(dist, Domain(D))
    print(f"1-D {name:<5}: atoms={dist.atoms[:, 0].round(5)} probs={dist.probs.round(5)} argmin={w[0]:.3f}")
print(f"excess of plus at w=D: {excess_loss(plus, Domain(D), D):.4f} (floor {eps / 20})")
print(verify_lemma2(D, eps).to_text())

D2, eps2 = 30.0, 0.003
w0, _ = expected_loss_min(build_2d(0.0, D2, +1, strict=False), Domain(D2, 2))
print(f"2-D unperturbed minimizer: {np.round(w0, 4)} (expected (0, {0.9 * D2}))")
print(verify_lemma3(D2, eps2).to_text())
