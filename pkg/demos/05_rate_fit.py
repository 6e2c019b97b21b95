"""End-to-end pipeline: simulate, write CSV, fit the growth exponent.

Mirrors ``logistic-oco simulate ... --out run.csv`` followed by
``logistic-oco fit-rate --in run.csv``.
"""

from __future__ import annotations

import logging
import tempfile
from pathlib import Path

from logistic_oco import ExperimentConfig, fit_rate, read_csv, run_experiment, write_csv

logging.basicConfig(level=logging.ERROR)

records = []
for T in (1_000, 3_000, 10_000, 30_000):
    for chi in (1, -1):
        cfg = ExperimentConfig(algorithm="ftrl", environment="hard1d", chi=chi, D=3.0, T=T, reps=10,
                               seed=5)
        records += run_experiment(cfg)

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "ftrl.csv"
    write_csv(records, str(path))
    print(f"wrote {len(records)} rows ({path.stat().st_size} bytes)")
    fit = fit_rate(read_csv(str(path)))
print(f"regret ~ T^{fit.slope:.3f}  (log-log residual {fit.residual:.3f})")
