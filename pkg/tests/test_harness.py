from __future__ import annotations

import json
import math

import numpy as np
import pytest

from logistic_oco.algorithms import ftrl_regret_bound
from logistic_oco.errors import ParameterError
from logistic_oco.harness import (FIELDS, ExperimentConfig, RunRecord, auto_epsilon, derive_seed, fit_rate,
                                  log_checkpoints, read_csv, records_to_csv, run_experiment, write_csv)


def point_mass(**kw):
    base = dict(environment="custom-atomic", atoms=[[0.0]], probs=[1.0], D=3.0, T=200, reps=2)
    base.update(kw)
    return ExperimentConfig(**base)


@pytest.mark.parametrize("algo", ["ftrl", "ogd", "ons"])
@pytest.mark.parametrize("mode", ["online", "stochastic"])
def test_point_mass_zero_metrics(algo, mode):
    recs = run_experiment(point_mass(algorithm=algo, mode=mode))
    metric = "regret" if mode == "online" else "excess_loss"
    other = "excess_loss" if mode == "online" else "regret"
    assert recs
    for r in recs:
        assert abs(getattr(r, metric)) <= 1e-12
        assert math.isnan(getattr(r, other))


def test_same_config_identical_csv():
    cfg = ExperimentConfig(algorithm="ogd", environment="hard1d", D=16.0, T=500, reps=3, seed=11)
    assert records_to_csv(run_experiment(cfg)) == records_to_csv(run_experiment(cfg))
    other = ExperimentConfig(algorithm="ogd", environment="hard1d", D=16.0, T=500, reps=3, seed=12)
    assert records_to_csv(run_experiment(cfg)) != records_to_csv(run_experiment(other))


def test_csv_schema(tmp_path):
    cfg = ExperimentConfig(algorithm="ftrl", environment="hard1d", D=3.0, T=300, reps=2, seed=0)
    recs = run_experiment(cfg)
    text = records_to_csv(recs)
    assert "\r" not in text
    lines = text.split("\n")
    assert lines[0] == ",".join(FIELDS) == ",".join(f for f in RunRecord.__dataclass_fields__)
    assert lines[-1] == ""
    regret = float(lines[-2].split(",")[FIELDS.index("regret")])
    assert regret == recs[-1].regret
    path = tmp_path / "out.csv"
    write_csv(recs, str(path))
    back = read_csv(str(path))
    assert len(back) == len(recs)
    for got, want in zip(back, recs):
        assert got.regret == want.regret and math.isnan(got.excess_loss)
        assert (got.run_id, got.seed, got.t, got.epsilon) == (want.run_id, want.seed, want.t, want.epsilon)


def test_csv_float_precision():
    rec = RunRecord("r", "ftrl", "hard1d", 1, 1, 3.0, 1 / 3, 10, 0, 1, 10, math.pi, math.nan)
    row = records_to_csv([rec]).split("\n")[1].split(",")
    assert float(row[FIELDS.index("regret")]) == math.pi
    digits = row[FIELDS.index("epsilon")].replace("0.", "", 1)
    assert len(digits) >= 12 and float(row[FIELDS.index("epsilon")]) == 1 / 3
    assert row[FIELDS.index("excess_loss")] == "nan"


def test_read_csv_rejects_bad_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(ParameterError):
        read_csv(str(path))


@pytest.mark.parametrize("kw", [dict(T=0), dict(reps=0), dict(algorithm="sgd"), dict(environment="x"),
                                dict(chi=0), dict(mode="batch"), dict(D=-1.0), dict(epsilon=-0.1),
                                dict(checkpoints=[0]), dict(environment="custom-atomic")])
def test_config_validation(kw):
    with pytest.raises(ParameterError):
        ExperimentConfig(**kw)


def test_config_from_json_aliases():
    cfg = ExperimentConfig.from_json(json.dumps({"algo": "ons", "env": "hard2d", "d": 30.0, "t": 50}))
    assert (cfg.algorithm, cfg.environment, cfg.D, cfg.T) == ("ons", "hard2d", 30.0, 50)
    with pytest.raises(ParameterError, match="unknown"):
        ExperimentConfig.from_dict({"colour": 1})


def test_ftrl_rejected_in_2d():
    with pytest.raises(ParameterError):
        run_experiment(ExperimentConfig(algorithm="ftrl", environment="hard2d", D=30.0, T=10))


def test_auto_epsilon():
    D, T = 16.0, 10_000
    eps = auto_epsilon("hard1d", D, T)
    assert T == pytest.approx(D / (256 * eps ** 1.5), rel=1e-12)
    assert auto_epsilon("hard1d", D, 1) == 1 / 25
    eps2 = auto_epsilon("hard2d", 30.0, 10 ** 6)
    assert 10 ** 6 == pytest.approx(30.0 / (256 * eps2 ** 2), rel=1e-12)


def test_log_checkpoints():
    cps = log_checkpoints(1000)
    assert cps[0] == 1 and cps[-1] == 1000
    assert cps == sorted(set(cps))
    ratios = np.array(cps[5:]) / np.array(cps[4:-1])
    assert np.all(ratios < 1.8)
    assert log_checkpoints(1) == [1]


def test_derive_seed_distinct():
    seeds = {derive_seed(0, r) for r in range(1000)}
    assert len(seeds) == 1000
    assert derive_seed(5, 3) == derive_seed(5, 3)
    assert derive_seed(5, 3) != derive_seed(6, 3)


def test_seeds_recorded_per_rep():
    recs = run_experiment(ExperimentConfig(T=50, reps=3, seed=9, checkpoints=[50]))
    assert [r.seed for r in recs] == [derive_seed(9, k) for k in range(3)]
    assert [r.rep for r in recs] == [0, 1, 2]


def test_excess_loss_nonnegative_2d():
    cfg = ExperimentConfig(algorithm="ons", environment="hard2d", D=30.0, T=300, reps=2, mode="stochastic",
                           epsilon=0.003)
    for r in run_experiment(cfg):
        assert r.excess_loss >= -1e-10
        assert r.n_dim == 2


def test_ftrl_online_regret_bound_short():
    cfg = ExperimentConfig(algorithm="ftrl", environment="hard1d", chi=-1, D=3.0, T=5000, reps=3, seed=1)
    for r in run_experiment(cfg):
        assert r.regret <= ftrl_regret_bound(r.T, r.D)


def _synthetic(fn):
    recs = []
    for T in (10, 100, 1000, 10_000):
        recs.append(RunRecord("s", "ftrl", "hard1d", 1, 1, 3.0, 0.1, T, 0, 0, T, fn(T), math.nan))
        recs.append(RunRecord("s", "ftrl", "hard1d", 1, 1, 3.0, 0.1, T, 0, 0, 1, 99.0, math.nan))
    return recs


def test_fit_rate_synthetic():
    fit = fit_rate(_synthetic(lambda T: 2.5 * T ** (1 / 3)))
    assert fit.slope == pytest.approx(1 / 3, abs=1e-12)
    assert fit.intercept == pytest.approx(math.log(2.5), abs=1e-12)
    assert fit.residual < 1e-12
    assert fit_rate(_synthetic(lambda T: 4.0)).slope == pytest.approx(0.0, abs=1e-12)


def test_fit_rate_errors():
    with pytest.raises(ParameterError):
        fit_rate(_synthetic(lambda T: -1.0))
    with pytest.raises(ParameterError):
        fit_rate(_synthetic(lambda T: 1.0)[:4])


def test_warns_beyond_exp_d(caplog):
    caplog.set_level("WARNING", logger="logistic_oco")
    run_experiment(ExperimentConfig(D=2.0, T=20, checkpoints=[20]))
    assert any("exceeds e^D" in m for m in caplog.messages)
