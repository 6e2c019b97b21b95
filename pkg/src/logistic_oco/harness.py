"""Seeded experiment runner: learners against atomic environments.

Each repetition draws ``T`` i.i.d. instances from the environment, drives one
learner, and at every checkpoint ``t`` records

* ``regret``: cumulative loss minus the best fixed predictor's loss on the
  first ``t`` instances (``mode="online"``), and
* ``excess_loss``: exact excess expected loss of the running average of
  ``w_1..w_t`` (``mode="stochastic"``).

The metric not requested by ``mode`` is written as ``nan``.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import logging
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .algorithms import OGD, ONS, LogisticFTRL
from .core import Domain
from .errors import ParameterError
from .hard_instances import (AtomicDistribution, build_1d, build_2d, expected_loss, expected_loss_min,
                             hard1d_window, hard2d_window, sample_indices)
from .optimize import minimize_on_ball

log = logging.getLogger(__name__)

ALGORITHMS = ("ftrl", "ogd", "ons")
ENVIRONMENTS = ("hard1d", "hard2d", "custom-atomic")
MODES = ("stochastic", "online")

# Flag-style aliases accepted in config documents.
_ALIASES = {"algo": "algorithm", "env": "environment", "d": "D", "t": "T"}


@dataclass
class ExperimentConfig:
    algorithm: str = "ftrl"
    environment: str = "hard1d"
    chi: int = 1
    D: float = 3.0
    epsilon: float | str = "auto"
    T: int = 1000
    reps: int = 1
    seed: int = 0
    checkpoints: str | list[int] = "log"
    mode: str = "online"
    out: str | None = None
    eta: float | None = None
    strict: bool = False
    atoms: list | None = None
    probs: list | None = None

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ParameterError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        if self.environment not in ENVIRONMENTS:
            raise ParameterError(f"environment must be one of {ENVIRONMENTS}, got {self.environment!r}")
        if self.mode not in MODES:
            raise ParameterError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.chi not in (-1, 1):
            raise ParameterError(f"chi must be -1 or +1, got {self.chi}")
        if not (isinstance(self.T, int) and self.T >= 1):
            raise ParameterError(f"T must be an integer >= 1, got {self.T}")
        if not (isinstance(self.reps, int) and self.reps >= 1):
            raise ParameterError(f"reps must be an integer >= 1, got {self.reps}")
        if not self.D > 0:
            raise ParameterError(f"D must be positive, got {self.D}")
        if self.epsilon != "auto" and not (isinstance(self.epsilon, (int, float)) and self.epsilon >= 0):
            raise ParameterError(f"epsilon must be 'auto' or a nonnegative number, got {self.epsilon!r}")
        if self.environment == "custom-atomic" and (self.atoms is None or self.probs is None):
            raise ParameterError("custom-atomic environment needs atoms and probs")
        if self.checkpoints != "log":
            cps = list(self.checkpoints)
            if not cps or any(not (1 <= int(c) <= self.T) for c in cps):
                raise ParameterError(f"checkpoints must lie in [1, T], got {cps}")

    @classmethod
    def from_dict(cls, doc: dict) -> ExperimentConfig:
        names = {f.name for f in dataclasses.fields(cls)}
        kwargs = {}
        for key, value in doc.items():
            key = _ALIASES.get(key, key)
            if key not in names:
                raise ParameterError(f"unknown config key {key!r}")
            kwargs[key] = value
        return cls(**kwargs)

    @classmethod
    def from_json(cls, text: str) -> ExperimentConfig:
        return cls.from_dict(json.loads(text))


@dataclass
class RunRecord:
    run_id: str
    algorithm: str
    environment: str
    chi: int
    n_dim: int
    D: float
    epsilon: float
    T: int
    rep: int
    seed: int
    t: int
    regret: float
    excess_loss: float


FIELDS = [f.name for f in dataclasses.fields(RunRecord)]
_INT_FIELDS = {"chi", "n_dim", "T", "rep", "seed", "t"}
_FLOAT_FIELDS = {"D", "epsilon", "regret", "excess_loss"}


def auto_epsilon(environment: str, D: float, T: int) -> float:
    """Largest eps the sample budget ``T`` cannot resolve, capped at the window top.

    1-D: ``T = D / (256 eps^1.5)``. 2-D: ``T = D / (256 eps^2)``.
    """
    if environment == "hard1d":
        return min((D / (256.0 * T)) ** (2.0 / 3.0), hard1d_window(D)[1])
    if environment == "hard2d":
        return min(math.sqrt(D / (256.0 * T)), hard2d_window(D)[1])
    return 0.0


def resolve_epsilon(cfg: ExperimentConfig) -> float:
    if cfg.epsilon == "auto":
        return auto_epsilon(cfg.environment, cfg.D, cfg.T)
    return float(cfg.epsilon)


def build_environment(cfg: ExperimentConfig) -> AtomicDistribution:
    eps = resolve_epsilon(cfg)
    if cfg.environment == "hard1d":
        return build_1d(eps, cfg.D, cfg.chi, strict=cfg.strict)
    if cfg.environment == "hard2d":
        return build_2d(eps, cfg.D, cfg.chi, strict=cfg.strict)
    return AtomicDistribution(np.asarray(cfg.atoms, dtype=float), np.asarray(cfg.probs, dtype=float),
                              name="custom-atomic")


def make_learner(algorithm: str, D: float, dim: int, T: int, eta: float | None = None):
    if algorithm == "ftrl":
        if dim != 1:
            raise ParameterError("ftrl is one-dimensional; use ogd or ons in 2-D")
        return LogisticFTRL(D, eta=eta, T=T)
    if algorithm == "ogd":
        return OGD(D, dim)
    if algorithm == "ons":
        return ONS(D, dim)
    raise ParameterError(f"unknown algorithm {algorithm!r}")


def log_checkpoints(T: int, ratio: float = 1.5) -> list[int]:
    """Roughly geometric checkpoints ``1, 2, 3, 5, 8, ...`` ending at ``T``."""
    cps = set()
    v = 1.0
    while v < T:
        cps.add(int(round(v)))
        v *= ratio
    cps.add(T)
    return sorted(c for c in cps if 1 <= c <= T)


def derive_seed(master: int, rep: int) -> int:
    """Per-repetition seed from ``(master, rep)`` via NumPy's ``SeedSequence`` spawning."""
    ss = np.random.SeedSequence(entropy=master, spawn_key=(rep,))
    return int(ss.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


def run_single(dist: AtomicDistribution, algorithm: str, D: float, T: int, rng: np.random.Generator,
               checkpoints: Iterable[int], mode: str = "online", eta: float | None = None,
               minimum: float | None = None) -> list[tuple[int, float, float]]:
    """One repetition; returns ``(t, regret, excess_loss)`` at each checkpoint."""
    dim = dist.dim
    learner = make_learner(algorithm, D, dim, T, eta)
    idx = sample_indices(dist, rng, T)
    if dim == 1:
        stream = dist.atoms[idx, 0].tolist()
        w_sum = 0.0
    else:
        stream = list(dist.atoms[idx])
        w_sum = np.zeros(dim)
    if mode == "stochastic" and minimum is None:
        minimum = expected_loss_min(dist, Domain(D, dim))[1]
    cps = sorted(set(checkpoints))
    out = []
    k = 0
    cum = 0.0
    for t, x in enumerate(stream, 1):
        w_sum = w_sum + learner.predict()
        cum += learner.update(x)
        if t == cps[k]:
            regret = excess = math.nan
            if mode == "online":
                counts = np.bincount(idx[:t], minlength=len(dist.probs)).astype(float)
                regret = cum - minimize_on_ball(dist.atoms, counts, D)[1]
            else:
                excess = expected_loss(dist, np.atleast_1d(w_sum / t)) - minimum
            out.append((t, regret, excess))
            k += 1
            if k == len(cps):
                break
    return out


def run_experiment(cfg: ExperimentConfig) -> list[RunRecord]:
    """All repetitions of ``cfg``, in ``(rep, checkpoint)`` order."""
    cfg.validate()
    dist = build_environment(cfg)
    eps = resolve_epsilon(cfg) if cfg.environment != "custom-atomic" else math.nan
    if cfg.T > math.exp(cfg.D):
        log.warning("T=%d exceeds e^D=%.4g; the lower-bound constructions target T = O(e^D)",
                    cfg.T, math.exp(cfg.D))
    cps = log_checkpoints(cfg.T) if cfg.checkpoints == "log" else sorted({int(c) for c in cfg.checkpoints})
    minimum = None
    if cfg.mode == "stochastic":
        minimum = expected_loss_min(dist, Domain(cfg.D, dist.dim))[1]
    records = []
    for rep in range(cfg.reps):
        seed = derive_seed(cfg.seed, rep)
        rng = np.random.default_rng(seed)
        rows = run_single(dist, cfg.algorithm, cfg.D, cfg.T, rng, cps, cfg.mode, cfg.eta, minimum)
        run_id = f"{cfg.algorithm}-{cfg.environment}-chi{cfg.chi:+d}-D{cfg.D:g}-T{cfg.T}-s{cfg.seed}-r{rep}"
        for t, regret, excess in rows:
            records.append(RunRecord(run_id, cfg.algorithm, cfg.environment, cfg.chi, dist.dim,
                                     float(cfg.D), eps, cfg.T, rep, seed, t, regret, excess))
    return records


def _fmt(name: str, value) -> str:
    if name in _FLOAT_FIELDS:
        return repr(float(value)) if math.isfinite(value) else "nan"
    return str(value)


def records_to_csv(records: list[RunRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(FIELDS)
    for r in records:
        writer.writerow([_fmt(name, getattr(r, name)) for name in FIELDS])
    return buf.getvalue()


def write_csv(records: list[RunRecord], path: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(records_to_csv(records))


def read_csv(path: str) -> list[RunRecord]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != FIELDS:
            raise ParameterError(f"unexpected CSV header {reader.fieldnames}")
        out = []
        for row in reader:
            kw = {}
            for name in FIELDS:
                v = row[name]
                kw[name] = int(v) if name in _INT_FIELDS else float(v) if name in _FLOAT_FIELDS else v
            out.append(RunRecord(**kw))
    return out


class RateFit(NamedTuple):
    slope: float
    intercept: float
    residual: float


def fit_rate(records: list[RunRecord], x: str = "T", y: str = "regret") -> RateFit:
    """Least-squares fit of ``log mean(y)`` on ``log x`` over final checkpoints.

    Only rows with ``t == T`` are used; ``y`` is averaged over repetitions
    sharing the same ``x``. ``residual`` is the RMS of the fit in log space.
    """
    groups: dict[float, list[float]] = {}
    for r in records:
        if r.t != r.T:
            continue
        groups.setdefault(float(getattr(r, x)), []).append(float(getattr(r, y)))
    if len(groups) < 3:
        raise ParameterError(f"need at least 3 distinct {x} values, got {len(groups)}")
    xs = np.array(sorted(groups))
    ys = np.array([np.mean(groups[v]) for v in xs])
    if not np.all(ys > 0) or not np.all(xs > 0):
        raise ParameterError(f"fit needs positive {x} and {y} values, got {y}={ys.tolist()}")
    lx, ly = np.log(xs), np.log(ys)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = float(np.sqrt(np.mean((ly - (slope * lx + intercept)) ** 2)))
    return RateFit(float(slope), float(intercept), resid)
