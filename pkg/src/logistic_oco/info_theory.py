"""KL/Pinsker bounds for coin-distinguishing and Monte-Carlo distinguishers.

A distinguisher sees ``m`` i.i.d. draws from one of two distributions (chosen
uniformly at random) and guesses which. Its success probability is at most
``(1 + TV)/2``, and Pinsker's inequality with the Bernoulli KL bound gives
``TV <= sqrt(m eps^2 / p)`` for coins with bias ``p`` vs ``p + eps``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ParameterError
from .hard_instances import AtomicDistribution, sample_indices

Rule = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class CoinProblem:
    p: float
    eps: float
    m: int = 0

    def __post_init__(self):
        if not 0 < self.p <= 0.5:
            raise ParameterError(f"p must lie in (0, 1/2], got {self.p}")
        if not (self.eps > 0 and self.p + self.eps <= 1):
            raise ParameterError(f"need eps > 0 and p + eps <= 1, got eps={self.eps}")
        if self.m < 0:
            raise ParameterError(f"m must be nonnegative, got {self.m}")


def kl_bernoulli(q1: float, q2: float) -> float:
    """``KL(Bernoulli(q1) || Bernoulli(q2))``."""
    for q in (q1, q2):
        if not 0.0 < q < 1.0:
            raise ParameterError(f"Bernoulli parameters must lie in (0, 1), got {q}")
    return q1 * math.log(q1 / q2) + (1.0 - q1) * math.log((1.0 - q1) / (1.0 - q2))


def pinsker_event_gap(m: int, p: float, eps: float) -> float:
    """Upper bound on ``|P_p(B) - P_{p+eps}(B)|`` for any event of ``m`` tosses."""
    CoinProblem(p, eps, m)
    return math.sqrt(m * eps * eps / p)


def coin_sample_complexity(p: float, eps: float) -> float:
    """Tosses needed to tell bias ``p`` from ``p + eps`` with probability 3/4."""
    CoinProblem(p, eps)
    return p / (16.0 * eps * eps)


def three_atom_sample_complexity(q0: float, p: float, eps: float) -> float:
    """As :func:`coin_sample_complexity` when a third atom of mass ``q0`` carries no signal."""
    if not 0.0 <= q0 < 1.0:
        raise ParameterError(f"q0 must lie in [0, 1), got {q0}")
    CoinProblem(p, eps)
    return p / (16.0 * (1.0 - q0) * eps * eps)


def success_ceiling(m: int, p: float, eps: float, reps: int) -> float:
    """Largest empirical success rate consistent with the Pinsker bound (+3 sigma)."""
    return 0.5 + 0.5 * pinsker_event_gap(m, p, eps) + 3.0 * math.sqrt(0.25 / reps)


def coin(q: float) -> AtomicDistribution:
    """Bernoulli(q) coin as a two-atom distribution: heads ``1.0``, tails ``0.0``."""
    return AtomicDistribution(np.array([[1.0], [0.0]]), np.array([q, 1.0 - q]), name=f"coin({q:g})")


def _support(pair):
    union = np.unique(np.concatenate([pair[0].atoms, pair[1].atoms]), axis=0)
    table = np.zeros((2, len(union)))
    for h, dist in enumerate(pair):
        for atom, prob in zip(dist.atoms, dist.probs):
            j = np.flatnonzero(np.all(union == atom, axis=1))[0]
            table[h, j] += prob
    return union, table


def likelihood_ratio_rule(pair: tuple[AtomicDistribution, AtomicDistribution]) -> Rule:
    """Most powerful test under a uniform prior: pick the likelier hypothesis.

    The returned rule maps samples of shape ``(reps, m, n)`` to guesses in
    ``{0, 1}``; ties go to hypothesis 0.
    """
    union, table = _support(pair)
    with np.errstate(divide="ignore"):
        logp = np.log(table)

    def rule(samples: np.ndarray) -> np.ndarray:
        match = np.all(samples[:, :, None, :] == union[None, None, :, :], axis=-1)
        idx = np.argmax(match, axis=-1)
        with np.errstate(invalid="ignore"):
            llr = (logp[1][idx] - logp[0][idx]).sum(axis=1)
        # nan arises only from atoms outside both supports; treat as a tie.
        return np.where(llr > 0, 1, 0)

    return rule


def learner_rule(make_learner: Callable[[], object], decide: Callable[[np.ndarray], int]) -> Rule:
    """Distinguish by running an online learner and thresholding its averaged iterate."""

    def rule(samples: np.ndarray) -> np.ndarray:
        out = np.empty(len(samples), dtype=int)
        for r, seq in enumerate(samples):
            learner = make_learner()
            total = 0.0
            for x in seq:
                total = total + np.asarray(learner.predict(), dtype=float)
                learner.update(x if len(x) > 1 else float(x[0]))
            out[r] = decide(np.atleast_1d(total / len(seq)))
        return out

    return rule


def threshold_decision_1d(D: float) -> Callable[[np.ndarray], int]:
    """Hypothesis 0 (``chi = +1``) iff the averaged iterate is ``<= 3D/4``."""
    return lambda w: 0 if w[0] <= 0.75 * D else 1


def sign_decision_2d(w: np.ndarray) -> int:
    """Hypothesis 0 (``chi = +1``) iff the first coordinate is ``>= 0``."""
    return 0 if w[0] >= 0.0 else 1


def run_distinguisher(pair: tuple[AtomicDistribution, AtomicDistribution], rule: Rule,
                      m: int, reps: int, rng: np.random.Generator, chunk: int = 10_000) -> float:
    """Empirical success rate of ``rule`` with a uniform prior over ``pair``."""
    if reps < 1:
        raise ParameterError(f"reps must be >= 1, got {reps}")
    if m < 0:
        raise ParameterError(f"m must be nonnegative, got {m}")
    if pair[0].dim != pair[1].dim:
        raise ParameterError("both hypotheses must live in the same dimension")
    correct = 0
    done = 0
    while done < reps:
        k = min(chunk, reps - done)
        truth = rng.integers(0, 2, size=k)
        samples = np.empty((k, m, pair[0].dim))
        for h in (0, 1):
            rows = np.flatnonzero(truth == h)
            idx = sample_indices(pair[h], rng, (len(rows), m))
            samples[rows] = pair[h].atoms[idx]
        correct += int(np.sum(rule(samples) == truth))
        done += k
    return correct / reps
