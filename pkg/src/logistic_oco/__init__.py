"""Online and stochastic logistic regression on a bounded domain.

Improper FTRL on piecewise-quadratic surrogates, first/second-order baselines,
hard lower-bound distributions, information-theoretic bounds and a seeded
experiment harness.
"""

from .algorithms import (OGD, ONS, LogisticFTRL, RegretTrace, best_fixed_loss, ftrl_regret_bound,
                         online_to_batch, regret_of, run_online)
from .approx_loss import (PiecewiseQuadratic, SurrogateCase, SurrogateParams, build_surrogate,
                          case0_minorant, minimize_pwq, verify_minorant)
from .core import Domain, logistic_grad, logistic_loss, logistic_rank1_hessian, project
from .errors import ContractViolation, ParameterError, VerificationFailure
from .hard_instances import (AtomicDistribution, build_1d, build_2d, excess_loss, expected_loss,
                             expected_loss_min, hard2d_p, random_atomic, sample, verify_lemma2,
                             verify_lemma3)
from .harness import ExperimentConfig, RunRecord, fit_rate, read_csv, run_experiment, write_csv
from .info_theory import (coin_sample_complexity, kl_bernoulli, pinsker_event_gap, run_distinguisher,
                          three_atom_sample_complexity)
from .report import Check, Report

__version__ = "0.1.0"

__all__ = [
    "AtomicDistribution", "Check", "ContractViolation", "Domain", "ExperimentConfig", "LogisticFTRL",
    "OGD", "ONS", "ParameterError", "PiecewiseQuadratic", "RegretTrace", "Report", "RunRecord",
    "SurrogateCase", "SurrogateParams", "VerificationFailure", "best_fixed_loss", "build_1d", "build_2d",
    "build_surrogate", "case0_minorant", "coin_sample_complexity", "excess_loss", "expected_loss",
    "expected_loss_min", "fit_rate", "ftrl_regret_bound", "hard2d_p", "kl_bernoulli", "logistic_grad",
    "logistic_loss", "logistic_rank1_hessian", "minimize_pwq", "online_to_batch", "pinsker_event_gap",
    "project", "random_atomic", "read_csv", "regret_of", "run_distinguisher", "run_experiment",
    "run_online", "sample", "three_atom_sample_complexity", "verify_lemma2", "verify_lemma3",
    "verify_minorant", "write_csv",
]
