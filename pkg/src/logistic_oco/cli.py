"""Command-line entry point.

Subcommands::

    simulate     run an experiment and write RunRecord CSV
    verify       lemma2 | lemma3 | minorant numerical checks
    fit-rate     fit log(metric) ~ log(T) on a simulate CSV
    distinguish  likelihood-ratio coin distinguisher vs. the Pinsker ceiling

Exit codes: 0 success, 1 parameter/usage error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from .approx_loss import verify_minorant
from .errors import ParameterError, VerificationFailure
from .hard_instances import verify_lemma2, verify_lemma3
from .harness import ExperimentConfig, fit_rate, read_csv, records_to_csv, run_experiment
from .info_theory import coin, likelihood_ratio_rule, run_distinguisher, success_ceiling
from .report import Report

EXIT_OK, EXIT_PARAM, EXIT_VERIFY = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARAM, f"{self.prog}: error: {message}\n")


def _epsilon(text: str):
    return text if text == "auto" else float(text)


def _checkpoints(text: str):
    if text == "log":
        return "log"
    return [int(v) for v in text.split(",") if v]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="logistic-oco", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    sim = sub.add_parser("simulate", help="run an experiment, write CSV")
    sim.add_argument("--config", help="JSON document with keys mirroring the flag names")
    sim.add_argument("--algo", choices=["ftrl", "ogd", "ons"])
    sim.add_argument("--env", choices=["hard1d", "hard2d", "custom-atomic"])
    sim.add_argument("--chi", type=int, choices=[-1, 1])
    sim.add_argument("--d", type=float, help="domain radius D")
    sim.add_argument("--epsilon", type=_epsilon, help="perturbation size or 'auto'")
    sim.add_argument("--t", type=int, help="horizon T")
    sim.add_argument("--reps", type=int)
    sim.add_argument("--seed", type=int)
    sim.add_argument("--checkpoints", type=_checkpoints, help="'log' or comma-separated rounds")
    sim.add_argument("--mode", choices=["stochastic", "online"])
    sim.add_argument("--eta", type=float, help="FTRL learning rate (default T^-1/3)")
    sim.add_argument("--strict", action="store_true", default=None,
                     help="refuse epsilon/D outside the guaranteed window")
    sim.add_argument("--atoms", type=json.loads, help="custom-atomic atoms as JSON")
    sim.add_argument("--probs", type=json.loads, help="custom-atomic probabilities as JSON")
    sim.add_argument("--out", help="CSV path (default stdout)")

    ver = sub.add_parser("verify", help="run a numerical verification report")
    ver.add_argument("target", choices=["lemma2", "lemma3", "minorant"])
    ver.add_argument("--d", type=float)
    ver.add_argument("--epsilon", type=float)
    ver.add_argument("--grid", type=int, help="grid size (lemma2) or radial points (lemma3)")
    ver.add_argument("--samples", type=int, default=10_000)
    ver.add_argument("--seed", type=int, default=0)

    fit = sub.add_parser("fit-rate", help="fit the growth exponent in T")
    fit.add_argument("--in", dest="path", required=True)
    fit.add_argument("--metric", default="regret", choices=["regret", "excess_loss"])

    dis = sub.add_parser("distinguish", help="coin distinguisher vs. the Pinsker ceiling")
    dis.add_argument("--p", type=float, required=True)
    dis.add_argument("--epsilon", type=float, required=True)
    dis.add_argument("--m", type=int, required=True)
    dis.add_argument("--reps", type=int, default=100_000)
    dis.add_argument("--seed", type=int, default=0)
    return parser


_SIM_KEYS = {"algo": "algorithm", "env": "environment", "chi": "chi", "d": "D", "epsilon": "epsilon",
             "t": "T", "reps": "reps", "seed": "seed", "checkpoints": "checkpoints", "mode": "mode",
             "eta": "eta", "strict": "strict", "atoms": "atoms", "probs": "probs", "out": "out"}


def _simulate(args) -> int:
    doc = {}
    if args.config:
        with open(args.config) as fh:
            doc = json.load(fh)
    cfg_doc = ExperimentConfig.from_dict(doc).__dict__.copy()
    for flag, key in _SIM_KEYS.items():
        value = getattr(args, flag)
        if value is not None:
            cfg_doc[key] = value
    cfg = ExperimentConfig(**cfg_doc)
    text = records_to_csv(run_experiment(cfg))
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _verify(args) -> int:
    if args.target == "lemma2":
        rep = verify_lemma2(args.d or 16.0, args.epsilon or 0.04, args.grid or 4096)
    elif args.target == "lemma3":
        rep = verify_lemma3(args.d or 30.0, args.epsilon or 0.003, n_radial=args.grid or 256)
    else:
        rep = verify_minorant(samples=args.samples, seed=args.seed)
    sys.stdout.write(rep.to_text())
    if not rep.passed:
        raise VerificationFailure(f"{rep.title} verification failed")
    return EXIT_OK


def _fit_rate(args) -> int:
    fit = fit_rate(read_csv(args.path), y=args.metric)
    sys.stdout.write(f"slope={fit.slope:.6f}\nintercept={fit.intercept:.6f}\nresidual={fit.residual:.6f}\n")
    return EXIT_OK


def _distinguish(args) -> int:
    pair = (coin(args.p), coin(args.p + args.epsilon))
    rate = run_distinguisher(pair, likelihood_ratio_rule(pair), args.m, args.reps,
                             np.random.default_rng(args.seed))
    rep = Report("distinguish")
    rep.add("distinguish.success", rate, success_ceiling(args.m, args.p, args.epsilon, args.reps))
    sys.stdout.write(rep.to_text())
    if not rep.passed:
        raise VerificationFailure("empirical success exceeds the Pinsker ceiling")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"simulate": _simulate, "verify": _verify, "fit-rate": _fit_rate,
                "distinguish": _distinguish}
    try:
        return handlers[args.command](args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except VerificationFailure as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
