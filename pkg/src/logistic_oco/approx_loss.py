"""Global quadratic/linear minorants of the one-dimensional logistic loss.

At a played point ``w_t`` with instance ``x_t`` the surrogate is tangent to
``w -> log(1 + exp(x_t w))`` and stays below it on ``[-D, D]`` (for
``D >= 2``). With ``g = sigmoid(x_t w_t)``, ``y = g x_t``,
``a0 = loss(w_t) - y w_t`` and ``beta = 1/(8D)``::

    LINEAR_POS  (w_t >= 0, x_t >= 1/D):   a0 + y w + beta/2 y^2 w^2 [w <= 0]
    LINEAR_NEG  (w_t <= 0, x_t <= -1/D):  a0 + y w + beta/2 y^2 w^2 [w >= 0]
    QUADRATIC   (|x_t| <= 1/D or x_t w_t <= 0):
                                          a0 + y w + beta/2 y^2 (w - w_t)^2

When both a linear and the quadratic rule apply (``x_t w_t == 0``) the
quadratic form is used.

Every surrogate has at most one breakpoint, at ``w = 0``, and is stored as a
:class:`PiecewiseQuadratic` so that sums of surrogates stay O(1) in size.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import sigmoid, softplus, softplus_array
from .errors import ParameterError
from .report import Report

LOG2 = math.log(2.0)
_TOL = 1e-12


class SurrogateCase(enum.Enum):
    LINEAR_POS = "linear_pos"
    LINEAR_NEG = "linear_neg"
    QUADRATIC = "quadratic"


@dataclass(frozen=True)
class SurrogateParams:
    y: float
    g: float
    a0: float
    beta: float
    case: SurrogateCase
    w_t: float
    x_t: float


@dataclass(slots=True)
class PiecewiseQuadratic:
    """``const + b w + c w^2`` with separate ``(b, c)`` on ``w <= 0`` and ``w >= 0``."""

    b_neg: float = 0.0
    c_neg: float = 0.0
    b_pos: float = 0.0
    c_pos: float = 0.0
    const: float = 0.0

    def __post_init__(self):
        if self.c_neg < 0 or self.c_pos < 0:
            raise ParameterError("quadratic coefficients must be nonnegative")

    def __iadd__(self, other: PiecewiseQuadratic) -> PiecewiseQuadratic:
        self.b_neg += other.b_neg
        self.c_neg += other.c_neg
        self.b_pos += other.b_pos
        self.c_pos += other.c_pos
        self.const += other.const
        return self

    def __add__(self, other: PiecewiseQuadratic) -> PiecewiseQuadratic:
        out = self.copy()
        out += other
        return out

    def copy(self) -> PiecewiseQuadratic:
        return PiecewiseQuadratic(self.b_neg, self.c_neg, self.b_pos, self.c_pos, self.const)

    def __call__(self, w):
        return eval_pwq(self, w)


def _surrogate_terms(w_t: float, x_t: float, D: float):
    """Unchecked construction; returns ``(case, y, g, a0, beta, pwq-coefficients)``."""
    beta = 1.0 / (8.0 * D)
    z = x_t * w_t
    g = sigmoid(z)
    y = g * x_t
    a0 = softplus(z) - y * w_t
    q = 0.5 * beta * y * y
    inv_d = 1.0 / D
    if abs(x_t) <= inv_d or z <= 0.0:
        b = y - 2.0 * q * w_t
        return SurrogateCase.QUADRATIC, y, g, a0, beta, (b, q, b, q, a0 + q * w_t * w_t)
    if w_t >= 0.0:
        return SurrogateCase.LINEAR_POS, y, g, a0, beta, (y, q, y, 0.0, a0)
    return SurrogateCase.LINEAR_NEG, y, g, a0, beta, (y, 0.0, y, q, a0)


def build_surrogate(w_t: float, x_t: float, D: float) -> tuple[SurrogateParams, PiecewiseQuadratic]:
    """Surrogate of ``log(1 + exp(x_t w))`` built at the played point ``w_t``."""
    w_t = float(w_t)
    x_t = float(x_t)
    D = float(D)
    if not D >= 2.0:
        raise ParameterError(f"D must be >= 2 for the minorant guarantee, got {D}")
    if abs(x_t) > 1.0 + _TOL:
        raise ParameterError(f"|x_t| must be <= 1, got {x_t}")
    if abs(w_t) > D * (1.0 + _TOL):
        raise ParameterError(f"|w_t| must be <= D={D}, got {w_t}")
    case, y, g, a0, beta, coeffs = _surrogate_terms(w_t, x_t, D)
    params = SurrogateParams(y=y, g=g, a0=a0, beta=beta, case=case, w_t=w_t, x_t=x_t)
    return params, PiecewiseQuadratic(*coeffs)


def case0_minorant(x_t: float, D: float) -> PiecewiseQuadratic:
    """``log 2 + (x_t/2) w + (beta/2) x_t^2 w^2``: the expansion at ``w = 0``."""
    beta = 1.0 / (8.0 * D)
    c = 0.5 * beta * x_t * x_t
    return PiecewiseQuadratic(0.5 * x_t, c, 0.5 * x_t, c, LOG2)


def eval_pwq(f: PiecewiseQuadratic, w):
    """Value of ``f`` at ``w`` (scalar or array)."""
    if np.ndim(w) == 0:
        w = float(w)
        if w <= 0.0:
            return f.const + w * (f.b_neg + f.c_neg * w)
        return f.const + w * (f.b_pos + f.c_pos * w)
    w = np.asarray(w, dtype=float)
    b = np.where(w <= 0.0, f.b_neg, f.b_pos)
    c = np.where(w <= 0.0, f.c_neg, f.c_pos)
    return f.const + w * (b + c * w)


def deriv_pwq(f: PiecewiseQuadratic, w: float, side: str = "right") -> float:
    """One-sided derivative of ``f`` at ``w``; ``side`` is ``"left"`` or ``"right"``."""
    if side == "left":
        neg = w <= 0.0
    elif side == "right":
        neg = w < 0.0
    else:
        raise ParameterError(f"side must be 'left' or 'right', got {side!r}")
    if neg:
        return f.b_neg + 2.0 * f.c_neg * w
    return f.b_pos + 2.0 * f.c_pos * w


def _piece_argmin(b: float, c: float, lo: float, hi: float) -> float:
    if c > 0.0:
        return min(max(-b / (2.0 * c), lo), hi)
    if b > 0.0:
        return lo
    if b < 0.0:
        return hi
    return min(max(0.0, lo), hi)


def minimize_pwq(f: PiecewiseQuadratic, lo: float = -math.inf, hi: float = math.inf,
                 extra_c: float = 0.0) -> tuple[float, float]:
    """Exact minimizer of ``f(w) + extra_c * w^2`` over ``[lo, hi]``.

    Returns ``(argmin, value)``. Raises if the objective is unbounded below.
    """
    if lo > hi:
        raise ParameterError(f"empty interval [{lo}, {hi}]")
    best_w, best_v = None, math.inf
    for b, c, a, z in ((f.b_neg, f.c_neg + extra_c, lo, min(hi, 0.0)),
                       (f.b_pos, f.c_pos + extra_c, max(lo, 0.0), hi)):
        if a > z:
            continue
        w = _piece_argmin(b, c, a, z)
        if math.isinf(w):
            raise ParameterError("objective is unbounded below on the interval")
        v = f.const + w * (b + c * w)
        if v < best_v:
            best_w, best_v = w, v
    return best_w, best_v


def verify_minorant(samples: int = 10_000, grid: int = 1024, seed: int = 0,
                    d_range: tuple[float, float] = (2.0, 20.0), slack: float = 1e-9) -> Report:
    """Randomized check that every surrogate is tangent at ``w_t`` and below the loss.

    Draws ``D`` uniformly from ``d_range``, then ``x_t ~ U[-1, 1]`` and
    ``w_t ~ U[-D, D]``. Each surrogate is evaluated on ``grid`` evenly
    spaced points of ``[-D, D]``.
    """
    rng = np.random.default_rng(seed)
    D = rng.uniform(*d_range, size=samples)
    x = rng.uniform(-1.0, 1.0, size=samples)
    w = rng.uniform(-1.0, 1.0, size=samples) * D
    # Force some samples into the |x| <= 1/D stratum and onto the case boundary.
    k = max(samples // 10, 1)
    x[:k] = rng.uniform(-1.0, 1.0, size=k) / D[:k]
    w[k:2 * k] = 0.0

    u = np.linspace(-1.0, 1.0, grid)
    tangency = minor = minor0 = minor_small = 0.0
    slope_margin = math.inf
    n_small = 0
    for i in range(samples):
        params, f = build_surrogate(w[i], x[i], D[i])
        ws = u * D[i]
        loss = softplus_array(x[i] * ws)
        tangency = max(tangency, abs(eval_pwq(f, w[i]) - softplus(x[i] * w[i])))
        gap = float(np.max(eval_pwq(f, ws) - loss))
        minor = max(minor, gap)
        minor0 = max(minor0, float(np.max(eval_pwq(case0_minorant(x[i], D[i]), ws) - loss)))
        if abs(x[i]) <= 1.0 / D[i]:
            n_small += 1
            minor_small = max(minor_small, gap)
        if params.case is not SurrogateCase.QUADRATIC:
            slope_margin = min(slope_margin, abs(params.y) - 1.0 / (2.0 * D[i]))

    rep = Report("minorant")
    rep.add("minorant.tangency_max_abs_error", tangency, slack)
    rep.add("minorant.max_violation", minor, slack)
    rep.add("minorant.case0_max_violation", minor0, slack)
    rep.add("minorant.small_instance_max_violation", minor_small, slack)
    rep.add("minorant.small_instance_count", n_small, 1, ">=")
    if math.isfinite(slope_margin):
        rep.add("minorant.linear_slope_margin", slope_margin, 0.0, ">")
    return rep
