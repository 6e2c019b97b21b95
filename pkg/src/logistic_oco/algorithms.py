"""Online learners for the logistic loss and regret bookkeeping.

``LogisticFTRL`` is the one-dimensional follow-the-regularized-leader on the
global surrogates of :mod:`logistic_oco.approx_loss`, with regularizer
``w^2 / (16 D)`` scaled by ``1/eta``. Because every surrogate is a convex
quadratic on each side of ``w = 0``, the running objective is minimized in
closed form.

``OGD`` and ``ONS`` are the standard first- and second-order baselines
(projected gradient with step ``D/sqrt(t)``, and online Newton step with
exp-concavity ``e^{-D}``). Learners mutate their own state; ``update(x)``
plays the current prediction, returns the loss suffered and folds ``x`` in.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .approx_loss import PiecewiseQuadratic, SurrogateCase, _surrogate_terms, minimize_pwq
from .core import Domain, as_vector, sigmoid, softplus
from .errors import ParameterError
from .optimize import minimize_on_ball

log = logging.getLogger(__name__)

_TOL = 1e-12


def ftrl_regret_bound(T: int, D: float) -> float:
    """Explicit regret guarantee of :class:`LogisticFTRL` with ``eta = T^(-1/3)``."""
    c = T ** (1.0 / 3.0)
    return 48 * D * math.log(T + 1) + 24 * D * c + 480 * D ** 3 * c + D / 16 * c


class LogisticFTRL:
    """Follow-the-regularized-leader on surrogate losses, ``w`` in ``[-D, D]``.

    Parameters
    ----------
    D : float
        Radius of the decision interval. The surrogate guarantees need
        ``D >= 2``; smaller values run with a warning.
    eta : float, optional
        Learning rate. Defaults to ``T ** (-1/3)`` when ``T`` is given.
    T : int, optional
        Horizon, only used to derive the default ``eta``.
    """

    def __init__(self, D: float, eta: float | None = None, T: int | None = None):
        if eta is None:
            if T is None:
                raise ParameterError("give either eta or the horizon T")
            eta = float(T) ** (-1.0 / 3.0)
        if not eta > 0:
            raise ParameterError(f"eta must be positive, got {eta}")
        if not D > 0:
            raise ParameterError(f"D must be positive, got {D}")
        if D < 2:
            log.warning("FTRL with D=%g < 2: the surrogates may not minorize the loss", D)
        self.D = float(D)
        self.eta = float(eta)
        self.agg = PiecewiseQuadratic()
        self.t = 0
        self.n_plus = 0
        self.n_minus = 0
        self.reg_c = 1.0 / (16.0 * self.D * self.eta)
        self._u = 0.0
        self._w = 0.0

    def objective(self, w):
        """Running objective: surrogate sum plus ``w^2 / (16 D eta)``."""
        return self.agg(w) + self.reg_c * np.square(w)

    def _refresh(self) -> None:
        f = self.agg
        cn = f.c_neg + self.reg_c
        cp = f.c_pos + self.reg_c
        m_neg = min(0.0, -f.b_neg / (2.0 * cn))
        m_pos = max(0.0, -f.b_pos / (2.0 * cp))
        v_neg = m_neg * (f.b_neg + cn * m_neg)
        v_pos = m_pos * (f.b_pos + cp * m_pos)
        u = m_neg if v_neg < v_pos else m_pos
        self._u = u
        self._w = min(max(u, -self.D), self.D)

    def unconstrained_minimizer(self) -> float:
        return self._u

    def predict(self) -> float:
        return self._w

    def update(self, x: float) -> float:
        x = float(x)
        if abs(x) > 1.0 + _TOL:
            raise ParameterError(f"|x| must be <= 1, got {x}")
        w = self._w
        loss = softplus(x * w)
        case, _, _, _, _, (bn, cn, bp, cp, c0) = _surrogate_terms(w, x, self.D)
        f = self.agg
        f.b_neg += bn
        f.c_neg += cn
        f.b_pos += bp
        f.c_pos += cp
        f.const += c0
        if case is SurrogateCase.LINEAR_POS:
            self.n_plus += 1
        elif case is SurrogateCase.LINEAR_NEG:
            self.n_minus += 1
        self.t += 1
        self._refresh()
        return loss

    def surrogate_comparator(self) -> float:
        """``min`` over ``[-D, D]`` of the surrogate sum accumulated so far."""
        return minimize_pwq(self.agg, -self.D, self.D)[1]


class OGD:
    """Projected online gradient descent with step ``D / sqrt(t)``."""

    def __init__(self, D: float, dim: int = 1):
        self.dom = Domain(D, dim)
        self.D = float(D)
        self.dim = dim
        self.t = 0
        self.w = 0.0 if dim == 1 else np.zeros(dim)

    def predict(self):
        return self.w

    def update(self, x) -> float:
        self.t += 1
        step = self.D / math.sqrt(self.t)
        if self.dim == 1:
            x = float(x[0]) if np.ndim(x) else float(x)
            if abs(x) > 1.0 + _TOL:
                raise ParameterError(f"|x| must be <= 1, got {x}")
            z = x * self.w
            loss = softplus(z)
            w = self.w - step * sigmoid(z) * x
            self.w = min(max(w, -self.D), self.D)
            return loss
        x = as_vector(x)
        if float(x @ x) > (1.0 + _TOL) ** 2:
            raise ParameterError(f"instance norm {np.linalg.norm(x)} exceeds 1")
        z = float(x @ self.w)
        loss = softplus(z)
        w = self.w - step * sigmoid(z) * x
        nrm = float(np.linalg.norm(w))
        self.w = w if nrm <= self.D else w * (self.D / nrm)
        return loss


class ONS:
    """Online Newton step for the logistic loss on the radius-``D`` ball.

    Uses exp-concavity ``alpha = e^{-D}`` and gradient bound 1, giving
    ``gamma = min(1/(4D), e^{-D}) / 2`` and ``A_0 = (gamma D)^{-2} I``.
    """

    def __init__(self, D: float, dim: int = 1):
        self.dom = Domain(D, dim)
        self.D = float(D)
        self.dim = dim
        self.gamma = 0.5 * min(1.0 / (4.0 * D), math.exp(-D))
        a0 = (1.0 / (self.gamma * D)) ** 2
        self.t = 0
        if dim == 1:
            self.w = 0.0
            self.A = a0
        else:
            self.w = np.zeros(dim)
            self.A = a0 * np.eye(dim)

    def predict(self):
        return self.w

    def update(self, x) -> float:
        self.t += 1
        if self.dim == 1:
            x = float(x[0]) if np.ndim(x) else float(x)
            if abs(x) > 1.0 + _TOL:
                raise ParameterError(f"|x| must be <= 1, got {x}")
            z = x * self.w
            loss = softplus(z)
            g = sigmoid(z) * x
            self.A += g * g
            y = self.w - g / (self.gamma * self.A)
            # In 1-D the A-weighted projection onto [-D, D] is clipping.
            self.w = min(max(y, -self.D), self.D)
            return loss
        x = as_vector(x)
        if float(x @ x) > (1.0 + _TOL) ** 2:
            raise ParameterError(f"instance norm {np.linalg.norm(x)} exceeds 1")
        z = float(x @ self.w)
        loss = softplus(z)
        g = sigmoid(z) * x
        self.A += np.outer(g, g)
        y = self.w - np.linalg.solve(self.A, g) / self.gamma
        self.w = weighted_ball_projection(y, self.A, self.D)
        return loss


def weighted_ball_projection(y: np.ndarray, A: np.ndarray, radius: float) -> np.ndarray:
    """``argmin_{||v|| <= radius} (v - y)^T A (v - y)`` for symmetric positive definite ``A``."""
    if float(np.linalg.norm(y)) <= radius:
        return y.copy()
    # KKT: v(lam) = (A + lam I)^{-1} A y, with ||v(lam)|| decreasing in lam >= 0.
    evals, evecs = np.linalg.eigh(A)
    c = evecs.T @ y

    def excess(lam):
        return float(np.linalg.norm(evals * c / (evals + lam))) - radius

    hi = float(evals.max())
    while excess(hi) > 0:
        hi *= 2.0
    lam = brentq(excess, 0.0, hi, xtol=1e-14 * max(hi, 1.0), rtol=1e-15, maxiter=500)
    v = evecs @ (evals * c / (evals + lam))
    nrm = float(np.linalg.norm(v))
    return v if nrm <= radius else v * (radius / nrm)


@dataclass
class RegretTrace:
    """Per-round record of an online run."""

    xs: list = field(default_factory=list)
    ws: list = field(default_factory=list)
    losses: list = field(default_factory=list)
    cumulative_losses: list = field(default_factory=list)

    def record(self, x, w, loss: float) -> None:
        self.xs.append(x)
        self.ws.append(w)
        self.losses.append(loss)
        prev = self.cumulative_losses[-1] if self.cumulative_losses else 0.0
        self.cumulative_losses.append(prev + loss)

    def __len__(self) -> int:
        return len(self.losses)

    @property
    def averaged_iterate(self) -> np.ndarray:
        return online_to_batch(self)


def run_online(learner, xs) -> RegretTrace:
    """Feed the instances ``xs`` to ``learner`` one at a time."""
    trace = RegretTrace()
    for x in xs:
        w = learner.predict()
        w = w.copy() if isinstance(w, np.ndarray) else w
        trace.record(x, w, learner.update(x))
    return trace


def online_to_batch(trace: RegretTrace) -> np.ndarray:
    """Average of the predictions played in ``trace``."""
    if len(trace.ws) == 0:
        raise ParameterError("cannot average an empty trace")
    ws = np.asarray(trace.ws, dtype=float)
    if ws.ndim == 1:
        ws = ws[:, None]
    return ws.mean(axis=0)


def best_fixed_loss(xs, dom: Domain) -> tuple[np.ndarray, float]:
    """``min_{w in ball} sum_t log(1 + exp(x_t . w))`` with its minimizer."""
    xs = np.asarray(xs, dtype=float)
    if xs.ndim == 1:
        xs = xs[:, None]
    if xs.shape[1] != dom.dim:
        raise ParameterError(f"instance dim {xs.shape[1]} != domain dim {dom.dim}")
    atoms, counts = np.unique(xs, axis=0, return_counts=True)
    return minimize_on_ball(atoms, counts.astype(float), dom.radius)


def regret_of(trace: RegretTrace, dom: Domain) -> float:
    if len(trace) == 0:
        raise ParameterError("cannot compute the regret of an empty trace")
    return float(math.fsum(trace.losses)) - best_fixed_loss(trace.xs, dom)[1]
