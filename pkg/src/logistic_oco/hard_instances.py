"""Adversarial instance distributions and exact excess-loss evaluation.

Two families are provided:

* ``build_1d``: two atoms ``{1 - theta/2, -theta}`` with ``theta = sqrt(eps)/D``
  and ``P(1 - theta/2) = theta/2 + chi*eps/D``. The expected loss is close to
  linear on ``[D/2, D]`` with slope ``chi*eps/D``.
* ``build_2d``: atoms ``x0 = (0, -1)/D``, ``xl = (-1, 1)/sqrt(2)``,
  ``xr = (1, 1)/sqrt(2)`` with probabilities ``p``, ``(1 + chi*eps)(1 - p)/2``,
  ``(1 - chi*eps)(1 - p)/2``. ``p`` is chosen so that the unperturbed loss is
  stationary at ``(0, 0.9D)``.

For either ``chi`` a predictor can be eps/20-optimal only on its own side of a
threshold, which is what makes the pair hard to optimize without telling the
two apart.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .core import NORM_TOL, Domain, sigmoid_array, softplus_array
from .errors import ParameterError
from .optimize import golden_section, minimize_on_ball
from .report import Report

log = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class AtomicDistribution:
    """Finite-support distribution over instances in the unit ball."""

    atoms: np.ndarray
    probs: np.ndarray
    name: str = "atomic"

    def __post_init__(self):
        atoms = np.asarray(self.atoms, dtype=float)
        if atoms.ndim == 1:
            atoms = atoms[:, None]
        probs = np.asarray(self.probs, dtype=float)
        if atoms.ndim != 2 or atoms.shape[1] not in (1, 2):
            raise ParameterError(f"atoms must have shape (k, 1) or (k, 2), got {atoms.shape}")
        if probs.shape != (atoms.shape[0],):
            raise ParameterError("need exactly one probability per atom")
        if np.any(probs < 0.0):
            raise ParameterError(f"negative probability in {probs}")
        if abs(probs.sum() - 1.0) > 1e-12:
            raise ParameterError(f"probabilities sum to {probs.sum()!r}, not 1")
        norms = np.linalg.norm(atoms, axis=1)
        if np.any(norms > 1.0 + NORM_TOL):
            raise ParameterError(f"atom norm {norms.max()} exceeds 1")
        atoms.setflags(write=False)
        probs.setflags(write=False)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "probs", probs)

    @property
    def dim(self) -> int:
        return self.atoms.shape[1]


def _window(ok: bool, msg: str, strict: bool) -> None:
    if ok:
        return
    if strict:
        raise ParameterError(msg)
    log.warning("%s (continuing outside the guaranteed regime)", msg)


def hard1d_window(D: float) -> tuple[float, float]:
    """Range of eps for which the 1-D separation guarantee holds."""
    return 40.0 * math.exp(-0.45 * D), 1.0 / 25.0


def hard2d_window(D: float) -> tuple[float, float]:
    """Range of eps for which the 2-D separation guarantee holds."""
    return 100.0 * math.exp(-0.6 * D / SQRT2), 1.0 / (10.0 * D)


def hard2d_p(D: float) -> float:
    """Mass of ``x0`` making ``(0, 0.9D)`` a stationary point of the unperturbed loss."""
    r = D / SQRT2 * (1.0 + math.exp(0.9)) / (1.0 + math.exp(-0.9 * D / SQRT2))
    return r / (1.0 + r)


def build_1d(eps: float, D: float, chi: int, strict: bool = True) -> AtomicDistribution:
    if chi not in (-1, 1):
        raise ParameterError(f"chi must be -1 or +1, got {chi}")
    if eps < 0:
        raise ParameterError(f"eps must be nonnegative, got {eps}")
    _window(D >= 1.0, f"D must be >= 1, got {D}", strict)
    lo, hi = hard1d_window(D)
    _window(lo <= eps <= hi, f"eps={eps} outside [{lo:.6g}, {hi:.6g}] for D={D}", strict)
    theta = math.sqrt(eps) / D
    p_first = theta / 2.0 + chi * eps / D
    if not (0.0 <= p_first <= 1.0) or theta > 1.0:
        raise ParameterError(f"eps={eps}, D={D} gives an invalid distribution")
    return AtomicDistribution(
        atoms=np.array([[1.0 - theta / 2.0], [-theta]]),
        probs=np.array([p_first, 1.0 - p_first]),
        name=f"hard1d(eps={eps:g},D={D:g},chi={chi:+d})",
    )


def build_2d(eps: float, D: float, chi: int, strict: bool = True) -> AtomicDistribution:
    if chi not in (-1, 1):
        raise ParameterError(f"chi must be -1 or +1, got {chi}")
    if not 0 <= eps <= 1:
        raise ParameterError(f"eps must lie in [0, 1], got {eps}")
    if D < 1.0:
        raise ParameterError(f"D must be >= 1 so that x0 lies in the unit ball, got {D}")
    _window(D >= 2.0, f"D must be >= 2, got {D}", strict)
    lo, hi = hard2d_window(D)
    _window(lo <= eps <= hi, f"eps={eps} outside [{lo:.6g}, {hi:.6g}] for D={D}", strict)
    p = hard2d_p(D)
    q = 1.0 - p
    atoms = np.array([[0.0, -1.0 / D], [-1.0 / SQRT2, 1.0 / SQRT2], [1.0 / SQRT2, 1.0 / SQRT2]])
    probs = np.array([p, 0.5 * (1.0 + chi * eps) * q, 0.5 * (1.0 - chi * eps) * q])
    return AtomicDistribution(atoms, probs, name=f"hard2d(eps={eps:g},D={D:g},chi={chi:+d})")


def random_atomic(rng: np.random.Generator, n_atoms: int = 3, dim: int = 1) -> AtomicDistribution:
    """Random atoms in the unit ball with Dirichlet(1) probabilities."""
    if dim == 1:
        atoms = rng.uniform(-1.0, 1.0, size=(n_atoms, 1))
    else:
        ang = rng.uniform(0.0, 2 * math.pi, size=n_atoms)
        rad = np.sqrt(rng.uniform(0.0, 1.0, size=n_atoms))
        atoms = np.column_stack([rad * np.cos(ang), rad * np.sin(ang)])
    probs = rng.dirichlet(np.ones(n_atoms))
    probs[-1] = 1.0 - probs[:-1].sum()
    return AtomicDistribution(atoms, probs, name=f"random{dim}d")


def sample_indices(dist: AtomicDistribution, rng: np.random.Generator, size=None):
    """Atom indices drawn i.i.d. from ``dist``."""
    cdf = np.cumsum(dist.probs)
    cdf[-1] = 1.0
    u = rng.random(size)
    return np.searchsorted(cdf, u, side="right")


def sample(dist: AtomicDistribution, rng: np.random.Generator, size=None) -> np.ndarray:
    """Instances drawn i.i.d. from ``dist``; shape ``(n,)`` or ``size + (n,)``."""
    return dist.atoms[sample_indices(dist, rng, size)]


def _as_points(dist: AtomicDistribution, w) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if dist.dim == 1 and (w.ndim == 0 or w.shape[-1] != 1):
        w = w[..., None]
    if w.shape[-1] != dist.dim:
        raise ParameterError(f"predictor dimension {w.shape[-1]} != {dist.dim}")
    return w


def expected_loss(dist: AtomicDistribution, w):
    """``E[log(1 + exp(x.w))]``; ``w`` may be batched with trailing axis ``n``.

    For 1-D distributions a bare array of scalars is also accepted.
    """
    pts = _as_points(dist, w)
    val = softplus_array(pts @ dist.atoms.T) @ dist.probs
    return float(val) if np.ndim(val) == 0 else val


def expected_loss_grad(dist: AtomicDistribution, w) -> np.ndarray:
    pts = _as_points(dist, w)
    s = sigmoid_array(pts @ dist.atoms.T)
    return (s * dist.probs) @ dist.atoms


def expected_loss_min(dist: AtomicDistribution, dom: Domain) -> tuple[np.ndarray, float]:
    """Minimizer and minimum of the expected loss over the ball of ``dom``."""
    if dom.dim != dist.dim:
        raise ParameterError(f"domain dim {dom.dim} != distribution dim {dist.dim}")
    return minimize_on_ball(dist.atoms, dist.probs, dom.radius)


def excess_loss(dist: AtomicDistribution, dom: Domain, w, minimum: float | None = None):
    """``L(w) - min L`` over the ball. Pass ``minimum`` to reuse a computed optimum."""
    if minimum is None:
        minimum = expected_loss_min(dist, dom)[1]
    return expected_loss(dist, w) - minimum


def _interval_min(dist: AtomicDistribution, lo: float, hi: float) -> float:
    a = dist.atoms[:, 0]

    def f(w):
        return float(softplus_array(a * w) @ dist.probs)

    return golden_section(f, lo, hi, 1e-12 * max(abs(lo), abs(hi), 1.0))[1]


def verify_lemma2(D: float, eps: float, grid_size: int = 4096, strict: bool = True) -> Report:
    """Numerical check of the 1-D separation property and its proof ingredients."""
    lo, hi = hard1d_window(D)
    if strict and not (D >= 1.0 and lo <= eps <= hi):
        raise ParameterError(f"(D={D}, eps={eps}) outside the window [{lo:.6g}, {hi:.6g}]")
    dom = Domain(D, 1)
    plus = build_1d(eps, D, +1, strict=False)
    minus = build_1d(eps, D, -1, strict=False)
    floor = eps / 20.0
    rep = Report("lemma2")

    _, plus_min = expected_loss_min(plus, dom)
    _, minus_min = expected_loss_min(minus, dom)
    right = np.linspace(0.75 * D, D, grid_size)
    left = np.linspace(-D, 0.75 * D, grid_size)
    rep.add("lemma2.plus_excess_grid_min", np.min(expected_loss(plus, right)) - plus_min, floor, ">=")
    rep.add("lemma2.minus_excess_grid_min", np.min(expected_loss(minus, left)) - minus_min, floor, ">=")
    # Exact interval minima (the losses are convex), closing the gaps between grid points.
    rep.add("lemma2.plus_excess_interval_min",
            _interval_min(plus, 0.75 * D, D) - plus_min, floor, ">=")
    rep.add("lemma2.minus_excess_interval_min",
            _interval_min(minus, -D, 0.75 * D) - minus_min, floor, ">=")

    theta = math.sqrt(eps) / D
    half = np.linspace(0.5 * D, D, grid_size)
    a = 1.0 - theta / 2.0
    lin_res = np.max(np.abs(softplus_array(a * half) - a * half))
    quad_res = np.max(np.abs(softplus_array(-theta * half)
                             - (math.log(2.0) - theta * half / 2.0 + (theta * half) ** 2 / 8.0)))
    rep.add("lemma2.linear_residual_max", lin_res, eps / 40.0)
    rep.add("lemma2.quadratic_residual_max", quad_res, eps / 40.0)
    rep.add("lemma2.quadratic_residual_vs_taylor", quad_res, (theta * D) ** 4 / 192.0)

    slope = float(expected_loss_grad(minus, 0.5 * D)[0])
    rep.add("lemma2.minus_derivative_at_half_D", slope, 0.0, "<")
    return rep


def polar_grid(D: float, n_radial: int, n_angular: int, start: float, stop: float) -> np.ndarray:
    """Points ``r (cos a, sin a)`` for ``r`` in ``[0, D]`` and ``a`` in ``[start, stop]``."""
    r = np.linspace(0.0, D, n_radial)
    a = np.linspace(start, stop, n_angular)
    rr, aa = np.meshgrid(r, a, indexing="ij")
    return np.stack([rr * np.cos(aa), rr * np.sin(aa)], axis=-1).reshape(-1, 2)


def verify_lemma3(D: float, eps: float, n_radial: int = 256, n_angular: int = 512,
                  strict: bool = True) -> Report:
    """Numerical check of the 2-D separation property and its proof ingredients.

    "First coordinate" below is ``w[0]``; the two distributions are separated
    by the sign of ``w[0]``.
    """
    lo, hi = hard2d_window(D)
    if strict and not (D >= 2.0 and lo <= eps <= hi):
        raise ParameterError(f"(D={D}, eps={eps}) outside the window [{lo:.6g}, {hi:.6g}]")
    dom = Domain(D, 2)
    plus = build_2d(eps, D, +1, strict=False)
    minus = build_2d(eps, D, -1, strict=False)
    base = build_2d(0.0, D, +1, strict=False)
    floor = eps / 20.0
    rep = Report("lemma3")

    w0 = np.array([0.0, 0.9 * D])
    wa = np.array([0.3 * D, 0.9 * D])
    rep.add("lemma3.grad_norm_at_w0", np.linalg.norm(expected_loss_grad(base, w0)), 1e-8)
    l0 = expected_loss(base, w0)
    rep.add("lemma3.plus_at_wa_minus_L0_plus_floor", expected_loss(plus, wa) - (l0 - floor), 0.0)

    _, plus_min = expected_loss_min(plus, dom)
    _, minus_min = expected_loss_min(minus, dom)
    left = polar_grid(D, n_radial, n_angular, 0.5 * math.pi, 1.5 * math.pi)
    right = polar_grid(D, n_radial, n_angular, -0.5 * math.pi, 0.5 * math.pi)
    left = left[left[:, 0] <= 0.0]
    right = right[right[:, 0] >= 0.0]
    rep.add("lemma3.plus_excess_left_min", np.min(expected_loss(plus, left)) - plus_min, floor, ">=")
    rep.add("lemma3.minus_excess_right_min", np.min(expected_loss(minus, right)) - minus_min, floor, ">=")

    half_q = (1.0 - hard2d_p(D)) / 2.0
    rep.add("lemma3.half_rest_mass_lower", half_q, 1.0 / (6.0 * D), ">=")
    rep.add("lemma3.half_rest_mass_upper", half_q, 1.0 / (2.0 * D), "<=")
    return rep
