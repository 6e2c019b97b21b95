"""Minimization of weighted logistic sums over a centered ball (n = 1 or 2).

The objective ``F(w) = sum_i weight_i * log(1 + exp(atom_i . w))`` is smooth
and convex. In 1-D a golden-section search on ``[-D, D]`` suffices. In 2-D
we minimize ``G(w0) = min_{|w1| <= sqrt(D^2 - w0^2)} F(w0, w1)`` by nested
golden-section searches; partial minimization of a jointly convex function
over a convex set keeps ``G`` convex, so the nesting is exact.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .core import sigmoid_array, softplus_array
from .errors import ParameterError

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section(f: Callable[[float], float], lo: float, hi: float,
                   tol: float) -> tuple[float, float]:
    """Minimize a unimodal ``f`` on ``[lo, hi]`` to bracket width ``tol``.

    Returns ``(argmin, value)``; both endpoints are included as candidates so
    boundary minima are returned exactly.
    """
    if hi < lo:
        raise ParameterError(f"empty interval [{lo}, {hi}]")
    f_lo, f_hi = f(lo), f(hi)
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    best = min((fc, c), (fd, d), (f_lo, lo), (f_hi, hi))
    return best[1], best[0]


def logistic_sum(atoms: np.ndarray, weights: np.ndarray) -> Callable[[np.ndarray], np.ndarray]:
    """Return ``F`` accepting ``w`` of shape ``(..., n)``."""
    atoms = np.asarray(atoms, dtype=float)
    weights = np.asarray(weights, dtype=float)

    def F(w):
        z = np.asarray(w, dtype=float) @ atoms.T
        return softplus_array(z) @ weights

    return F


def logistic_sum_grad(atoms: np.ndarray, weights: np.ndarray, w) -> np.ndarray:
    atoms = np.asarray(atoms, dtype=float)
    z = atoms @ np.asarray(w, dtype=float)
    return (np.asarray(weights, dtype=float) * sigmoid_array(z)) @ atoms


def minimize_on_ball(atoms, weights, radius: float, rel_tol: float = 1e-12) -> tuple[np.ndarray, float]:
    """Minimize the weighted logistic sum over ``{||w|| <= radius}``.

    ``atoms`` has shape ``(k, n)`` with ``n`` in ``{1, 2}``. Returns
    ``(argmin, value)``.
    """
    atoms = np.asarray(atoms, dtype=float)
    if atoms.ndim != 2 or atoms.shape[1] not in (1, 2):
        raise ParameterError(f"atoms must have shape (k, 1) or (k, 2), got {atoms.shape}")
    weights = np.asarray(weights, dtype=float)
    tol = rel_tol * radius
    if atoms.shape[1] == 1:
        a = atoms[:, 0]

        def f1(w):
            return float(softplus_array(a * w) @ weights)

        w, v = golden_section(f1, -radius, radius, tol)
        return np.array([w]), v

    a0, a1 = atoms[:, 0], atoms[:, 1]

    def inner(w0):
        h = math.sqrt(max(radius * radius - w0 * w0, 0.0))
        base = a0 * w0

        def f(w1):
            return float(softplus_array(base + a1 * w1) @ weights)

        return golden_section(f, -h, h, tol)

    w0, v = golden_section(lambda s: inner(s)[1], -radius, radius, tol)
    w1, v = inner(w0)
    w = np.array([w0, w1])
    nrm = float(np.linalg.norm(w))
    if nrm > radius:
        w *= radius / nrm
        v = float(softplus_array(atoms @ w) @ weights)
    return w, v
