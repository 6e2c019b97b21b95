"""Logistic loss, its derivatives, and Euclidean-ball projection.

Instances ``x`` and predictors ``w`` are plain 1-D float arrays of length
``n`` (``n`` is 1 or 2). One-dimensional callers may pass Python floats.
The label is folded into the instance, so the loss is ``log(1 + exp(x.w))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, ParameterError

NORM_TOL = 1e-12
SUPPORTED_DIMS = (1, 2)


@dataclass(frozen=True)
class Domain:
    """Closed Euclidean ball ``{w : ||w|| <= radius}`` in ``dim`` dimensions."""

    radius: float
    dim: int = 1

    def __post_init__(self):
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise ParameterError(f"radius must be positive and finite, got {self.radius}")
        if self.dim not in SUPPORTED_DIMS:
            raise ParameterError(f"dim must be one of {SUPPORTED_DIMS}, got {self.dim}")


def softplus(z: float) -> float:
    """``log(1 + e^z)`` for a scalar, without overflow."""
    if z > 0:
        return z + math.log1p(math.exp(-z))
    return math.log1p(math.exp(z))


def sigmoid(z: float) -> float:
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)


def softplus_array(z):
    z = np.asarray(z, dtype=float)
    pos = z > 0
    return np.where(pos, z, 0.0) + np.log1p(np.exp(-np.abs(z)))


def sigmoid_array(z):
    z = np.asarray(z, dtype=float)
    e = np.exp(-np.abs(z))
    return np.where(z >= 0, 1.0 / (1.0 + e), e / (1.0 + e))


def as_vector(v) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(v, dtype=float))
    if arr.ndim != 1:
        raise ContractViolation(f"expected a 1-D vector, got shape {arr.shape}")
    return arr


def check_instance(x) -> np.ndarray:
    """Return ``x`` as a vector, raising if it lies outside the unit ball."""
    x = as_vector(x)
    nrm = float(np.linalg.norm(x))
    if nrm > 1.0 + NORM_TOL:
        raise ParameterError(f"instance norm {nrm} exceeds 1")
    return x


def _pair(w, x) -> tuple[np.ndarray, np.ndarray]:
    w = as_vector(w)
    x = as_vector(x)
    if w.shape != x.shape:
        raise ContractViolation(f"dimension mismatch: w has {w.size}, x has {x.size}")
    return w, x


def logistic_loss(w, x) -> float:
    w, x = _pair(w, x)
    return softplus(float(x @ w))


def logistic_grad(w, x) -> np.ndarray:
    """Gradient in ``w``: ``sigmoid(x.w) * x``."""
    w, x = _pair(w, x)
    return sigmoid(float(x @ w)) * x


def logistic_rank1_hessian(w, x) -> tuple[float, np.ndarray]:
    """Return ``(s, x)`` with the Hessian in ``w`` equal to ``s * outer(x, x)``."""
    w, x = _pair(w, x)
    s = sigmoid(float(x @ w))
    return s * (1.0 - s), x


def project(u, dom: Domain) -> np.ndarray:
    """Euclidean projection of ``u`` onto the ball of ``dom``."""
    u = as_vector(u)
    if u.size != dom.dim:
        raise ContractViolation(f"dimension mismatch: u has {u.size}, domain has {dom.dim}")
    nrm = float(np.linalg.norm(u))
    if nrm <= dom.radius:
        return u.copy()
    return u * (dom.radius / nrm)
