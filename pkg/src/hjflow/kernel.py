"""Gaussian (heat) kernel expectations by deterministic quadrature.

The discrete kernel is a renormalized sampled Gaussian on a window of
``truncation_multiple * sqrt(t)``; weights sum exactly to 1, which keeps the
heat step monotone and a sup-norm contraction.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

from . import _kernels
from .grid import GridFunction

__all__ = [
    "GaussKernel",
    "gauss_weights",
    "heat_step",
    "gauss_expectation",
    "brownian_tail",
    "holder_shift_check",
]

DEFAULT_TRUNCATION = 8.0


@dataclass(frozen=True)
class GaussKernel:
    """Discrete heat kernel of variance t, truncated and renormalized."""

    t: float
    truncation_multiple: float = DEFAULT_TRUNCATION
    dim: int = 1

    def __post_init__(self):
        if self.t < 0:
            raise ValueError("time must be nonnegative")
        if self.truncation_multiple < 6:
            raise ValueError("truncation multiple must be at least 6")

    def weights(self, spacing: float) -> np.ndarray:
        return gauss_weights(self.t, spacing, self.truncation_multiple)


def gauss_weights(
    t: float, spacing: float, truncation_multiple: float = DEFAULT_TRUNCATION
) -> np.ndarray:
    """Renormalized Gaussian weights on grid offsets; odd length, centered."""
    if t < 0:
        raise ValueError("time must be nonnegative")
    if t == 0:
        return np.array([1.0])
    half = int(np.ceil(truncation_multiple * np.sqrt(t) / spacing))
    y = np.arange(-half, half + 1) * spacing
    w = np.exp(-y * y / (2.0 * t))
    return w / w.sum()


def heat_step(
    f: GridFunction, t: float, truncation_multiple: float = DEFAULT_TRUNCATION
) -> GridFunction:
    """Discrete Gaussian convolution of f, zero-extended; t = 0 is identity."""
    if t < 0:
        raise ValueError("time must be nonnegative")
    if t == 0:
        return f
    w = gauss_weights(t, f.spec.spacing, truncation_multiple)
    if f.spec.dim == 1:
        out = _kernels.conv1d(f.values, w)
    else:
        # isotropic kernel factorizes into two 1-d passes
        out = _kernels.conv_axis(f.values, w, axis=0)
        out = _kernels.conv_axis(out, w, axis=1)
    return f.with_values(out)


def _quad_nodes(t: float, truncation_multiple: float, num_points: int):
    half_width = truncation_multiple * np.sqrt(t)
    y = np.linspace(-half_width, half_width, num_points)
    w = np.exp(-y * y / (2.0 * t))
    return y, w / w.sum()


def gauss_expectation(
    g,
    x,
    t: float,
    truncation_multiple: float = DEFAULT_TRUNCATION,
    num_points: int = 2001,
) -> float:
    """Quadrature of g(x + y) against the renormalized N(0, t) density.

    1-d points use a uniform window of ``num_points`` nodes; 2-d points use
    the tensor grid of a reduced per-axis count.
    """
    if not t > 0:
        raise ValueError("time must be positive")
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if x.size == 1:
        y, w = _quad_nodes(t, truncation_multiple, num_points)
        vals = np.asarray(g(x[0] + y), dtype=np.float64)
    else:
        per_axis = max(65, int(np.sqrt(num_points)) | 1)
        y, w1 = _quad_nodes(t, truncation_multiple, per_axis)
        yy0, yy1 = np.meshgrid(y, y, indexing="ij")
        pts = np.column_stack([x[0] + yy0.ravel(), x[1] + yy1.ravel()])
        vals = np.asarray(g(pts), dtype=np.float64)
        w = np.outer(w1, w1).ravel()
    if not np.all(np.isfinite(vals)):
        raise ValueError("integrand is not finite inside the quadrature window")
    return float(np.sum(w * vals))


def brownian_tail(r: float, t: float, dim: int = 1) -> float:
    """Exact P(|W_t| >= r) for Brownian motion in dimension 1 or 2."""
    if dim not in (1, 2):
        raise ValueError("dimension must be 1 or 2")
    if r < 0:
        raise ValueError("radius must be nonnegative")
    if r == 0:
        return 1.0
    if not t > 0:
        raise ValueError("time must be positive")
    if dim == 1:
        return float(erfc(r / np.sqrt(2.0 * t)))
    # |W_t|^2 / t is chi-squared with 2 degrees of freedom
    return float(np.exp(-r * r / (2.0 * t)))


def holder_shift_check(f, x, lam, t: float, p: float, num_points: int = 2001):
    """Both sides of the drift-shift bound.

    lhs = E|f(x + W_t + lam t)|;  rhs = exp((q-1)|lam|^2 t / 2) E[|f|^p(x + W_t)]^(1/p)
    with 1/p + 1/q = 1.  The contract lhs <= rhs + 1e-8 is checked by callers.
    f may be a GridFunction or any vectorized callable.
    """
    if not p > 1:
        raise ValueError("exponent p must exceed 1")
    q = p / (p - 1.0)
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    lam = np.atleast_1d(np.asarray(lam, dtype=np.float64))
    lam_sq = float(np.sum(lam * lam))
    if x.size == 1:
        lhs = gauss_expectation(lambda y: np.abs(f(y)), x[0] + lam[0] * t, t, num_points=num_points)
        moment = gauss_expectation(lambda y: np.abs(f(y)) ** p, x[0], t, num_points=num_points)
    else:
        lhs = gauss_expectation(lambda pts: np.abs(f(pts)), x + lam * t, t, num_points=num_points)
        moment = gauss_expectation(lambda pts: np.abs(f(pts)) ** p, x, t, num_points=num_points)
    rhs = np.exp((q - 1.0) * lam_sq * t / 2.0) * moment ** (1.0 / p)
    return float(lhs), float(rhs)
