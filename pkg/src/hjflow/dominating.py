"""Dominating nonlinear expectation T(t)f = phi^{-1}(E[phi(e^{at} f(x+W_t))])
and the comparison inequalities it satisfies.

The expectation uses the same renormalized discrete Gaussian window as the
heat step, so monotonicity and the domination of the one-step operator hold
up to quadrature truncation only.
"""

import csv
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .chernoff import SolverConfig, iterate, one_step, parse_dyadic
from .grid import GridFunction, trapezoid_weights
from .kernel import DEFAULT_TRUNCATION, gauss_weights
from .orlicz import YoungFunction, luxemburg_norm, phi_inverse

__all__ = [
    "DominatingParams",
    "t_op",
    "domination_check",
    "semigroup_sub_check",
    "norm_bound_check",
    "s_lipschitz_orlicz_check",
    "arrow_pratt_check",
    "scaling_corollary_check",
    "tightness_radius",
    "tightness_diagnostic",
    "read_distribution_csv",
]


@dataclass(frozen=True)
class DominatingParams:
    """Rate a and Young function; defaults a = K^2, b = 8K + 1."""

    a: float
    young: YoungFunction

    def __post_init__(self):
        if self.a < 0:
            raise ValueError("a must be nonnegative")

    @classmethod
    def for_growth_constant(cls, k: float) -> "DominatingParams":
        return cls(a=k * k, young=YoungFunction.for_growth_constant(k))


def t_op(
    f: GridFunction,
    t: float,
    params: DominatingParams,
    truncation_multiple: float = DEFAULT_TRUNCATION,
) -> GridFunction:
    """Node-wise phi^{-1} of the Gaussian average of phi(e^{at} f)."""
    if t < 0:
        raise ValueError("time must be nonnegative")
    if np.any(f.values < 0):
        raise ValueError("t_op requires nonnegative input")
    if t == 0:
        return f
    young = params.young
    lifted = young.phi(np.exp(params.a * t) * f.values)
    if not np.all(np.isfinite(lifted)):
        raise ValueError("phi(e^{at} f) overflows; rescale the input")
    w = gauss_weights(t, f.spec.spacing, truncation_multiple)
    if f.spec.dim == 1:
        averaged = _kernels.conv1d(lifted, w)
    else:
        averaged = _kernels.conv_axis(lifted, w, axis=0)
        averaged = _kernels.conv_axis(averaged, w, axis=1)
    # rounding can leave tiny negatives where f vanishes
    averaged = np.maximum(averaged, 0.0)
    return f.with_values(phi_inverse(averaged, young.b))


@dataclass(frozen=True)
class DominationResult:
    one_step_violation: float
    iterate_violation: float


def domination_check(
    f: GridFunction,
    t,
    config: SolverConfig,
    params: DominatingParams,
    level: int | None = None,
) -> DominationResult:
    """Max over nodes of |I(t)f| - T(t)|f|, and the iterated analogue.

    Contract: both violations <= 1e-6.
    """
    table = config.ensure_table()
    t_float = float(parse_dyadic(t))
    dominator = t_op(f.with_values(np.abs(f.values)), t_float, params, config.truncation_multiple)
    stepped = one_step(
        f, t_float, config.hamiltonian, table, config.lambda_window, config.truncation_multiple
    )
    one_viol = float(np.max(np.abs(stepped.values) - dominator.values))
    if level is None:
        return DominationResult(one_viol, one_viol)
    iterated = iterate(
        f, t, level, config.hamiltonian, table, config.lambda_window, config.truncation_multiple
    )
    it_viol = float(np.max(np.abs(iterated.values) - dominator.values))
    return DominationResult(one_viol, it_viol)


def semigroup_sub_check(
    f: GridFunction,
    s: float,
    t: float,
    params: DominatingParams,
    truncation_multiple: float = DEFAULT_TRUNCATION,
) -> float:
    """Max over nodes of T(s)T(t)f - T(s+t)f; contract <= 1e-5."""
    if np.any(f.values < 0):
        raise ValueError("requires nonnegative input")
    composed = t_op(t_op(f, t, params, truncation_multiple), s, params, truncation_multiple)
    direct = t_op(f, s + t, params, truncation_multiple)
    return float(np.max(composed.values - direct.values))


def norm_bound_check(
    f: GridFunction,
    t: float,
    R: float,
    params: DominatingParams,
    truncation_multiple: float = DEFAULT_TRUNCATION,
):
    """(||T(t)f||_{Phi,R}, e^{at} ||f||_{Phi,R}) on the ball B_R(e^{-at})."""
    if np.any(f.values < 0):
        raise ValueError("requires nonnegative input")
    young = params.young
    norm_f = luxemburg_norm(f, young, R)
    cap = np.exp(-params.a * t)
    if norm_f > cap * (1.0 + 1e-12):
        raise ValueError(
            f"precondition violated: ||f||_(Phi,{R}) = {norm_f} > e^(-at) = {cap}; "
            f"f must lie in the ball B_R(e^(-at))"
        )
    lifted = t_op(f, t, params, truncation_multiple)
    return luxemburg_norm(lifted, young, R), np.exp(params.a * t) * norm_f


def s_lipschitz_orlicz_check(
    f: GridFunction,
    g: GridFunction,
    t,
    R: float,
    config: SolverConfig,
    params: DominatingParams,
    level: int,
):
    """(||S(t)f - S(t)g||_{Phi,R}, 4 e^{at} ||f - g||_{Phi,R}).

    Both inputs must lie in the ball B_R(e^{-at}/3); S(t) is approximated by
    the dyadic iteration at the given level.
    """
    young = params.young
    t_float = float(parse_dyadic(t))
    cap = np.exp(-params.a * t_float) / 3.0
    for name, func in (("f", f), ("g", g)):
        norm = luxemburg_norm(func, young, R)
        if norm > cap * (1.0 + 1e-12):
            raise ValueError(
                f"precondition violated: ||{name}||_(Phi,{R}) = {norm} > e^(-at)/3 = {cap}"
            )
    table = config.ensure_table()
    sf = iterate(f, t, level, config.hamiltonian, table, config.lambda_window, config.truncation_multiple)
    sg = iterate(g, t, level, config.hamiltonian, table, config.lambda_window, config.truncation_multiple)
    lhs = luxemburg_norm(sf.with_values(sf.values - sg.values), young, R)
    rhs = 4.0 * np.exp(params.a * t_float) * luxemburg_norm(
        f.with_values(f.values - g.values), young, R
    )
    return lhs, rhs


def _invert_increasing(fn, target, lo, hi):
    """Invert a strictly increasing scalar function by bracketed bisection."""
    flo, fhi = fn(lo), fn(hi)
    if not flo <= target <= fhi:
        raise ValueError("inversion target outside bracket")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if fn(mid) >= target:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-14 * (1.0 + abs(hi)):
            break
    return 0.5 * (lo + hi)


def arrow_pratt_check(u, v, atoms, probs, hull_samples: int = 201):
    """Certainty equivalents (u^{-1}(E u(X)), v^{-1}(E v(X))).

    Requires the risk-aversion ordering u''/u' <= v''/v' on the convex hull
    of the support and both functions strictly increasing there; violated
    hypotheses reject the input rather than reporting an inequality failure.
    """
    atoms = np.asarray(atoms, dtype=np.float64)
    probs = np.asarray(probs, dtype=np.float64)
    if atoms.shape != probs.shape or atoms.ndim != 1:
        raise ValueError("atoms and probabilities must be matching 1-d arrays")
    if abs(probs.sum() - 1.0) > 1e-12 or np.any(probs < 0):
        raise ValueError("probabilities must be nonnegative and sum to 1")
    if np.any(atoms < 0):
        raise ValueError("support must be nonnegative")
    lo, hi = float(atoms.min()), float(atoms.max())
    if hi > lo:
        xs = np.linspace(lo, hi, hull_samples)
        step = max(1e-6, 1e-7 * (hi - lo))
        xs = np.clip(xs, lo + step, hi - step) if hi - lo > 2 * step else xs
        for x in xs:
            du = (u(x + step) - u(x - step)) / (2 * step)
            dv = (v(x + step) - v(x - step)) / (2 * step)
            if du <= 0 or dv <= 0:
                raise ValueError("utilities must be strictly increasing on the hull")
            ddu = (u(x + step) - 2 * u(x) + u(x - step)) / step**2
            ddv = (v(x + step) - 2 * v(x) + v(x - step)) / step**2
            if ddu / du > ddv / dv + 1e-6:
                raise ValueError("risk-aversion ordering hypothesis fails on the hull")
    eu = float(np.sum(probs * np.array([u(x) for x in atoms])))
    ev = float(np.sum(probs * np.array([v(x) for x in atoms])))
    if hi == lo:
        return lo, lo
    ce_u = _invert_increasing(u, eu, lo, hi)
    ce_v = _invert_increasing(v, ev, lo, hi)
    return ce_u, ce_v


def scaling_corollary_check(atoms, probs, c: float, young: YoungFunction):
    """(c phi^{-1}(E phi(X)), phi^{-1}(E phi(cX))) for c >= 1."""
    if c < 1:
        raise ValueError("scaling factor must be at least 1")
    atoms = np.asarray(atoms, dtype=np.float64)
    probs = np.asarray(probs, dtype=np.float64)
    if abs(probs.sum() - 1.0) > 1e-12 or np.any(probs < 0):
        raise ValueError("probabilities must be nonnegative and sum to 1")
    if np.any(atoms < 0):
        raise ValueError("support must be nonnegative")
    lhs = c * phi_inverse(float(np.sum(probs * young.phi(atoms))), young.b)
    rhs = phi_inverse(float(np.sum(probs * young.phi(c * atoms))), young.b)
    return lhs, rhs


def tightness_radius(f: GridFunction, m: float, params: DominatingParams) -> float:
    """Exclusion radius for the tightness integral: max(r0, c, 2bc) with
    c = max(volume of the support ball, e^a sup|f| / m)."""
    if not 0 < m <= 1:
        raise ValueError("m must lie in (0, 1]")
    support = np.abs(f.values) > 1e-300
    if not support.any():
        return 0.0
    dist = f.spec.radial_distance()
    r0 = float(np.max(dist[support]))
    ball_volume = 2.0 * r0 if f.spec.dim == 1 else np.pi * r0 * r0
    c = max(ball_volume, np.exp(params.a) * float(np.max(np.abs(f.values))) / m)
    return max(r0, c, 2.0 * params.young.b * c)


def tightness_diagnostic(
    f: GridFunction,
    m: float,
    r: float,
    t_list,
    params: DominatingParams,
    truncation_multiple: float = DEFAULT_TRUNCATION,
):
    """Integral of Phi(T(t)f / (m t)) over the grid-truncated complement of
    the radius-r ball, for each t in t_list."""
    if np.any(f.values < 0):
        raise ValueError("requires nonnegative input")
    support = np.abs(f.values) > 1e-300
    if support.any():
        dist = f.spec.radial_distance()
        if np.max(dist[support]) >= f.spec.half_width:
            raise ValueError("support touches the grid boundary; not compactly contained")
    weights = trapezoid_weights(f.spec)
    outside = f.spec.radial_distance() > r
    out = []
    young = params.young
    for t in t_list:
        lifted = t_op(f, float(t), params, truncation_multiple)
        integrand = young.big_phi(lifted.values / (m * float(t)))
        out.append(float(np.sum(weights[outside] * integrand[outside])))
    return out


def read_distribution_csv(path):
    """CSV rows ``atom,probability``; probabilities must sum to 1 (1e-12)."""
    atoms, probs = [], []
    with open(path) as fh:
        for row in csv.reader(fh):
            if not row or row[0].strip().lower() in ("atom", ""):
                continue
            atoms.append(float(row[0]))
            probs.append(float(row[1]))
    atoms = np.asarray(atoms)
    probs = np.asarray(probs)
    if abs(probs.sum() - 1.0) > 1e-12:
        raise ValueError("probabilities must sum to 1")
    return atoms, probs
