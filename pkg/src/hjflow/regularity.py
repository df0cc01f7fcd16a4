"""Trajectory diagnostics: time-Lipschitz estimates and witnessed a-priori
bounds along the solved flow.

The flow is sampled at the finest schedule level; the time derivative is the
forward difference over one fine step, matching the right-derivative
formulation of the abstract Cauchy problem.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .chernoff import SolverConfig, _h_of_gradient, one_step, parse_dyadic
from .grid import (
    GridFunction,
    discrete_gradient_sup,
    discrete_laplacian,
    discrete_laplacian_sup,
    sup_norm,
)

__all__ = [
    "PropertyViolation",
    "DiagnosticsReport",
    "time_lipschitz_estimate",
    "apriori_bound_report",
    "pde_residual_along_trajectory",
]


class PropertyViolation(RuntimeError):
    """A certified inequality of the discrete operator failed."""


@dataclass
class DiagnosticsReport:
    """Witnessed suprema along a solved trajectory; all fields finite, >= 0."""

    gamma_estimate: float
    sup_dt_u: float
    sup_laplacian_u: float
    sup_gradient_u: float
    witness_C: float
    times: tuple = ()
    level: int = 0
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("gamma_estimate", "sup_dt_u", "sup_laplacian_u", "sup_gradient_u", "witness_C"):
            v = getattr(self, name)
            if not np.isfinite(v) or v < 0:
                raise PropertyViolation(f"diagnostic field {name} = {v} is not finite nonnegative")

    def write(self, path):
        """Flat key=value serialization, one field per line, 17 digits."""
        with open(path, "w") as fh:
            for name in ("gamma_estimate", "sup_dt_u", "sup_laplacian_u", "sup_gradient_u", "witness_C"):
                fh.write(f"{name}={getattr(self, name):.17g}\n")
            fh.write("level=%d\n" % self.level)
            fh.write("times=" + " ".join(str(t) for t in self.times) + "\n")
            for key, val in sorted(self.extra.items()):
                fh.write(f"{key}={val:.17g}\n")


def _trajectory(f: GridFunction, config: SolverConfig, times):
    """u(t) at each requested dyadic time, stepping at the finest level.

    Returns (sorted times as Fractions, list of GridFunctions, fine dt).
    Time stepping is sequential; each step reuses the previous state.
    """
    level = max(config.schedule.levels)
    dt = 2.0**-level
    table = config.ensure_table()
    ts = sorted(parse_dyadic(t) for t in times)
    out = []
    current = f
    reached = Fraction(0)
    for t in ts:
        steps_frac = (t - reached) * 2**level
        if steps_frac.denominator != 1 or steps_frac < 0:
            raise ValueError(f"time {t} is not reachable at level {level}")
        for _ in range(int(steps_frac)):
            current = one_step(
                current, dt, config.hamiltonian, table, config.lambda_window,
                config.truncation_multiple,
            )
        reached = t
        out.append(current)
    return ts, out, dt


def time_lipschitz_estimate(f: GridFunction, config: SolverConfig, time_samples) -> float:
    """Empirical gamma: max over sample pairs of sup|u(s) - u(t)| / |s - t|.

    The pair set includes (0, t) for every sample, so the estimate also
    bounds ||S(t)f - f||_inf / t on the samples.
    """
    ts, traj, _ = _trajectory(f, config, time_samples)
    ts = [Fraction(0)] + list(ts)
    traj = [f] + traj
    gamma = 0.0
    for i in range(len(ts)):
        for j in range(i + 1, len(ts)):
            gap = float(ts[j] - ts[i])
            if gap == 0.0:
                continue
            diff = sup_norm(traj[i].with_values(traj[i].values - traj[j].values))
            gamma = max(gamma, diff / gap)
    return gamma


def apriori_bound_report(f: GridFunction, config: SolverConfig, horizon) -> DiagnosticsReport:
    """Suprema of the forward time difference, Laplacian and gradient along
    the trajectory, with the gradient non-increase bound asserted.
    """
    ts, traj, dt = _trajectory(f, config, horizon)
    table = config.ensure_table()
    grad0 = discrete_gradient_sup(f)
    spacing = f.spec.spacing
    sup_dt = 0.0
    sup_lap = 0.0
    sup_grad = 0.0
    for u in traj:
        ahead = one_step(
            u, dt, config.hamiltonian, table, config.lambda_window, config.truncation_multiple
        )
        sup_dt = max(sup_dt, float(np.max(np.abs(ahead.values - u.values))) / dt)
        sup_lap = max(sup_lap, discrete_laplacian_sup(u))
        grad = discrete_gradient_sup(u)
        sup_grad = max(sup_grad, grad)
        if grad > grad0 + 10.0 * spacing:
            raise PropertyViolation(
                f"gradient sup grew from {grad0} to {grad}, beyond the 10-spacing tolerance"
            )
    gamma = time_lipschitz_estimate(f, config, horizon)
    return DiagnosticsReport(
        gamma_estimate=gamma,
        sup_dt_u=sup_dt,
        sup_laplacian_u=sup_lap,
        sup_gradient_u=sup_grad,
        witness_C=sup_dt + sup_lap + sup_grad,
        times=tuple(str(t) for t in ts),
        level=max(config.schedule.levels),
        extra={
            "laplacian_sup_f": discrete_laplacian_sup(f),
            "gradient_sup_f": grad0,
        },
    )


def pde_residual_along_trajectory(f: GridFunction, config: SolverConfig, times):
    """sup over interior nodes of the discrete PDE defect at each time.

    Defect: (u(t+dt) - u(t))/dt - Laplacian u(t)/2 - H(gradient u(t)), with
    dt the finest schedule step.
    """
    ts, traj, dt = _trajectory(f, config, times)
    table = config.ensure_table()
    residuals = []
    for u in traj:
        ahead = one_step(
            u, dt, config.hamiltonian, table, config.lambda_window, config.truncation_multiple
        )
        rate = (ahead.values - u.values) / dt
        interior = rate[1:-1] if f.spec.dim == 1 else rate[1:-1, 1:-1]
        target = 0.5 * discrete_laplacian(u) + _h_of_gradient(config.hamiltonian, u)
        residuals.append(float(np.max(np.abs(interior - target))))
    return residuals
