"""Convex Hamiltonians and their Legendre-Fenchel conjugates.

Supported kinds: ``quadratic`` H(p) = c|p|^2/2, ``power`` H(p) = a|p|^q with
1 <= q <= 2, ``zero`` H = 0, and ``sampled`` (convex piecewise-linear
interpolation of 1-d user samples).  Every Hamiltonian carries a growth
constant K with |H(p)| <= K(|p| + |p|^2).
"""

import csv
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Hamiltonian",
    "ConjugateTable",
    "eval_h",
    "legendre_conjugate",
    "build_conjugate_table",
]

_CONVEXITY_TOL = 1e-10


def _norm(p) -> float:
    p = np.asarray(p, dtype=np.float64)
    return float(np.sqrt(np.sum(p * p))) if p.ndim else float(abs(p))


@dataclass(frozen=True)
class Hamiltonian:
    kind: str
    growth_constant: float
    params: dict = field(default_factory=dict)
    sample_points: np.ndarray | None = field(default=None, repr=False)
    sample_values: np.ndarray | None = field(default=None, repr=False)

    @classmethod
    def quadratic(cls, c: float) -> "Hamiltonian":
        if not c > 0:
            raise ValueError("quadratic coefficient must be positive")
        # |p|^2 c/2 <= (c/2)(|p| + |p|^2)
        return cls(kind="quadratic", growth_constant=c / 2.0, params={"c": c})

    @classmethod
    def power(cls, a: float, q: float) -> "Hamiltonian":
        if not a > 0:
            raise ValueError("power coefficient must be positive")
        if not 1.0 <= q <= 2.0:
            raise ValueError("power exponent must lie in [1, 2]")
        # a|p|^q <= a(|p| + |p|^2) for 1 <= q <= 2
        return cls(kind="power", growth_constant=a, params={"a": a, "q": q})

    @classmethod
    def zero(cls) -> "Hamiltonian":
        return cls(kind="zero", growth_constant=0.0)

    @classmethod
    def sampled(cls, points, values) -> "Hamiltonian":
        points = np.asarray(points, dtype=np.float64)
        values = np.asarray(values, dtype=np.float64)
        if points.ndim != 1 or points.shape != values.shape:
            raise ValueError("sampled Hamiltonian needs matching 1-d arrays")
        if points.size < 3:
            raise ValueError("sampled Hamiltonian needs at least 3 points")
        if np.any(np.diff(points) <= 0):
            raise ValueError("sample points must be strictly increasing")
        if points[0] > 0 or points[-1] < 0:
            raise ValueError("sample range must contain p = 0")
        # convexity: slopes non-decreasing
        slopes = np.diff(values) / np.diff(points)
        if np.any(np.diff(slopes) < -_CONVEXITY_TOL):
            raise ValueError("sampled Hamiltonian is not convex")
        h0 = float(np.interp(0.0, points, values))
        if abs(h0) > 1e-12:
            raise ValueError(f"H(0) must be 0, interpolated value is {h0}")
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.abs(values) / (np.abs(points) + points**2)
        ratio = ratio[np.isfinite(ratio)]
        k = float(np.max(ratio)) if ratio.size else 0.0
        ham = cls(
            kind="sampled",
            growth_constant=k,
            sample_points=points,
            sample_values=values,
        )
        return ham

    @classmethod
    def from_csv(cls, path) -> "Hamiltonian":
        """Load a sampled Hamiltonian from CSV rows ``p,value``."""
        pts, vals = [], []
        with open(path) as fh:
            reader = csv.reader(fh)
            for row in reader:
                if not row or row[0].strip().lower() in ("p", ""):
                    continue
                pts.append(float(row[0]))
                vals.append(float(row[1]))
        return cls.sampled(np.array(pts), np.array(vals))

    def __call__(self, p):
        return eval_h(self, p)


def eval_h(h: Hamiltonian, p) -> float:
    """Evaluate H(p); p may be a scalar or a length-2 point."""
    r = _norm(p)
    if h.kind == "zero":
        return 0.0
    if h.kind == "quadratic":
        return h.params["c"] * r * r / 2.0
    if h.kind == "power":
        return h.params["a"] * r ** h.params["q"]
    if h.kind == "sampled":
        p = float(np.asarray(p).reshape(-1)[0]) if np.ndim(p) else float(p)
        if p < h.sample_points[0] or p > h.sample_points[-1]:
            raise ValueError("evaluation point outside sampled range")
        return float(np.interp(p, h.sample_points, h.sample_values))
    raise ValueError(f"unknown Hamiltonian kind {h.kind!r}")


def default_search_radius(h: Hamiltonian, lam) -> float:
    """Search-box radius containing interior maximizers of <lam,x> - H(x)."""
    return 4.0 * (_norm(lam) + h.growth_constant) + 1.0


def legendre_conjugate(h: Hamiltonian, lam, search_radius=None, samples=257):
    """L(lam) = sup_x(<lam, x> - H(x)) with an attainment flag.

    Closed-form kinds are evaluated analytically.  Sampled kinds scan the
    vertices of the piecewise-linear interpolant inside the search box; a
    boundary maximizer with strictly positive outward slope marks the sup as
    non-attained and the value as +inf.
    """
    r = _norm(lam)
    if h.kind == "zero":
        return (0.0, True) if r == 0.0 else (np.inf, False)
    if h.kind == "quadratic":
        return r * r / (2.0 * h.params["c"]), True
    if h.kind == "power":
        a, q = h.params["a"], h.params["q"]
        if q == 1.0:
            return (0.0, True) if r <= a else (np.inf, False)
        # maximizer s* = (r/(aq))^(1/(q-1)) of r s - a s^q over s >= 0
        expo = q / (q - 1.0)
        return a * (q - 1.0) * (r / (a * q)) ** expo, True
    if h.kind == "sampled":
        if search_radius is None:
            search_radius = default_search_radius(h, lam)
        if not search_radius > 0:
            raise ValueError("search box must contain the origin")
        if samples < 64:
            raise ValueError("need at least 64 samples for the conjugate scan")
        lam = float(np.asarray(lam).reshape(-1)[0]) if np.ndim(lam) else float(lam)
        pts = h.sample_points
        vals = h.sample_values
        mask = np.abs(pts) <= search_radius
        if not mask.any() or not (pts[mask].min() <= 0.0 <= pts[mask].max()):
            raise ValueError("search box must contain the origin")
        cand_p = pts[mask]
        cand_v = lam * cand_p - vals[mask]
        k = int(np.argmax(cand_v))
        value = float(cand_v[k])
        if k == cand_p.size - 1:
            # maximizer on the right edge of the scanned set
            if cand_p[k] >= pts[-1]:
                # true boundary of the sampled domain: runaway if the
                # outward slope of the objective is strictly positive
                if lam - _edge_slope(pts, vals, right=True) > 0:
                    return np.inf, False
            else:
                return value, False  # clipped by the search box
        if k == 0:
            if cand_p[0] <= pts[0]:
                if -lam + _edge_slope(pts, vals, right=False) > 0:
                    return np.inf, False
            else:
                return value, False
        return value, True
    raise ValueError(f"unknown Hamiltonian kind {h.kind!r}")


def _edge_slope(pts, vals, right: bool) -> float:
    if right:
        return float((vals[-1] - vals[-2]) / (pts[-1] - pts[-2]))
    return float((vals[1] - vals[0]) / (pts[1] - pts[0]))


@dataclass(frozen=True)
class ConjugateTable:
    """Tabulated conjugate on a uniform dual grid, with attainment flags."""

    lambda_nodes: np.ndarray
    values: np.ndarray
    attained_flags: np.ndarray
    lambda0: float  # argmin of L over the table

    @property
    def min_value(self) -> float:
        return float(np.min(self.values[np.isfinite(self.values)]))


def build_conjugate_table(
    h: Hamiltonian, lambda_box: float, lambda_samples: int = 257
) -> ConjugateTable:
    """Tabulate the conjugate on a uniform grid over [-box, box].

    Enforces the table invariants: nonnegative finite values with minimum 0
    (up to 1e-8), the quadratic growth lower bound beyond 2K, and midpoint
    convexity on the finite domain.
    """
    if lambda_samples < 64:
        raise ValueError("need at least 64 lambda samples")
    if lambda_samples % 2 == 0:
        raise ValueError("lambda_samples must be odd so the grid contains 0")
    if not lambda_box > 0:
        raise ValueError("lambda box must be positive")
    nodes = np.linspace(-lambda_box, lambda_box, lambda_samples)
    nodes[lambda_samples // 2] = 0.0
    values = np.empty(lambda_samples)
    attained = np.empty(lambda_samples, dtype=bool)
    for i, lam in enumerate(nodes):
        values[i], attained[i] = legendre_conjugate(h, lam)
    finite = np.isfinite(values)
    if not finite.any():
        raise ValueError("conjugate is infinite on the whole lambda box")
    fin_vals = values[finite]
    if np.min(fin_vals) < -1e-8:
        raise ValueError("conjugate table has negative entries")
    if abs(np.min(fin_vals)) > 1e-8:
        raise ValueError("min of the conjugate table is not 0")
    k = h.growth_constant
    if k > 0:
        far = finite & (np.abs(nodes) >= 2.0 * k)
        lower = nodes[far] ** 2 / (16.0 * k) - 1e-8
        if np.any(values[far] < lower):
            raise ValueError("conjugate table violates the growth lower bound")
    # midpoint convexity on consecutive finite triples
    fv = values.copy()
    for i in range(1, lambda_samples - 1):
        if finite[i - 1] and finite[i] and finite[i + 1]:
            if fv[i] > (fv[i - 1] + fv[i + 1]) / 2.0 + 1e-8:
                raise ValueError("conjugate table is not convex")
    lambda0 = float(nodes[finite][int(np.argmin(fin_vals))])
    return ConjugateTable(nodes, values, attained, lambda0)
