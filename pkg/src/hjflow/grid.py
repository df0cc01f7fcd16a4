"""Uniform-grid representation of functions vanishing at infinity.

A grid covers ``[-X, X]^dim`` with a power-of-two number of intervals per
axis, so node count is odd and the origin is an exact node.  Functions are
extended by zero outside the grid.
"""

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "GridSpec",
    "GridFunction",
    "sup_norm",
    "discrete_gradient_sup",
    "discrete_laplacian_sup",
    "integral",
    "write_csv",
    "read_csv",
]


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid on ``[-half_width, half_width]^dim``.

    ``points_per_axis`` counts intervals per axis (a power of two), so there
    are ``points_per_axis + 1`` nodes per axis and the origin is the middle
    node, exactly representable.
    """

    dim: int
    half_width: float
    points_per_axis: int

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError(f"dim must be 1 or 2, got {self.dim}")
        if not self.half_width > 0:
            raise ValueError("half_width must be positive")
        if self.points_per_axis < 16 or not _is_power_of_two(self.points_per_axis):
            raise ValueError(
                "points_per_axis must be a power of two >= 16, "
                f"got {self.points_per_axis}"
            )

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.points_per_axis

    @property
    def nodes_per_axis(self) -> int:
        return self.points_per_axis + 1

    def axis(self) -> np.ndarray:
        """Node coordinates along one axis; the origin is node N/2 exactly."""
        n = self.points_per_axis
        return (np.arange(n + 1) - n // 2) * self.spacing

    @property
    def shape(self):
        return (self.nodes_per_axis,) * self.dim

    def nodes(self) -> np.ndarray:
        """All node coordinates, shape (num_nodes, dim), lexicographic."""
        ax = self.axis()
        if self.dim == 1:
            return ax[:, None]
        xx, yy = np.meshgrid(ax, ax, indexing="ij")
        return np.column_stack([xx.ravel(), yy.ravel()])

    def radial_distance(self) -> np.ndarray:
        """Euclidean distance of every node from the origin, grid-shaped."""
        ax = self.axis()
        if self.dim == 1:
            return np.abs(ax)
        xx, yy = np.meshgrid(ax, ax, indexing="ij")
        return np.hypot(xx, yy)


@dataclass(frozen=True)
class GridFunction:
    """Sampled function on a :class:`GridSpec`; zero outside the grid."""

    spec: GridSpec
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != self.spec.shape:
            raise ValueError(
                f"values shape {values.shape} does not match grid {self.spec.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("grid function values must be finite")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_callable(cls, spec: GridSpec, fn) -> "GridFunction":
        ax = spec.axis()
        if spec.dim == 1:
            vals = np.asarray(fn(ax), dtype=np.float64)
        else:
            xx, yy = np.meshgrid(ax, ax, indexing="ij")
            vals = np.asarray(fn(xx, yy), dtype=np.float64)
        return cls(spec, vals)

    @classmethod
    def zeros(cls, spec: GridSpec) -> "GridFunction":
        return cls(spec, np.zeros(spec.shape))

    def with_values(self, values) -> "GridFunction":
        return GridFunction(self.spec, values)

    def __call__(self, points):
        """Evaluate at arbitrary points by linear interpolation, 0 outside."""
        spec = self.spec
        pts = np.asarray(points, dtype=np.float64)
        if spec.dim == 1:
            return np.interp(pts, spec.axis(), self.values, left=0.0, right=0.0)
        pts = np.atleast_2d(pts)
        h = spec.spacing
        n = spec.points_per_axis
        # fractional index coordinates
        fi = pts[:, 0] / h + n // 2
        fj = pts[:, 1] / h + n // 2
        inside = (fi >= 0) & (fi <= n) & (fj >= 0) & (fj <= n)
        fi = np.clip(fi, 0, n)
        fj = np.clip(fj, 0, n)
        i0 = np.minimum(np.floor(fi).astype(int), n - 1)
        j0 = np.minimum(np.floor(fj).astype(int), n - 1)
        di = fi - i0
        dj = fj - j0
        v = self.values
        out = (
            v[i0, j0] * (1 - di) * (1 - dj)
            + v[i0 + 1, j0] * di * (1 - dj)
            + v[i0, j0 + 1] * (1 - di) * dj
            + v[i0 + 1, j0 + 1] * di * dj
        )
        return np.where(inside, out, 0.0)


def sup_norm(f: GridFunction) -> float:
    """Maximum of |f| over the nodes."""
    return float(np.max(np.abs(f.values))) if f.values.size else 0.0


def _require_interior(f: GridFunction):
    if f.spec.nodes_per_axis < 3:
        raise ValueError("grid too small for interior differences")


def discrete_gradient_sup(f: GridFunction) -> float:
    """Max over interior nodes of the central-difference gradient norm."""
    _require_interior(f)
    h = f.spec.spacing
    v = f.values
    if f.spec.dim == 1:
        grad = (v[2:] - v[:-2]) / (2.0 * h)
        return float(np.max(np.abs(grad)))
    gx = (v[2:, 1:-1] - v[:-2, 1:-1]) / (2.0 * h)
    gy = (v[1:-1, 2:] - v[1:-1, :-2]) / (2.0 * h)
    return float(np.max(np.hypot(gx, gy)))


def discrete_laplacian(f: GridFunction) -> np.ndarray:
    """Second-order central-difference Laplacian on interior nodes."""
    _require_interior(f)
    h2 = f.spec.spacing**2
    v = f.values
    if f.spec.dim == 1:
        return (v[2:] - 2.0 * v[1:-1] + v[:-2]) / h2
    lap_x = (v[2:, 1:-1] - 2.0 * v[1:-1, 1:-1] + v[:-2, 1:-1]) / h2
    lap_y = (v[1:-1, 2:] - 2.0 * v[1:-1, 1:-1] + v[1:-1, :-2]) / h2
    return lap_x + lap_y


def discrete_laplacian_sup(f: GridFunction) -> float:
    """Max over interior nodes of the absolute discrete Laplacian."""
    return float(np.max(np.abs(discrete_laplacian(f))))


def trapezoid_weights(spec: GridSpec) -> np.ndarray:
    """Quadrature weights of the trapezoid rule on the truncated domain."""
    w1 = np.full(spec.nodes_per_axis, spec.spacing)
    w1[0] *= 0.5
    w1[-1] *= 0.5
    if spec.dim == 1:
        return w1
    return np.outer(w1, w1)


def integral(f: GridFunction) -> float:
    """Trapezoidal quadrature of f over the truncated domain."""
    return float(np.sum(trapezoid_weights(f.spec) * f.values))


def write_csv(f: GridFunction, path):
    """CSV serialization: header ``x[,y],value``, lexicographic node order."""
    nodes = f.spec.nodes()
    vals = f.values.ravel()
    with open(path, "w") as fh:
        if f.spec.dim == 1:
            fh.write("x,value\n")
            for x, v in zip(nodes[:, 0], vals):
                fh.write(f"{x:.17g},{v:.17g}\n")
        else:
            fh.write("x,y,value\n")
            for (x, y), v in zip(nodes, vals):
                fh.write(f"{x:.17g},{y:.17g},{v:.17g}\n")


def read_csv(path, spec: GridSpec) -> GridFunction:
    """Read a grid function written by :func:`write_csv` onto ``spec``."""
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[0] != np.prod(spec.shape):
        raise ValueError("csv row count does not match grid")
    vals = data[:, -1].reshape(spec.shape)
    return GridFunction(spec, vals)
