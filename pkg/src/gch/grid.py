"""Uniform periodic grid, sampled fields, spectral derivatives, and norms.

Everything downstream operates on ``Field`` values living on a ``Grid``:
right-hand sides, convolution operators, weighted norms and diagnostics all
reduce to array work on these two types.  The domain is the periodic box
[-L, L); decaying data is assumed small at the seam, and callers that care
record the boundary magnitude explicitly.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "Grid",
    "Field",
    "make_grid",
    "sample",
    "derivative",
    "lp_norm",
    "h1_norm",
    "interpolate_onto",
    "read_initial_condition",
    "load_initial_condition",
]


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


class Grid:
    """Uniform periodic mesh on [-L, L) with its wavenumber table.

    Nodes are x_j = -L + j*dx with dx = 2L/n and n a power of two.
    Wavenumbers follow FFT ordering, k = (pi/L)*m for signed mode index m;
    the Nyquist mode is stored with the negative sign and treated as its own
    negative.  ``k_rfft`` holds the one-sided table used with real FFTs.
    """

    __slots__ = ("n", "half_width", "dx", "x", "k", "k_rfft")

    def __init__(self, n: int, half_width: float):
        if int(n) != n:
            raise ValueError(f"n must be an integer, got {n!r}")
        n = int(n)
        if n < 16 or not _is_power_of_two(n):
            raise ValueError(f"n must be a power of two >= 16, got {n}")
        half_width = float(half_width)
        if not np.isfinite(half_width) or half_width <= 0.0:
            raise ValueError(f"half_width must be positive and finite, got {half_width}")
        self.n = n
        self.half_width = half_width
        self.dx = 2.0 * half_width / n
        x = -half_width + self.dx * np.arange(n)
        k = (np.pi / half_width) * np.fft.fftfreq(n, d=1.0 / n)
        k_rfft = (np.pi / half_width) * np.arange(n // 2 + 1)
        for arr in (x, k, k_rfft):
            arr.setflags(write=False)
        self.x = x
        self.k = k
        self.k_rfft = k_rfft

    @property
    def L(self) -> float:
        return self.half_width

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Grid)
            and self.n == other.n
            and self.half_width == other.half_width
        )

    def __hash__(self) -> int:
        return hash((self.n, self.half_width))

    def __repr__(self) -> str:
        return f"Grid(n={self.n}, half_width={self.half_width})"


class Field:
    """Real-valued samples of a function on a :class:`Grid`.

    Fields are immutable; arithmetic requires both operands to live on the
    same grid.  Non-finite samples are rejected unless the field is
    explicitly flagged as a failed diagnostic via ``allow_nonfinite``.
    """

    __slots__ = ("grid", "values")

    def __init__(self, grid: Grid, values, allow_nonfinite: bool = False):
        values = np.asarray(values, dtype=float)
        if values.shape != (grid.n,):
            raise ValueError(f"values must have shape ({grid.n},), got {values.shape}")
        if not allow_nonfinite and not np.all(np.isfinite(values)):
            raise ValueError("field contains non-finite samples")
        values = values.copy()
        values.setflags(write=False)
        self.grid = grid
        self.values = values

    def _check_same_grid(self, other: "Field") -> None:
        if self.grid != other.grid:
            raise ValueError(f"grid mismatch: {self.grid} vs {other.grid}")

    def __add__(self, other):
        if isinstance(other, Field):
            self._check_same_grid(other)
            return Field(self.grid, self.values + other.values)
        return Field(self.grid, self.values + other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Field):
            self._check_same_grid(other)
            return Field(self.grid, self.values - other.values)
        return Field(self.grid, self.values - other)

    def __rsub__(self, other):
        return Field(self.grid, other - self.values)

    def __mul__(self, other):
        if isinstance(other, Field):
            self._check_same_grid(other)
            return Field(self.grid, self.values * other.values)
        return Field(self.grid, self.values * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Field):
            self._check_same_grid(other)
            return Field(self.grid, self.values / other.values)
        return Field(self.grid, self.values / other)

    def __neg__(self):
        return Field(self.grid, -self.values)

    def __repr__(self) -> str:
        return f"Field({self.grid!r}, max|.|={np.max(np.abs(self.values)):.3e})"


def make_grid(n: int, half_width: float) -> Grid:
    """Build a uniform periodic grid with ``n`` nodes on [-L, L)."""
    return Grid(n, half_width)


def sample(grid: Grid, f) -> Field:
    """Sample a scalar function at the grid nodes.

    ``f`` may be vectorized or scalar-only; non-finite samples raise.
    """
    with np.errstate(all="ignore"):
        try:
            values = np.asarray(f(grid.x), dtype=float)
            if values.shape != grid.x.shape:
                raise TypeError
        except Exception:
            values = np.array([float(f(xj)) for xj in grid.x])
    if not np.all(np.isfinite(values)):
        bad = grid.x[~np.isfinite(values)][0]
        raise ValueError(f"non-finite sample at x={bad}")
    return Field(grid, values)


def derivative(field: Field, order: int = 1) -> Field:
    """Spectral derivative of the given order (1, 2 or 3).

    Fourier coefficients are multiplied by (ik)^order; odd orders zero the
    Nyquist mode, which has no well-defined odd derivative on the grid.
    """
    if order not in (1, 2, 3):
        raise ValueError(f"order must be 1, 2 or 3, got {order}")
    grid = field.grid
    spec = np.fft.rfft(field.values)
    spec = spec * (1j * grid.k_rfft) ** order
    if order % 2 == 1:
        spec[-1] = 0.0
    return Field(grid, np.fft.irfft(spec, n=grid.n))


def lp_norm(field: Field, p: float) -> float:
    """L^p norm on the periodic box; rectangle rule for finite p, grid max for p=inf."""
    if not (np.isinf(p) or p >= 1.0):
        raise ValueError(f"p must lie in [1, inf], got {p}")
    a = np.abs(field.values)
    if np.isinf(p):
        return float(np.max(a))
    return float((np.sum(a**p) * field.grid.dx) ** (1.0 / p))


def h1_norm(field: Field) -> float:
    """Sobolev H^1 norm: sqrt(||f||_2^2 + ||f'||_2^2) with the spectral derivative."""
    return float(np.hypot(lp_norm(field, 2), lp_norm(derivative(field, 1), 2)))


def interpolate_onto(points, values, grid: Grid) -> Field:
    """Cubic interpolation of tabulated data onto the grid nodes.

    The abscissae must be strictly increasing and cover every node of the
    grid; gaps in coverage are rejected rather than extrapolated.
    """
    from scipy.interpolate import CubicSpline

    points = np.asarray(points, dtype=float)
    values = np.asarray(values, dtype=float)
    if points.ndim != 1 or points.shape != values.shape:
        raise ValueError("points and values must be 1-d arrays of equal length")
    if points.size < 4:
        raise ValueError("need at least 4 points for cubic interpolation")
    if not np.all(np.diff(points) > 0):
        raise ValueError("points must be strictly increasing")
    if points[0] > grid.x[0] or points[-1] < grid.x[-1]:
        raise ValueError(
            f"points cover [{points[0]}, {points[-1]}] but the grid needs "
            f"[{grid.x[0]}, {grid.x[-1]}]"
        )
    out = CubicSpline(points, values)(grid.x)
    if not np.all(np.isfinite(out)):
        raise ValueError("interpolation produced non-finite values")
    return Field(grid, out)


def read_initial_condition(path):
    """Read a two-column "x value" text file (comments start with '#')."""
    data = np.loadtxt(path, comments="#", ndmin=2)
    if data.ndim != 2 or data.shape[1] != 2:
        raise ValueError(f"{path}: expected two whitespace-separated columns 'x value'")
    return data[:, 0], data[:, 1]


def load_initial_condition(path, grid: Grid) -> Field:
    """Read an initial-condition file and interpolate it onto the grid."""
    xs, vals = read_initial_condition(path)
    return interpolate_onto(xs, vals, grid)
