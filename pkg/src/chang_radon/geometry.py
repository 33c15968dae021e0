"""Sampling conventions: image grids, oriented angle sets, detector axes.

Lines are parametrized as ``x = s * perp(theta) + t * theta`` with
``theta = (cos phi, sin phi)`` and ``perp(theta) = (-sin phi, cos phi)``.
Angles cover the full circle because weights depend on the orientation of
a line, not only on the line itself.

Field arrays are stored row-major as ``values[j, i]`` where ``i`` indexes
the x axis and ``j`` the y axis.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numba
import numpy as np

from .errors import GeometryError


@dataclass(frozen=True)
class Grid2D:
    """Uniform square-pixel grid, centered at ``center``."""

    n_x: int
    n_y: int
    spacing: float
    center: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if self.n_x < 2 or self.n_y < 2:
            raise GeometryError(f"grid needs at least 2x2 pixels, got {self.n_x}x{self.n_y}")
        if not self.spacing > 0:
            raise GeometryError(f"spacing must be positive, got {self.spacing}")

    @classmethod
    def square(cls, n: int, half_width: float) -> Grid2D:
        """``n x n`` grid whose pixels tile ``[-half_width, half_width]^2``."""
        return cls(n, n, 2.0 * half_width / n)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_y, self.n_x)

    @property
    def x(self) -> np.ndarray:
        return self.center[0] + (np.arange(self.n_x) - (self.n_x - 1) / 2) * self.spacing

    @property
    def y(self) -> np.ndarray:
        return self.center[1] + (np.arange(self.n_y) - (self.n_y - 1) / 2) * self.spacing

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Pixel-center coordinates ``(X, Y)``, each of shape ``(n_y, n_x)``."""
        return np.meshgrid(self.x, self.y, indexing="xy")

    def radius(self) -> np.ndarray:
        X, Y = self.mesh()
        return np.hypot(X, Y)

    def disk_mask(self, radius: float) -> np.ndarray:
        return self.radius() <= radius

    def refined(self, factor: int) -> Grid2D:
        """Same physical extent, ``factor`` times as many pixels per axis."""
        return Grid2D(self.n_x * factor, self.n_y * factor, self.spacing / factor, self.center)


@dataclass(frozen=True)
class AngleSet:
    """Equispaced oriented directions ``phi_k = 2 pi k / n`` on the full circle."""

    n: int

    def __post_init__(self):
        if self.n < 2 or self.n % 2:
            raise GeometryError(f"angle count must be even and >= 2, got {self.n}")

    @property
    def phi(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.n) / self.n

    @property
    def step(self) -> float:
        return 2.0 * np.pi / self.n

    def antipode(self, k):
        """Index of the direction opposite to direction ``k``."""
        return (np.asarray(k) + self.n // 2) % self.n

    def directions(self) -> np.ndarray:
        """Unit vectors, shape ``(n, 2)``."""
        phi = self.phi
        return np.stack([np.cos(phi), np.sin(phi)], axis=1)


@dataclass(frozen=True)
class DetectorAxis:
    """Odd number of offsets, exactly symmetric about ``s = 0``."""

    n: int
    s_max: float

    def __post_init__(self):
        if self.n < 3 or self.n % 2 == 0:
            raise GeometryError(f"offset count must be odd and >= 3, got {self.n}")
        if not self.s_max > 0:
            raise GeometryError(f"s_max must be positive, got {self.s_max}")

    @property
    def step(self) -> float:
        return 2.0 * self.s_max / (self.n - 1)

    @property
    def s(self) -> np.ndarray:
        # integer offsets times the step: mirrored samples are exact negatives
        return (np.arange(self.n) - (self.n - 1) // 2) * self.step

    def mirror(self, j):
        return self.n - 1 - np.asarray(j)


@dataclass(frozen=True)
class ProjectionGeometry:
    angles: AngleSet
    detector: DetectorAxis

    @property
    def shape(self) -> tuple[int, int]:
        return (self.angles.n, self.detector.n)

    @property
    def s_max(self) -> float:
        return self.detector.s_max

    @property
    def mask_radius(self) -> float:
        return 0.85 * self.detector.s_max

    def to_dict(self) -> dict:
        return {"n_angles": self.angles.n, "n_offsets": self.detector.n, "s_max": self.detector.s_max}

    @classmethod
    def from_dict(cls, d: dict) -> ProjectionGeometry:
        return cls(AngleSet(int(d["n_angles"])), DetectorAxis(int(d["n_offsets"]), float(d["s_max"])))


def build_geometry(grid: Grid2D, n_angles: int, n_offsets: int, s_max: float) -> ProjectionGeometry:
    """Bundle an angle set and detector axis after checking parity rules.

    The grid is only used to check that the detector is not narrower than a
    single pixel; it is otherwise independent of the projection sampling.
    """
    if n_angles % 2:
        raise GeometryError(f"angle count must be even, got {n_angles}")
    if n_offsets % 2 == 0:
        raise GeometryError(f"offset count must be odd, got {n_offsets}")
    if not s_max > grid.spacing:
        raise GeometryError(f"s_max={s_max} must exceed the pixel spacing {grid.spacing}")
    return ProjectionGeometry(AngleSet(n_angles), DetectorAxis(n_offsets, s_max))


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Complex (or real) samples at the pixel centers of ``grid``."""

    grid: Grid2D
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.shape != self.grid.shape:
            raise GeometryError(f"values shape {values.shape} does not match grid {self.grid.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("field contains non-finite values")
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @classmethod
    def constant(cls, grid: Grid2D, c: complex) -> ScalarField:
        dtype = complex if np.iscomplexobj(c) else float
        return cls(grid, np.full(grid.shape, c, dtype=dtype))

    def __call__(self, x, y):
        return bilinear(self.values, self.grid, x, y)

    def support_radius(self) -> float:
        """Distance from the origin to the farthest nonzero pixel center."""
        nz = self.values != 0
        if not nz.any():
            return 0.0
        return float(self.grid.radius()[nz].max())

    def __add__(self, other: ScalarField) -> ScalarField:
        return ScalarField(self.grid, self.values + other.values)

    def __mul__(self, c) -> ScalarField:
        return ScalarField(self.grid, self.values * c)

    __rmul__ = __mul__


def line_point(s: float, theta, t: float) -> np.ndarray:
    """Point ``s * perp(theta) + t * theta`` with ``perp(theta) = (-theta_2, theta_1)``."""
    th = np.asarray(theta, dtype=float)
    perp = np.array([-th[1], th[0]])
    return s * perp + t * th


@numba.njit(cache=True)
def _bilinear_kernel(values, u, v, out):
    ny, nx = values.shape
    for p in range(u.size):
        up = u[p]
        vp = v[p]
        if 0 <= up <= nx - 1 and 0 <= vp <= ny - 1:
            i = min(int(up), nx - 2)
            j = min(int(vp), ny - 2)
            fu = up - i
            fv = vp - j
            out[p] = (values[j, i] * (1 - fu) + values[j, i + 1] * fu) * (1 - fv) + (
                values[j + 1, i] * (1 - fu) + values[j + 1, i + 1] * fu
            ) * fv
        else:
            out[p] = 0


def bilinear(values: np.ndarray, grid: Grid2D, x, y):
    """Bilinear interpolation of pixel-center samples, zero outside their hull."""
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    u = (x - grid.center[0]) / grid.spacing + (grid.n_x - 1) / 2
    v = (y - grid.center[1]) / grid.spacing + (grid.n_y - 1) / 2
    values = np.ascontiguousarray(values)
    if values.dtype not in (np.float64, np.complex128):
        values = values.astype(np.result_type(values, float))
    out = np.empty(u.size, dtype=values.dtype)
    _bilinear_kernel(values, u.ravel(), v.ravel(), out)
    return out.reshape(u.shape)


def interpolate(f: ScalarField, p) -> complex:
    """Value of ``f`` at a single point ``p = (x, y)``."""
    return f(p[0], p[1])[()]
