"""Weighted ray transform, attenuated weights and orientation symmetrization.

A weight is any callable ``W(x, y, phi)`` returning complex values at the
points ``(x, y)`` for the single direction ``theta = (cos phi, sin phi)``.
The opposite direction is always requested as ``phi + pi``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import GeometryError, WeightDegenerate
from .geometry import AngleSet, Grid2D, ProjectionGeometry, ScalarField, bilinear

Coefficient = Union[complex, float, ScalarField]


def _coef(c: Coefficient, x, y):
    if isinstance(c, ScalarField):
        return c(x, y)
    return np.full(np.shape(x), c, dtype=complex)


class Weight:
    """Base class for weights ``W(x, theta)``."""

    def __call__(self, x, y, phi: float) -> np.ndarray:
        raise NotImplementedError

    def antipodal(self, x, y, phi: float) -> np.ndarray:
        return self(x, y, phi + np.pi)


@dataclass(frozen=True, eq=False)
class Uniform(Weight):
    c: complex = 1.0

    def __call__(self, x, y, phi):
        return np.full(np.shape(x), self.c, dtype=complex)


@dataclass(frozen=True, eq=False)
class OddHarmonics:
    """``sum_m  c_m(x) cos(m phi) + d_m(x) sin(m phi)`` over odd orders ``m``.

    Odd orders flip sign under ``phi -> phi + pi``, so the rule is odd in
    ``theta`` by construction.
    """

    terms: tuple = ()

    def __post_init__(self):
        terms = tuple(tuple(t) for t in self.terms)
        for order, _, _ in terms:
            if order % 2 == 0:
                raise ValueError(f"harmonic order must be odd, got {order}")
        object.__setattr__(self, "terms", terms)

    def __call__(self, x, y, phi):
        out = np.zeros(np.shape(x), dtype=complex)
        for order, c, d in self.terms:
            out += _coef(c, x, y) * np.cos(order * phi) + _coef(d, x, y) * np.sin(order * phi)
        return out


@dataclass(frozen=True, eq=False)
class OddPerturbed(Weight):
    """``W(x, theta) = w0(x) + odd(x, theta)``."""

    w0: Coefficient
    odd: OddHarmonics = field(default_factory=OddHarmonics)

    def __call__(self, x, y, phi):
        return _coef(self.w0, x, y) + self.odd(x, y, phi)


@dataclass(frozen=True, eq=False)
class Tabulated(Weight):
    """Weight sampled on ``grid x angles``; bilinear in x, nearest angle in theta."""

    grid: Grid2D
    angles: AngleSet
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.values.shape != (self.angles.n, *self.grid.shape):
            raise GeometryError(f"table shape {self.values.shape} does not match grid x angles")

    def __call__(self, x, y, phi):
        k = int(np.rint(phi / self.angles.step)) % self.angles.n
        return bilinear(self.values[k], self.grid, x, y).astype(complex)


@dataclass(frozen=True, eq=False)
class Symmetrized(Weight):
    """``(W(x, theta) + W(x, -theta)) / 2``."""

    inner: Weight

    def __call__(self, x, y, phi):
        return 0.5 * (self.inner(x, y, phi) + self.inner.antipodal(x, y, phi))


@dataclass(frozen=True, eq=False)
class ChangApprox(Weight):
    """``w0(x) + (W(x, theta) - W(x, -theta)) / 2``."""

    inner: Weight
    w0: ScalarField

    def __call__(self, x, y, phi):
        odd = 0.5 * (self.inner(x, y, phi) - self.inner.antipodal(x, y, phi))
        return self.w0(x, y) + odd


class Attenuated(Weight):
    """``exp(-Da(x, theta))`` with ``Da`` the exit-ray integral of ``a``.

    For a direction ``theta``, ``Da`` is tabulated on a lattice aligned with
    ``(perp(theta), theta)`` by a reverse cumulative trapezoid sum along
    each line, then interpolated bilinearly. The lattice is symmetric under
    ``(s, t) -> (-s, -t)``, so the tables for ``theta`` and ``-theta`` share
    nodes. A few recent tables are cached.
    """

    _cache_size = 4

    def __init__(self, a: ScalarField, step: float | None = None):
        self.a = a
        self.step = a.grid.spacing if step is None else step
        radius = a.support_radius() + 2 * a.grid.spacing
        self._m = int(np.ceil(radius / self.step))
        self._nodes = np.arange(-self._m, self._m + 1) * self.step
        self._cache: dict[float, np.ndarray] = {}

    def __repr__(self):
        return f"Attenuated(a={self.a!r})"

    def da_table(self, phi: float) -> np.ndarray:
        """``Da`` on the ``(s, t)`` lattice for direction ``phi``; shape ``(n_s, n_t)``."""
        key = float(phi)
        table = self._cache.get(key)
        if table is None:
            c, s_ = np.cos(phi), np.sin(phi)
            S, T = np.meshgrid(self._nodes, self._nodes, indexing="ij")
            samples = self.a(-S * s_ + T * c, S * c + T * s_)
            # trapezoid rule on [t_n, inf): h * (a_n / 2 + sum_{m > n} a_m)
            tail = np.cumsum(samples[:, ::-1], axis=1)[:, ::-1]
            table = self.step * (tail - 0.5 * samples)
            if len(self._cache) >= self._cache_size:
                self._cache.pop(next(iter(self._cache)))
            self._cache[key] = table
        return table

    def divergent(self, x, y, phi) -> np.ndarray:
        table = self.da_table(phi)
        c, s_ = np.cos(phi), np.sin(phi)
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        s = -x * s_ + y * c
        t = x * c + y * s_
        # before the lattice starts in -t nothing is absorbed; clip a hair inside
        # so rounding cannot push the index off the table
        edge = self._nodes[-1] * (1 - 1e-12)
        t = np.clip(t, -edge, edge)
        lattice = Grid2D(len(self._nodes), len(self._nodes), self.step)
        # Grid2D indexes values[j, i] with i along its x axis: here x -> t, y -> s
        return bilinear(table, lattice, t, s)

    def __call__(self, x, y, phi):
        return np.exp(-self.divergent(x, y, phi)).astype(complex)


@dataclass(frozen=True, eq=False)
class Sinogram:
    """Samples ``values[k, j]`` of a ray transform at ``(s_j, theta_k)``."""

    geometry: ProjectionGeometry
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.shape != self.geometry.shape:
            raise GeometryError(f"sinogram shape {values.shape} does not match geometry {self.geometry.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("sinogram contains non-finite values")
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def with_values(self, values) -> Sinogram:
        return Sinogram(self.geometry, values)


def line_nodes(geom: ProjectionGeometry, spacing: float) -> np.ndarray:
    """Midpoint nodes on ``[-s_max, s_max]`` with step close to ``spacing / 2``.

    Nodes are symmetric under ``t -> -t``.
    """
    n_t = int(np.ceil(2 * geom.s_max / (0.5 * spacing)))
    dt = 2 * geom.s_max / n_t
    return (np.arange(n_t) - (n_t - 1) / 2) * dt


def forward_project(f: ScalarField, w: Weight, geom: ProjectionGeometry) -> Sinogram:
    """Weighted line integrals of ``f`` over every oriented line of ``geom``."""
    if f.support_radius() + f.grid.spacing > geom.s_max:
        raise GeometryError(
            f"field support radius {f.support_radius():.4g} plus one pixel exceeds s_max={geom.s_max}"
        )
    t = line_nodes(geom, f.grid.spacing)
    dt = t[1] - t[0]
    s = geom.detector.s[:, None]
    out = np.empty(geom.shape, dtype=complex)
    for k, phi in enumerate(geom.angles.phi):
        c, s_ = np.cos(phi), np.sin(phi)
        x = -s * s_ + t * c
        y = s * c + t * s_
        out[k] = (f(x, y) * w(x, y, phi)).sum(axis=1) * dt
    return Sinogram(geom, out)


def divergent_beam(a: ScalarField, x, theta) -> complex:
    """Midpoint-rule integral of ``a`` along the ray ``{x + t theta, t >= 0}``."""
    x = np.asarray(x, dtype=float)
    th = np.asarray(theta, dtype=float)
    h = 0.5 * a.grid.spacing
    half_diag = 0.5 * a.grid.spacing * np.hypot(a.grid.n_x, a.grid.n_y)
    length = np.hypot(*(x - np.asarray(a.grid.center))) + half_diag
    n = int(np.ceil(length / h))
    tau = (np.arange(n) + 0.5) * h
    return complex(a(x[0] + tau * th[0], x[1] + tau * th[1]).sum() * h)


def attenuated_weight(a: ScalarField) -> Attenuated:
    return Attenuated(a)


def angular_mean(
    w: Weight,
    grid: Grid2D,
    angles: AngleSet,
    mask_radius: float | None = None,
    eps: float = 1e-6,
) -> ScalarField:
    """Average of ``W(x, .)`` over the angle set at every pixel center.

    Raises WeightDegenerate if ``|w0| < eps * max|w0|`` somewhere inside the
    disk of radius ``mask_radius`` (the whole grid when it is None).
    """
    X, Y = grid.mesh()
    acc = np.zeros(grid.shape, dtype=complex)
    for phi in angles.phi:
        acc += w(X, Y, phi)
    w0 = acc / angles.n
    region = np.ones(grid.shape, bool) if mask_radius is None else grid.disk_mask(mask_radius)
    mag = np.abs(w0)
    if mag.max() == 0 or (region.any() and mag[region].min() < eps * mag.max()):
        raise WeightDegenerate("angular mean of the weight vanishes inside the reconstruction region")
    return ScalarField(grid, w0)


def symmetrize_sinogram(p: Sinogram) -> Sinogram:
    """``(p(s, theta) + p(-s, -theta)) / 2`` on the sampling lattice."""
    anti = p.geometry.angles.antipode(np.arange(p.geometry.angles.n))
    return p.with_values(0.5 * (p.values + p.values[anti, ::-1]))


def symmetrize_weight(w: Weight) -> Weight:
    return Symmetrized(w)


def build_w_appr(w: Weight, w0: ScalarField) -> Weight:
    """Angular mean plus the odd-in-theta part of ``w``."""
    return ChangApprox(w, w0)
