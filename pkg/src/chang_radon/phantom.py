"""Mollified ellipse phantoms (C^1 rims)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .geometry import Grid2D, ScalarField


def smoothstep(u):
    """C^1 ramp from 0 (u <= 0) to 1 (u >= 1)."""
    u = np.clip(u, 0.0, 1.0)
    return u * u * (3 - 2 * u)


@dataclass(frozen=True)
class Ellipse:
    center: tuple[float, float] = (0.0, 0.0)
    axes: tuple[float, float] = (1.0, 1.0)
    rotation: float = 0.0
    amplitude: complex = 1.0
    width: float = 0.0  # rim ramp width, centered on the nominal boundary

    def outer_radius(self) -> float:
        """Radius of a disk about the origin that contains the support."""
        a, b = self.axes
        scale = 1 + 0.5 * self.width / min(a, b)
        return float(np.hypot(*self.center) + max(a, b) * scale)

    def __call__(self, x, y):
        c, s = np.cos(self.rotation), np.sin(self.rotation)
        dx = np.asarray(x) - self.center[0]
        dy = np.asarray(y) - self.center[1]
        u = c * dx + s * dy
        v = -s * dx + c * dy
        a, b = self.axes
        rho = np.sqrt((u / a) ** 2 + (v / b) ** 2)
        if self.width == 0:
            return np.where(rho <= 1, self.amplitude, 0.0)
        # signed distance to the rim, exact for circles
        d = (rho - 1) * min(a, b)
        return self.amplitude * (1 - smoothstep(d / self.width + 0.5))


@dataclass(frozen=True)
class PhantomSpec:
    ellipses: tuple[Ellipse, ...] = field(default_factory=tuple)

    def outer_radius(self) -> float:
        return max((e.outer_radius() for e in self.ellipses), default=0.0)


def disk(radius: float = 1.0, amplitude: complex = 1.0, width: float = 0.0, center=(0.0, 0.0)) -> PhantomSpec:
    return PhantomSpec((Ellipse(center, (radius, radius), 0.0, amplitude, width),))


def make_phantom(spec: PhantomSpec, grid: Grid2D, mask_radius: float | None = None) -> ScalarField:
    """Sample the phantom at pixel centers.

    Raises ConfigError when the support leaves the disk ``mask_radius``.
    """
    if mask_radius is not None and spec.outer_radius() > mask_radius:
        raise ConfigError(f"phantom support radius {spec.outer_radius():.4g} exceeds mask radius {mask_radius:.4g}")
    X, Y = grid.mesh()
    complex_amp = any(np.iscomplexobj(e.amplitude) for e in spec.ellipses)
    values = np.zeros(grid.shape, dtype=complex if complex_amp else float)
    for e in spec.ellipses:
        values = values + e(X, Y)
    return ScalarField(grid, values)


def random_phantom(rng: np.random.Generator, n: int = 4, radius: float = 0.8, width: float = 0.05) -> PhantomSpec:
    """A few random mollified ellipses inside the disk of ``radius``."""
    ellipses = []
    for _ in range(n):
        r = rng.uniform(0.05, 0.3)
        axes = (r, rng.uniform(0.5, 1.0) * r)
        room = radius - r - width
        rr = rng.uniform(0, room)
        ang = rng.uniform(0, 2 * np.pi)
        ellipses.append(
            Ellipse(
                (rr * np.cos(ang), rr * np.sin(ang)),
                axes,
                rng.uniform(0, np.pi),
                float(rng.uniform(0.2, 1.0)),
                width,
            )
        )
    return PhantomSpec(tuple(ellipses))
