"""Exactness condition for the Chang formula and exact weight families.

A weight makes the Chang formula precise iff its even-in-theta part equals
its angular mean: ``W(x, theta) + W(x, -theta) - 2 w0(x) = 0``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .errors import WeightDegenerate
from .geometry import AngleSet, Grid2D, ScalarField
from .transforms import Coefficient, OddHarmonics, OddPerturbed, Weight, angular_mean


@dataclass(frozen=True)
class ExactnessReport:
    residual_sup: float
    residual_rel: float
    is_exact: bool
    probe_count: int
    tol: float

    def to_dict(self) -> dict:
        return asdict(self)


def exactness_residual(w: Weight, w0: ScalarField, angles: AngleSet, mask: np.ndarray) -> tuple[float, int]:
    """Sup of ``|W(x, theta) + W(x, -theta) - 2 w0(x)|`` over mask pixels and angles."""
    X, Y = w0.grid.mesh()
    X, Y = X[mask], Y[mask]
    two_w0 = 2 * np.asarray(w0.values)[mask]
    sup = 0.0
    phi = angles.phi
    # each antipodal pair gives the same residual, so half the circle suffices
    for k in range(angles.n // 2):
        kk = angles.antipode(k)
        r = w(X, Y, phi[k]) + w(X, Y, phi[kk]) - two_w0
        if r.size:
            sup = max(sup, float(np.abs(r).max()))
    return sup, int(mask.sum()) * angles.n


def check_exactness(
    w: Weight,
    grid: Grid2D,
    angles: AngleSet,
    tol: float = 1e-10,
    mask_radius: float | None = None,
) -> ExactnessReport:
    """Probe the exactness residual on every (mask pixel, angle) pair.

    The probe region is the disk ``mask_radius`` (whole grid when None);
    ``w0`` is the angular mean of ``w`` on the same sampling.
    """
    w0 = angular_mean(w, grid, angles, mask_radius)
    mask = np.ones(grid.shape, bool) if mask_radius is None else grid.disk_mask(mask_radius)
    sup, count = exactness_residual(w, w0, angles, mask)
    scale = float(np.abs(w0.values[mask]).max()) if mask.any() else 1.0
    rel = sup / scale
    return ExactnessReport(sup, rel, rel <= tol, count, tol)


def make_odd_perturbed(w0: Coefficient, odd: OddHarmonics | list | tuple = ()) -> OddPerturbed:
    """Weight ``w0(x) + odd(x, theta)`` with ``odd`` built from odd harmonics.

    ``odd`` is an :class:`OddHarmonics` or a list of ``(order, cos_coef,
    sin_coef)`` terms. The odd part may exceed ``|w0|``; no positivity is
    imposed.
    """
    if not isinstance(odd, OddHarmonics):
        odd = OddHarmonics(tuple(odd))
    vals = w0.values if isinstance(w0, ScalarField) else np.asarray(w0)
    if np.any(np.abs(vals) == 0):
        raise WeightDegenerate("w0 vanishes on the grid")
    return OddPerturbed(w0, odd)
