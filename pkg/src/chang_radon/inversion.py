"""Chang approximate inversion: Hilbert filter, s-derivative, backprojection.

The discrete Hilbert transform uses the odd-lag lattice kernel
``k[m] = 2 / (pi m)`` for odd ``m`` and 0 otherwise. Its spectrum is exactly
``-i sign(omega)`` on ``(-pi, pi)``, it is the midpoint rule for the
principal-value integral on the staggered sub-lattice, and it is
scale-free, so no sample step enters.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import WeightDegenerate
from .geometry import Grid2D, ScalarField
from .transforms import Sinogram, symmetrize_sinogram

FilteredSinogram = Sinogram


def _lag_kernel(lags: np.ndarray) -> np.ndarray:
    lags = np.asarray(lags)
    odd = lags % 2 != 0
    return np.where(odd, 2.0 / (np.pi * np.where(odd, lags, 1)), 0.0)


@lru_cache(maxsize=16)
def _hilbert_multiplier(n: int) -> np.ndarray:
    size = 1 << int(np.ceil(np.log2(4 * n)))
    lags = np.arange(-(n - 1), n)
    kernel = np.zeros(size)
    kernel[lags % size] = _lag_kernel(lags)
    spectrum = np.fft.fft(kernel)
    spectrum.flags.writeable = False
    return spectrum


def hilbert_row(g: np.ndarray) -> np.ndarray:
    """Discrete Hilbert transform along the last axis via zero-padded FFT.

    Rows are padded to at least four times their length, so the circular
    product equals the linear convolution with the lattice kernel.
    """
    g = np.asarray(g)
    n = g.shape[-1]
    mult = _hilbert_multiplier(n)
    out = np.fft.ifft(np.fft.fft(g, mult.size, axis=-1) * mult, axis=-1)[..., :n]
    return out if np.iscomplexobj(g) else out.real


def hilbert_row_direct(g: np.ndarray) -> np.ndarray:
    """Direct O(n^2) principal-value sum; test oracle for :func:`hilbert_row`."""
    g = np.asarray(g)
    n = g.shape[-1]
    idx = np.arange(n)
    K = _lag_kernel(idx[:, None] - idx[None, :])
    return g @ K.T


def s_derivative_row(h: np.ndarray, ds: float) -> np.ndarray:
    """Central differences along the last axis, one-sided 2nd order at the ends."""
    h = np.asarray(h)
    out = np.empty_like(h, dtype=np.result_type(h, float))
    out[..., 1:-1] = (h[..., 2:] - h[..., :-2]) / (2 * ds)
    out[..., 0] = (-3 * h[..., 0] + 4 * h[..., 1] - h[..., 2]) / (2 * ds)
    out[..., -1] = (3 * h[..., -1] - 4 * h[..., -2] + h[..., -3]) / (2 * ds)
    return out


def _interp(s, nodes, row):
    if np.iscomplexobj(row):
        return np.interp(s, nodes, row.real, 0.0, 0.0) + 1j * np.interp(s, nodes, row.imag, 0.0, 0.0)
    return np.interp(s, nodes, row, 0.0, 0.0)


def backproject(hp: FilteredSinogram, grid: Grid2D) -> ScalarField:
    """Rectangle-rule angular sum of ``hp(x . perp(theta), theta)`` at each pixel."""
    geom = hp.geometry
    nodes = geom.detector.s
    X, Y = grid.mesh()
    acc = np.zeros(grid.shape, dtype=np.result_type(hp.values, float))
    # fixed angle order keeps the per-pixel sum deterministic
    for k, phi in enumerate(geom.angles.phi):
        s = -X * np.sin(phi) + Y * np.cos(phi)
        acc += _interp(s, nodes, hp.values[k])
    return ScalarField(grid, acc * geom.angles.step)


def filter_sinogram(p: Sinogram) -> FilteredSinogram:
    """``h'`` rows: Hilbert transform then s-derivative."""
    h = hilbert_row(p.values.astype(complex))
    return p.with_values(s_derivative_row(h, p.geometry.detector.step))


def chang_reconstruct(p: Sinogram, w0: ScalarField, mask_radius: float | None = None, eps: float = 1e-6) -> ScalarField:
    """Chang reconstruction ``(1 / (4 pi w0)) * backprojection of h'``.

    ``w0`` fixes the output grid. Raises WeightDegenerate if ``|w0|`` drops
    below ``eps * max|w0|`` inside the mask disk (default ``0.85 s_max``).
    """
    if mask_radius is None:
        mask_radius = p.geometry.mask_radius
    w = np.asarray(w0.values, dtype=complex)
    mag = np.abs(w)
    mask = w0.grid.disk_mask(mask_radius)
    if mag.max() == 0 or (mask.any() and mag[mask].min() < eps * mag.max()):
        raise WeightDegenerate("w0 vanishes inside the reconstruction mask")
    bp = backproject(filter_sinogram(p), w0.grid).values
    out = np.divide(bp, 4 * np.pi * w, out=np.zeros_like(bp), where=mag > 0)
    return ScalarField(w0.grid, out)


def chang_reconstruct_sym(p: Sinogram, w0: ScalarField, mask_radius: float | None = None, eps: float = 1e-6) -> ScalarField:
    """Chang reconstruction from the orientation-symmetrized data."""
    return chang_reconstruct(symmetrize_sinogram(p), w0, mask_radius, eps)


def classical_fbp(p: Sinogram, grid: Grid2D) -> ScalarField:
    """Unweighted filtered backprojection (``w0 = 1``)."""
    return chang_reconstruct(p, ScalarField.constant(grid, 1.0))
