"""Reconstruction error summaries and Poisson noise."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import NoiseError
from .geometry import ScalarField
from .transforms import Sinogram


@dataclass
class Metrics:
    rel_l2_masked: float
    rel_sup_masked: float
    imag_leak: float
    eq8_residual_rel: float | None = None
    rungs: list[dict] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def imag_leak(g: ScalarField) -> float:
    """``max|Im g| / max|Re g|`` (0 for an identically zero field)."""
    re = np.abs(np.real(g.values)).max()
    im = np.abs(np.imag(g.values)).max()
    if re == 0:
        return 0.0 if im == 0 else float("inf")
    return float(im / re)


def compare(f: ScalarField, g: ScalarField, mask: np.ndarray | None = None) -> Metrics:
    """Relative errors of ``g`` against the reference ``f`` inside ``mask``."""
    if f.grid != g.grid:
        raise ValueError("fields live on different grids")
    if mask is None:
        mask = np.ones(f.grid.shape, bool)
    ref = np.asarray(f.values)[mask]
    diff = np.asarray(g.values)[mask] - ref
    l2 = np.linalg.norm(ref)
    sup = np.abs(ref).max() if ref.size else 0.0
    rel_l2 = float(np.linalg.norm(diff) / l2) if l2 > 0 else float(np.linalg.norm(diff))
    rel_sup = float(np.abs(diff).max() / sup) if sup > 0 else float(np.abs(diff).max(initial=0.0))
    return Metrics(rel_l2, rel_sup, imag_leak(g))


def add_poisson_noise(p: Sinogram, count_scale: float, seed: int) -> Sinogram:
    """Replace each sample by ``Poisson(count_scale * value) / count_scale``.

    Only the real part is used. Samples below ``-1e-9`` raise NoiseError;
    smaller negative rounding residue is clipped to zero.
    """
    values = np.real(p.values)
    if values.min(initial=0.0) < -1e-9:
        raise NoiseError(f"negative sample {values.min():.3g} cannot be a Poisson mean")
    rng = np.random.default_rng(seed)
    counts = rng.poisson(count_scale * np.clip(values, 0.0, None))
    return p.with_values((counts / count_scale).astype(complex))
