"""Field and sinogram files: JSON sidecar header plus raw little-endian payload.

``name.json`` holds ``kind``, ``dtype`` ("f64" or "c128"), ``shape``, the
sampling parameters and the mask radius; ``name.bin`` holds the row-major
samples (complex as interleaved re, im). Reading back is bit-exact.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

import numpy as np

from .geometry import Grid2D, ProjectionGeometry, ScalarField
from .transforms import Sinogram

_DTYPES = {"f64": np.dtype("<f8"), "c128": np.dtype("<c16")}


def _stem(path) -> Path:
    path = Path(path)
    return path.with_suffix("") if path.suffix in (".json", ".bin") else path


def _write(path, values: np.ndarray, header: dict) -> Path:
    stem = _stem(path)
    stem.parent.mkdir(parents=True, exist_ok=True)
    code = "c128" if np.iscomplexobj(values) else "f64"
    header = {**header, "dtype": code, "shape": list(values.shape), "byteorder": "little"}
    stem.with_suffix(".json").write_text(json.dumps(header, indent=2, sort_keys=True) + "\n")
    stem.with_suffix(".bin").write_bytes(np.ascontiguousarray(values, dtype=_DTYPES[code]).tobytes())
    return stem


def _read(path) -> tuple[dict, np.ndarray]:
    stem = _stem(path)
    header = json.loads(stem.with_suffix(".json").read_text())
    dtype = _DTYPES[header["dtype"]]
    raw = stem.with_suffix(".bin").read_bytes()
    values = np.frombuffer(raw, dtype=dtype).reshape(header["shape"])
    return header, values.astype(dtype.newbyteorder("="))


def grid_to_dict(grid: Grid2D) -> dict:
    return {"n_x": grid.n_x, "n_y": grid.n_y, "spacing": grid.spacing, "center": list(grid.center)}


def grid_from_dict(d: dict) -> Grid2D:
    return Grid2D(int(d["n_x"]), int(d["n_y"]), float(d["spacing"]), tuple(d.get("center", (0.0, 0.0))))


def write_field(path, f: ScalarField, mask_radius: float | None = None) -> Path:
    return _write(path, f.values, {"kind": "field", "grid": grid_to_dict(f.grid), "mask_radius": mask_radius})


def read_field(path) -> ScalarField:
    header, values = _read(path)
    if header.get("kind") != "field":
        raise ValueError(f"{path} is not a field file")
    return ScalarField(grid_from_dict(header["grid"]), values)


def write_sinogram(path, p: Sinogram) -> Path:
    header = {"kind": "sinogram", "geometry": p.geometry.to_dict(), "mask_radius": p.geometry.mask_radius}
    return _write(path, p.values, header)


def read_sinogram(path) -> Sinogram:
    header, values = _read(path)
    if header.get("kind") != "sinogram":
        raise ValueError(f"{path} is not a sinogram file")
    return Sinogram(ProjectionGeometry.from_dict(header["geometry"]), values)


def write_pgm(path, f: ScalarField, mask: np.ndarray | None = None) -> Path:
    """16-bit binary PGM of the real part, scaled over the masked min/max.

    Row 0 of the image is the top (largest y).
    """
    re = np.real(f.values)
    ref = re[mask] if mask is not None and mask.any() else re
    lo, hi = float(ref.min()), float(ref.max())
    scaled = np.zeros_like(re) if hi <= lo else np.clip((re - lo) / (hi - lo), 0.0, 1.0)
    img = np.rint(scaled[::-1] * 65535).astype(">u2")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    h, w = img.shape
    path.write_bytes(f"P5\n{w} {h}\n65535\n".encode("ascii") + img.tobytes())
    return path


def read_pgm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    m = re.match(rb"P5\s+(\d+)\s+(\d+)\s+(\d+)\s", data)
    if m is None:
        raise ValueError("not a binary PGM")
    w, h, maxval = (int(g) for g in m.groups())
    dtype = ">u2" if maxval > 255 else "u1"
    return np.frombuffer(data, dtype=dtype, count=w * h, offset=m.end()).reshape(h, w)
