"""Feature grid binary files and pooling.

File layout: 4 magic bytes b"FGRD", u32 L, u32 D (little-endian), then
L*D little-endian float32 values in row-major order (converted to float64
on load).
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from artdesc.corpus.types import FeatureGrid
from artdesc.errors import FormatError

MAGIC = b"FGRD"


def save_feature_grid(path: str | Path, values: np.ndarray) -> None:
    grid = FeatureGrid(values)  # validates shape/finiteness
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<II", grid.n_locations, grid.feature_dim))
        f.write(grid.values.astype("<f4").tobytes(order="C"))


def load_feature_grid(path: str | Path) -> FeatureGrid:
    raw = Path(path).read_bytes()
    if len(raw) < 4 or raw[:4] != MAGIC:
        raise FormatError(f"bad feature file magic in {path}", 0)
    if len(raw) < 12:
        raise FormatError(f"truncated feature header in {path}", len(raw))
    n_loc, feat = struct.unpack("<II", raw[4:12])
    if n_loc < 1 or feat < 1:
        raise FormatError(f"invalid grid dimensions {n_loc}x{feat} in {path}", 4)
    expected = 12 + 4 * n_loc * feat
    if len(raw) != expected:
        raise FormatError(
            f"feature data size mismatch in {path}: have {len(raw)} bytes, want {expected}",
            min(len(raw), expected),
        )
    data = np.frombuffer(raw[12:], dtype="<f4").astype(np.float64).reshape(n_loc, feat)
    return FeatureGrid(data)


def mean_pool(grid: FeatureGrid) -> np.ndarray:
    """Arithmetic mean over the L locations; length-D vector."""
    return grid.values.mean(axis=0)
