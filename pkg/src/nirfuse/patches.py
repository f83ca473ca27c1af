"""Square patch extraction, spatial weights and local statistics.

Every window read here uses replicate padding at the frame border, so the
dense helpers (``weighted_sum``, ``box_mean``) agree exactly with reading
each window through :func:`extract_patch`.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np
from scipy import ndimage

from .errors import ParameterError

DEFAULT_M = 7


class PatchWindow(NamedTuple):
    center: tuple[int, int]
    size: int
    values: np.ndarray  # length size**2, raster order


class SpatialWeights(NamedTuple):
    size: int
    diag: np.ndarray  # length size**2, raster order

    @property
    def kernel(self) -> np.ndarray:
        return self.diag.reshape(self.size, self.size)


def check_window(m: int) -> int:
    if int(m) != m or m < 3 or m % 2 == 0:
        raise ParameterError(f"window size must be an odd integer >= 3, got {m}")
    return int(m)


def _pixel(plane: np.ndarray, i) -> tuple[int, int]:
    h, w = plane.shape
    if np.ndim(i) == 0:
        if not 0 <= i < h * w:
            raise IndexError(f"pixel index {i} outside a {h}x{w} plane")
        return divmod(int(i), w)
    r, c = (int(v) for v in i)
    if not (0 <= r < h and 0 <= c < w):
        raise IndexError(f"pixel ({r}, {c}) outside a {h}x{w} plane")
    return r, c


def extract_patch(plane: np.ndarray, i, m: int = DEFAULT_M) -> PatchWindow:
    """Read the m x m window centred on pixel ``i``.

    ``i`` is either a raster index or a ``(row, col)`` pair.
    """
    m = check_window(m)
    plane = np.asarray(plane, dtype=np.float64)
    r, c = _pixel(plane, i)
    h, w = plane.shape
    k = m // 2
    rows = np.clip(np.arange(r - k, r + k + 1), 0, h - 1)
    cols = np.clip(np.arange(c - k, c + k + 1), 0, w - 1)
    return PatchWindow((r, c), m, plane[np.ix_(rows, cols)].ravel())


def spatial_weights(m: int = DEFAULT_M, sigma_s: float | None = None) -> SpatialWeights:
    """Gaussian falloff with distance from the window centre, centre weight 1.

    ``sigma_s`` defaults to ``m / 3``.
    """
    m = check_window(m)
    if sigma_s is None:
        sigma_s = m / 3.0
    if not sigma_s > 0:
        raise ParameterError(f"sigma_s must be positive, got {sigma_s}")
    off = np.arange(m) - m // 2
    d2 = off[:, None] ** 2 + off[None, :] ** 2
    return SpatialWeights(m, np.exp(-d2 / (2.0 * sigma_s**2)).ravel())


def local_stats(patch: PatchWindow | np.ndarray) -> tuple[float, float]:
    """Unweighted mean and population variance of a patch."""
    v = np.asarray(patch.values if isinstance(patch, PatchWindow) else patch, dtype=np.float64)
    mean = v.mean()
    return float(mean), float(np.mean((v - mean) ** 2))


def weighted_sum(plane: np.ndarray, weights: SpatialWeights) -> np.ndarray:
    """Dense ``sum_j w_j * plane[j]`` over each pixel's window."""
    return ndimage.correlate(np.asarray(plane, dtype=np.float64), weights.kernel, mode="nearest")


def box_mean(plane: np.ndarray, m: int) -> np.ndarray:
    m = check_window(m)
    k = np.full((m, m), 1.0 / (m * m))
    return ndimage.correlate(np.asarray(plane, dtype=np.float64), k, mode="nearest")


def dense_stats(plane: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-pixel window mean and population variance (never negative)."""
    plane = np.asarray(plane, dtype=np.float64)
    mean = box_mean(plane, m)
    var = box_mean(plane * plane, m) - mean * mean
    return mean, np.maximum(var, 0.0)
