"""Nonlocal means smoothing and base/detail decomposition."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import ndimage

from .errors import ParameterError


@dataclass(frozen=True)
class NlmParams:
    patch_radius: int = 3
    search_radius: int = 10
    h: float = 10.0 / 255.0

    def __post_init__(self):
        if self.patch_radius < 1 or self.search_radius < 1:
            raise ParameterError("NLM radii must be >= 1")
        if not self.h > 0:
            raise ParameterError(f"NLM strength h must be positive, got {self.h}")


class LayerPair(NamedTuple):
    base: np.ndarray
    detail: np.ndarray


def nlm_filter(plane: np.ndarray, params: NlmParams = NlmParams()) -> np.ndarray:
    """Nonlocal means over a square search window.

    The weight of a candidate pixel is ``exp(-d / h**2)`` where ``d`` is the
    mean squared difference between the two patches (replicate padding at
    the border).  The centre pixel gets the largest weight among its
    neighbours, or weight 1 when every neighbour weight underflowed to 0.
    """
    x = np.asarray(plane, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError("nlm_filter expects a 2-D plane")
    pr, sr = params.patch_radius, params.search_radius
    h, w = x.shape
    pad = pr + sr
    xp = np.pad(x, pad, mode="edge")
    # reference region: the image plus a patch-radius margin
    ref = xp[sr:sr + h + 2 * pr, sr:sr + w + 2 * pr]
    size = 2 * pr + 1
    inv_h2 = 1.0 / params.h**2

    acc = np.zeros_like(x)
    wsum = np.zeros_like(x)
    wmax = np.zeros_like(x)
    for dy in range(-sr, sr + 1):
        for dx in range(-sr, sr + 1):
            if dy == 0 and dx == 0:
                continue
            cand = xp[sr + dy:sr + dy + h + 2 * pr, sr + dx:sr + dx + w + 2 * pr]
            d = ndimage.uniform_filter((ref - cand) ** 2, size=size, mode="nearest")
            d = d[pr:pr + h, pr:pr + w]
            wt = np.exp(-d * inv_h2)
            acc += wt * cand[pr:pr + h, pr:pr + w]
            wsum += wt
            np.maximum(wmax, wt, out=wmax)

    self_w = np.where(wmax > 0, wmax, 1.0)
    return (acc + self_w * x) / (wsum + self_w)


def base_layer(plane: np.ndarray, params: NlmParams = NlmParams()) -> LayerPair:
    plane = np.asarray(plane, dtype=np.float64)
    base = nlm_filter(plane, params)
    return LayerPair(base, plane - base)


def estimate_noise_std(plane: np.ndarray) -> float:
    """Robust noise level from the median absolute deviation of diagonal differences."""
    x = np.asarray(plane, dtype=np.float64)
    d = (x[1:, 1:] - x[:-1, :-1]) / np.sqrt(2.0)
    return float(np.median(np.abs(d - np.median(d))) / 0.6745)


def denoise_params(plane: np.ndarray, patch_radius: int = 3, search_radius: int = 10,
                   factor: float = 1.0, h_min: float = 1e-6) -> NlmParams:
    """NLM preset for initial denoising: ``h`` tracks the estimated noise level."""
    return NlmParams(patch_radius, search_radius, max(factor * estimate_noise_std(plane), h_min))
