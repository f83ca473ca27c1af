"""Synthetic aligned visible/NIR pairs for demos and tests."""
from __future__ import annotations

import numpy as np
from scipy import ndimage

from .color import OpponentImage, backward_opponent


def textured_nir(shape=(64, 64), seed: int = 0) -> np.ndarray:
    """Smooth shading plus band-limited texture, kept inside (0.15, 0.85)."""
    rng = np.random.default_rng(seed)
    h, w = shape
    yy, xx = np.mgrid[0:h, 0:w] / max(h, w)
    shading = 0.45 + 0.15 * np.sin(2.0 * np.pi * xx) * np.cos(np.pi * yy)
    tex = ndimage.gaussian_filter(rng.standard_normal(shape), 1.2, mode="wrap")
    tex *= 0.12 / tex.std()
    return np.clip(shading + tex, 0.15, 0.85)


def discrepancy_pair(shape=(64, 64), seed: int = 0, dark_level: float = 0.03):
    """Visible/NIR pair where part of the visible frame is crushed to black.

    Returns ``(vis, nir, saturated_mask)``.  Outside the mask the visible
    luminance is a smooth, region-dependent affine function of the NIR
    plane and carries two distinct hues; inside the mask the visible image
    is a flat dark gray while the NIR keeps its texture.
    """
    h, w = shape
    nir = textured_nir(shape, seed)
    yy, xx = np.mgrid[0:h, 0:w]
    gain = 0.8 + 0.3 * (xx / w)
    lum = np.clip(gain * nir + 0.05, 0.02, 0.98)
    c1 = np.where(xx < w // 2, -0.08, 0.10)
    c2 = np.where(yy < h // 2, 0.05, -0.06)
    vis = backward_opponent(OpponentImage(lum, c1, c2))
    mask = (yy >= h // 2) & (xx < w // 2)
    vis[mask] = dark_level
    return vis, nir, mask


def noisy_pair(shape=(64, 64), seed: int = 0, sigma: float = 15.0 / 255.0):
    """Clean visible image, its noisy copy, and an NIR plane equal to the clean luminance."""
    from .color import luminance_of

    rng = np.random.default_rng(seed)
    h, w = shape
    yy, xx = np.mgrid[0:h, 0:w]
    lum = 0.35 + 0.25 * (xx / w) + 0.15 * ((yy // 16 + xx // 16) % 2)
    lum = ndimage.gaussian_filter(lum, 1.0, mode="nearest")
    c1 = 0.06 * np.cos(2 * np.pi * yy / h)
    c2 = 0.05 * np.sin(2 * np.pi * xx / w)
    clean = backward_opponent(OpponentImage(lum, c1, c2))
    noisy = np.clip(clean + rng.normal(0.0, sigma, clean.shape), 0.0, 1.0)
    return clean, noisy, luminance_of(clean)
