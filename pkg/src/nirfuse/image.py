"""Image containers and PNG/TIFF file IO.

Planes are 2-D ``float64`` arrays and colour images are ``(H, W, 3)`` arrays
in RGB order, both holding intensities nominally in [0, 1].  Quantization
only happens at the file boundary.
"""
from __future__ import annotations

import os

import cv2
import numpy as np

_MAXVAL = {8: 255, 16: 65535}
_DTYPES = {8: np.uint8, 16: np.uint16}


class ImageFormatError(ValueError):
    """Raised when a raster cannot be interpreted as 8/16-bit gray or RGB."""


def is_rgb(img: np.ndarray) -> bool:
    return img.ndim == 3 and img.shape[2] == 3


def as_plane(x) -> np.ndarray:
    p = np.asarray(x, dtype=np.float64)
    if p.ndim != 2:
        raise ValueError(f"expected a 2-D plane, got shape {p.shape}")
    return p


def as_rgb(x) -> np.ndarray:
    img = np.asarray(x, dtype=np.float64)
    if not is_rgb(img):
        raise ValueError(f"expected an (H, W, 3) image, got shape {img.shape}")
    return img


def gray_to_rgb(plane: np.ndarray) -> np.ndarray:
    return np.repeat(as_plane(plane)[:, :, None], 3, axis=2)


def load_image(path: str | os.PathLike) -> np.ndarray:
    """Read a gray or RGB raster and scale it to [0, 1].

    Grayscale files give a 2-D plane, colour files an ``(H, W, 3)`` RGB array.
    An alpha channel, if present, is dropped.
    """
    path = os.fspath(path)
    if not os.path.isfile(path):
        raise FileNotFoundError(path)
    raw = cv2.imread(path, cv2.IMREAD_UNCHANGED)
    if raw is None:
        raise ImageFormatError(f"unsupported or corrupt image file: {path}")
    if raw.dtype == np.uint8:
        maxval = 255.0
    elif raw.dtype == np.uint16:
        maxval = 65535.0
    else:
        raise ImageFormatError(f"unsupported sample type {raw.dtype} in {path}")

    if raw.ndim == 2:
        return raw.astype(np.float64) / maxval
    if raw.ndim == 3 and raw.shape[2] in (3, 4):
        rgb = raw[:, :, 2::-1] if raw.shape[2] == 3 else raw[:, :, [2, 1, 0]]
        return rgb.astype(np.float64) / maxval
    raise ImageFormatError(f"unsupported channel layout {raw.shape} in {path}")


def quantize(img: np.ndarray, bit_depth: int = 8) -> np.ndarray:
    """Clamp to [0, 1] and round half up onto the integer grid of ``bit_depth``."""
    if bit_depth not in _MAXVAL:
        raise ValueError("bit_depth must be 8 or 16")
    maxval = _MAXVAL[bit_depth]
    v = np.clip(np.asarray(img, dtype=np.float64), 0.0, 1.0)
    return np.floor(v * maxval + 0.5).astype(_DTYPES[bit_depth])


def save_image(img: np.ndarray, path: str | os.PathLike, bit_depth: int = 8) -> None:
    img = np.asarray(img, dtype=np.float64)
    if not np.all(np.isfinite(img)):
        raise ValueError("cannot save an image containing NaN or Inf")
    if img.ndim == 3 and img.shape[2] == 3:
        data = quantize(img, bit_depth)[:, :, ::-1]
    elif img.ndim == 2:
        data = quantize(img, bit_depth)
    else:
        raise ValueError(f"cannot save array of shape {img.shape}")
    path = os.fspath(path)
    try:
        ok = cv2.imwrite(path, np.ascontiguousarray(data))
    except cv2.error as exc:
        raise OSError(f"could not write {path}: {exc}") from exc
    if not ok:
        raise OSError(f"could not write {path}")


def clamp_plane(p: np.ndarray, lo: float = 0.0, hi: float = 1.0) -> np.ndarray:
    if lo > hi:
        raise ValueError(f"lo ({lo}) must not exceed hi ({hi})")
    return np.clip(np.asarray(p, dtype=np.float64), lo, hi)
