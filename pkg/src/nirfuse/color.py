"""Decorrelated opponent colour space (lαβ) conversions.

RGB is taken to LMS cone space, logged, and rotated onto one achromatic and
two opponent axes.  The achromatic axis is handed out in intensity units:
``l = 10 ** (l_log / sqrt(3))``, i.e. the geometric mean of L, M and S.  A
gray pixel of value ``v`` therefore has ``l == v``, which lets a
near-infrared plane stand in for the visible luminance directly.  The two
chrominance planes stay in log10 units.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .image import as_rgb

LMS_FLOOR = 1e-6

# Cone response matrix of the classic lαβ colour transfer, with each row
# rescaled to unit sum so that R = G = B lands exactly on the achromatic axis.
_RGB2LMS_RAW = np.array([
    [0.3811, 0.5783, 0.0402],
    [0.1967, 0.7244, 0.0782],
    [0.0241, 0.1288, 0.8444],
])
RGB2LMS = _RGB2LMS_RAW / _RGB2LMS_RAW.sum(axis=1, keepdims=True)
LMS2RGB = np.linalg.inv(RGB2LMS)

LOGLMS2LAB = np.diag([1 / np.sqrt(3), 1 / np.sqrt(6), 1 / np.sqrt(2)]) @ np.array([
    [1.0, 1.0, 1.0],
    [1.0, 1.0, -2.0],
    [1.0, -1.0, 0.0],
])
LAB2LOGLMS = np.linalg.inv(LOGLMS2LAB)

_SQRT3 = np.sqrt(3.0)


class OpponentImage(NamedTuple):
    l: np.ndarray
    c1: np.ndarray
    c2: np.ndarray

    @property
    def shape(self):
        return self.l.shape


def forward_opponent(img: np.ndarray) -> OpponentImage:
    rgb = as_rgb(img)
    lms = np.maximum(rgb @ RGB2LMS.T, LMS_FLOOR)
    lab = np.log10(lms) @ LOGLMS2LAB.T
    l = 10.0 ** (lab[..., 0] / _SQRT3)
    return OpponentImage(l, lab[..., 1].copy(), lab[..., 2].copy())


def backward_opponent(opp: OpponentImage | tuple, clamp: bool = True) -> np.ndarray:
    """Invert :func:`forward_opponent`; the result is clamped to [0, 1] by default.

    Luminance values at or below zero are floored to the smallest
    representable cone response before taking the log.
    """
    l, c1, c2 = (np.asarray(p, dtype=np.float64) for p in opp)
    if not (l.shape == c1.shape == c2.shape):
        raise ValueError("opponent planes must share dims")
    l_log = _SQRT3 * np.log10(np.maximum(l, LMS_FLOOR))
    lab = np.stack([l_log, c1, c2], axis=-1)
    lms = 10.0 ** (lab @ LAB2LOGLMS.T)
    rgb = lms @ LMS2RGB.T
    return np.clip(rgb, 0.0, 1.0) if clamp else rgb


def luminance_of(img: np.ndarray) -> np.ndarray:
    return forward_opponent(img).l


def chroma(opp: OpponentImage) -> np.ndarray:
    """Per-pixel chroma magnitude sqrt(c1**2 + c2**2)."""
    return np.hypot(opp.c1, opp.c2)
