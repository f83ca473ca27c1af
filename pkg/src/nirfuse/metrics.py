"""No-reference quality measures: contrast (CT), entropy (EN), spatial
frequency (SF) and colorfulness (CF).

All measures are reported on a 0-255 scale.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import ndimage

from .color import forward_opponent
from .errors import ParameterError
from .image import as_plane, as_rgb, is_rgb, quantize

SCALE = 255.0
CT_SIGMA = 2.0


@dataclass
class QualityReport:
    method: str
    ct: float
    en: float
    sf: float
    cf: float
    params: dict = field(default_factory=dict)
    image: str = ""

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "QualityReport":
        return cls(**json.loads(text))


def colorfulness(img: np.ndarray) -> float:
    opp = forward_opponent(as_rgb(img))
    c1 = opp.c1 * SCALE
    c2 = opp.c2 * SCALE
    sigma_ab = np.sqrt(c1.var() + c2.var())
    u_c = np.mean(np.hypot(c1, c2))
    return float(sigma_ab + 0.94 * u_c)


def spatial_frequency(plane: np.ndarray) -> float:
    x = as_plane(plane) * SCALE
    rf2 = np.mean(np.diff(x, axis=1) ** 2) if x.shape[1] > 1 else 0.0
    cf2 = np.mean(np.diff(x, axis=0) ** 2) if x.shape[0] > 1 else 0.0
    return float(np.sqrt(rf2 + cf2))


def _channel_entropy(plane: np.ndarray) -> float:
    hist = np.bincount(quantize(plane, 8).ravel(), minlength=256).astype(np.float64)
    p = hist[hist > 0] / hist.sum()
    return float(-np.sum(p * np.log2(p)))


def entropy(img: np.ndarray) -> float:
    """Shannon entropy (bits) of the 8-bit histogram, summed over colour channels."""
    img = np.asarray(img, dtype=np.float64)
    if is_rgb(img):
        return float(sum(_channel_entropy(img[:, :, k]) for k in range(3)))
    return _channel_entropy(as_plane(img))


def gaussian_blur(plane: np.ndarray, sigma: float) -> np.ndarray:
    """Separable Gaussian blur, kernel cut at |offset| <= 3 sigma, replicate borders."""
    r = int(np.floor(3.0 * sigma))
    k = np.exp(-np.arange(-r, r + 1) ** 2 / (2.0 * sigma**2))
    k /= k.sum()
    out = ndimage.correlate1d(plane, k, axis=0, mode="nearest")
    return ndimage.correlate1d(out, k, axis=1, mode="nearest")


def contrast_measure(plane: np.ndarray, sigma_k: float = CT_SIGMA) -> float:
    """Mean absolute difference between the plane and its Gaussian blur."""
    if not sigma_k > 0:
        raise ParameterError("sigma_k must be positive")
    x = as_plane(plane)
    # centring keeps a constant plane at exactly zero
    x = x - x.mean()
    return float(np.mean(np.abs(x - gaussian_blur(x, sigma_k))) * SCALE)


def measure(img: np.ndarray, method: str = "", params: dict | None = None,
            sigma_k: float = CT_SIGMA) -> QualityReport:
    """All four measures of an RGB image; CT and SF use its luminance plane."""
    img = as_rgb(img)
    lum = forward_opponent(img).l
    return QualityReport(
        method=method,
        ct=contrast_measure(lum, sigma_k),
        en=entropy(img),
        sf=spatial_frequency(lum),
        cf=colorfulness(img),
        params=dict(params or {}),
    )


def format_table(reports: list[QualityReport]) -> str:
    lines = [f"{'image':<20}{'method':<16}{'CT':>10}{'EN':>10}{'SF':>10}{'CF':>10}"]
    for r in reports:
        lines.append(f"{r.image:<20}{r.method:<16}{r.ct:>10.3f}{r.en:>10.3f}{r.sf:>10.3f}{r.cf:>10.3f}")
    return "\n".join(lines)
