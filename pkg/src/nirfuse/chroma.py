"""Chrominance for the new luminance plane, and uniform chroma scaling."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, ParameterError
from .mapping import MappingField

CHROMA_BOOST = 1.2


@dataclass(frozen=True)
class ChromaParams:
    slope_floor: float = 0.2
    chroma_scale: float = CHROMA_BOOST

    def __post_init__(self):
        if not self.slope_floor > 0:
            raise ParameterError("slope_floor must be positive")
        if not self.chroma_scale > 0:
            raise ParameterError("chroma_scale must be positive")


def guarded_slope(slope: np.ndarray, floor: float) -> np.ndarray:
    """max(slope, floor), with non-positive slopes routed to the floor."""
    slope = np.asarray(slope, dtype=np.float64)
    return np.where(slope > 0, np.maximum(slope, floor), floor)


def transfer_colors(vc1: np.ndarray, vc2: np.ndarray, field: MappingField | np.ndarray,
                    params: ChromaParams = ChromaParams()) -> tuple[np.ndarray, np.ndarray]:
    """Divide both visible chrominance planes by the fitted local slope.

    ``field`` may be a :class:`MappingField` or a bare slope plane.  The
    divisor is floored at ``params.slope_floor``, which caps the chroma gain.
    """
    slope = field.slope if isinstance(field, MappingField) else np.asarray(field, dtype=np.float64)
    vc1 = np.asarray(vc1, dtype=np.float64)
    vc2 = np.asarray(vc2, dtype=np.float64)
    if not (vc1.shape == vc2.shape == slope.shape):
        raise InputError("chrominance planes and slope field differ in dims")
    div = guarded_slope(slope, params.slope_floor)
    return vc1 / div, vc2 / div


def chroma_map(c1: np.ndarray, c2: np.ndarray, s: float = CHROMA_BOOST) -> tuple[np.ndarray, np.ndarray]:
    if not s > 0:
        raise ParameterError(f"chroma scale must be positive, got {s}")
    return np.asarray(c1, dtype=np.float64) * s, np.asarray(c2, dtype=np.float64) * s
