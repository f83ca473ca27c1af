"""Contrast-preserving per-pixel linear mapping from NIR to visible luminance.

At each pixel a slope/bias pair is fitted by spatially weighted ridge
regression of the visible luminance window on the NIR window.  The ridge
target for the slope is a local-contrast measure (centre value over window
average), so that with a strong ridge weight the mapped NIR keeps its local
contrast while a weak one lets it follow the visible brightness.

All 2x2 systems are solved in closed form, densely over the image.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import InputError, ParameterError
from .patches import (
    DEFAULT_M,
    PatchWindow,
    check_window,
    dense_stats,
    extract_patch,
    local_stats,
    spatial_weights,
    weighted_sum,
)

MU_C = 7500.0
MEAN_FLOOR = 1e-4
_SINGULAR_RTOL = 1e-10


class ContrastPrior(NamedTuple):
    slope0: float
    bias0: float = 0.0


class MappingField(NamedTuple):
    slope: np.ndarray
    bias: np.ndarray
    # True where the unregularized system was singular and the prior fallback was used
    fallback: np.ndarray

    @property
    def shape(self):
        return self.slope.shape


def _prior_weight(var_nir, var_vis):
    total = var_nir + var_vis
    with np.errstate(invalid="ignore", divide="ignore"):
        w = np.where(total > 0, var_nir / np.where(total > 0, total, 1.0), 0.5)
    return w


def contrast_prior(nir_patch: PatchWindow, vis_patch: PatchWindow) -> ContrastPrior:
    """Prior slope for one pixel from its NIR and visible-luminance windows.

    Each window contributes centre / mean; the two ratios are blended with
    weights proportional to the windows' variances.
    """
    if nir_patch.size != vis_patch.size:
        raise ParameterError("patches must share size")
    mid = len(nir_patch.values) // 2
    mean_n, var_n = local_stats(nir_patch)
    mean_v, var_v = local_stats(vis_patch)
    w1 = float(_prior_weight(var_n, var_v))
    ratio_n = nir_patch.values[mid] / max(mean_n, MEAN_FLOOR)
    ratio_v = vis_patch.values[mid] / max(mean_v, MEAN_FLOOR)
    return ContrastPrior(w1 * ratio_n + (1.0 - w1) * ratio_v)


def prior_slope(vis_l: np.ndarray, nir: np.ndarray, m: int = DEFAULT_M) -> np.ndarray:
    """Dense version of :func:`contrast_prior`: the prior slope at every pixel."""
    mean_n, var_n = dense_stats(nir, m)
    mean_v, var_v = dense_stats(vis_l, m)
    w1 = _prior_weight(var_n, var_v)
    return (w1 * nir / np.maximum(mean_n, MEAN_FLOOR)
            + (1.0 - w1) * vis_l / np.maximum(mean_v, MEAN_FLOOR))


def _check_pair(vis_l, nir):
    vis_l = np.asarray(vis_l, dtype=np.float64)
    nir = np.asarray(nir, dtype=np.float64)
    if vis_l.ndim != 2 or vis_l.shape != nir.shape:
        raise InputError(f"planes must be 2-D with equal dims, got {vis_l.shape} and {nir.shape}")
    return vis_l, nir


def solve_mapping(
    vis_l: np.ndarray,
    nir: np.ndarray,
    m: int = DEFAULT_M,
    mu_c: float = MU_C,
    sigma_s: float | None = None,
    value_range: float = 1.0,
) -> MappingField:
    """Fit the per-pixel slope and bias mapping ``nir`` onto ``vis_l``.

    Solves ``(Q^T W Q + mu_c I) a = Q^T W p + mu_c a0`` at every pixel, with
    ``Q = [nir window, 1]``, ``p`` the visible window and ``W`` Gaussian
    spatial weights.  ``value_range`` is the pixel scale that ``mu_c`` is
    expressed on: the planes are multiplied by it before the solve and the
    returned bias is converted back to [0, 1] units.  With ``value_range=1``
    the system is exactly the one above on the planes as given.

    Where ``mu_c`` is zero and the NIR window is constant, the system is
    singular; those pixels take the prior slope and the bias that matches
    the window means, and are marked in ``fallback``.
    """
    vis_l, nir = _check_pair(vis_l, nir)
    m = check_window(m)
    if mu_c < 0:
        raise ParameterError(f"mu_c must be >= 0, got {mu_c}")
    if not value_range > 0:
        raise ParameterError(f"value_range must be positive, got {value_range}")
    w = spatial_weights(m, sigma_s)

    slope0 = prior_slope(vis_l, nir, m)
    n = nir * value_range
    p = vis_l * value_range
    s_w = float(w.diag.sum())
    s_n = weighted_sum(n, w)
    s_nn = weighted_sum(n * n, w)
    s_p = weighted_sum(p, w)
    s_np = weighted_sum(n * p, w)

    a11 = s_nn + mu_c
    a22 = s_w + mu_c
    b1 = s_np + mu_c * slope0
    b2 = s_p
    det = a11 * a22 - s_n * s_n
    singular = det <= _SINGULAR_RTOL * a11 * a22
    safe = np.where(singular, 1.0, det)
    slope = (a22 * b1 - s_n * b2) / safe
    bias = (a11 * b2 - s_n * b1) / safe / value_range

    if np.any(singular):
        mean_n = dense_stats(nir, m)[0]
        mean_p = dense_stats(vis_l, m)[0]
        slope = np.where(singular, slope0, slope)
        bias = np.where(singular, mean_p - slope0 * mean_n, bias)
    return MappingField(slope, bias, singular)


def apply_mapping(nir: np.ndarray, field: MappingField) -> np.ndarray:
    nir = np.asarray(nir, dtype=np.float64)
    if nir.shape != field.slope.shape:
        raise InputError("mapping field and NIR plane differ in dims")
    return nir * field.slope + field.bias


def mapping_objective(vis_l, nir, slope, bias, i, m=DEFAULT_M, mu_c=MU_C, sigma_s=None):
    """Ridge objective at pixel ``i`` for a candidate (slope, bias) pair."""
    p = extract_patch(vis_l, i, m).values
    q = extract_patch(nir, i, m).values
    w = spatial_weights(m, sigma_s).diag
    a0 = contrast_prior(extract_patch(nir, i, m), extract_patch(vis_l, i, m))
    r = p - (q * slope + bias)
    return float(np.sum(w * r * r) + mu_c * ((slope - a0.slope0) ** 2 + (bias - a0.bias0) ** 2))


def validate_linearity(vis_l: np.ndarray, nir: np.ndarray, m: int = DEFAULT_M) -> float:
    """Mean squared error of the unregularized (mu_c = 0) local linear fit."""
    vis_l, nir = _check_pair(vis_l, nir)
    field = solve_mapping(vis_l, nir, m, mu_c=0.0)
    return float(np.mean((vis_l - apply_mapping(nir, field)) ** 2))
