"""Comparison fusion methods: naive coloring, gradient regularization,
wavelet fusion and local statistics transfer."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import pywt
from scipy.sparse.linalg import LinearOperator, cg

from .color import OpponentImage, backward_opponent, forward_opponent
from .detail import difference_otfs, gradient, gradient_adjoint
from .errors import InputError, NumericalWarning, ParameterError
from .image import as_plane, as_rgb
from .patches import check_window, dense_stats

EPS_IRLS = 1e-4
STD_FLOOR = 1e-4
_AXES = ("horizontal", "vertical")


@dataclass(frozen=True)
class BaselineParams:
    mu_g: float = 1e3
    gamma: float = 0.8
    omega_l: float = 0.5
    levels: int = 2
    wavelet: str = "haar"
    stat_window: int = 7
    irls_rounds: int = 10

    def __post_init__(self):
        if not self.mu_g > 0:
            raise ParameterError("mu_g must be positive")
        if not 0 < self.gamma <= 1:
            raise ParameterError("gamma must lie in (0, 1]")
        if not 0 <= self.omega_l <= 1:
            raise ParameterError("omega_l must lie in [0, 1]")
        if self.levels < 1:
            raise ParameterError("levels must be >= 1")
        check_window(self.stat_window)


def _same_dims(a, b):
    if a.shape[:2] != b.shape[:2]:
        raise InputError(f"dims differ: {a.shape[:2]} vs {b.shape[:2]}")


def naive_colorize(nir: np.ndarray, vis: np.ndarray) -> np.ndarray:
    """NIR plane as luminance, visible chrominance copied unchanged."""
    nir, vis = as_plane(nir), as_rgb(vis)
    _same_dims(nir, vis)
    opp = forward_opponent(vis)
    return backward_opponent(OpponentImage(nir, opp.c1, opp.c2))


def with_visible_colors(lum: np.ndarray, vis: np.ndarray) -> np.ndarray:
    opp = forward_opponent(vis)
    return backward_opponent(OpponentImage(lum, opp.c1, opp.c2))


# -- gradient regularization ------------------------------------------------

def smoothed_power(r: np.ndarray, gamma: float, eps: float = EPS_IRLS) -> np.ndarray:
    """Smoothed |r|**gamma whose IRLS weights are (|r| + eps)**(gamma - 2).

    Defined as gamma * integral_0^|r| t (t + eps)**(gamma - 2) dt, so it
    tends to |r|**gamma for |r| >> eps and is quadratic near zero.
    """
    a = np.abs(r)
    u = a + eps
    if gamma == 1.0:
        return a - eps * np.log1p(a / eps)
    g = gamma
    prim = lambda v: v**g / g - eps * v ** (g - 1.0) / (g - 1.0)  # noqa: E731
    return g * (prim(u) - prim(eps))


def gradreg_objective(x, vis_l, nir, mu_g, gamma, eps=EPS_IRLS, smoothed=True) -> float:
    e = mu_g * np.sum((x - vis_l) ** 2)
    for axis in _AXES:
        r = gradient(x, axis) - gradient(nir, axis)
        e += np.sum(smoothed_power(r, gamma, eps) if smoothed else np.abs(r) ** gamma)
    return float(e)


def _weighted_solve(vis_l, g, weights, mu_g, gamma, x0):
    shape = vis_l.shape
    n = vis_l.size

    def apply(v):
        x = v.reshape(shape)
        out = 2.0 * mu_g * x
        for axis in _AXES:
            out = out + gamma * gradient_adjoint(weights[axis] * gradient(x, axis), axis)
        return out.ravel()

    rhs = 2.0 * mu_g * vis_l
    for axis in _AXES:
        rhs = rhs + gamma * gradient_adjoint(weights[axis] * g[axis], axis)

    # circulant preconditioner with the mean weight per direction, inverted by FFT
    kx, ky = difference_otfs(shape)
    den = 2.0 * mu_g + gamma * (weights["horizontal"].mean() * np.abs(kx) ** 2
                                + weights["vertical"].mean() * np.abs(ky) ** 2)

    def precond(v):
        return np.real(np.fft.ifft2(np.fft.fft2(v.reshape(shape)) / den)).ravel()

    A = LinearOperator((n, n), matvec=apply, dtype=np.float64)
    M = LinearOperator((n, n), matvec=precond, dtype=np.float64)
    x, _ = cg(A, rhs.ravel(), x0=x0.ravel(), M=M, rtol=1e-12, atol=0.0, maxiter=5000)
    return x.reshape(shape)


def gradient_reg_fuse(vis_l: np.ndarray, nir: np.ndarray, mu_g: float = 1e3, gamma: float = 0.8,
                      rounds: int = 10, eps: float = EPS_IRLS, return_trace: bool = False):
    """Luminance that stays near ``vis_l`` while its gradients follow ``nir``.

    Minimizes ``mu_g ||x - vis_l||^2 + sum_j |D_j x - D_j nir|^gamma`` by
    iteratively reweighted least squares on the smoothed penalty
    :func:`smoothed_power`.  Each reweighted system is solved by conjugate
    gradients with an FFT preconditioner.
    """
    vis_l, nir = as_plane(vis_l), as_plane(nir)
    _same_dims(vis_l, nir)
    BaselineParams(mu_g=mu_g, gamma=gamma)
    g = {axis: gradient(nir, axis) for axis in _AXES}
    x = vis_l.copy()
    best, best_e = x, gradreg_objective(x, vis_l, nir, mu_g, gamma, eps)
    trace = [best_e]
    for _ in range(rounds):
        weights = {axis: (np.abs(gradient(x, axis) - g[axis]) + eps) ** (gamma - 2.0) for axis in _AXES}
        x = _weighted_solve(vis_l, g, weights, mu_g, gamma, x)
        e = gradreg_objective(x, vis_l, nir, mu_g, gamma, eps)
        if e > trace[-1] + 1e-6:
            warnings.warn("gradient regularization objective increased", NumericalWarning, stacklevel=2)
        trace.append(e)
        if e < best_e:
            best, best_e = x, e
    return (best, trace) if return_trace else best


# -- wavelet fusion ----------------------------------------------------------

def max_abs_select(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise coefficient of larger magnitude, sign kept; ties go to ``a``."""
    return np.where(np.abs(a) >= np.abs(b), a, b)


def wavelet_fuse(vis_l: np.ndarray, nir: np.ndarray, omega_l: float = 0.5, levels: int = 2,
                 wavelet: str = "haar") -> np.ndarray:
    """Blend the approximation band linearly, keep the stronger detail coefficient elsewhere."""
    vis_l, nir = as_plane(vis_l), as_plane(nir)
    _same_dims(vis_l, nir)
    if not 0 <= omega_l <= 1:
        raise ParameterError("omega_l must lie in [0, 1]")
    h, w = vis_l.shape
    step = 2**levels
    ph, pw = (-h) % step, (-w) % step
    if ph or pw:
        vis_l = np.pad(vis_l, ((0, ph), (0, pw)), mode="symmetric")
        nir = np.pad(nir, ((0, ph), (0, pw)), mode="symmetric")
    cv = pywt.wavedec2(vis_l, wavelet, mode="periodization", level=levels)
    cn = pywt.wavedec2(nir, wavelet, mode="periodization", level=levels)
    out = pywt.waverec2(fuse_coefficients(cv, cn, omega_l), wavelet, mode="periodization")
    return out[:h, :w]


def fuse_coefficients(cv: list, cn: list, omega_l: float) -> list:
    """Fuse two ``pywt.wavedec2`` coefficient lists."""
    fused = [omega_l * cv[0] + (1.0 - omega_l) * cn[0]]
    for dv, dn in zip(cv[1:], cn[1:]):
        fused.append(tuple(max_abs_select(a, b) for a, b in zip(dv, dn)))
    return fused


# -- local statistics transfer ---------------------------------------------

def statistical_fuse(vis: np.ndarray, nir: np.ndarray, window: int = 7) -> np.ndarray:
    """Match local mean and contrast of the visible luminance to the NIR plane.

    Chrominance is scaled by the same local std ratio.
    """
    vis, nir = as_rgb(vis), as_plane(nir)
    _same_dims(nir, vis)
    opp = forward_opponent(vis)
    mu_n, var_n = dense_stats(nir, window)
    mu_v, var_v = dense_stats(opp.l, window)
    ratio = np.maximum(np.sqrt(var_n), STD_FLOOR) / np.maximum(np.sqrt(var_v), STD_FLOOR)
    lum = mu_n + (opp.l - mu_v) * ratio
    return backward_opponent(OpponentImage(lum, opp.c1 * ratio, opp.c2 * ratio))
