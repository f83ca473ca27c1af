"""Detail-layer transfer by L1 gradient matching.

The detail layer of the new luminance is re-estimated as

    argmin_x  mu_d * ||x - d_new||^2 + sum_j |D_j x - D_j d_nir|_1

where ``D_j`` are periodic forward differences.  The problem is solved by
half-quadratic splitting: an auxiliary copy of each gradient residual is
shrunk in closed form, and the remaining quadratic problem is diagonal in
the Fourier domain.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InputError, NumericalWarning, ParameterError
from .smoothing import NlmParams, base_layer

MU_D = 200.0
_AXES = {"horizontal": 1, "vertical": 0}


@dataclass(frozen=True)
class DetailSolveParams:
    mu_d: float = MU_D
    iterations: int = 24
    inner: int = 10
    beta0: float = 1.0
    beta_rate: float = 2.0
    beta_max: float = 1e9

    def __post_init__(self):
        if not self.mu_d > 0:
            raise ParameterError("mu_d must be positive")
        if self.iterations < 1 or self.inner < 1:
            raise ParameterError("iterations and inner must be >= 1")
        if not self.beta0 > 0:
            raise ParameterError("beta0 must be positive")
        if self.beta_rate < 1.0:
            raise ParameterError("beta must not decrease along the schedule")

    def betas(self) -> list[float]:
        b = self.beta0
        out = []
        for _ in range(self.iterations):
            out.append(min(b, self.beta_max))
            b *= self.beta_rate
        return out


class DetailSolution(NamedTuple):
    detail: np.ndarray
    # trace[0] is the objective at the initialization; trace[k] lists the
    # objective after each inner alternation of outer iteration k
    trace: list
    converged: bool

    @property
    def objective(self) -> float:
        return min([self.trace[0]] + [e for stage in self.trace[1:] for e in stage])


def gradient(plane: np.ndarray, axis: str = "horizontal") -> np.ndarray:
    """Forward difference ``x[k+1] - x[k]`` with periodic wrap."""
    if axis not in _AXES:
        raise ParameterError(f"axis must be 'horizontal' or 'vertical', got {axis!r}")
    x = np.asarray(plane, dtype=np.float64)
    ax = _AXES[axis]
    return np.roll(x, -1, axis=ax) - x


def gradient_adjoint(g: np.ndarray, axis: str = "horizontal") -> np.ndarray:
    ax = _AXES[axis]
    return np.roll(g, 1, axis=ax) - g


def shrink(t, tau):
    """Soft threshold: sign(t) * max(|t| - tau, 0)."""
    t = np.asarray(t, dtype=np.float64)
    return np.sign(t) * np.maximum(np.abs(t) - tau, 0.0)


def difference_otfs(shape) -> tuple[np.ndarray, np.ndarray]:
    """Fourier transfer functions of the horizontal and vertical differences."""
    h, w = shape
    kx = np.exp(2j * np.pi * np.fft.fftfreq(w))[None, :] - 1.0
    ky = np.exp(2j * np.pi * np.fft.fftfreq(h))[:, None] - 1.0
    return np.broadcast_to(kx, shape), np.broadcast_to(ky, shape)


def solve_quadratic(data: np.ndarray, targets: tuple[np.ndarray, np.ndarray],
                    mu: float, beta: float) -> np.ndarray:
    """Exact minimizer of ``mu ||x - data||^2 + beta sum_j ||D_j x - t_j||^2``."""
    kx, ky = difference_otfs(data.shape)
    tx, ty = targets
    num = mu * np.fft.fft2(data) + beta * (np.conj(kx) * np.fft.fft2(tx) + np.conj(ky) * np.fft.fft2(ty))
    den = mu + beta * (np.abs(kx) ** 2 + np.abs(ky) ** 2)
    return np.real(np.fft.ifft2(num / den))


def detail_objective(x, d_new, d_nir, mu_d) -> float:
    e = mu_d * np.sum((x - d_new) ** 2)
    for axis in _AXES:
        e += np.sum(np.abs(gradient(x, axis) - gradient(d_nir, axis)))
    return float(e)


def solve_detail(d_new: np.ndarray, d_nir: np.ndarray,
                 params: DetailSolveParams = DetailSolveParams()) -> DetailSolution:
    d_new = np.asarray(d_new, dtype=np.float64)
    d_nir = np.asarray(d_nir, dtype=np.float64)
    if d_new.shape != d_nir.shape or d_new.ndim != 2:
        raise InputError("detail layers must be 2-D with equal dims")
    mu = params.mu_d
    g = {axis: gradient(d_nir, axis) for axis in _AXES}

    x = d_new.copy()
    best, best_e = x, detail_objective(x, d_new, d_nir, mu)
    trace: list = [best_e]
    last = best_e
    converged = True
    for beta in params.betas():
        stage = []
        for _ in range(params.inner):
            v = {axis: shrink(gradient(x, axis) - g[axis], 1.0 / (2.0 * beta)) for axis in _AXES}
            x = solve_quadratic(d_new, (g["horizontal"] + v["horizontal"], g["vertical"] + v["vertical"]), mu, beta)
            e = detail_objective(x, d_new, d_nir, mu)
            stage.append(e)
            if e < best_e:
                best, best_e = x, e
        # outer iterations are compared at their last alternation
        if stage[-1] > last + 1e-9 * max(1.0, abs(last)):
            converged = False
        last = stage[-1]
        trace.append(stage)
    return DetailSolution(best, trace, converged)


def transfer_detail(new_l: np.ndarray, nir: np.ndarray, nlm: NlmParams = NlmParams(),
                    params: DetailSolveParams = DetailSolveParams()) -> np.ndarray:
    """Replace the detail layer of ``new_l`` by one whose gradients follow the NIR detail.

    Returns ``base(new_l) + x`` where ``x`` solves the L1 gradient-matching
    problem above.  A :class:`NumericalWarning` is emitted if the objective
    rose between outer iterations; the best iterate is used either way.
    """
    new_l = np.asarray(new_l, dtype=np.float64)
    nir = np.asarray(nir, dtype=np.float64)
    if new_l.shape != nir.shape:
        raise InputError(f"dims differ: {new_l.shape} vs {nir.shape}")
    base_new, d_new = base_layer(new_l, nlm)
    _, d_nir = base_layer(nir, nlm)
    sol = solve_detail(d_new, d_nir, params)
    if not sol.converged:
        warnings.warn("detail transfer objective increased between outer iterations",
                      NumericalWarning, stacklevel=2)
    return base_new + sol.detail
