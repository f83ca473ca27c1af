"""End-to-end NIR coloring and dim-light denoising."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields, replace
from typing import NamedTuple

import numpy as np

from .baselines import (
    BaselineParams,
    gradient_reg_fuse,
    naive_colorize,
    statistical_fuse,
    wavelet_fuse,
    with_visible_colors,
)
from .chroma import ChromaParams, chroma_map, transfer_colors
from .color import OpponentImage, backward_opponent, forward_opponent
from .detail import DetailSolveParams, transfer_detail
from .errors import InputError, ParameterError
from .image import as_plane, as_rgb
from .mapping import MU_C, MappingField, apply_mapping, solve_mapping, validate_linearity
from .metrics import QualityReport, measure
from .patches import check_window
from .smoothing import NlmParams, denoise_params, nlm_filter

METHODS = ("proposed", "naive", "gradreg", "wavelet", "statistical")


@dataclass
class PipelineConfig:
    m: int = 7
    mu_c: float = MU_C
    mu_d: float = 200.0
    value_range: float = 1.0
    nlm: NlmParams = field(default_factory=NlmParams)
    chroma: ChromaParams = field(default_factory=ChromaParams)
    baseline: BaselineParams = field(default_factory=BaselineParams)
    method: str = "proposed"
    denoise_first: bool = False
    chroma_boost: bool = False
    detail_transfer: bool = True
    metrics_out: str | None = None

    def __post_init__(self):
        check_window(self.m)
        if self.method not in METHODS:
            raise ParameterError(f"method must be one of {METHODS}, got {self.method!r}")
        if not (self.mu_c > 0 and self.mu_d > 0 and self.value_range > 0):
            raise ParameterError("mu_c, mu_d and value_range must be positive")

    def snapshot(self) -> dict:
        """Flat parameter record for reports."""
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if hasattr(v, "__dataclass_fields__"):
                out.update({f"{f.name}.{k}": x for k, x in asdict(v).items()})
            else:
                out[f.name] = v
        return out


class ColorizeResult(NamedTuple):
    image: np.ndarray
    mapped: np.ndarray      # NIR plane after the contrast-preserving mapping
    enhanced: np.ndarray    # mapped plane after detail transfer
    field: MappingField


def _check_pair(vis, nir):
    vis, nir = as_rgb(vis), as_plane(nir)
    if vis.shape[:2] != nir.shape:
        raise InputError(f"visible {vis.shape[:2]} and NIR {nir.shape} images are not the same size")
    return vis, nir


def colorize_steps(vis: np.ndarray, nir: np.ndarray, cfg: PipelineConfig = PipelineConfig()) -> ColorizeResult:
    vis, nir = _check_pair(vis, nir)
    opp = forward_opponent(vis)
    fld = solve_mapping(opp.l, nir, cfg.m, cfg.mu_c, value_range=cfg.value_range)
    mapped = apply_mapping(nir, fld)
    if cfg.detail_transfer:
        enhanced = transfer_detail(mapped, nir, cfg.nlm, DetailSolveParams(mu_d=cfg.mu_d))
    else:
        enhanced = mapped
    c1, c2 = transfer_colors(opp.c1, opp.c2, fld, cfg.chroma)
    out = backward_opponent(OpponentImage(enhanced, c1, c2))
    return ColorizeResult(out, mapped, enhanced, fld)


def fuse(vis: np.ndarray, nir: np.ndarray, cfg: PipelineConfig = PipelineConfig()) -> np.ndarray:
    """Color ``nir`` with ``vis`` using ``cfg.method``."""
    vis, nir = _check_pair(vis, nir)
    b = cfg.baseline
    if cfg.method == "proposed":
        return colorize_steps(vis, nir, cfg).image
    if cfg.method == "naive":
        return naive_colorize(nir, vis)
    if cfg.method == "statistical":
        return statistical_fuse(vis, nir, b.stat_window)
    lum = forward_opponent(vis).l
    if cfg.method == "gradreg":
        fused = gradient_reg_fuse(lum, nir, b.mu_g, b.gamma, b.irls_rounds)
    else:
        fused = wavelet_fuse(lum, nir, b.omega_l, b.levels, b.wavelet)
    return with_visible_colors(fused, vis)


def colorize(vis: np.ndarray, nir: np.ndarray, cfg: PipelineConfig = PipelineConfig()) -> np.ndarray:
    if cfg.denoise_first:
        return denoise(vis, nir, cfg)
    return fuse(vis, nir, cfg)


def denoise_visible(vis: np.ndarray, nlm: NlmParams | None = None) -> np.ndarray:
    """Per-channel NLM; ``h`` follows the estimated noise level unless ``nlm`` is given."""
    vis = as_rgb(vis)
    out = np.empty_like(vis)
    for k in range(3):
        params = nlm or denoise_params(vis[:, :, k])
        out[:, :, k] = nlm_filter(vis[:, :, k], params)
    return out


def boost_chroma(img: np.ndarray, s: float) -> np.ndarray:
    opp = forward_opponent(img)
    c1, c2 = chroma_map(opp.c1, opp.c2, s)
    return backward_opponent(OpponentImage(opp.l, c1, c2))


def denoise(vis_noisy: np.ndarray, nir: np.ndarray, cfg: PipelineConfig = PipelineConfig(),
            nlm: NlmParams | None = None) -> np.ndarray:
    """Initial NLM denoising of the visible image, then coloring with the NIR guide."""
    vis_noisy, nir = _check_pair(vis_noisy, nir)
    clean = denoise_visible(vis_noisy, nlm)
    out = fuse(clean, nir, replace(cfg, denoise_first=False))
    if cfg.chroma_boost:
        out = boost_chroma(out, cfg.chroma.chroma_scale)
    return out


def run_metrics(img: np.ndarray, cfg: PipelineConfig | None = None, method: str | None = None,
                image_name: str = "") -> QualityReport:
    cfg = cfg or PipelineConfig()
    report = measure(img, method or cfg.method, cfg.snapshot())
    report.image = image_name
    if cfg.metrics_out:
        with open(cfg.metrics_out, "a") as fh:
            fh.write(report.to_json() + "\n")
    return report


def validate(vis: np.ndarray, nir: np.ndarray, m: int = 7) -> float:
    vis, nir = _check_pair(vis, nir)
    return validate_linearity(forward_opponent(vis).l, nir, m)


def load_config(path: str) -> dict:
    """Parse a flat ``key = value`` file; '#' starts a comment."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParameterError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            try:
                out[key] = json.loads(value)
            except json.JSONDecodeError:
                out[key] = value
    return out
