"""End-to-end acceptance checks.  Run with ``pytest tests/test_acceptance.py -s``
to see one PASS/FAIL line per criterion."""
import os
import time
from pathlib import Path

import numpy as np
import pytest

from nirfuse.baselines import fuse_coefficients
from nirfuse.color import OpponentImage, backward_opponent, forward_opponent, luminance_of
from nirfuse.detail import DetailSolveParams, solve_detail, transfer_detail
from nirfuse.image import load_image
from nirfuse.mapping import prior_slope, solve_mapping, validate_linearity
from nirfuse.metrics import entropy, measure, spatial_frequency
from nirfuse.pipeline import PipelineConfig, colorize, denoise, fuse
from nirfuse.smoothing import NlmParams, base_layer
from nirfuse.synthetic import discrepancy_pair, noisy_pair, textured_nir

from oracles import ridge_oracle, subgradient_detail

import pywt


def report(n, ok, detail):
    print(f"\n[acceptance {n}] {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, detail


def psnr(a, b):
    return 10 * np.log10(1.0 / np.mean((a - b) ** 2))


def test_1_ridge_oracle():
    rng = np.random.default_rng(1)
    worst, t0 = 0.0, time.perf_counter()
    for k in range(1000):
        mu_c = (0.0, 7500.0)[k % 2]
        nir, vis = rng.random((7, 7)), rng.random((7, 7))
        f = solve_mapping(vis, nir, 7, mu_c)
        a = ridge_oracle(nir.ravel(), vis.ravel(), mu_c, 7)
        worst = max(worst, abs(f.slope[3, 3] - a[0]), abs(f.bias[3, 3] - a[1]))
    dt = time.perf_counter() - t0
    report(1, worst < 1e-10 and dt < 5.0, f"max coefficient error {worst:.2e}, {dt:.2f} s")


def test_2_linearity_synthetic():
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(5):
        nir = textured_nir((32, 32), seed=int(rng.integers(1000)))
        vis = rng.uniform(0.3, 2.0) * nir + rng.uniform(-0.1, 0.1)
        worst = max(worst, validate_linearity(vis, nir, 7))
    report("2 (affine)", worst <= 1e-12, f"exact-affine MSE {worst:.2e}")


def test_2_linearity_database_pair():
    # real pairs cannot be fetched in an offline run; point NIRFUSE_RGBNIR_PAIR at "vis.png,nir.png"
    pair = os.environ.get("NIRFUSE_RGBNIR_PAIR")
    if not pair:
        print("\n[acceptance 2 (database)] UNVERIFIED: set NIRFUSE_RGBNIR_PAIR=vis,nir to run")
        pytest.skip("no RGB-NIR database pair available")
    v, n = (Path(p) for p in pair.split(","))
    vis, nir = load_image(v), load_image(n)
    nir = luminance_of(nir) if nir.ndim == 3 else nir
    mse = validate_linearity(luminance_of(vis), nir, 7)
    report("2 (database)", mse <= 1e-3, f"MSE {mse:.2e}")


def test_3_detail_optimizer():
    rng = np.random.default_rng(3)
    nlm = NlmParams()
    worst_gap, monotone, t0 = 0.0, True, time.perf_counter()
    for _ in range(20):
        a, b = rng.random((16, 16)), rng.random((16, 16))
        d_a, d_b = base_layer(a, nlm).detail, base_layer(b, nlm).detail
        sol = solve_detail(d_a, d_b, DetailSolveParams(mu_d=200.0))
        oracle = subgradient_detail(d_a, d_b, 200.0, 5000)
        worst_gap = max(worst_gap, (sol.objective - oracle) / oracle)
        ends = [sol.trace[0]] + [s[-1] for s in sol.trace[1:]]
        monotone &= bool(np.all(np.diff(ends) <= 1e-9 * max(1.0, ends[0])))
    dt = time.perf_counter() - t0
    report(3, worst_gap <= 0.005 and monotone and dt < 30.0,
           f"worst gap to oracle {100 * worst_gap:+.3f}%, stage trace non-increasing={monotone}, {dt:.1f} s")


def test_4_limits():
    rng = np.random.default_rng(4)
    nir = textured_nir((32, 32), seed=4)
    vis = np.clip(0.7 * nir + 0.1 + 0.05 * rng.random((32, 32)), 0, 1)
    f = solve_mapping(vis, nir, 7, 1e9)
    da = np.max(np.abs(f.slope - prior_slope(vis, nir, 7)))
    out = transfer_detail(vis, nir, params=DetailSolveParams(mu_d=1e9))
    dd = np.max(np.abs(out - vis))
    report(4, da < 1e-4 and dd < 1e-4, f"|slope - prior| {da:.2e}, detail deviation {dd:.2e}")


def test_5_color_round_trip():
    rng = np.random.default_rng(5)
    img = rng.uniform(1 / 255, 1.0, (64, 64, 3))
    err = np.max(np.abs(backward_opponent(forward_opponent(img), clamp=False) - img))
    report(5, err < 1e-5, f"max channel error {err:.2e}")


def test_6_metric_identities():
    r = measure(np.full((16, 16, 3), 0.5))
    flat = (r.ct, r.en, r.sf, abs(r.cf))
    levels = np.arange(256, dtype=np.float64).reshape(16, 16) / 255.0
    gray_uniform = np.stack([levels] * 3, axis=-1)
    en = entropy(gray_uniform) / 3.0
    stripes = np.tile([0.0, 1.0], (16, 8))
    sf = spatial_frequency(stripes)
    ok = max(flat) < 1e-9 and en == 8.0 and abs(sf - 255.0) < 1e-9
    report(6, ok, f"constant gray {flat}, uniform channel EN {en}, stripe SF {sf:.6f}")


def test_7_discrepancy_ordering():
    vis, nir, _ = discrepancy_pair((64, 64), seed=7)
    p = measure(colorize(vis, nir), "proposed")
    n = measure(fuse(vis, nir, PipelineConfig(method="naive")), "naive")
    keys = ("ct", "en", "sf", "cf")
    ok = all(getattr(p, k) >= getattr(n, k) for k in keys)
    detail = ", ".join(f"{k.upper()} {getattr(p, k):.3f} vs {getattr(n, k):.3f}" for k in keys)
    report(7, ok, "proposed vs naive: " + detail)


def test_8_denoising():
    clean, noisy, nir = noisy_pair((64, 64), seed=8)
    out = denoise(noisy, nir)
    boosted = denoise(noisy, nir, PipelineConfig(chroma_boost=True))
    gain = psnr(out, clean) - psnr(noisy, clean)
    cf_plain, cf_boost = measure(out).cf, measure(boosted).cf
    report(8, gain >= 6.0 and cf_boost > cf_plain,
           f"PSNR gain {gain:.2f} dB, CF boosted {cf_boost:.2f} vs plain {cf_plain:.2f}")


def _smooth_vis(shape=(32, 32)):
    yy, xx = np.mgrid[0:shape[0], 0:shape[1]]
    lum = 0.3 + 0.4 * xx / shape[1] + 0.1 * np.sin(yy / 4.0)
    return backward_opponent(OpponentImage(lum, 0.05 * np.cos(xx / 5.0), -0.04 + 0 * xx))


def test_9_baselines():
    vis = _smooth_vis()
    nir = luminance_of(vis)
    devs = {m: float(np.max(np.abs(fuse(vis, nir, PipelineConfig(method=m)) - vis)))
            for m in ("naive", "gradreg", "wavelet", "statistical")}
    rng = np.random.default_rng(9)
    a, b = rng.random((32, 32)), rng.random((32, 32))
    ca = pywt.wavedec2(a, "haar", mode="periodization", level=2)
    cb = pywt.wavedec2(b, "haar", mode="periodization", level=2)
    fused = fuse_coefficients(ca, cb, 0.5)
    exact = all(np.array_equal(f, np.where(np.abs(y) > np.abs(x), y, x))
                for fa, da, db in zip(fused[1:], ca[1:], cb[1:]) for f, x, y in zip(fa, da, db))
    ok = max(devs.values()) < 1e-5 and exact
    report(9, ok, "self-pair deviations " + ", ".join(f"{k} {v:.1e}" for k, v in devs.items())
           + f"; detail max-abs rule exact={exact}")
