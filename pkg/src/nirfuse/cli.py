"""Command line interface.

Subcommands: colorize, denoise, fuse, metrics, validate.  Every numeric flag
can also be given in a ``key = value`` file passed with ``--config``;
command line flags win over the file.

Exit codes: 0 on success, 1 on input or parameter errors, 2 when
``--strict`` is set and a solver emitted a numerical warning.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor

from .baselines import BaselineParams
from .chroma import ChromaParams
from .errors import InputError, NumericalWarning, ParameterError
from .image import ImageFormatError, as_rgb, gray_to_rgb, is_rgb, load_image, save_image
from .metrics import format_table
from .pipeline import METHODS, PipelineConfig, colorize_steps, denoise, fuse, load_config, run_metrics, validate
from .smoothing import NlmParams

log = logging.getLogger("nirfuse")

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2

# dest -> (type, default); defaults live here so a config file can sit between them and the flags
OPTIONS = {
    "m": (int, 7),
    "mu_c": (float, 7500.0),
    "mu_d": (float, 200.0),
    "value_range": (float, 1.0),
    "nlm_patch_radius": (int, 3),
    "nlm_search_radius": (int, 10),
    "nlm_h": (float, 10.0 / 255.0),
    "slope_floor": (float, 0.2),
    "chroma_scale": (float, 1.2),
    "mu_g": (float, 1e3),
    "gamma": (float, 0.8),
    "omega_l": (float, 0.5),
    "levels": (int, 2),
    "wavelet": (str, "haar"),
    "stat_window": (int, 7),
    "method": (str, "proposed"),
    "denoise_first": (bool, False),
    "chroma_boost": (bool, False),
    "no_detail": (bool, False),
    "metrics_out": (str, None),
    "bit_depth": (int, 8),
}


def _add_pipeline_options(p: argparse.ArgumentParser, method_choice: bool = False) -> None:
    g = p.add_argument_group("pipeline parameters")
    for dest, (typ, default) in OPTIONS.items():
        flag = "--" + dest.replace("_", "-")
        if dest == "method" and not method_choice:
            continue
        if typ is bool:
            g.add_argument(flag, dest=dest, action="store_const", const=True, default=None)
        elif dest == "method":
            g.add_argument(flag, dest=dest, choices=METHODS, default=None)
        else:
            g.add_argument(flag, dest=dest, type=typ, default=None, help=f"default: {default}")
    p.add_argument("--config", help="key = value file; flags override it")
    p.add_argument("--strict", action="store_true", help="exit 2 on numerical warnings")


def _add_pair_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("visible", nargs="?", help="visible RGB image")
    p.add_argument("nir", nargs="?", help="NIR gray image")
    p.add_argument("-o", "--output", help="output image path")
    p.add_argument("--pairs", help="batch file: one 'visible nir output' triple per line")
    p.add_argument("--figure", help="also save a panel figure of the intermediate planes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nirfuse", description="Color NIR images with an aligned visible image.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("colorize", help="contrast-preserving coloring of an NIR image")
    _add_pair_args(p)
    _add_pipeline_options(p)

    p = sub.add_parser("denoise", help="denoise a dim-light visible image with NIR guidance")
    _add_pair_args(p)
    _add_pipeline_options(p)

    p = sub.add_parser("fuse", help="run one of the fusion methods, baselines included")
    _add_pair_args(p)
    _add_pipeline_options(p, method_choice=True)

    p = sub.add_parser("metrics", help="CT/EN/SF/CF of result images")
    p.add_argument("images", nargs="+")
    p.add_argument("--method", default="", help="label stored in the reports")
    p.add_argument("--metrics-out", help="append one JSON report per image to this file")
    p.add_argument("--table", action="store_true", help="print a plain text table instead of JSON lines")
    p.add_argument("--figure", help="save a bar chart of the measures")
    p.add_argument("--sigma-k", type=float, default=2.0, help="CT Gaussian sigma")

    p = sub.add_parser("validate", help="MSE of the local linear NIR-to-luminance model")
    p.add_argument("visible")
    p.add_argument("nir")
    p.add_argument("--m", type=int, default=7)
    return parser


def resolve_options(args: argparse.Namespace) -> dict:
    """Defaults, then the config file, then explicit flags."""
    opts = {k: v[1] for k, v in OPTIONS.items()}
    if getattr(args, "config", None):
        for key, value in load_config(args.config).items():
            key = key.replace("-", "_").replace(".", "_")
            if key not in OPTIONS:
                raise ParameterError(f"unknown config key {key!r}")
            typ = OPTIONS[key][0]
            opts[key] = value if typ is bool else typ(value)
    for key in OPTIONS:
        v = getattr(args, key, None)
        if v is not None:
            opts[key] = v
    return opts


def config_from_options(opts: dict) -> PipelineConfig:
    return PipelineConfig(
        m=opts["m"],
        mu_c=opts["mu_c"],
        mu_d=opts["mu_d"],
        value_range=opts["value_range"],
        nlm=NlmParams(opts["nlm_patch_radius"], opts["nlm_search_radius"], opts["nlm_h"]),
        chroma=ChromaParams(opts["slope_floor"], opts["chroma_scale"]),
        baseline=BaselineParams(mu_g=opts["mu_g"], gamma=opts["gamma"], omega_l=opts["omega_l"],
                                levels=opts["levels"], wavelet=opts["wavelet"], stat_window=opts["stat_window"]),
        method=opts["method"],
        denoise_first=bool(opts["denoise_first"]),
        chroma_boost=bool(opts["chroma_boost"]),
        detail_transfer=not opts["no_detail"],
        metrics_out=opts["metrics_out"],
    )


def _load_pair(vis_path: str, nir_path: str):
    vis = load_image(vis_path)
    nir = load_image(nir_path)
    if not is_rgb(vis):
        vis = gray_to_rgb(vis)
    if nir.ndim == 3:
        # a gray image stored as RGB: take its first channel
        nir = nir[:, :, 0]
    return as_rgb(vis), nir


def _process(command: str, vis_path: str, nir_path: str, out_path: str, cfg: PipelineConfig,
             bit_depth: int, figure: str | None) -> None:
    vis, nir = _load_pair(vis_path, nir_path)
    if command == "denoise":
        out = denoise(vis, nir, cfg)
    elif command == "colorize" and not cfg.denoise_first:
        steps = colorize_steps(vis, nir, cfg)
        out = steps.image
        if figure:
            from .plotting import plot_panels
            plot_panels([vis, nir, steps.mapped, steps.enhanced, out],
                        ["visible", "NIR", "mapped NIR", "detail transfer", "result"], figure)
    elif command == "colorize":
        out = denoise(vis, nir, cfg)
    else:
        out = fuse(vis, nir, cfg)
    if figure and command != "colorize":
        from .plotting import plot_panels
        plot_panels([vis, nir, out], ["visible", "NIR", cfg.method], figure)
    save_image(out, out_path, bit_depth)
    if cfg.metrics_out:
        run_metrics(out, cfg, image_name=os.path.basename(out_path))
    log.info("wrote %s", out_path)


def _read_pairs(path: str) -> list[tuple[str, str, str]]:
    triples = []
    base = os.path.dirname(os.path.abspath(path))
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3:
                raise InputError(f"{path}:{lineno}: expected 'visible nir output'")
            triples.append(tuple(p if os.path.isabs(p) else os.path.join(base, p) for p in parts))
    return triples


def worker_count(n_jobs: int) -> int:
    cap = os.environ.get("NIRFUSE_THREADS")
    limit = int(cap) if cap else (os.cpu_count() or 1)
    return max(1, min(limit, n_jobs))


def _run_pairs(args, opts) -> None:
    if args.command == "denoise":
        opts = dict(opts, denoise_first=True)
    cfg = config_from_options(opts)
    if args.pairs:
        jobs = _read_pairs(args.pairs)
        if args.figure:
            raise InputError("--figure applies to single pairs only")
    else:
        if not (args.visible and args.nir and args.output):
            raise InputError("need VISIBLE NIR -o OUTPUT, or --pairs FILE")
        jobs = [(args.visible, args.nir, args.output)]
    with ThreadPoolExecutor(max_workers=worker_count(len(jobs))) as pool:
        futures = [pool.submit(_process, args.command, v, n, o, cfg, opts["bit_depth"], args.figure)
                   for v, n, o in jobs]
        for f in futures:
            f.result()


def _run_metrics(args) -> None:
    cfg = PipelineConfig(metrics_out=args.metrics_out)
    reports = []
    for path in args.images:
        img = load_image(path)
        if not is_rgb(img):
            img = gray_to_rgb(img)
        r = run_metrics(img, cfg, method=args.method, image_name=os.path.basename(path))
        r.params = {}
        reports.append(r)
    if args.table:
        print(format_table(reports))
    else:
        for r in reports:
            print(r.to_json())
    if args.figure:
        from .plotting import plot_metrics
        plot_metrics(reports, args.figure)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", NumericalWarning)
            if args.command in ("colorize", "denoise", "fuse"):
                _run_pairs(args, resolve_options(args))
            elif args.command == "metrics":
                _run_metrics(args)
            else:
                vis, nir = _load_pair(args.visible, args.nir)
                print(f"{validate(vis, nir, args.m):.6e}")
    except (OSError, ImageFormatError, InputError, ParameterError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    numeric = [w for w in caught if issubclass(w.category, NumericalWarning)]
    for w in numeric:
        log.warning("%s", w.message)
    if numeric and getattr(args, "strict", False):
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
